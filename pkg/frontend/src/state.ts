// Client-side session state. The document here is a mirror of the server's
// canvas; it is only ever replaced by API responses, never edited in place.

import type { DashboardDoc, ReferenceEntry, SelectionRole } from './types.js';

export interface UiState {
  canvasId: string | null;
  doc: DashboardDoc | null;
  references: ReferenceEntry[];
  selectedReferenceId: string | null;
  sourceSelection: Set<string>;
  targetSelection: Set<string>;
  hoveredBundle: string | null;
  referenceComponents: string[];
}

export function initialState(): UiState {
  return {
    canvasId: null,
    doc: null,
    references: [],
    selectedReferenceId: null,
    sourceSelection: new Set(),
    targetSelection: new Set(),
    hoveredBundle: null,
    referenceComponents: [],
  };
}

type Listener = (state: UiState) => void;

/** Single store; panels re-render from it after every change. */
export class Store {
  state: UiState = initialState();
  private listeners: Listener[] = [];

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  /** Replace the mirrored document and prune stale target selections. */
  setDoc(doc: DashboardDoc): void {
    this.state.doc = doc;
    const ids = new Set(doc.components.map((c) => c.id));
    this.state.targetSelection = new Set(
      [...this.state.targetSelection].filter((id) => ids.has(id)));
    this.emit();
  }

  setCanvas(canvasId: string, doc: DashboardDoc): void {
    this.state.canvasId = canvasId;
    this.setDoc(doc);
  }

  setReferences(references: ReferenceEntry[]): void {
    this.state.references = references;
    if (this.state.selectedReferenceId !== null
        && !references.some((r) => r.referenceId === this.state.selectedReferenceId)) {
      this.selectReference(null, []);
      return;
    }
    this.emit();
  }

  /** Switching references resets source selections (ids are per-document). */
  selectReference(referenceId: string | null, componentIds: string[]): void {
    this.state.selectedReferenceId = referenceId;
    this.state.referenceComponents = componentIds;
    this.state.sourceSelection = new Set();
    this.emit();
  }

  toggleSelection(componentId: string, role: SelectionRole): void {
    const pool = role === 'source'
      ? this.state.referenceComponents
      : (this.state.doc?.components ?? []).map((c) => c.id);
    if (!pool.includes(componentId)) return;
    const selection = role === 'source'
      ? this.state.sourceSelection : this.state.targetSelection;
    if (selection.has(componentId)) {
      selection.delete(componentId);
    } else {
      selection.add(componentId);
    }
    this.emit();
  }

  setHoveredBundle(bundle: string | null): void {
    this.state.hoveredBundle = bundle;
    this.emit();
  }

  /** Explicit ids when anything is selected, otherwise whole-document ALL. */
  selectionFor(role: SelectionRole): string[] | 'ALL' {
    const selection = role === 'source'
      ? this.state.sourceSelection : this.state.targetSelection;
    return selection.size > 0 ? [...selection].sort() : 'ALL';
  }
}
