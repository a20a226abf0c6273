// Controller wiring the panels to the API. The server owns the document;
// every action awaits the API response and re-renders from the returned
// (or re-fetched) state.

import { ApiClient, ApiError } from './api.js';
import {
  renderAttribution,
  renderBundles,
  renderCanvas,
  renderInspector,
  renderPalette,
  renderReferenceComponents,
  renderReferences,
  showToast,
} from './panels.js';
import { Store } from './state.js';
import type {
  AttributionRow,
  BBox,
  BundleInfo,
  BundleName,
  DashboardDoc,
  DashComponent,
} from './types.js';

export interface AppElements {
  palette: HTMLElement;
  canvas: HTMLElement;
  references: HTMLElement;
  bundles: HTMLElement;
  attribution: HTMLElement;
  inspector: HTMLElement;
  toasts: HTMLElement;
  undoButton: HTMLButtonElement;
}

export class App {
  store = new Store();
  paletteComponents: DashComponent[] = [];
  bundleInfo: BundleInfo[] | null = null;
  attributionRows: AttributionRow[] = [];
  fillPlaceholders = false;
  inspectedId: string | null = null;

  constructor(public api: ApiClient, public elements: AppElements) {
    this.store.subscribe(() => this.render());
    this.wireStaticHandlers();
  }

  async init(): Promise<void> {
    const [{ components }, { canvasId }, { references }] = await Promise.all([
      this.api.palette(),
      this.api.createCanvas(),
      this.api.listReferences(),
    ]);
    this.paletteComponents = components;
    const doc = await this.api.getCanvas(canvasId);
    this.store.setReferences(references);
    this.store.setCanvas(canvasId, doc);
  }

  private wireStaticHandlers(): void {
    this.elements.undoButton.addEventListener('click', () => void this.undo());
    this.elements.canvas.addEventListener('dragover', (event) => {
      event.preventDefault();
    });
    this.elements.canvas.addEventListener('drop', (event) => {
      event.preventDefault();
      const paletteId = event.dataTransfer?.getData('text/palette-id');
      if (!paletteId) return;
      void this.dropPalette(paletteId, this.dropBboxFromEvent(event, paletteId));
    });
  }

  private dropBboxFromEvent(event: DragEvent, paletteId: string): BBox {
    const template = this.paletteComponents.find((c) => c.id === paletteId);
    const w = template?.bbox.w ?? 0.25;
    const h = template?.bbox.h ?? 0.2;
    const rect = this.elements.canvas.getBoundingClientRect();
    const rx = rect.width ? (event.clientX - rect.left) / rect.width : 0;
    const ry = rect.height ? (event.clientY - rect.top) / rect.height : 0;
    return {
      x: Math.min(Math.max(rx - w / 2, 0), 1 - w),
      y: Math.min(Math.max(ry - h / 2, 0), 1 - h),
      w,
      h,
    };
  }

  // --- actions (each one round-trips through the API) ---------------------

  async dropPalette(paletteComponentId: string, bbox: BBox): Promise<void> {
    const canvasId = this.store.state.canvasId;
    if (!canvasId) return;
    await this.guard(async () => {
      const doc = await this.api.dropComponent(canvasId, paletteComponentId, bbox);
      this.acceptDoc(doc);
    });
  }

  async clickBundle(bundle: BundleName): Promise<void> {
    const { canvasId, selectedReferenceId } = this.store.state;
    if (!canvasId) return;
    if (!selectedReferenceId) {
      showToast(this.elements.toasts, 'Pick a reference first', 'info');
      return;
    }
    await this.guard(async () => {
      const { doc, report } = await this.api.applyBundle(
        canvasId, selectedReferenceId, bundle,
        this.store.selectionFor('source'), this.store.selectionFor('target'),
        this.fillPlaceholders);
      this.acceptDoc(doc);
      if (report.notes.length > 0) {
        showToast(this.elements.toasts, report.notes.join('; '), 'info');
      }
      await this.refreshAttribution();
    });
  }

  async hoverBundle(bundle: string | null): Promise<void> {
    if (bundle !== null && this.bundleInfo === null
        && this.store.state.selectedReferenceId) {
      await this.guard(async () => {
        const { bundles } = await this.api.bundles(
          this.store.state.selectedReferenceId!);
        this.bundleInfo = bundles;
      });
    }
    this.store.setHoveredBundle(bundle);
  }

  async selectReference(referenceId: string): Promise<void> {
    this.bundleInfo = null;
    await this.guard(async () => {
      const [{ bundles }, referenceDoc] = await Promise.all([
        this.api.bundles(referenceId),
        this.api.getReference(referenceId),
      ]);
      this.bundleInfo = bundles;
      this.store.selectReference(referenceId,
        referenceDoc.components.map((c) => c.id));
    });
  }

  async toggleSource(componentId: string): Promise<void> {
    this.store.toggleSelection(componentId, 'source');
  }

  async toggleTarget(componentId: string): Promise<void> {
    this.store.toggleSelection(componentId, 'target');
  }

  async toggleBookmark(referenceId: string, flag: boolean): Promise<void> {
    await this.guard(async () => {
      await this.api.setBookmark(referenceId, flag);
      const { references } = await this.api.listReferences();
      this.store.setReferences(references);
    });
  }

  async undo(): Promise<void> {
    const canvasId = this.store.state.canvasId;
    if (!canvasId) return;
    await this.guard(async () => {
      const doc = await this.api.undo(canvasId);
      this.store.setDoc(doc);
      await this.refreshAttribution();
    });
  }

  async toggleLock(componentId: string, key: string): Promise<void> {
    const { canvasId, doc } = this.store.state;
    if (!canvasId || !doc) return;
    const component = doc.components.find((c) => c.id === componentId);
    if (!component) return;
    const keys = component.locks.includes(key)
      ? component.locks.filter((k) => k !== key)
      : [...component.locks, key];
    await this.guard(async () => {
      this.acceptDoc(await this.api.setLocks(canvasId, componentId, keys));
    });
  }

  async inspect(componentId: string | null): Promise<void> {
    this.inspectedId = componentId;
    this.render();
  }

  async refreshAttribution(): Promise<void> {
    const canvasId = this.store.state.canvasId;
    if (!canvasId) return;
    const { attribution } = await this.api.attribution(canvasId);
    this.attributionRows = attribution;
    this.render();
  }

  /** Accept a mutation response; when it looks stale, trust GET instead. */
  private acceptDoc(doc: DashboardDoc): void {
    const current = this.store.state.doc;
    if (current && doc.revision < current.revision) {
      void this.refetch();
      return;
    }
    this.store.setDoc(doc);
  }

  private async refetch(): Promise<void> {
    const canvasId = this.store.state.canvasId;
    if (!canvasId) return;
    this.store.setDoc(await this.api.getCanvas(canvasId));
  }

  private async guard(action: () => Promise<void>): Promise<void> {
    try {
      await action();
    } catch (error) {
      if (error instanceof ApiError) {
        showToast(this.elements.toasts, `${error.status}: ${error.message}`);
        if (error.status === 409) await this.refetch();
      } else {
        showToast(this.elements.toasts, String(error));
      }
    }
  }

  // --- rendering -----------------------------------------------------------

  render(): void {
    const state = this.store.state;
    renderPalette(this.elements.palette, this.paletteComponents);
    renderCanvas(this.elements.canvas, state, {
      onToggleTarget: (id) => void this.toggleTarget(id),
      onInspect: (id) => void this.inspect(id),
    });
    renderReferences(this.elements.references, state, {
      onSelect: (id) => void this.selectReference(id),
      onBookmark: (id, flag) => void this.toggleBookmark(id, flag),
    });
    renderReferenceComponents(this.elements.references, state,
      (id) => void this.toggleSource(id));
    renderBundles(this.elements.bundles, state, this.bundleInfo,
      this.fillPlaceholders, {
        onApply: (bundle) => void this.clickBundle(bundle as BundleName),
        onHover: (bundle) => void this.hoverBundle(bundle),
        onFillToggle: (flag) => {
          this.fillPlaceholders = flag;
        },
      });
    renderAttribution(this.elements.attribution, this.attributionRows);
    this.elements.inspector.replaceChildren();
    if (this.inspectedId && state.doc) {
      renderInspector(this.elements.inspector, state.doc, this.inspectedId, {
        onToggleLock: (id, key) => void this.toggleLock(id, key),
        onClose: () => void this.inspect(null),
      });
    }
  }
}
