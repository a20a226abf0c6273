// DOM rendering for the four interface panels:
// (A) data-bound component palette, (B) authoring canvas,
// (C) dashboard reference list, (D) design bundles with tooltips.

import type {
  AttributionRow,
  BundleInfo,
  DashboardDoc,
  DashComponent,
  ReferenceEntry,
} from './types.js';
import { BUNDLE_NAMES } from './types.js';
import type { UiState } from './state.js';

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function kindLabel(c: DashComponent): string {
  return c.kind.chartSubtype
    ? `${c.kind.family}:${c.kind.chartSubtype}` : c.kind.family;
}

// --- panel A: palette -------------------------------------------------------

export function renderPalette(container: HTMLElement,
                              components: DashComponent[]): void {
  container.replaceChildren();
  container.appendChild(el('h2', 'panel-title', 'Components'));
  for (const component of components) {
    const item = el('div', 'palette-item');
    item.dataset.paletteId = component.id;
    item.draggable = true;
    item.appendChild(el('span', 'palette-kind', kindLabel(component)));
    item.appendChild(el('span', 'palette-binding', component.dataBinding ?? ''));
    item.addEventListener('dragstart', (event) => {
      event.dataTransfer?.setData('text/palette-id', component.id);
    });
    container.appendChild(item);
  }
}

// --- panel B: canvas ---------------------------------------------------------

export interface CanvasHandlers {
  onToggleTarget(componentId: string): void;
  onInspect(componentId: string): void;
}

export function renderCanvas(container: HTMLElement, state: UiState,
                             handlers: CanvasHandlers): void {
  container.replaceChildren();
  const doc = state.doc;
  if (!doc) return;
  container.dataset.revision = String(doc.revision);
  for (const component of doc.components) {
    const node = el('div', 'canvas-component');
    node.dataset.componentId = component.id;
    node.style.left = `${component.bbox.x * 100}%`;
    node.style.top = `${component.bbox.y * 100}%`;
    node.style.width = `${component.bbox.w * 100}%`;
    node.style.height = `${component.bbox.h * 100}%`;
    applyComponentStyle(node, component);
    if (component.placeholder) {
      node.classList.add('placeholder');
      node.appendChild(el('span', 'badge', 'placeholder'));
    }
    if (state.targetSelection.has(component.id)) {
      node.classList.add('selected-target');
    }
    if (component.locks.length > 0) {
      node.appendChild(el('span', 'badge lock-badge',
        `${component.locks.length} locked`));
    }
    node.appendChild(el('span', 'component-label', kindLabel(component)));
    node.addEventListener('click', (event) => {
      if (event.altKey || event.metaKey) {
        handlers.onInspect(component.id);
      } else {
        handlers.onToggleTarget(component.id);
      }
    });
    container.appendChild(node);
  }
}

function applyComponentStyle(node: HTMLElement, component: DashComponent): void {
  const style = component.style;
  const background = style['color.background'] ?? style['color.mark.fill'];
  if (typeof background === 'string') node.style.backgroundColor = background;
  const borderColor = style['line.border.color'];
  const borderWidth = style['line.border.width'];
  if (typeof borderColor === 'string' || typeof borderWidth === 'number') {
    node.style.border = `${Number(borderWidth ?? 1)}px solid `
      + `${typeof borderColor === 'string' ? borderColor : '#666'}`;
  }
  const radius = style['line.border.radius'];
  if (typeof radius === 'number') node.style.borderRadius = `${radius}px`;
}

// --- panel C: references -----------------------------------------------------

export interface ReferenceHandlers {
  onSelect(referenceId: string): void;
  onBookmark(referenceId: string, flag: boolean): void;
}

export function renderReferences(container: HTMLElement, state: UiState,
                                 handlers: ReferenceHandlers): void {
  container.replaceChildren();
  container.appendChild(el('h2', 'panel-title', 'References'));
  for (const entry of state.references) {
    const item = el('div', 'reference-item');
    item.dataset.referenceId = entry.referenceId;
    if (entry.referenceId === state.selectedReferenceId) {
      item.classList.add('selected');
    }
    const star = el('button', 'bookmark', entry.bookmarked ? '★' : '☆');
    star.addEventListener('click', (event) => {
      event.stopPropagation();
      handlers.onBookmark(entry.referenceId, !entry.bookmarked);
    });
    item.appendChild(star);
    item.appendChild(el('span', 'reference-title', entry.title));
    item.appendChild(el('span', 'reference-author', `by ${entry.author}`));
    item.appendChild(el('span', 'reference-count',
      `${entry.componentCount} components`));
    item.addEventListener('click', () => handlers.onSelect(entry.referenceId));
    container.appendChild(item);
  }
  if (state.references.length === 0) {
    container.appendChild(el('p', 'empty', 'No references ingested yet.'));
  }
}

/** Source pickers for the selected reference (modifier-click = toggle). */
export function renderReferenceComponents(container: HTMLElement, state: UiState,
                                          onToggleSource: (id: string) => void,
                                          ): void {
  const existing = container.querySelector('.reference-components');
  existing?.remove();
  if (!state.selectedReferenceId || state.referenceComponents.length === 0) return;
  const wrap = el('div', 'reference-components');
  wrap.appendChild(el('h3', 'panel-subtitle', 'Source components'));
  for (const id of state.referenceComponents) {
    const chip = el('button', 'source-chip', id);
    chip.dataset.sourceId = id;
    if (state.sourceSelection.has(id)) chip.classList.add('selected-source');
    chip.addEventListener('click', () => onToggleSource(id));
    wrap.appendChild(chip);
  }
  container.appendChild(wrap);
}

// --- panel D: design bundles ---------------------------------------------------

export interface BundleHandlers {
  onApply(bundle: string): void;
  onHover(bundle: string | null): void;
}

export function renderBundles(container: HTMLElement, state: UiState,
                              bundles: BundleInfo[] | null,
                              fillPlaceholders: boolean,
                              handlers: BundleHandlers & {
                                onFillToggle(flag: boolean): void;
                              }): void {
  container.replaceChildren();
  container.appendChild(el('h2', 'panel-title', 'Design bundles'));
  const byName = new Map((bundles ?? []).map((b) => [b.name, b]));
  for (const name of BUNDLE_NAMES) {
    const button = el('button', 'bundle-button', name);
    button.dataset.bundle = name;
    button.disabled = !state.selectedReferenceId;
    button.addEventListener('click', () => handlers.onApply(name));
    button.addEventListener('mouseenter', () => handlers.onHover(name));
    button.addEventListener('mouseleave', () => handlers.onHover(null));
    container.appendChild(button);
    if (state.hoveredBundle === name) {
      const info = byName.get(name);
      const tooltip = el('div', 'bundle-tooltip',
        info ? info.features.join(', ') : '');
      tooltip.dataset.bundle = name;
      container.appendChild(tooltip);
    }
  }
  const fillRow = el('label', 'fill-row');
  const fill = el('input') as HTMLInputElement;
  fill.type = 'checkbox';
  fill.checked = fillPlaceholders;
  fill.addEventListener('change', () => handlers.onFillToggle(fill.checked));
  fillRow.appendChild(fill);
  fillRow.appendChild(el('span', undefined, 'create placeholders (Layout/All)'));
  container.appendChild(fillRow);
}

// --- attribution and inspector ------------------------------------------------

export function renderAttribution(container: HTMLElement,
                                  rows: AttributionRow[]): void {
  container.replaceChildren();
  container.appendChild(el('h2', 'panel-title', 'Attribution'));
  for (const row of rows) {
    container.appendChild(el('div', 'attribution-row',
      `${row.category} inspired by ${row.author} `
      + `(${row.referenceTitle}, ${row.attributeCount} attributes)`));
  }
  if (rows.length === 0) {
    container.appendChild(el('p', 'empty', 'Nothing borrowed yet.'));
  }
}

export interface InspectorHandlers {
  onToggleLock(componentId: string, key: string): void;
  onClose(): void;
}

export function renderInspector(container: HTMLElement, doc: DashboardDoc,
                                componentId: string,
                                handlers: InspectorHandlers): void {
  container.replaceChildren();
  const component = doc.components.find((c) => c.id === componentId);
  if (!component) return;
  container.appendChild(el('h2', 'panel-title', `Inspect ${component.id}`));
  const close = el('button', 'close', 'close');
  close.addEventListener('click', handlers.onClose);
  container.appendChild(close);

  const provenanceByKey = new Map(
    component.provenance.map((p) => [p.attributeKey, p]));
  for (const key of Object.keys(component.style).sort()) {
    const row = el('div', 'style-row');
    row.dataset.key = key;
    const lock = el('button', 'lock-toggle',
      component.locks.includes(key) ? '\u{1F512}' : '\u{1F513}');
    lock.addEventListener('click', () => handlers.onToggleLock(component.id, key));
    row.appendChild(lock);
    row.appendChild(el('span', 'style-key', key));
    row.appendChild(el('span', 'style-value', String(component.style[key])));
    const record = provenanceByKey.get(key);
    if (record) {
      row.appendChild(el('span', 'style-provenance',
        record.referenceId ? `from ${record.referenceId.slice(0, 8)}` : 'local'));
    }
    container.appendChild(row);
  }
}

// --- toasts ---------------------------------------------------------------------

export function showToast(container: HTMLElement, message: string,
                          kind: 'error' | 'info' = 'error'): void {
  const toast = el('div', `toast toast-${kind}`, message);
  container.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}
