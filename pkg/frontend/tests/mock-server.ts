// In-memory fake of the engine API, faithful to the wire contract:
// canonical-shaped JSON, per-canvas undo history, bundle feature lists
// copied verbatim from the engine's vocabulary.

import type {
  BBox,
  BundleInfo,
  DashboardDoc,
  DashComponent,
  ReferenceEntry,
} from '../src/types.js';

const COLOR_FEATURES = ['mark fill', 'mark stroke', 'background', 'shadow color',
  'shadow offset x', 'shadow offset y', 'shadow blur'];
const LINES_FEATURES = ['border width', 'border color', 'border radius',
  'grid visible', 'grid color', 'grid width', 'grid dash',
  'axis domain visible', 'axis domain color', 'axis domain width',
  'tick visible', 'tick size', 'tick color'];
const TEXT_FEATURES = ['title font family', 'title font size', 'title font weight',
  'body font family', 'body font size', 'body font weight',
  'axis label font family', 'axis label font size', 'axis label font weight'];
const LAYOUT_FEATURES = ['relative size', 'position', 'spacing (padding)'];

export const BUNDLE_FIXTURE: BundleInfo[] = [
  { name: 'Color', features: COLOR_FEATURES, includesGeometry: false, keys: [] },
  { name: 'Lines', features: LINES_FEATURES, includesGeometry: false, keys: [] },
  { name: 'Text', features: TEXT_FEATURES, includesGeometry: false, keys: [] },
  { name: 'Layout', features: LAYOUT_FEATURES, includesGeometry: true, keys: [] },
  {
    name: 'Style',
    features: [...COLOR_FEATURES, ...LINES_FEATURES, ...TEXT_FEATURES],
    includesGeometry: false,
    keys: [],
  },
  {
    name: 'All',
    features: [...COLOR_FEATURES, ...LINES_FEATURES, ...TEXT_FEATURES,
      ...LAYOUT_FEATURES],
    includesGeometry: true,
    keys: [],
  },
];

function component(id: string, family: string, subtype: string | null,
                   bbox: BBox, style: Record<string, string | number | boolean>,
                   binding?: string): DashComponent {
  const kind: DashComponent['kind'] = subtype
    ? { family: family as never, chartSubtype: subtype as never }
    : { family: family as never };
  return {
    id, kind, bbox, style, placeholder: false, locks: [], provenance: [],
    ...(binding ? { dataBinding: binding } : {}),
  };
}

export const PALETTE_FIXTURE: DashComponent[] = [
  component('pal-bar', 'chart', 'bar', { x: 0, y: 0, w: 0.3, h: 0.22 },
    { 'color.mark.fill': '#4c78a8' }, 'ds-sales'),
  component('pal-text', 'text', null, { x: 0, y: 0.3, w: 0.3, h: 0.1 },
    { 'text.body.fontSize': 13 }),
];

export const REFERENCE_DOC: DashboardDoc = {
  id: 'ref-doc',
  title: 'Exec KPIs',
  author: 'Kevin',
  canvasAspect: 1.777778,
  revision: 0,
  components: [
    component('s1', 'chart', 'bar', { x: 0.02, y: 0.02, w: 0.4, h: 0.3 },
      { 'color.mark.fill': '#d62728', 'color.background': '#fff7f0' }),
    component('s2', 'text', null, { x: 0.5, y: 0.02, w: 0.3, h: 0.1 },
      { 'color.background': '#fff7f0' }),
  ],
};

const REFERENCE_ENTRY: ReferenceEntry = {
  referenceId: 'ref-1',
  title: REFERENCE_DOC.title,
  author: REFERENCE_DOC.author,
  bookmarked: false,
  tags: [],
  addedAt: '2026-01-01T00:00:00Z',
  componentCount: REFERENCE_DOC.components.length,
};

/** Tiny stand-in for the transfer engine: paints every target with the
 * reference's representative fill/background so diffs are observable. */
function fakeApply(doc: DashboardDoc): DashboardDoc {
  return {
    ...doc,
    revision: doc.revision + 1,
    components: doc.components.map((c) => ({
      ...c,
      style: {
        ...c.style,
        ...(c.locks.includes('color.background')
          ? {} : { 'color.background': '#fff7f0' }),
        ...(c.kind.family === 'chart' && !c.locks.includes('color.mark.fill')
          ? { 'color.mark.fill': '#d62728' } : {}),
      },
      provenance: [{
        attributeKey: 'color.background', referenceId: 'ref-1',
        bundle: 'Color' as const, timestamp: '2026-01-01T00:00:00Z',
      }],
    })),
  };
}

export class MockServer {
  histories = new Map<string, DashboardDoc[]>();
  references = [REFERENCE_ENTRY];
  requests: { method: string; path: string; body?: unknown }[] = [];
  private nextCanvas = 1;

  doc(canvasId: string): DashboardDoc {
    const history = this.histories.get(canvasId)!;
    return history[history.length - 1];
  }

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? 'GET';
    const path = url.replace(/^https?:\/\/[^/]+/, '');
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    this.requests.push({ method, path, body });
    const respond = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), { status });

    if (method === 'GET' && path === '/palette') {
      return respond({ components: PALETTE_FIXTURE });
    }
    if (method === 'GET' && path.startsWith('/references')) {
      if (path === '/references' || path.startsWith('/references?')) {
        return respond({ references: this.references });
      }
      if (path === '/references/ref-1/bundles') {
        return respond({ bundles: BUNDLE_FIXTURE });
      }
      if (path === '/references/ref-1') {
        return respond(REFERENCE_DOC);
      }
      return respond({ detail: 'unknown reference' }, 404);
    }
    if (method === 'POST' && path === '/references/ref-1/bookmark') {
      this.references = this.references.map((r) => ({
        ...r, bookmarked: Boolean((body as { flag: boolean }).flag),
      }));
      return respond(this.references[0]);
    }
    if (method === 'POST' && path === '/canvas') {
      const canvasId = `cv-${this.nextCanvas++}`;
      this.histories.set(canvasId, [{
        id: canvasId, title: 'Untitled dashboard', author: '',
        canvasAspect: 1.777778, revision: 0, components: [],
      }]);
      return respond({ canvasId, revision: 0 }, 201);
    }

    const canvasMatch = path.match(/^\/canvas\/([^/]+)(\/.*)?$/);
    if (canvasMatch) {
      const canvasId = canvasMatch[1];
      const rest = canvasMatch[2] ?? '';
      const history = this.histories.get(canvasId);
      if (!history) return respond({ detail: 'unknown canvas' }, 404);
      const doc = history[history.length - 1];

      if (method === 'GET' && rest === '') return respond(doc);
      if (method === 'POST' && rest === '/components') {
        const { paletteComponentId, bbox } = body as {
          paletteComponentId: string; bbox: BBox;
        };
        const template = PALETTE_FIXTURE.find((c) => c.id === paletteComponentId);
        if (!template) return respond({ detail: 'unknown palette component' }, 404);
        const next: DashboardDoc = {
          ...doc,
          revision: doc.revision + 1,
          components: [...doc.components,
            { ...template, id: `${paletteComponentId}-1`, bbox }],
        };
        history.push(next);
        return respond(next);
      }
      if (method === 'POST' && rest === '/apply') {
        if ((body as { referenceId: string }).referenceId !== 'ref-1') {
          return respond({ detail: 'unknown reference' }, 404);
        }
        const next = fakeApply(doc);
        history.push(next);
        return respond({
          doc: next,
          report: {
            pairs: [], representativeUsedFor: [], placeholdersCreated: [],
            droppedKeys: [], lockedSkips: [], notes: [],
          },
        });
      }
      if (method === 'POST' && rest === '/locks') {
        const { componentId, keys } = body as {
          componentId: string; keys: string[];
        };
        if (!doc.components.some((c) => c.id === componentId)) {
          return respond({ detail: 'unknown component' }, 404);
        }
        const next: DashboardDoc = {
          ...doc,
          revision: doc.revision + 1,
          components: doc.components.map((c) =>
            c.id === componentId ? { ...c, locks: [...keys].sort() } : c),
        };
        history.push(next);
        return respond(next);
      }
      if (method === 'POST' && rest === '/undo') {
        if (history.length <= 1) return respond({ detail: 'nothing to undo' }, 409);
        history.pop();
        return respond(history[history.length - 1]);
      }
      if (method === 'GET' && rest === '/attribution') {
        const count = doc.components.reduce(
          (n, c) => n + c.provenance.length, 0);
        return respond({
          attribution: count === 0 ? [] : [{
            category: 'Color', referenceTitle: 'Exec KPIs',
            author: 'Kevin', attributeCount: count,
          }],
        });
      }
    }
    return respond({ detail: `no route ${method} ${path}` }, 404);
  };
}
