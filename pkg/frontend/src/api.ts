// Thin typed client over the engine's HTTP API. The UI never mutates
// documents locally; every change round-trips through these calls.

import type {
  AttributionRow,
  BBox,
  BundleInfo,
  BundleName,
  DashboardDoc,
  DashComponent,
  ReferenceEntry,
  TransferReport,
} from './types.js';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    public baseUrl: string = '',
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { 'content-type': 'application/json' };
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = JSON.parse(text).detail ?? text;
      } catch {
        // non-JSON error body: report it verbatim
      }
      throw new ApiError(response.status, String(detail));
    }
    return (text ? JSON.parse(text) : {}) as T;
  }

  listReferences(bookmarkedOnly = false): Promise<{ references: ReferenceEntry[] }> {
    const query = bookmarkedOnly ? '?bookmarked=true' : '';
    return this.request('GET', `/references${query}`);
  }

  setBookmark(referenceId: string, flag: boolean): Promise<ReferenceEntry> {
    return this.request('POST', `/references/${referenceId}/bookmark`, { flag });
  }

  getReference(referenceId: string): Promise<DashboardDoc> {
    return this.request('GET', `/references/${referenceId}`);
  }

  bundles(referenceId: string): Promise<{ bundles: BundleInfo[] }> {
    return this.request('GET', `/references/${referenceId}/bundles`);
  }

  palette(): Promise<{ components: DashComponent[] }> {
    return this.request('GET', '/palette');
  }

  createCanvas(): Promise<{ canvasId: string; revision: number }> {
    return this.request('POST', '/canvas', {});
  }

  getCanvas(canvasId: string): Promise<DashboardDoc> {
    return this.request('GET', `/canvas/${canvasId}`);
  }

  dropComponent(canvasId: string, paletteComponentId: string,
                bbox: BBox): Promise<DashboardDoc> {
    return this.request('POST', `/canvas/${canvasId}/components`,
      { paletteComponentId, bbox });
  }

  applyBundle(canvasId: string, referenceId: string, bundle: BundleName,
              sourceSel: string[] | 'ALL', targetSel: string[] | 'ALL',
              fillPlaceholders: boolean,
  ): Promise<{ doc: DashboardDoc; report: TransferReport }> {
    return this.request('POST', `/canvas/${canvasId}/apply`, {
      referenceId, bundle, sourceSel, targetSel, fillPlaceholders,
    });
  }

  setLocks(canvasId: string, componentId: string,
           keys: string[]): Promise<DashboardDoc> {
    return this.request('POST', `/canvas/${canvasId}/locks`, { componentId, keys });
  }

  undo(canvasId: string): Promise<DashboardDoc> {
    return this.request('POST', `/canvas/${canvasId}/undo`);
  }

  attribution(canvasId: string): Promise<{ attribution: AttributionRow[] }> {
    return this.request('GET', `/canvas/${canvasId}/attribution`);
  }
}
