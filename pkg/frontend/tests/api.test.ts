import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import { MockServer } from './mock-server.js';

describe('ApiClient', () => {
  it('round-trips a canvas create and fetch', async () => {
    const server = new MockServer();
    const api = new ApiClient('', server.fetch);
    const { canvasId } = await api.createCanvas();
    const doc = await api.getCanvas(canvasId);
    expect(doc.revision).toBe(0);
    expect(doc.components).toEqual([]);
  });

  it('sends the reuse request shape the engine expects', async () => {
    const server = new MockServer();
    const api = new ApiClient('', server.fetch);
    const { canvasId } = await api.createCanvas();
    await api.applyBundle(canvasId, 'ref-1', 'Style', 'ALL', ['c1'], true);
    const request = server.requests.find((r) => r.path.endsWith('/apply'));
    expect(request?.body).toEqual({
      referenceId: 'ref-1',
      bundle: 'Style',
      sourceSel: 'ALL',
      targetSel: ['c1'],
      fillPlaceholders: true,
    });
  });

  it('surfaces API errors with status and detail', async () => {
    const server = new MockServer();
    const api = new ApiClient('', server.fetch);
    await expect(api.getCanvas('nope')).rejects.toThrowError(ApiError);
    await expect(api.getCanvas('nope')).rejects.toMatchObject({
      status: 404,
      message: 'unknown canvas',
    });
  });

  it('undo on a fresh canvas is a 409', async () => {
    const server = new MockServer();
    const api = new ApiClient('', server.fetch);
    const { canvasId } = await api.createCanvas();
    await expect(api.undo(canvasId)).rejects.toMatchObject({ status: 409 });
  });
});
