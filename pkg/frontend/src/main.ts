// Entry point: mount the app against the engine API.
// The API base URL is configurable via ?api=... or window.DASHREUSE_API.

import { ApiClient } from './api.js';
import { App, AppElements } from './app.js';

declare global {
  interface Window {
    DASHREUSE_API?: string;
    dashreuseApp?: App;
  }
}

function resolveBaseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get('api');
  return fromQuery ?? window.DASHREUSE_API ?? 'http://127.0.0.1:7878';
}

export function mount(root: HTMLElement, baseUrl = resolveBaseUrl()): App {
  root.innerHTML = `
    <header class="topbar">
      <h1>dashreuse</h1>
      <button id="undo-button">undo</button>
    </header>
    <main class="layout">
      <aside id="palette" class="panel"></aside>
      <section class="center">
        <div id="canvas" class="canvas"></div>
        <div id="attribution" class="panel"></div>
      </section>
      <aside class="sidebar">
        <div id="references" class="panel"></div>
        <div id="bundles" class="panel"></div>
        <div id="inspector" class="panel"></div>
      </aside>
    </main>
    <div id="toasts" class="toasts"></div>
  `;
  const byId = (id: string) => root.querySelector<HTMLElement>(`#${id}`)!;
  const elements: AppElements = {
    palette: byId('palette'),
    canvas: byId('canvas'),
    references: byId('references'),
    bundles: byId('bundles'),
    attribution: byId('attribution'),
    inspector: byId('inspector'),
    toasts: byId('toasts'),
    undoButton: byId('undo-button') as HTMLButtonElement,
  };
  const app = new App(new ApiClient(baseUrl), elements);
  void app.init();
  return app;
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  window.dashreuseApp = mount(document.getElementById('app')!);
}
