// Scripted interactive persistence tests against the live ingest server:
// the displayed Device ID rank must track the server's responses.

import { afterAll, beforeAll, beforeEach, describe, expect, it } from 'vitest';

import { ProbeApp } from '../src/app.js';
import { DEFAULT_CONFIG } from '../src/config.js';
import { displayedDeviceIdRank, displayedFiTotal } from '../src/ui.js';
import { startIngestServer, type LiveServer } from './helpers/server.js';
import { installBrowserStubs, resetBrowserStubs } from './helpers/stubs.js';

const RANK_ORDER = { none: 0, low: 1, medium: 2, high: 3 } as const;

let server: LiveServer;

beforeAll(async () => {
  server = await startIngestServer();
});

afterAll(async () => {
  await server.stop();
});

beforeEach(() => {
  resetBrowserStubs();
  sessionStorage.clear();
  document.body.replaceChildren();
});

function makeApp(options: { rotateTokens?: boolean } = {}): { app: ProbeApp; root: HTMLElement } {
  const root = document.createElement('div');
  document.body.append(root);
  const app = new ProbeApp({
    root,
    config: { ...DEFAULT_CONFIG, apiBase: server.baseUrl, stunTimeoutMs: 100 },
    storage: sessionStorage,
    rotateTokens: options.rotateTokens,
  });
  return { app, root };
}

describe('interactive persistence flows', () => {
  it('rotating ids drive the displayed rank to low', async () => {
    let generation = 0;
    installBrowserStubs({
      deviceIds: () => [`rotating-${generation++}`],
      localIps: ['192.168.1.50'],
      webgl: { vendor: 'Stub', renderer: 'Stub Renderer' },
    });
    const { app, root } = makeApp();
    await app.start();
    // a single observation cannot show a change yet
    expect(displayedDeviceIdRank(root)).toBe('high');

    await app.runPersistenceTest('refresh');
    expect(displayedDeviceIdRank(root)).toBe('low');
    expect(app.score!.assessments.find((a) => a.kind === 'device_id')!.rank).toBe('low');
    expect(displayedFiTotal(root)).toBe(app.score!.fi_total);
  });

  it('stable ids across refresh and a new session stay medium or better', async () => {
    installBrowserStubs({
      deviceIds: () => ['stable-device-id'],
      localIps: ['192.168.1.50'],
      webgl: { vendor: 'Stub', renderer: 'Stub Renderer' },
    });
    const { app, root } = makeApp();
    await app.start();
    const tokenBefore = app.sessionToken;

    await app.runPersistenceTest('refresh');
    expect(displayedDeviceIdRank(root)).toBe('high');

    await app.runPersistenceTest('new_session');
    expect(app.sessionToken).not.toBe(tokenBefore);
    const displayed = displayedDeviceIdRank(root)! as keyof typeof RANK_ORDER;
    expect(RANK_ORDER[displayed]).toBeGreaterThanOrEqual(RANK_ORDER.medium);
    // the page shows exactly what the server returned
    expect(displayed).toBe(app.score!.assessments.find((a) => a.kind === 'device_id')!.rank);
    expect(displayedFiTotal(root)).toBe(app.score!.fi_total);
  });

  it('clicking the refresh button reruns the test', async () => {
    let generation = 0;
    installBrowserStubs({ deviceIds: () => [`gen-${generation++}`] });
    const { app, root } = makeApp();
    await app.start();
    root.querySelector<HTMLButtonElement>('button.refresh-test')!.click();
    await new Promise((r) => setTimeout(r, 300));
    expect(displayedDeviceIdRank(root)).toBe('low');
    expect(app.score!.assessments.find((a) => a.kind === 'device_id')!.rank).toBe('low');
  });

  it('a new-session test without token rotation is a surfaced error', async () => {
    installBrowserStubs({ deviceIds: () => ['stable'] });
    const { app, root } = makeApp({ rotateTokens: false });
    await app.start();
    await expect(app.runPersistenceTest('new_session')).rejects.toThrow('token rotation');
    const banner = root.querySelector<HTMLElement>('.error-banner')!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain('token rotation');
  });

  it('a network failure shows the banner and does not retry silently', async () => {
    installBrowserStubs({ deviceIds: () => ['stable'] });
    const { app, root } = makeApp();
    await app.start();

    const realFetch = globalThis.fetch;
    let calls = 0;
    globalThis.fetch = (async () => {
      calls += 1;
      throw new TypeError('network down');
    }) as typeof fetch;
    try {
      await expect(app.runPersistenceTest('refresh')).rejects.toThrow('network down');
    } finally {
      globalThis.fetch = realFetch;
    }
    expect(calls).toBe(1);
    const banner = root.querySelector<HTMLElement>('.error-banner')!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain('submission failed');
  });

  it('persistence tests require a prior collection', async () => {
    installBrowserStubs({ deviceIds: () => ['stable'] });
    const { app } = makeApp();
    await expect(app.runPersistenceTest('refresh')).rejects.toThrow('before');
  });
});
