// Wire conformance against the real ingest server: everything collect()
// produces must be accepted by POST /api/v1/report unchanged.

import { afterAll, beforeAll, beforeEach, describe, expect, it } from 'vitest';

import { submitReport } from '../src/api.js';
import { assembleReport, collect } from '../src/collect.js';
import { DEFAULT_CONFIG } from '../src/config.js';
import { startIngestServer, type LiveServer } from './helpers/server.js';
import { installBrowserStubs, resetBrowserStubs } from './helpers/stubs.js';

const CONFIG = { ...DEFAULT_CONFIG, stunTimeoutMs: 100 };

let server: LiveServer;

beforeAll(async () => {
  server = await startIngestServer();
});

afterAll(async () => {
  await server.stop();
});

beforeEach(() => {
  resetBrowserStubs();
  installBrowserStubs({
    deviceIds: () => ['conformance-device-1'],
    localIps: ['192.168.1.50'],
    webgl: { vendor: 'Stub GPU Co', renderer: 'Stub Renderer 9000' },
  });
});

describe('probe schema conformance', () => {
  it('a collected report is accepted with no validation errors', async () => {
    const probe = await collect(CONFIG);
    const report = assembleReport(probe, `conf-${Date.now()}`, 'initial');
    const response = await submitReport(server.baseUrl, report);
    expect(response.visit_id).toBeGreaterThan(0);
    expect(response.fingerprint).toMatch(/^[0-9a-f]{64}$/);
    expect(response.score.fi_total).toBeGreaterThanOrEqual(0);
    expect(response.score.assessments.length).toBeGreaterThan(0);
  });

  it('two consecutive collects hash the canvas identically', async () => {
    const first = await collect(CONFIG);
    const second = await collect(CONFIG);
    expect(first.canvas_hash).toBeDefined();
    expect(first.canvas_hash).toBe(second.canvas_hash);
  });

  it('a degraded browser still submits an acceptable report', async () => {
    resetBrowserStubs();
    const probe = await collect(CONFIG);
    expect(probe.collection_errors.length).toBeGreaterThan(0);
    const report = assembleReport(probe, `conf-degraded-${Date.now()}`, 'initial');
    const response = await submitReport(server.baseUrl, report);
    const byKind = Object.fromEntries(response.score.assessments.map((a) => [a.kind, a]));
    expect(byKind['canvas'].rank).toBe('none');
    expect(byKind['device_id'].rank).toBe('none');
  });

  it('the server rejects a tampered canvas hash by field name', async () => {
    const probe = await collect(CONFIG);
    const report = assembleReport(probe, `conf-bad-${Date.now()}`, 'initial');
    report.canvas_hash = 'not-hex';
    await expect(submitReport(server.baseUrl, report)).rejects.toMatchObject({
      status: 400,
      field: 'canvas_hash',
    });
  });
});
