// Page controller: collect on load, submit, render, and drive the two
// persistence tests against the ingest server.

import { getSessionScore, submitReport } from './api.js';
import { assembleReport, collect } from './collect.js';
import type { ProbeConfig } from './config.js';
import { getOrCreateToken, rotateToken } from './session.js';
import type { ProbeResult, Score } from './types.js';
import { clearError, renderResults, showError } from './ui.js';

export type PersistenceTestMode = 'refresh' | 'new_session';

export interface AppOptions {
  root: HTMLElement;
  config: ProbeConfig;
  storage: Storage;
  doc?: Document;
  nav?: Navigator;
  // test seam: disables token rotation to exercise the guard
  rotateTokens?: boolean;
}

export class ProbeApp {
  private token: string | null = null;
  private lastProbe: ProbeResult | null = null;
  private lastScore: Score | null = null;
  private readonly rotateTokens: boolean;

  constructor(private readonly options: AppOptions) {
    this.rotateTokens = options.rotateTokens !== false;
  }

  get sessionToken(): string | null {
    return this.token;
  }

  get score(): Score | null {
    return this.lastScore;
  }

  /** Initial page flow: collect, submit, render. */
  async start(): Promise<void> {
    const session = getOrCreateToken(this.options.storage);
    this.token = session.token;
    await this.collectAndSubmit(session.isNew ? 'initial' : 'refresh');
  }

  async runPersistenceTest(mode: PersistenceTestMode): Promise<void> {
    if (!this.lastScore || !this.token) {
      throw new Error('run a collection before a persistence test');
    }
    if (mode === 'new_session') {
      if (!this.rotateTokens) {
        showError(this.options.root, 'new-session test requires token rotation');
        throw new Error('new-session test requires token rotation');
      }
      this.token = rotateToken(this.options.storage);
      await this.collectAndSubmit('new_session');
    } else {
      await this.collectAndSubmit('refresh');
    }
  }

  /** Read-only re-sync with the server's latest view of this session. */
  async refreshScore(): Promise<Score> {
    if (!this.token) {
      throw new Error('no session');
    }
    const score = await getSessionScore(this.options.config.apiBase, this.token);
    this.lastScore = score;
    this.render();
    return score;
  }

  private async collectAndSubmit(kind: 'initial' | 'refresh' | 'new_session'): Promise<void> {
    const { config, doc, nav } = this.options;
    const probe = await collect(config, doc ?? document, nav ?? navigator);
    this.lastProbe = probe;
    const report = assembleReport(probe, this.token as string, kind);
    try {
      const response = await submitReport(config.apiBase, report);
      this.lastScore = response.score;
      clearError(this.options.root);
      this.render();
    } catch (err) {
      // no silent retry; surface the failure and keep the previous view
      showError(this.options.root, `submission failed: ${(err as Error).message}`);
      throw err;
    }
  }

  private render(): void {
    if (!this.lastScore || !this.lastProbe) {
      return;
    }
    renderResults(this.options.root, this.lastScore, this.lastProbe, {
      onRefreshTest: () => void this.runPersistenceTest('refresh').catch(() => undefined),
      onNewSessionTest: () => void this.runPersistenceTest('new_session').catch(() => undefined),
    });
  }
}
