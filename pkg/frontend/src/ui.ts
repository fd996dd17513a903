// DOM rendering for the results page. The displayed index is always the
// server-returned fi_total; nothing is recomputed client-side.

import type { AttributeAssessment, AttributeName, ProbeResult, Score } from './types.js';

export const ATTRIBUTE_LABELS: Record<AttributeName, string> = {
  fonts: 'Fonts',
  device_id: 'Device ID',
  canvas: 'Canvas',
  webgl_renderer: 'WebGL Renderer',
  user_agent: 'User Agent',
  local_ip: 'Local IP',
};

export interface MitigationSuggestion {
  title: string;
  detail: string;
}

/** Mirror of the server-side suggestion rules, for display only. */
export function deriveMitigations(assessments: AttributeAssessment[]): MitigationSuggestion[] {
  const ranked = new Set(assessments.filter((a) => a.rank !== 'none').map((a) => a.kind));
  const out: MitigationSuggestion[] = [];
  if (ranked.has('canvas')) {
    out.push({
      title: 'Disable the Canvas API',
      detail: 'Block canvas read-back (e.g. with a canvas-blocking add-on).',
    });
  }
  if (ranked.has('fonts')) {
    out.push({
      title: 'Disable Flash',
      detail: 'Disable or remove the Flash plugin to stop font-list enumeration.',
    });
  }
  if (ranked.has('device_id') || ranked.has('local_ip')) {
    out.push({
      title: 'Disable WebRTC',
      detail: 'Stops exposure of media device IDs and local network addresses.',
    });
  }
  if (ranked.size > 0) {
    out.push({
      title: 'Install anonymizing add-ons',
      detail: 'Add-ons that reduce or disguise the attribute surface as a whole.',
    });
  }
  return out;
}

export function collectedValueFor(kind: AttributeName, probe: ProbeResult): string {
  switch (kind) {
    case 'fonts':
      return probe.fonts ? `${probe.fonts.length} fonts` : 'not retrievable';
    case 'device_id':
      return probe.device_ids.length ? probe.device_ids.join(', ') : 'none observed';
    case 'canvas':
      return probe.canvas_hash ?? 'not rendered';
    case 'webgl_renderer':
      return probe.webgl_renderer ?? 'not available';
    case 'user_agent':
      return probe.user_agent || 'empty';
    case 'local_ip':
      return probe.local_ips.length ? probe.local_ips.join(', ') : 'none revealed';
  }
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function showError(root: HTMLElement, text: string): void {
  const doc = root.ownerDocument;
  let banner = root.querySelector<HTMLElement>('.error-banner');
  if (!banner) {
    banner = el(doc, 'div', 'error-banner');
    root.prepend(banner);
  }
  banner.textContent = text;
  banner.hidden = false;
}

export function clearError(root: HTMLElement): void {
  const banner = root.querySelector<HTMLElement>('.error-banner');
  if (banner) banner.hidden = true;
}

export interface PersistenceHandlers {
  onRefreshTest: () => void;
  onNewSessionTest: () => void;
}

export function renderResults(
  root: HTMLElement,
  score: Score,
  probe: ProbeResult,
  handlers: PersistenceHandlers,
): void {
  const doc = root.ownerDocument;
  let container = root.querySelector<HTMLElement>('.results');
  if (container) {
    container.replaceChildren();
  } else {
    container = el(doc, 'section', 'results');
    root.append(container);
  }

  container.append(
    el(
      doc,
      'h2',
      undefined,
      `${score.browser.browser_name} ${score.browser.browser_version} on ${score.browser.os_name} ${score.browser.os_version}`,
    ),
  );

  const presentCount = score.assessments.filter((a) => a.rank !== 'none').length;
  if (presentCount === 0) {
    container.append(
      el(doc, 'p', 'empty-note', 'No fingerprintable attributes were observed.'),
    );
  }

  const table = el(doc, 'table', 'attributes');
  const head = el(doc, 'tr');
  for (const title of ['Attribute', 'Collected value', 'Rank']) {
    head.append(el(doc, 'th', undefined, title));
  }
  table.append(head);
  for (const assessment of score.assessments) {
    const row = el(doc, 'tr');
    row.dataset.kind = assessment.kind;
    row.append(el(doc, 'td', undefined, ATTRIBUTE_LABELS[assessment.kind]));
    row.append(el(doc, 'td', 'value', collectedValueFor(assessment.kind, probe)));
    const rank = el(doc, 'td', `rank rank-${assessment.rank}`);
    rank.textContent = assessment.rank === 'none' ? '-' : assessment.rank;
    rank.title = assessment.evidence;
    row.append(rank);
    table.append(row);
  }
  container.append(table);

  const fi = el(doc, 'p', 'fi-total');
  fi.append(el(doc, 'span', undefined, 'Fingerprintability Index: '));
  fi.append(el(doc, 'strong', 'fi-value', String(score.fi_total)));
  fi.append(
    el(doc, 'span', 'fi-attrs', ` (${score.total_attributes} attribute(s) observed)`),
  );
  container.append(fi);

  const mitigations = deriveMitigations(score.assessments);
  const mitigationBlock = el(doc, 'div', 'mitigations');
  mitigationBlock.append(el(doc, 'h3', undefined, 'Suggested countermeasures'));
  if (mitigations.length === 0) {
    mitigationBlock.append(el(doc, 'p', undefined, 'No mitigations needed.'));
  } else {
    const list = el(doc, 'ul');
    for (const m of mitigations) {
      list.append(el(doc, 'li', undefined, `${m.title}: ${m.detail}`));
    }
    mitigationBlock.append(list);
  }
  container.append(mitigationBlock);

  if (probe.collection_errors.length) {
    const noteList = el(doc, 'ul', 'collection-errors');
    for (const err of probe.collection_errors) {
      noteList.append(el(doc, 'li', undefined, `${ATTRIBUTE_LABELS[err.attribute]}: ${err.message}`));
    }
    const details = el(doc, 'details');
    details.append(el(doc, 'summary', undefined, 'Attributes that could not be collected'));
    details.append(noteList);
    container.append(details);
  }

  const buttons = el(doc, 'div', 'persistence-tests');
  const refreshBtn = el(doc, 'button', 'refresh-test', 'Run refresh test');
  refreshBtn.addEventListener('click', handlers.onRefreshTest);
  const newSessionBtn = el(doc, 'button', 'new-session-test', 'Run new-session test');
  newSessionBtn.addEventListener('click', handlers.onNewSessionTest);
  buttons.append(refreshBtn, newSessionBtn);
  container.append(buttons);
}

export function displayedDeviceIdRank(root: HTMLElement): string | null {
  const cell = root.querySelector<HTMLElement>('tr[data-kind="device_id"] .rank');
  return cell ? cell.textContent : null;
}

export function displayedFiTotal(root: HTMLElement): number | null {
  const value = root.querySelector<HTMLElement>('.fi-value');
  return value && value.textContent !== null ? Number(value.textContent) : null;
}
