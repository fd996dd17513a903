// Gathers the six fingerprint attributes from the live browser. Each
// attribute collects independently; a failure leaves the field absent and
// adds a collection_errors entry. collect() itself never throws.

import type { ProbeConfig } from './config.js';
import { sha256Hex } from './sha256.js';
import type {
  AttributeName,
  CollectionError,
  EventKind,
  FingerprintReport,
  Platform,
  ProbeResult,
} from './types.js';

const UNMASKED_VENDOR_WEBGL = 0x9245;
const UNMASKED_RENDERER_WEBGL = 0x9246;

function message(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

export function detectPlatform(userAgent: string): Platform {
  return /Mobi|Android|iPhone|iPad|Windows Phone/i.test(userAgent) ? 'mobile' : 'desktop';
}

/** Draw the fixed test scene: text over colored shapes plus a gradient. */
export function drawTestScene(canvas: HTMLCanvasElement): void {
  canvas.width = 280;
  canvas.height = 80;
  const ctx = canvas.getContext('2d');
  if (!ctx) {
    throw new Error('2d context unavailable');
  }
  ctx.fillStyle = '#f8f4e8';
  ctx.fillRect(0, 0, 280, 80);
  const gradient = ctx.createLinearGradient(0, 0, 280, 0);
  gradient.addColorStop(0, '#e8443a');
  gradient.addColorStop(0.5, '#2a9d4a');
  gradient.addColorStop(1, '#2456b0');
  ctx.fillStyle = gradient;
  ctx.fillRect(8, 48, 264, 24);
  ctx.beginPath();
  ctx.arc(248, 26, 18, 0, Math.PI * 2);
  ctx.fillStyle = 'rgba(240, 160, 20, 0.8)';
  ctx.fill();
  ctx.font = '16px "Arial"';
  ctx.fillStyle = '#1a1a1a';
  ctx.textBaseline = 'top';
  ctx.fillText('How quickly daft jumping zebras vex! 123@#', 10, 10);
  ctx.font = 'italic 12px "Times New Roman"';
  ctx.fillStyle = '#5522aa';
  ctx.fillText('fingerprint sample \u{1F50D}', 12, 30);
}

async function collectCanvas(doc: Document): Promise<string> {
  const canvas = doc.createElement('canvas');
  drawTestScene(canvas);
  const dataUrl = canvas.toDataURL('image/png');
  if (!dataUrl || dataUrl === 'data:,') {
    throw new Error('canvas produced no data URL');
  }
  return sha256Hex(dataUrl);
}

async function collectDeviceIds(nav: Navigator): Promise<string[]> {
  if (!nav.mediaDevices || typeof nav.mediaDevices.enumerateDevices !== 'function') {
    throw new Error('media device enumeration unsupported');
  }
  const devices = await nav.mediaDevices.enumerateDevices();
  const ids = devices.map((d) => d.deviceId).filter((id) => id !== '');
  return Array.from(new Set(ids));
}

function collectWebgl(doc: Document): { vendor: string; renderer: string } {
  const canvas = doc.createElement('canvas');
  const gl = (canvas.getContext('webgl') ||
    canvas.getContext('experimental-webgl')) as WebGLRenderingContext | null;
  if (!gl) {
    throw new Error('webgl unsupported');
  }
  const debugInfo = gl.getExtension('WEBGL_debug_renderer_info');
  if (!debugInfo) {
    throw new Error('debug renderer extension unavailable');
  }
  return {
    vendor: String(gl.getParameter(UNMASKED_VENDOR_WEBGL)),
    renderer: String(gl.getParameter(UNMASKED_RENDERER_WEBGL)),
  };
}

const CANDIDATE_ADDRESS = /candidate:\S+ \d+ \S+ \d+ ([0-9a-fA-F:.]+) \d+ typ/;

export function addressFromCandidate(candidate: string): string | null {
  const match = CANDIDATE_ADDRESS.exec(candidate);
  if (!match) {
    return null;
  }
  const address = match[1];
  // mDNS-obfuscated candidates are hostnames, not addresses
  if (!/^[0-9a-fA-F:.]+$/.test(address) || !/[.:]/.test(address)) {
    return null;
  }
  return address;
}

async function collectLocalIps(config: ProbeConfig): Promise<string[]> {
  const Ctor = (globalThis as Record<string, unknown>).RTCPeerConnection as
    | (new (cfg: object) => RTCPeerConnection)
    | undefined;
  if (!Ctor) {
    throw new Error('webrtc unsupported');
  }
  const pc = new Ctor({ iceServers: [{ urls: config.stunServers }] });
  const found = new Set<string>();
  try {
    const gathered = new Promise<void>((resolve) => {
      pc.onicecandidate = (event) => {
        if (!event.candidate) {
          resolve();
          return;
        }
        const address = addressFromCandidate(event.candidate.candidate);
        if (address) {
          found.add(address);
        }
      };
    });
    pc.createDataChannel('probe');
    const offer = await pc.createOffer();
    await pc.setLocalDescription(offer);
    const timeout = new Promise<void>((resolve) => setTimeout(resolve, config.stunTimeoutMs));
    await Promise.race([gathered, timeout]);
  } finally {
    pc.close();
  }
  return Array.from(found).sort();
}

export async function collect(
  config: ProbeConfig,
  doc: Document = document,
  nav: Navigator = navigator,
): Promise<ProbeResult> {
  const errors: CollectionError[] = [];
  const fail = (attribute: AttributeName, err: unknown) =>
    errors.push({ attribute, message: message(err) });

  const result: ProbeResult = {
    platform: detectPlatform(nav.userAgent || ''),
    user_agent: nav.userAgent || '',
    device_ids: [],
    local_ips: [],
    collection_errors: errors,
  };
  if (!nav.userAgent) {
    fail('user_agent', new Error('navigator.userAgent is empty'));
  }

  // Font-list probing needed the Flash plugin; there is nothing to query
  // here, so the attribute is reported absent rather than fabricated.
  fail('fonts', new Error('not collected: font probing requires the Flash plugin'));

  const [canvasOut, idsOut, ipsOut] = await Promise.allSettled([
    collectCanvas(doc),
    collectDeviceIds(nav),
    collectLocalIps(config),
  ]);
  if (canvasOut.status === 'fulfilled') {
    result.canvas_hash = canvasOut.value;
  } else {
    fail('canvas', canvasOut.reason);
  }
  if (idsOut.status === 'fulfilled') {
    result.device_ids = idsOut.value;
  } else {
    fail('device_id', idsOut.reason);
  }
  if (ipsOut.status === 'fulfilled') {
    result.local_ips = ipsOut.value;
  } else {
    fail('local_ip', ipsOut.reason);
  }

  try {
    const { vendor, renderer } = collectWebgl(doc);
    result.webgl_vendor = vendor;
    result.webgl_renderer = renderer;
  } catch (err) {
    fail('webgl_renderer', err);
  }

  return result;
}

/** Attach session identity and the navigation trigger to a probe result. */
export function assembleReport(
  probe: ProbeResult,
  sessionToken: string,
  kind: EventKind,
  timestamp: number = Date.now(),
): FingerprintReport {
  const report: FingerprintReport = {
    session_token: sessionToken,
    platform: probe.platform,
    event: { kind, timestamp },
    user_agent: probe.user_agent,
    device_ids: probe.device_ids,
    local_ips: probe.local_ips,
  };
  if (probe.canvas_hash !== undefined) report.canvas_hash = probe.canvas_hash;
  if (probe.webgl_vendor !== undefined) report.webgl_vendor = probe.webgl_vendor;
  if (probe.webgl_renderer !== undefined) report.webgl_renderer = probe.webgl_renderer;
  if (probe.fonts !== undefined) report.fonts = probe.fonts;
  return report;
}
