// Page configuration, overridable via an inline JSON block:
//   <script id="fpindex-config" type="application/json">{"stunServers": [...]}</script>

export interface ProbeConfig {
  apiBase: string;
  stunServers: string[];
  stunTimeoutMs: number;
}

export const DEFAULT_CONFIG: ProbeConfig = {
  apiBase: '',
  stunServers: ['stun:stun.l.google.com:19302'],
  stunTimeoutMs: 2000,
};

export function readConfig(doc: Document): ProbeConfig {
  const block = doc.getElementById('fpindex-config');
  if (!block || !block.textContent) {
    return { ...DEFAULT_CONFIG };
  }
  try {
    const parsed = JSON.parse(block.textContent);
    return {
      apiBase: typeof parsed.apiBase === 'string' ? parsed.apiBase : DEFAULT_CONFIG.apiBase,
      stunServers: Array.isArray(parsed.stunServers)
        ? parsed.stunServers.filter((s: unknown) => typeof s === 'string')
        : DEFAULT_CONFIG.stunServers,
      stunTimeoutMs:
        typeof parsed.stunTimeoutMs === 'number'
          ? parsed.stunTimeoutMs
          : DEFAULT_CONFIG.stunTimeoutMs,
    };
  } catch {
    return { ...DEFAULT_CONFIG };
  }
}
