// Session tokens live in session-scoped storage, so closing the tab starts
// a fresh session on return.

const TOKEN_KEY = 'fpindex-session-token';

function randomToken(): string {
  const bytes = new Uint8Array(16);
  crypto.getRandomValues(bytes);
  return Array.from(bytes)
    .map((b) => b.toString(16).padStart(2, '0'))
    .join('');
}

export interface SessionHandle {
  token: string;
  isNew: boolean;
}

export function getOrCreateToken(storage: Storage): SessionHandle {
  const existing = storage.getItem(TOKEN_KEY);
  if (existing) {
    return { token: existing, isNew: false };
  }
  const token = randomToken();
  storage.setItem(TOKEN_KEY, token);
  return { token, isNew: true };
}

/** Replace the stored token; the result must differ from the old one. */
export function rotateToken(storage: Storage): string {
  const previous = storage.getItem(TOKEN_KEY);
  const token = randomToken();
  if (token === previous) {
    throw new Error('token rotation produced the same token');
  }
  storage.setItem(TOKEN_KEY, token);
  return token;
}
