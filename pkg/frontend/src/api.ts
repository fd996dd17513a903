import type { FingerprintReport, Score, SubmitResponse } from './types.js';

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly field?: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  let field: string | undefined;
  try {
    const body = await response.json();
    if (body && typeof body.error === 'string') {
      detail = body.error;
      field = typeof body.field === 'string' ? body.field : undefined;
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(detail, response.status, field);
}

export async function submitReport(
  apiBase: string,
  report: FingerprintReport,
  options: { retry?: boolean } = {},
): Promise<SubmitResponse> {
  const headers: Record<string, string> = { 'content-type': 'application/json' };
  if (options.retry) {
    headers['x-client-retry'] = '1';
  }
  const response = await fetch(`${apiBase}/api/v1/report`, {
    method: 'POST',
    headers,
    body: JSON.stringify(report),
  });
  if (!response.ok) {
    throw await parseError(response);
  }
  return (await response.json()) as SubmitResponse;
}

export async function getSessionScore(apiBase: string, token: string): Promise<Score> {
  const response = await fetch(`${apiBase}/api/v1/session/${encodeURIComponent(token)}/score`);
  if (!response.ok) {
    throw await parseError(response);
  }
  return (await response.json()) as Score;
}
