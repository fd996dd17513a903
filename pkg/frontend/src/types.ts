// Wire types shared with the ingest server (see docs/wire-format.md).

export type Platform = 'desktop' | 'mobile';

export type EventKind = 'initial' | 'refresh' | 'revisit' | 'new_session' | 'cache_clear';

export interface NavigationEvent {
  kind: EventKind;
  timestamp: number;
}

export interface FingerprintReport {
  session_token: string;
  platform: Platform;
  event: NavigationEvent;
  user_agent: string;
  device_ids: string[];
  canvas_hash?: string;
  webgl_vendor?: string;
  webgl_renderer?: string;
  local_ips: string[];
  fonts?: string[];
  device_profile_id?: string;
}

export type AttributeName =
  | 'fonts'
  | 'device_id'
  | 'canvas'
  | 'webgl_renderer'
  | 'user_agent'
  | 'local_ip';

export type RankName = 'none' | 'low' | 'medium' | 'high';

export interface AttributeAssessment {
  kind: AttributeName;
  present: boolean;
  rank: RankName;
  evidence: string;
}

export interface Score {
  browser: {
    browser_name: string;
    browser_version: string;
    os_name: string;
    os_version: string;
    phone_model?: string;
  };
  platform: Platform;
  assessments: AttributeAssessment[];
  total_attributes: number;
  fi_total: number;
}

export interface SubmitResponse {
  visit_id: number;
  fingerprint: string;
  score: Score;
}

export interface CollectionError {
  attribute: AttributeName;
  message: string;
}

// Everything collect() could gather, before a session token and navigation
// event turn it into a submittable report. Attributes that failed to collect
// stay absent and the failure is listed in collection_errors.
export interface ProbeResult {
  platform: Platform;
  user_agent: string;
  device_ids: string[];
  canvas_hash?: string;
  webgl_vendor?: string;
  webgl_renderer?: string;
  local_ips: string[];
  fonts?: string[];
  collection_errors: CollectionError[];
}
