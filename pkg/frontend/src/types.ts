// Shapes of the HTTP API payloads (docs/http-api.md in the repo root).
// The UI renders these verbatim; it never derives temporal facts itself.

export interface Diagnostic {
  file: string;
  line: number;
  col: number;
  code: string;
  severity: string;
  message: string;
  end_line?: number;
  end_col?: number;
}

export type AttrValue = string | number;

export interface TimelineEvent {
  id: string;
  type: string;
  start_ms: number;
  end_ms: number;
  confidence: number;
  attributes: Record<string, AttrValue>;
}

export interface TimelinePayload {
  v: number;
  fps: string | null;
  events: TimelineEvent[];
}

export interface ProvenanceEntry {
  rule: string;
  events: string[];
}

export interface AnnotationRecord {
  id: string;
  concept: string;
  start_ms: number;
  end_ms: number;
  attributes: Record<string, AttrValue>;
  provenance: ProvenanceEntry[];
}

export interface AnnotationDocument {
  header: Record<string, unknown>;
  records: AnnotationRecord[];
}

export interface ProjectInfo {
  v: number;
  id: string;
  detector: { threshold: number; min_shot_frames: number };
  duration_tolerance_ms: number;
  files: { features: string[]; events: string[] };
  rules_sha256: string;
  has_annotations: boolean;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
