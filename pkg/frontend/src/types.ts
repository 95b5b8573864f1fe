/** Wire types for the explore-service HTTP API. */

export interface ProjectDot {
  id: string;
  title: string;
  group: string;
  x: number;
  y: number;
  date: string | null;
}

export interface MapLabel {
  text: string;
  count: number;
  x: number;
  y: number;
}

export interface ContourLevel {
  level: number;
  /** Polylines in map coordinates: paths[i] is a list of [x, y] points. */
  paths: number[][][];
}

export interface MapPayload {
  projects: ProjectDot[];
  labels: MapLabel[];
  contours: ContourLevel[];
}

export interface SearchHit {
  id: string;
  score: number;
}

export interface SearchResponse {
  x: number;
  y: number;
  hits: SearchHit[];
}

export interface ProjectDetail {
  id: string;
  title: string;
  description: string;
  group: string;
  date: string | null;
  x: number | null;
  y: number | null;
}

export interface SummaryResponse {
  summary: string;
  project_ids: string[];
}

export interface RecipeItemWire {
  project_id: string;
  aspect: string;
}

export interface GenerateResponse {
  title: string;
  description: string;
  prompt_used: string;
}

export interface LabelMetrics {
  char_width_factor: number;
  line_height_factor: number;
  font_px: number;
  pixels_per_unit: number;
}

export interface HealthResponse {
  status: string;
  corpus_size: number;
  artifact_version: number;
  label_metrics: LabelMetrics;
}

export interface ApiError {
  error_code: string;
  message: string;
}

export interface MapQuery {
  x0?: number;
  y0?: number;
  x1?: number;
  y1?: number;
  zoom?: number;
  start?: string;
  end?: string;
}
