/** Payload shapes served by the exploration service. */

export interface MapBounds {
  min_x: number;
  min_y: number;
  max_x: number;
  max_y: number;
}

export interface TermEntry {
  term_id: string;
  surface: string;
  english_description: string;
  coord: [number, number];
}

export interface TextureEntry {
  texture_id: string;
  term_id: string;
  image_path: string;
  thumbnail_path: string;
  coord: [number, number];
}

export interface ReplotEntry {
  replot_id: string;
  job_id: string;
  frame_index: number;
  surface: string;
  description: string;
  image_coord: [number, number];
  text_coord: [number, number];
  dynamic: boolean;
  display_color: string;
}

export interface AtlasPayload {
  version: number;
  counts: { terms: number; textures: number };
  terms: TermEntry[];
  textures: TextureEntry[];
  dynamic_points: ReplotEntry[];
  bounds: { image: MapBounds; text: MapBounds };
}

export interface HighlightResponse {
  highlighted_ids: string[];
  preview: { texture_id: string; thumbnail_path: string; image_path: string }[];
}

export interface GalleryItem {
  item_id: string;
  ref: string;
  added_at: string;
  position: number;
}

export interface TargetObject {
  object_id: string;
  base_image_path: string;
}

export interface JobStatus {
  job_id: string;
  status: "pending" | "running" | "done" | "failed";
  frame_count: number;
  error: string | null;
  frame_paths?: string[];
}

/** Presentation constants for the dual-map view. */
export const VIEW_CONFIG = {
  /** Sprite edge = baseSpriteScale * thumbnailSize world units. */
  baseSpriteScale: 0.075,
  thumbnailSize: 64,
  /** All map items sit on this z plane. */
  fixedZ: 0,
  /** Map coordinates are multiplied up so sprites read at a sane density. */
  coordScale: 4,
  /** Image map on the left, language map on the right. */
  mapOrder: ["image", "text"] as const,
};

export type MapKind = (typeof VIEW_CONFIG.mapOrder)[number];

export type Selection =
  | { kind: "term"; id: string }
  | { kind: "texture"; id: string }
  | { kind: "dynamic"; id: string }
  | null;
