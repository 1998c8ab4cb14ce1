/** Central store. Everything here mirrors service responses; components
 * subscribe and re-render, so a replotted point appears in both maps the
 * moment its record lands, with no page reload. */

import type {
  AtlasPayload,
  GalleryItem,
  HighlightResponse,
  ReplotEntry,
  Selection,
} from "./types";

type Listener = () => void;

export class AppStore {
  atlas: AtlasPayload | null = null;
  selection: Selection = null;
  highlight: HighlightResponse | null = null;
  gallery: GalleryItem[] = [];
  private listeners = new Set<Listener>();

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  setAtlas(atlas: AtlasPayload): void {
    this.atlas = atlas;
    this.notify();
  }

  select(selection: Selection): void {
    this.selection = selection;
    if (selection === null) this.highlight = null;
    this.notify();
  }

  setHighlight(response: HighlightResponse | null): void {
    this.highlight = response;
    this.notify();
  }

  setGallery(items: GalleryItem[]): void {
    this.gallery = items;
    this.notify();
  }

  /** Append a freshly replotted dynamic point to the live atlas payload. */
  addDynamicPoint(record: ReplotEntry): void {
    if (!this.atlas) return;
    this.atlas.dynamic_points = [...this.atlas.dynamic_points, record];
    this.notify();
  }

  dynamicPoint(replotId: string): ReplotEntry | undefined {
    return this.atlas?.dynamic_points.find((p) => p.replot_id === replotId);
  }
}
