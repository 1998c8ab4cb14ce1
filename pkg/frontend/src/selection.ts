/** Selection behavior: clicking an item fetches its authored counterparts
 * and emphasizes them in the other map.
 *
 * Terms highlight their 1-3 generated textures (plus a preview panel for
 * choosing among variations); textures highlight the single term they came
 * from. Dynamic points have no authored links: selecting one shows its
 * stored surface/description instead, with no highlight request. */

import type { HighlightRequester } from "./highlight";
import type { MapView } from "./scene";
import type { AppStore } from "./state";

export interface SelectionView {
  /** Invented surface + description shown when a dynamic point is picked. */
  showDynamicInfo?: (surface: string, description: string) => void;
  onHighlightError?: (message: string) => void;
}

export class SelectionController {
  constructor(
    private readonly requester: HighlightRequester,
    private readonly store: AppStore,
    private readonly imageMap: MapView,
    private readonly textMap: MapView,
    private readonly view: SelectionView = {},
  ) {}

  private clearHighlights(): void {
    this.imageMap.setHighlight([]);
    this.textMap.setHighlight([]);
  }

  async selectTerm(termId: string): Promise<void> {
    this.store.select({ kind: "term", id: termId });
    this.textMap.setHighlight([termId]);
    this.textMap.focusOnItem(termId);
    await this.applyHighlight("term", termId, (ids) => this.imageMap.setHighlight(ids));
  }

  async selectTexture(textureId: string): Promise<void> {
    this.store.select({ kind: "texture", id: textureId });
    this.imageMap.setHighlight([textureId]);
    this.imageMap.focusOnItem(textureId);
    await this.applyHighlight("texture", textureId, (ids) => this.textMap.setHighlight(ids));
  }

  selectDynamic(replotId: string): void {
    this.store.select({ kind: "dynamic", id: replotId });
    this.clearHighlights();
    this.store.setHighlight(null);
    const record = this.store.dynamicPoint(replotId);
    if (record) {
      this.imageMap.focusOnItem(replotId);
      this.textMap.focusOnItem(replotId);
      this.view.showDynamicInfo?.(record.surface, record.description);
    }
  }

  clear(): void {
    this.store.select(null);
    this.clearHighlights();
  }

  private async applyHighlight(
    kind: "term" | "texture",
    id: string,
    emphasize: (ids: string[]) => void,
  ): Promise<void> {
    try {
      const response = await this.requester.request(kind, id);
      if (response === null) return; // superseded by a newer selection
      emphasize(response.highlighted_ids);
      this.store.setHighlight(response);
    } catch (err) {
      this.view.onHighlightError?.(err instanceof Error ? err.message : String(err));
    }
  }
}
