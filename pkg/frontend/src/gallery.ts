/** Gallery curation plus drag-and-drop texture application onto the target
 * objects (vase, headphones). Dropping calls POST /apply and reports
 * loading / composite / error states through a small status interface. */

import type { ApiClient } from "./api";
import type { AppStore } from "./state";

const DND_MIME = "application/x-sonomap-ref";

export type ApplyState =
  | { phase: "loading"; objectId: string; ref: string }
  | { phase: "done"; objectId: string; ref: string; compositePath: string }
  | { phase: "error"; objectId: string; ref: string; message: string };

export class GalleryController {
  constructor(
    private readonly api: ApiClient,
    private readonly store: AppStore,
  ) {}

  async refresh(): Promise<void> {
    const { items } = await this.api.listGallery();
    this.store.setGallery(items);
  }

  async add(ref: string): Promise<void> {
    await this.api.addGalleryItem(ref);
    await this.refresh();
  }

  async remove(itemId: string): Promise<void> {
    await this.api.deleteGalleryItem(itemId);
    await this.refresh();
  }
}

/** Mark a gallery thumbnail as a drag source carrying its ref. */
export function makeDraggable(element: HTMLElement, ref: string): void {
  element.draggable = true;
  element.addEventListener("dragstart", (event) => {
    event.dataTransfer?.setData(DND_MIME, ref);
  });
}

export function refFromDrop(event: DragEvent): string | null {
  const ref = event.dataTransfer?.getData(DND_MIME);
  return ref ? ref : null;
}

/** Wire one target object as a drop zone; onState drives the preview UI. */
export function bindDropTarget(
  element: HTMLElement,
  objectId: string,
  api: ApiClient,
  onState: (state: ApplyState) => void,
): void {
  element.addEventListener("dragover", (event) => {
    event.preventDefault();
    element.classList.add("drop-ready");
  });
  element.addEventListener("dragleave", () => element.classList.remove("drop-ready"));
  element.addEventListener("drop", (event) => {
    event.preventDefault();
    element.classList.remove("drop-ready");
    const ref = refFromDrop(event);
    if (!ref) return;
    void applyToObject(api, objectId, ref, onState);
  });
}

export async function applyToObject(
  api: ApiClient,
  objectId: string,
  ref: string,
  onState: (state: ApplyState) => void,
): Promise<void> {
  onState({ phase: "loading", objectId, ref });
  try {
    const { composite_image_path } = await api.applyTexture(objectId, ref);
    onState({ phase: "done", objectId, ref, compositePath: composite_image_path });
  } catch (err) {
    onState({
      phase: "error",
      objectId,
      ref,
      message: err instanceof Error ? err.message : String(err),
    });
  }
}
