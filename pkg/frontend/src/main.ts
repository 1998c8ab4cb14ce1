/** Browser bootstrap: two side-by-side maps (textures left, terms right),
 * preview/gallery/apply panels, and the interpolation scrubber. */

import * as THREE from "three";

import { ApiClient } from "./api";
import { HighlightRequester } from "./highlight";
import {
  GalleryController,
  applyToObject,
  bindDropTarget,
  makeDraggable,
  type ApplyState,
} from "./gallery";
import { InterpolationFlow, canInterpolate } from "./interpolate";
import { MapView, type SpriteTextureFactory } from "./scene";
import { SelectionController } from "./selection";
import { AppStore } from "./state";
import type { AtlasPayload } from "./types";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

/** Thumbnails load eagerly as sprite maps; selection upgrades the sprite to
 * the full-resolution image. Labels rasterize through an offscreen canvas. */
class LoaderFactory implements SpriteTextureFactory {
  private readonly loader = new THREE.TextureLoader();
  private readonly cache = new Map<string, THREE.Texture>();

  constructor(private readonly api: ApiClient) {}

  load(relPath: string): THREE.Texture | null {
    let texture = this.cache.get(relPath);
    if (!texture) {
      texture = this.loader.load(this.api.fileUrl(relPath));
      texture.colorSpace = THREE.SRGBColorSpace;
      this.cache.set(relPath, texture);
    }
    return texture;
  }

  label(text: string): THREE.Texture | null {
    const canvas = document.createElement("canvas");
    const ctx = canvas.getContext("2d");
    if (!ctx) return null;
    canvas.width = 256;
    canvas.height = 64;
    ctx.font = "28px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillStyle = "#e8e8f0";
    ctx.fillText(text, 128, 32);
    const texture = new THREE.CanvasTexture(canvas);
    texture.colorSpace = THREE.SRGBColorSpace;
    return texture;
  }
}

function mountMap(
  container: HTMLElement,
  view: MapView,
  onPick: (hit: { id: string; dynamic: boolean } | null) => void,
): void {
  const renderer = new THREE.WebGLRenderer({ antialias: true });
  renderer.setSize(container.clientWidth, container.clientHeight);
  container.appendChild(renderer.domElement);
  view.scene.background = new THREE.Color("#14141c");
  view.rig.camera.aspect = container.clientWidth / container.clientHeight;
  view.rig.camera.updateProjectionMatrix();
  view.rig.bind(renderer.domElement);

  let downAt: [number, number] | null = null;
  renderer.domElement.addEventListener("pointerdown", (event) => {
    downAt = [event.clientX, event.clientY];
  });
  renderer.domElement.addEventListener("pointerup", (event) => {
    if (!downAt) return;
    const moved = Math.hypot(event.clientX - downAt[0], event.clientY - downAt[1]);
    downAt = null;
    if (moved > 4) return; // it was a drag, not a click
    const rect = renderer.domElement.getBoundingClientRect();
    const ndcX = ((event.clientX - rect.left) / rect.width) * 2 - 1;
    const ndcY = -(((event.clientY - rect.top) / rect.height) * 2 - 1);
    onPick(view.pick(ndcX, ndcY));
  });

  let last = performance.now();
  const tick = (now: number) => {
    view.rig.update(now - last);
    last = now;
    renderer.render(view.scene, view.rig.camera);
    requestAnimationFrame(tick);
  };
  requestAnimationFrame(tick);

  window.addEventListener("resize", () => {
    renderer.setSize(container.clientWidth, container.clientHeight);
    view.rig.camera.aspect = container.clientWidth / container.clientHeight;
    view.rig.camera.updateProjectionMatrix();
  });
}

export async function bootstrap(root: HTMLElement, api: ApiClient): Promise<void> {
  root.replaceChildren();
  let atlas: AtlasPayload;
  try {
    atlas = await api.fetchAtlas();
  } catch (err) {
    const panel = el("div", "error-panel");
    panel.appendChild(
      el("p", "", `Could not load the atlas: ${err instanceof Error ? err.message : err}`),
    );
    const retry = el("button", "", "Retry");
    retry.addEventListener("click", () => void bootstrap(root, api));
    panel.appendChild(retry);
    root.appendChild(panel);
    return;
  }

  const store = new AppStore();
  store.setAtlas(atlas);
  const factory = new LoaderFactory(api);
  const imageMap = new MapView("image", factory);
  const textMap = new MapView("text", factory);
  imageMap.populate(
    atlas.textures.map((x) => ({
      id: x.texture_id,
      coord: x.coord,
      thumbnailPath: x.thumbnail_path,
    })),
  );
  textMap.populate(
    atlas.terms.map((t) => ({ id: t.term_id, coord: t.coord, labelText: t.surface })),
  );
  imageMap.setDynamicPoints(atlas.dynamic_points);
  textMap.setDynamicPoints(atlas.dynamic_points);

  // -- layout ----------------------------------------------------------
  const maps = el("div", "maps");
  const left = el("div", "map-panel");
  const right = el("div", "map-panel");
  maps.append(left, right);
  const side = el("div", "side-panel");
  root.append(maps, side);

  const info = el("div", "info-box");
  const preview = el("div", "preview-panel");
  const galleryBox = el("div", "gallery-box");
  const objectsBox = el("div", "objects-box");
  const flowBox = el("div", "flow-box");
  side.append(info, preview, galleryBox, objectsBox, flowBox);

  const requester = new HighlightRequester(api);
  const gallery = new GalleryController(api, store);
  const flow = new InterpolationFlow(api, {
    onUpdate: (status) => {
      flowStatus.textContent = `job ${status.job_id}: ${status.status}`;
    },
    onError: (message) => {
      flowStatus.textContent = `interpolation failed: ${message}`;
    },
    onDone: (paths) => {
      flowStatus.textContent = `done: ${paths.length} frames`;
      scrubber.max = String(paths.length - 1);
      scrubber.disabled = false;
      replotButton.disabled = false;
      updateFrame();
    },
  });

  const selection = new SelectionController(requester, store, imageMap, textMap, {
    showDynamicInfo: (surface, description) => {
      info.replaceChildren(
        el("h3", "", surface),
        el("p", "", description),
        el("p", "muted", "replotted point (no authored links)"),
      );
    },
    onHighlightError: (message) => {
      info.replaceChildren(el("p", "error", `highlight failed: ${message}`));
    },
  });

  const renderPreview = () => {
    preview.replaceChildren(el("h4", "", "variations"));
    const current = store.highlight;
    if (!current) return;
    for (const entry of current.preview) {
      const card = el("div", "preview-card");
      const img = el("img") as HTMLImageElement;
      // thumbnail first, full resolution on demand
      img.src = api.fileUrl(entry.thumbnail_path);
      img.addEventListener("load", () => {
        if (img.src.includes(entry.thumbnail_path)) img.src = api.fileUrl(entry.image_path);
      }, { once: true });
      img.title = entry.texture_id;
      img.addEventListener("click", () => void selection.selectTexture(entry.texture_id));
      const addButton = el("button", "", "+ gallery");
      addButton.addEventListener("click", () => void gallery.add(entry.texture_id));
      card.append(img, addButton);
      preview.appendChild(card);
    }
  };

  let pickA: string | null = null;
  let pickB: string | null = null;
  const renderGallery = () => {
    galleryBox.replaceChildren(el("h4", "", "gallery"));
    for (const item of store.gallery) {
      const chip = el("div", "gallery-chip");
      chip.dataset.ref = item.ref;
      const img = el("img") as HTMLImageElement;
      const texture = store.atlas?.textures.find((x) => x.texture_id === item.ref);
      if (texture) img.src = api.fileUrl(texture.thumbnail_path);
      makeDraggable(chip, item.ref);
      chip.appendChild(img);
      const pick = el("button", "", "pick");
      pick.addEventListener("click", () => {
        if (pickA === null || (pickA !== null && pickB !== null)) {
          pickA = item.ref;
          pickB = null;
        } else {
          pickB = item.ref;
        }
        pickedLabel.textContent = `A: ${pickA ?? "-"}  B: ${pickB ?? "-"}`;
        startButton.disabled = !canInterpolate(pickA, pickB);
      });
      const remove = el("button", "", "x");
      remove.addEventListener("click", () => void gallery.remove(item.item_id));
      chip.append(pick, remove);
      galleryBox.appendChild(chip);
    }
  };

  const applyStates = new Map<string, HTMLElement>();
  const renderObjects = async () => {
    const { objects } = await api.fetchObjects();
    objectsBox.replaceChildren(el("h4", "", "apply to object (drop a gallery item)"));
    for (const target of objects) {
      const zone = el("div", "object-zone");
      const base = el("img") as HTMLImageElement;
      base.src = api.fileUrl(target.base_image_path);
      base.title = target.object_id;
      const status = el("div", "apply-status");
      zone.append(el("span", "", target.object_id), base, status);
      applyStates.set(target.object_id, status);
      bindDropTarget(zone, target.object_id, api, (state: ApplyState) => {
        const slot = applyStates.get(state.objectId);
        if (!slot) return;
        if (state.phase === "loading") {
          slot.replaceChildren(el("p", "", `applying ${state.ref}...`));
        } else if (state.phase === "done") {
          const composite = el("img") as HTMLImageElement;
          composite.src = api.fileUrl(state.compositePath);
          slot.replaceChildren(composite);
        } else {
          slot.replaceChildren(el("p", "error", state.message));
        }
      });
      objectsBox.appendChild(zone);
    }
  };

  // -- interpolation controls ------------------------------------------
  const pickedLabel = el("p", "", "A: -  B: -");
  const startButton = el("button", "", "generate transition video") as HTMLButtonElement;
  startButton.disabled = true;
  const flowStatus = el("p", "muted", "pick two gallery items");
  const scrubber = el("input") as HTMLInputElement;
  scrubber.type = "range";
  scrubber.min = "0";
  scrubber.value = "0";
  scrubber.disabled = true;
  const frameImg = el("img", "frame-view") as HTMLImageElement;
  const replotButton = el("button", "", "replot this frame") as HTMLButtonElement;
  replotButton.disabled = true;
  flowBox.append(
    el("h4", "", "interpolate"),
    pickedLabel,
    startButton,
    flowStatus,
    scrubber,
    frameImg,
    replotButton,
  );

  const updateFrame = () => {
    const path = flow.framePaths[Number(scrubber.value)];
    if (path) frameImg.src = api.fileUrl(path);
  };
  scrubber.addEventListener("input", updateFrame);
  startButton.addEventListener("click", () => {
    if (pickA && pickB) {
      scrubber.disabled = true;
      replotButton.disabled = true;
      void flow.start(pickA, pickB).catch((err) => {
        flowStatus.textContent = `could not start: ${err.message}`;
      });
    }
  });
  replotButton.addEventListener("click", () => {
    void flow
      .replot(Number(scrubber.value))
      .then((record) => {
        store.addDynamicPoint(record);
        flowStatus.textContent = `replotted as ${record.replot_id} (${record.surface})`;
      })
      .catch((err) => {
        flowStatus.textContent = `replot failed: ${err.message}`;
      });
  });

  // Orange points appear in both maps the moment the store gains a record.
  store.subscribe(() => {
    const dynamic = store.atlas?.dynamic_points ?? [];
    imageMap.setDynamicPoints(dynamic);
    textMap.setDynamicPoints(dynamic);
    renderGallery();
    renderPreview();
  });

  // Selecting a texture upgrades its sprite from thumbnail to full image.
  store.subscribe(() => {
    const selected = store.selection;
    if (selected?.kind !== "texture") return;
    const texture = atlas.textures.find((x) => x.texture_id === selected.id);
    const sprite = imageMap.itemSprites.get(selected.id);
    if (texture && sprite) {
      const full = factory.load(texture.image_path);
      if (full) sprite.material.map = full;
    }
  });

  const onPick =
    (view: MapView, kindOf: (id: string) => "term" | "texture") =>
    (hit: { id: string; dynamic: boolean } | null) => {
      if (!hit) return;
      if (hit.dynamic) selection.selectDynamic(hit.id);
      else if (kindOf(hit.id) === "term") void selection.selectTerm(hit.id);
      else void selection.selectTexture(hit.id);
    };
  mountMap(left, imageMap, onPick(imageMap, () => "texture"));
  mountMap(right, textMap, onPick(textMap, () => "term"));

  store.subscribe(() => {
    const selected = store.selection;
    if (selected && selected.kind === "term") {
      const term = atlas.terms.find((t) => t.term_id === selected.id);
      if (term) {
        info.replaceChildren(el("h3", "", term.surface), el("p", "", term.english_description));
      }
    } else if (selected && selected.kind === "texture") {
      info.replaceChildren(el("h3", "", selected.id));
    }
  });

  await gallery.refresh();
  await renderObjects();
  renderGallery();
  renderPreview();
}

const rootElement = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootElement) {
  void bootstrap(rootElement, new ApiClient(""));
}
