/** One navigable map: sprites (textures) or labeled points (terms) on the
 * fixed z plane, plus orange dynamic points and highlight emphasis.
 *
 * Sprites are THREE.Sprite, so they always face the camera. Texture loading
 * is behind SpriteTextureFactory so the scene graph is fully testable
 * headless; the real factory (main.ts) loads thumbnails first and upgrades
 * to full resolution on selection.
 */

import * as THREE from "three";

import { CameraRig } from "./camera";
import type { MapKind, ReplotEntry, VIEW_CONFIG as ViewConfigType } from "./types";
import { VIEW_CONFIG } from "./types";

export interface SpriteTextureFactory {
  /** Map a texture image path (thumbnail or full) to a three.js texture. */
  load(relPath: string): THREE.Texture | null;
  /** Rasterize a short text label, or null to skip labels (tests). */
  label(text: string): THREE.Texture | null;
}

export const NULL_FACTORY: SpriteTextureFactory = {
  load: () => null,
  label: () => null,
};

export interface MapItem {
  id: string;
  coord: [number, number];
  thumbnailPath?: string;
  labelText?: string;
}

const DYNAMIC_COLOR = new THREE.Color("orange");
const BASE_COLOR = new THREE.Color("#ffffff");
const TERM_COLOR = new THREE.Color("#9db4ff");
const HIGHLIGHT_COLOR = new THREE.Color("#ffd24a");
const HIGHLIGHT_SCALE = 1.6;

export class MapView {
  readonly scene = new THREE.Scene();
  readonly rig: CameraRig;
  readonly itemSprites = new Map<string, THREE.Sprite>();
  readonly dynamicSprites = new Map<string, THREE.Sprite>();
  private readonly baseSize: number;
  private highlighted = new Set<string>();

  constructor(
    readonly kind: MapKind,
    private readonly factory: SpriteTextureFactory = NULL_FACTORY,
    private readonly config: typeof ViewConfigType = VIEW_CONFIG,
    aspect = 1,
  ) {
    this.rig = new CameraRig(aspect);
    this.baseSize = config.baseSpriteScale * config.thumbnailSize;
  }

  worldPosition(coord: [number, number]): THREE.Vector3 {
    return new THREE.Vector3(
      coord[0] * this.config.coordScale,
      coord[1] * this.config.coordScale,
      this.config.fixedZ,
    );
  }

  private makeSprite(item: MapItem, color: THREE.Color, size: number): THREE.Sprite {
    const texture =
      (item.thumbnailPath ? this.factory.load(item.thumbnailPath) : null) ??
      (item.labelText ? this.factory.label(item.labelText) : null);
    const material = new THREE.SpriteMaterial({
      map: texture ?? undefined,
      color: color.clone(),
    });
    const sprite = new THREE.Sprite(material);
    sprite.position.copy(this.worldPosition(item.coord));
    sprite.scale.set(size, size, 1);
    sprite.userData = { id: item.id, baseSize: size };
    return sprite;
  }

  /** (Re)build the static layer from the atlas payload. */
  populate(items: MapItem[]): void {
    for (const sprite of this.itemSprites.values()) this.scene.remove(sprite);
    this.itemSprites.clear();
    const color = this.kind === "image" ? BASE_COLOR : TERM_COLOR;
    const size = this.kind === "image" ? this.baseSize : this.baseSize * 0.6;
    for (const item of items) {
      const sprite = this.makeSprite(item, color, size);
      this.itemSprites.set(item.id, sprite);
      this.scene.add(sprite);
    }
  }

  /** Orange markers for replotted points; append-only between rebuilds. */
  setDynamicPoints(records: ReplotEntry[]): void {
    for (const record of records) {
      if (this.dynamicSprites.has(record.replot_id)) continue;
      const coord = this.kind === "image" ? record.image_coord : record.text_coord;
      const sprite = this.makeSprite(
        { id: record.replot_id, coord, labelText: record.surface },
        DYNAMIC_COLOR,
        this.baseSize * 0.8,
      );
      this.dynamicSprites.set(record.replot_id, sprite);
      this.scene.add(sprite);
    }
  }

  /** Emphasize a set of item ids (authored counterparts); [] clears. */
  setHighlight(ids: string[]): void {
    for (const id of this.highlighted) {
      const sprite = this.itemSprites.get(id);
      if (!sprite) continue;
      const base = sprite.userData.baseSize as number;
      sprite.scale.set(base, base, 1);
      sprite.material.color.copy(this.kind === "image" ? BASE_COLOR : TERM_COLOR);
    }
    this.highlighted = new Set(ids);
    for (const id of this.highlighted) {
      const sprite = this.itemSprites.get(id);
      if (!sprite) continue;
      const base = sprite.userData.baseSize as number;
      sprite.scale.set(base * HIGHLIGHT_SCALE, base * HIGHLIGHT_SCALE, 1);
      sprite.material.color.copy(HIGHLIGHT_COLOR);
    }
  }

  get highlightCount(): number {
    return this.highlighted.size;
  }

  /** Nearest item to a pointer position (NDC), within a screen threshold.
   * Returns dynamic points too, flagged by kind. */
  pick(ndcX: number, ndcY: number, thresholdNdc = 0.04):
    | { id: string; dynamic: boolean }
    | null {
    this.rig.camera.updateMatrixWorld(true);
    let best: { id: string; dynamic: boolean } | null = null;
    let bestDist = thresholdNdc;
    const probe = (sprites: Map<string, THREE.Sprite>, dynamic: boolean) => {
      for (const [id, sprite] of sprites) {
        const projected = sprite.position.clone().project(this.rig.camera);
        if (projected.z > 1) continue; // behind the camera
        const dist = Math.hypot(projected.x - ndcX, projected.y - ndcY);
        if (dist < bestDist) {
          bestDist = dist;
          best = { id, dynamic };
        }
      }
    };
    probe(this.itemSprites, false);
    probe(this.dynamicSprites, true);
    return best;
  }

  /** Animate the camera toward an item (selection auto-focus). */
  focusOnItem(id: string): void {
    const sprite = this.itemSprites.get(id) ?? this.dynamicSprites.get(id);
    if (sprite) this.rig.focusOn(sprite.position);
  }
}
