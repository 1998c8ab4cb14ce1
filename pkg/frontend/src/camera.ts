/** Orbit/zoom/pan rig for one map view.
 *
 * Left-drag orbits around the current target, wheel dollies (forward =
 * closer), right-drag pans the target in the camera plane, and focusOn()
 * animates the target toward a selected item. The math lives here so it is
 * testable without a renderer; binding to DOM events is a thin layer.
 */

import * as THREE from "three";

const ROTATE_SPEED = 0.005;
const PAN_SPEED = 0.0016;
const ZOOM_SPEED = 0.0012;
const MIN_RADIUS = 2;
const MAX_RADIUS = 400;
const MIN_PHI = 0.05;
const MAX_PHI = Math.PI - 0.05;
const FOCUS_MS = 450;

export class CameraRig {
  readonly camera: THREE.PerspectiveCamera;
  readonly target = new THREE.Vector3(0, 0, 0);
  /** Spherical pose: radius plus azimuthal/polar angles around the target. */
  radius = 120;
  theta = 0;
  phi = Math.PI / 2; // looking straight at the z=0 plane

  private focusFrom: THREE.Vector3 | null = null;
  private focusTo: THREE.Vector3 | null = null;
  private focusElapsed = 0;

  constructor(aspect = 1) {
    this.camera = new THREE.PerspectiveCamera(50, aspect, 0.1, 2000);
    this.applyPose();
  }

  applyPose(): void {
    const sinPhi = Math.sin(this.phi);
    this.camera.position.set(
      this.target.x + this.radius * sinPhi * Math.sin(this.theta),
      this.target.y + this.radius * Math.cos(this.phi),
      this.target.z + this.radius * sinPhi * Math.cos(this.theta),
    );
    this.camera.lookAt(this.target);
    this.camera.updateMatrixWorld(true);
  }

  orbit(dxPx: number, dyPx: number): void {
    this.theta -= dxPx * ROTATE_SPEED;
    this.phi = THREE.MathUtils.clamp(this.phi - dyPx * ROTATE_SPEED, MIN_PHI, MAX_PHI);
    this.applyPose();
  }

  /** Wheel forward (negative deltaY) moves the camera closer. */
  zoom(deltaY: number): void {
    this.radius = THREE.MathUtils.clamp(
      this.radius * Math.exp(deltaY * ZOOM_SPEED),
      MIN_RADIUS,
      MAX_RADIUS,
    );
    this.applyPose();
  }

  /** Translate the target in the camera's screen plane; orientation fixed. */
  pan(dxPx: number, dyPx: number): void {
    const scale = this.radius * PAN_SPEED;
    const right = new THREE.Vector3().setFromMatrixColumn(this.camera.matrix, 0);
    const up = new THREE.Vector3().setFromMatrixColumn(this.camera.matrix, 1);
    this.target.addScaledVector(right, -dxPx * scale);
    this.target.addScaledVector(up, dyPx * scale);
    this.applyPose();
  }

  /** Start an eased animation of the target toward a point (auto-focus). */
  focusOn(point: THREE.Vector3): void {
    this.focusFrom = this.target.clone();
    this.focusTo = point.clone();
    this.focusElapsed = 0;
  }

  get focusing(): boolean {
    return this.focusTo !== null;
  }

  /** Advance the focus animation; call per frame with elapsed milliseconds. */
  update(dtMs: number): void {
    if (!this.focusTo || !this.focusFrom) return;
    this.focusElapsed += dtMs;
    const t = Math.min(this.focusElapsed / FOCUS_MS, 1);
    const eased = 1 - (1 - t) ** 3;
    this.target.copy(this.focusFrom).lerp(this.focusTo, eased);
    this.applyPose();
    if (t >= 1) {
      this.focusFrom = null;
      this.focusTo = null;
    }
  }

  /** Pointer/wheel gesture wiring: 0 = orbit drag, 2 = pan drag. */
  bind(element: HTMLElement): void {
    let dragButton: number | null = null;
    let lastX = 0;
    let lastY = 0;
    element.addEventListener("pointerdown", (event) => {
      dragButton = event.button;
      lastX = event.clientX;
      lastY = event.clientY;
      element.setPointerCapture?.(event.pointerId);
    });
    element.addEventListener("pointermove", (event) => {
      if (dragButton === null) return;
      const dx = event.clientX - lastX;
      const dy = event.clientY - lastY;
      lastX = event.clientX;
      lastY = event.clientY;
      if (dragButton === 2) this.pan(dx, dy);
      else if (dragButton === 0) this.orbit(dx, dy);
    });
    element.addEventListener("pointerup", () => {
      dragButton = null;
    });
    element.addEventListener("pointerleave", () => {
      dragButton = null;
    });
    element.addEventListener(
      "wheel",
      (event) => {
        event.preventDefault();
        this.zoom(event.deltaY);
      },
      { passive: false },
    );
    element.addEventListener("contextmenu", (event) => event.preventDefault());
  }
}
