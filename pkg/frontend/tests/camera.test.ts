import * as THREE from "three";
import { describe, expect, it } from "vitest";

import { CameraRig } from "../src/camera";

describe("CameraRig", () => {
  it("wheel forward zooms in, backward zooms out", () => {
    const rig = new CameraRig();
    const before = rig.camera.position.distanceTo(rig.target);
    rig.zoom(-240); // wheel forward
    const closer = rig.camera.position.distanceTo(rig.target);
    expect(closer).toBeLessThan(before);
    rig.zoom(480);
    expect(rig.camera.position.distanceTo(rig.target)).toBeGreaterThan(closer);
  });

  it("zoom clamps to sane bounds", () => {
    const rig = new CameraRig();
    rig.zoom(-1e7);
    expect(rig.radius).toBeGreaterThanOrEqual(2);
    rig.zoom(1e7);
    expect(rig.radius).toBeLessThanOrEqual(400);
  });

  it("right-drag pan translates the target without rotating", () => {
    const rig = new CameraRig();
    const thetaBefore = rig.theta;
    const phiBefore = rig.phi;
    const targetBefore = rig.target.clone();
    const viewBefore = rig.camera.getWorldDirection(new THREE.Vector3());
    rig.pan(60, -25);
    expect(rig.theta).toBe(thetaBefore);
    expect(rig.phi).toBe(phiBefore);
    expect(rig.target.distanceTo(targetBefore)).toBeGreaterThan(0);
    const viewAfter = rig.camera.getWorldDirection(new THREE.Vector3());
    expect(viewAfter.angleTo(viewBefore)).toBeLessThan(1e-9);
  });

  it("left-drag orbit rotates around a fixed target", () => {
    const rig = new CameraRig();
    const targetBefore = rig.target.clone();
    const positionBefore = rig.camera.position.clone();
    rig.orbit(80, 20);
    expect(rig.target.distanceTo(targetBefore)).toBe(0);
    expect(rig.camera.position.distanceTo(positionBefore)).toBeGreaterThan(0);
    expect(rig.camera.position.distanceTo(rig.target)).toBeCloseTo(rig.radius);
  });

  it("focusOn eases the target toward the point and settles exactly", () => {
    const rig = new CameraRig();
    const destination = new THREE.Vector3(12, -5, 0);
    rig.focusOn(destination);
    rig.update(100);
    const partway = rig.target.clone();
    expect(partway.distanceTo(destination)).toBeGreaterThan(0);
    expect(partway.length()).toBeGreaterThan(0); // moved off the origin
    rig.update(1000);
    expect(rig.target.distanceTo(destination)).toBeLessThan(1e-9);
    expect(rig.focusing).toBe(false);
  });

  it("binds pointer gestures: left orbit, right pan, wheel zoom", () => {
    const rig = new CameraRig();
    const element = document.createElement("div");
    rig.bind(element);

    // jsdom has no PointerEvent constructor; MouseEvent carries the same
    // button/clientX/clientY fields the handlers read.
    const down = (button: number, x: number, y: number) =>
      element.dispatchEvent(
        new MouseEvent("pointerdown", { button, clientX: x, clientY: y }),
      );
    const move = (x: number, y: number) =>
      element.dispatchEvent(new MouseEvent("pointermove", { clientX: x, clientY: y }));
    const up = () => element.dispatchEvent(new MouseEvent("pointerup", {}));

    const theta0 = rig.theta;
    down(0, 10, 10);
    move(60, 10);
    up();
    expect(rig.theta).not.toBe(theta0);

    const target0 = rig.target.clone();
    down(2, 0, 0);
    move(40, 0);
    up();
    expect(rig.target.distanceTo(target0)).toBeGreaterThan(0);

    const radius0 = rig.radius;
    element.dispatchEvent(new WheelEvent("wheel", { deltaY: -120, cancelable: true }));
    expect(rig.radius).toBeLessThan(radius0);
  });
});
