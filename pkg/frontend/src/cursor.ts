// Local 6-DOF hand cursor driven by pointer input.
// Pointer drag moves the cursor in the view plane, the wheel adjusts depth,
// sliders set orientation (yaw/pitch/roll) and aperture.

import { quatFromAxisAngle, quatMultiply } from "./fk";
import type { Quat, Vec3 } from "./protocol";

export class HandCursor {
  pos: Vec3 = [0.0, -0.6, 0.35];
  yaw = 0;
  pitch = 0;
  roll = 0;
  aperture = 1.0;

  /** meters of cursor motion per canvas pixel */
  dragGain = 0.002;
  wheelGain = 0.0005;

  dragBy(dxPx: number, dyPx: number): void {
    // canvas x -> world x, canvas y (down) -> world -y
    this.pos = [
      this.pos[0] + dxPx * this.dragGain,
      this.pos[1] - dyPx * this.dragGain,
      this.pos[2],
    ];
  }

  wheelBy(deltaY: number): void {
    this.pos = [this.pos[0], this.pos[1], this.pos[2] - deltaY * this.wheelGain];
  }

  orientation(): Quat {
    const qz = quatFromAxisAngle([0, 0, 1], this.yaw);
    const qy = quatFromAxisAngle([0, 1, 0], this.pitch);
    const qx = quatFromAxisAngle([1, 0, 0], this.roll);
    return quatMultiply(qz, quatMultiply(qy, qx));
  }
}
