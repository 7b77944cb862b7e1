// Minimal quaternion math and forward kinematics, enough to draw the arm.
// Conventions match the gateway: quaternions [w, x, y, z], child after parent.

import type { ChainSpec, Quat, Vec3 } from "./protocol";

export function quatMultiply(a: Quat, b: Quat): Quat {
  const [aw, ax, ay, az] = a;
  const [bw, bx, by, bz] = b;
  return [
    aw * bw - ax * bx - ay * by - az * bz,
    aw * bx + ax * bw + ay * bz - az * by,
    aw * by - ax * bz + ay * bw + az * bx,
    aw * bz + ax * by - ay * bx + az * bw,
  ];
}

export function quatRotate(q: Quat, v: Vec3): Vec3 {
  const [, x, y, z] = q;
  const w = q[0];
  const ux = y * v[2] - z * v[1];
  const uy = z * v[0] - x * v[2];
  const uz = x * v[1] - y * v[0];
  const vx = y * uz - z * uy;
  const vy = z * ux - x * uz;
  const vz = x * uy - y * ux;
  return [
    v[0] + 2 * (w * ux + vx),
    v[1] + 2 * (w * uy + vy),
    v[2] + 2 * (w * uz + vz),
  ];
}

export function quatFromAxisAngle(axis: Vec3, angle: number): Quat {
  const half = angle / 2;
  const s = Math.sin(half);
  return [Math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s];
}

/** World positions of the base, every joint origin, and the tool point. */
export function jointPositions(chain: ChainSpec, q: number[]): Vec3[] {
  let pos: Vec3 = [...chain.base.t] as Vec3;
  let rot: Quat = [...chain.base.q] as Quat;
  const points: Vec3[] = [pos];
  chain.joints.forEach((joint, i) => {
    const step = quatRotate(rot, joint.origin_t);
    pos = [pos[0] + step[0], pos[1] + step[1], pos[2] + step[2]];
    rot = quatMultiply(rot, joint.origin_q);
    rot = quatMultiply(rot, quatFromAxisAngle(joint.axis, q[i] ?? 0));
    points.push(pos);
  });
  const tool = quatRotate(rot, chain.tool.t);
  points.push([pos[0] + tool[0], pos[1] + tool[1], pos[2] + tool[2]]);
  return points;
}
