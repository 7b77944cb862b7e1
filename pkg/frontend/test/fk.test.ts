import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { jointPositions } from "../src/fk";
import type { ChainSpec } from "../src/protocol";

const DATA = join(__dirname, "..", "..", "src", "armpilot", "data");

function loadChain(name: string): ChainSpec {
  return JSON.parse(readFileSync(join(DATA, name), "utf-8"));
}

describe("forward kinematics for rendering", () => {
  it("matches the planar chain's analytic tool positions", () => {
    const chain = loadChain("planar_2link.json");
    let pts = jointPositions(chain, [0, 0]);
    let tcp = pts[pts.length - 1];
    expect(tcp[0]).toBeCloseTo(0.8865, 10);
    expect(tcp[1]).toBeCloseTo(0.0, 10);

    pts = jointPositions(chain, [Math.PI / 2, 0]);
    tcp = pts[pts.length - 1];
    expect(tcp[0]).toBeCloseTo(0.0, 10);
    expect(tcp[1]).toBeCloseTo(0.8865, 10);
  });

  it("returns base, one point per joint, and the tool point", () => {
    const chain = loadChain("default_chain_6dof.json");
    const pts = jointPositions(chain, [0, 0, 0, 0, 0, 0]);
    expect(pts).toHaveLength(chain.joints.length + 2);
    const tcp = pts[pts.length - 1];
    // the bundled chain homes at a bent ready pose with the gripper down
    expect(tcp[0]).toBeCloseTo(0.4279, 3);
    expect(tcp[2]).toBeCloseTo(0.3085, 3);
  });
});
