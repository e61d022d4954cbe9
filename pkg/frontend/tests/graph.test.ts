import assert from "node:assert/strict";
import { test } from "node:test";

import { renderNetworkSvg, viewport, NetworkEdge } from "../src/graph.js";
import { PayloadShapeError } from "../src/types.js";

const POSITIONS = [
  [0.5, 0.0],
  [-0.5, 0.25],
  [0.0, -0.75],
  [0.25, 0.25],
  [-0.25, -0.25],
];
const NAMES = ["alpha", "beta", "gamma", "delta", "epsilon"];

function edges(weights: Partial<Record<number, number>>): NetworkEdge[] {
  const pairs: [number, number][] = [
    [0, 1], [0, 2], [0, 3], [0, 4], [1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4],
  ];
  return pairs.map(([source, target], i) => ({ source, target, weight: weights[i] ?? 0 }));
}

const UNITS = [
  { id: "s1", point: [0.1, 0.2] },
  { id: "s2", point: [-0.1, -0.2] },
];

test("all five nodes render even with no edges", () => {
  const svg = renderNetworkSvg(POSITIONS, edges({}), NAMES, []);
  assert.equal((svg.match(/class="code-node/g) ?? []).length, 5);
  assert.ok(!svg.includes("<line"));
  assert.ok(svg.includes("no connections in scope"));
});

test("zero-weight edges are omitted, nonzero drawn", () => {
  const svg = renderNetworkSvg(POSITIONS, edges({ 0: 0.5, 4: 0.25 }), NAMES, UNITS);
  assert.equal((svg.match(/<line/g) ?? []).length, 2);
});

test("stroke width is linear and max-normalized with a visible minimum", () => {
  const svg = renderNetworkSvg(POSITIONS, edges({ 0: 0.8, 4: 0.4, 7: 0.0001 }), NAMES, [], {
    minStroke: 2,
    maxStroke: 10,
  });
  const widths = [...svg.matchAll(/stroke-width="([\d.]+)"/g)].map((m) => Number(m[1]));
  assert.equal(widths.length, 3);
  // max weight hits maxStroke exactly
  assert.ok(Math.abs(widths[0]! - 10) < 1e-9);
  // half the max weight sits exactly halfway up the linear scale
  assert.ok(Math.abs(widths[1]! - 6) < 1e-9);
  // tiny but nonzero stays at least minStroke
  assert.ok(widths[2]! >= 2);
});

test("node coordinates are the affine image of the server positions", () => {
  const svg = renderNetworkSvg(POSITIONS, edges({ 0: 1 }), NAMES, UNITS);
  const view = viewport(POSITIONS, UNITS.map((u) => u.point), 480, 56);
  for (let i = 0; i < 5; i++) {
    const [x, y] = POSITIONS[i]!;
    assert.ok(svg.includes(`data-topic="${i}" cx="${view.toX(x!)}" cy="${view.toY(y!)}"`));
  }
});

test("group and student views agree on node markup bit for bit", () => {
  // the student view draws one unit but reuses the group's envelope,
  // exactly as the app wires it
  const envelope = [...POSITIONS, ...UNITS.map((u) => u.point)];
  const group = renderNetworkSvg(POSITIONS, edges({ 0: 0.5, 1: 0.2 }), NAMES, UNITS);
  const studentView = renderNetworkSvg(POSITIONS, edges({ 0: 0.9 }), NAMES, [UNITS[0]!], { envelope });
  const nodes = (svg: string) => svg.match(/<circle class="code-node[^/]*\/>/g) ?? [];
  assert.equal(nodes(group).length, 5);
  assert.deepEqual(nodes(group), nodes(studentView));
});

test("legend states the maximum weight", () => {
  const svg = renderNetworkSvg(POSITIONS, edges({ 3: 0.1234 }), NAMES, []);
  assert.ok(svg.includes("thickest edge = 0.1234"));
});

test("rendering is deterministic", () => {
  const make = () => renderNetworkSvg(POSITIONS, edges({ 0: 0.5, 9: 0.1 }), NAMES, UNITS);
  assert.equal(make(), make());
});

test("malformed payloads are rejected whole", () => {
  assert.throws(() => renderNetworkSvg(POSITIONS.slice(0, 4), edges({}), NAMES, []), PayloadShapeError);
  assert.throws(() => renderNetworkSvg(POSITIONS, edges({}).slice(0, 9), NAMES, []), PayloadShapeError);
  const bad = POSITIONS.map((p) => [...p]);
  bad[2] = [Number.NaN, 0];
  assert.throws(() => renderNetworkSvg(bad, edges({}), NAMES, []), PayloadShapeError);
});
