/** SVG rendering of a code network.
 *
 * Everything drawn comes verbatim from the payload: node coordinates are
 * the server's code positions, small dots are the server's unit points.
 * The only arithmetic here is the affine map from model space to pixels,
 * which is shared by the group and student views so the node layout is
 * identical in both.
 */

import { PayloadShapeError } from "./types.js";

export interface NetworkEdge {
  source: number;
  target: number;
  weight: number;
}

export interface NetworkOptions {
  size?: number;
  padding?: number;
  minStroke?: number;
  maxStroke?: number;
  showLegend?: boolean;
  /** Coordinates that set the scale. The student view passes the group
   *  view's envelope so node pixels match it bit for bit. */
  envelope?: number[][];
}

const DEFAULTS = {
  size: 480,
  padding: 56,
  minStroke: 1.5,
  maxStroke: 9,
  showLegend: true,
};

export interface Viewport {
  toX(x: number): number;
  toY(y: number): number;
}

/** Fixed affine viewport: model coordinates scaled into the square, y up. */
export function viewport(positions: number[][], points: number[][], size: number, padding: number): Viewport {
  let span = 0;
  for (const [x, y] of [...positions, ...points] as [number, number][]) {
    span = Math.max(span, Math.abs(x), Math.abs(y));
  }
  const scale = span > 0 ? (size / 2 - padding) / span : 1;
  return {
    toX: (x) => size / 2 + x * scale,
    toY: (y) => size / 2 - y * scale,
  };
}

function checkShape(positions: number[][], edges: NetworkEdge[], topicNames: string[]): void {
  if (positions.length !== 5 || topicNames.length !== 5) {
    throw new PayloadShapeError(`expected 5 code positions and names, got ${positions.length}/${topicNames.length}`);
  }
  for (const p of positions) {
    if (p.length !== 2 || p.some((v) => typeof v !== "number" || !isFinite(v))) {
      throw new PayloadShapeError("code positions must be finite [x, y] pairs");
    }
  }
  if (edges.length !== 10) {
    throw new PayloadShapeError(`expected 10 edges, got ${edges.length}`);
  }
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

/** Render a network as an SVG string.
 *
 * Edge stroke width is linear in weight, normalized by the largest weight
 * in this payload; zero-weight edges are not drawn but every node is.
 */
export function renderNetworkSvg(
  positions: number[][],
  edges: NetworkEdge[],
  topicNames: string[],
  unitPoints: { id: string; point: number[] }[],
  options: NetworkOptions = {},
): string {
  checkShape(positions, edges, topicNames);
  const opt = { ...DEFAULTS, ...options };
  const envelope = options.envelope ?? [...positions, ...unitPoints.map((u) => u.point)];
  const view = viewport(envelope, [], opt.size, opt.padding);

  const maxWeight = Math.max(0, ...edges.map((e) => e.weight));
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${opt.size} ${opt.size}" class="network">`,
  ];

  for (const edge of edges) {
    if (edge.weight <= 0) continue;
    const a = positions[edge.source];
    const b = positions[edge.target];
    if (a === undefined || b === undefined) {
      throw new PayloadShapeError(`edge ${edge.source}-${edge.target} points outside the node set`);
    }
    const width = opt.minStroke + (opt.maxStroke - opt.minStroke) * (edge.weight / maxWeight);
    parts.push(
      `<line class="edge" x1="${view.toX(a[0]!)}" y1="${view.toY(a[1]!)}" ` +
        `x2="${view.toX(b[0]!)}" y2="${view.toY(b[1]!)}" stroke-width="${width.toFixed(3)}">` +
        `<title>${esc(topicNames[edge.source]!)} — ${esc(topicNames[edge.target]!)}: ${edge.weight.toFixed(4)}</title></line>`,
    );
  }

  for (const unit of unitPoints) {
    const [x, y] = unit.point;
    parts.push(
      `<circle class="unit" data-student="${esc(unit.id)}" cx="${view.toX(x!)}" cy="${view.toY(y!)}" r="4">` +
        `<title>${esc(unit.id)}</title></circle>`,
    );
  }

  positions.forEach((pos, i) => {
    const cx = view.toX(pos[0]!);
    const cy = view.toY(pos[1]!);
    parts.push(`<circle class="code-node topic-${i}" data-topic="${i}" cx="${cx}" cy="${cy}" r="7"/>`);
    parts.push(`<text class="code-label" x="${cx + 10}" y="${cy - 10}">${esc(topicNames[i]!)}</text>`);
  });

  if (opt.showLegend) {
    const legend = maxWeight > 0 ? `thickest edge = ${maxWeight.toFixed(4)}` : "no connections in scope";
    parts.push(`<text class="legend" x="12" y="${opt.size - 12}">${legend}</text>`);
  }
  parts.push("</svg>");
  return parts.join("");
}
