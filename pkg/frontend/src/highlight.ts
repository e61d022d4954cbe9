/** Keyword highlighting for post text.
 *
 * Server spans may overlap (two spellings of a keyword hit the same
 * tokens, or two topics share a word), so the text is cut at every span
 * boundary and each segment is wrapped once with every covering topic's
 * class layered on it. Each server span keeps its identity through
 * data-span ids so the rendered highlights can be audited against the
 * payload.
 */

import { SpanData } from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

interface TaggedSpan extends SpanData {
  topic: number;
  id: string;
}

export function flattenSpans(matchesByTopic: SpanData[][]): TaggedSpan[] {
  const out: TaggedSpan[] = [];
  matchesByTopic.forEach((spans, topic) => {
    spans.forEach((span, i) => {
      out.push({ ...span, topic, id: `t${topic}s${i}` });
    });
  });
  return out;
}

/** Render post text to HTML with layered, color-keyed highlights. */
export function renderHighlighted(text: string, matchesByTopic: SpanData[][]): string {
  const spans = flattenSpans(matchesByTopic);
  for (const s of spans) {
    if (!(0 <= s.start && s.start < s.end && s.end <= text.length)) {
      throw new Error(`span ${s.id} [${s.start},${s.end}) outside text of length ${text.length}`);
    }
  }
  if (spans.length === 0) {
    return escapeHtml(text);
  }

  const cuts = new Set<number>([0, text.length]);
  for (const s of spans) {
    cuts.add(s.start);
    cuts.add(s.end);
  }
  const bounds = [...cuts].sort((a, b) => a - b);

  const parts: string[] = [];
  for (let i = 0; i + 1 < bounds.length; i++) {
    const lo = bounds[i]!;
    const hi = bounds[i + 1]!;
    const covering = spans.filter((s) => s.start <= lo && hi <= s.end);
    const segment = escapeHtml(text.slice(lo, hi));
    if (covering.length === 0) {
      parts.push(segment);
      continue;
    }
    const topics = [...new Set(covering.map((s) => s.topic))].sort();
    const classes = ["hl", ...topics.map((t) => `hl-topic-${t}`)].join(" ");
    const ids = covering.map((s) => s.id).join(" ");
    const titles = [...new Set(covering.map((s) => s.keyword))].join(", ");
    parts.push(`<mark class="${classes}" data-spans="${ids}" title="${escapeHtml(titles)}">${segment}</mark>`);
  }
  return parts.join("");
}

/** The distinct server spans that made it into rendered marks. */
export function renderedSpanIds(html: string): Set<string> {
  const ids = new Set<string>();
  for (const match of html.matchAll(/data-spans="([^"]*)"/g)) {
    for (const id of match[1]!.split(" ")) {
      if (id) ids.add(id);
    }
  }
  return ids;
}
