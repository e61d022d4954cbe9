/** Codebook editing: local validation, optimistic preview, save payload.
 *
 * Validation mirrors the service rules that can be checked without
 * stemming (the server remains authoritative and its violations render
 * inline). A duplicate keyword or an over-long phrase never leaves the
 * browser.
 */

import { CodebookData, PendingEdit } from "./types.js";

export const MAX_PHRASE_WORDS = 3;

/** Null when locally acceptable, else the message to show inline. */
export function validateEdit(codebook: CodebookData, pending: PendingEdit[], edit: PendingEdit): string | null {
  const preview = pending.reduce(applyLocal, codebook);
  const topic = preview.topics[edit.topic_index];
  if (!topic) {
    return `no topic ${edit.topic_index}`;
  }
  switch (edit.kind) {
    case "rename_topic": {
      const name = (edit.name ?? "").trim();
      if (!name) return "topic name must not be empty";
      if (preview.topics.some((t, i) => i !== edit.topic_index && t.name === name)) {
        return `another topic is already named "${name}"`;
      }
      return null;
    }
    case "add_keyword":
      return validatePhrase(topic, edit.phrase);
    case "remove_keyword": {
      const phrase = (edit.phrase ?? "").trim();
      if (!topic.keywords.some((k) => k.display === phrase)) {
        return `"${phrase}" is not in ${topic.name}`;
      }
      return null;
    }
    case "replace_keyword": {
      const old = (edit.old_phrase ?? "").trim();
      if (!topic.keywords.some((k) => k.display === old)) {
        return `"${old}" is not in ${topic.name}`;
      }
      return validatePhrase(topic, edit.new_phrase, old);
    }
  }
}

function validatePhrase(topic: CodebookData["topics"][number], phrase: string | undefined, ignore?: string): string | null {
  const cleaned = (phrase ?? "").trim();
  if (!cleaned) return "keyword must not be empty";
  if (cleaned.split(/\s+/).length > MAX_PHRASE_WORDS) {
    return `keywords are at most ${MAX_PHRASE_WORDS} words`;
  }
  if (topic.keywords.some((k) => k.display === cleaned && k.display !== ignore)) {
    return `"${cleaned}" is already in ${topic.name}`;
  }
  return null;
}

/** Apply one edit to a codebook copy, for optimistic preview only. */
export function applyLocal(codebook: CodebookData, edit: PendingEdit): CodebookData {
  const topics = codebook.topics.map((t) => ({ name: t.name, keywords: [...t.keywords] }));
  const topic = topics[edit.topic_index];
  if (!topic) return codebook;
  switch (edit.kind) {
    case "rename_topic":
      topic.name = (edit.name ?? "").trim();
      break;
    case "add_keyword":
      topic.keywords.push({ display: (edit.phrase ?? "").trim(), matcher: [] });
      break;
    case "remove_keyword":
      topic.keywords = topic.keywords.filter((k) => k.display !== (edit.phrase ?? "").trim());
      break;
    case "replace_keyword": {
      const at = topic.keywords.findIndex((k) => k.display === (edit.old_phrase ?? "").trim());
      if (at >= 0) topic.keywords[at] = { display: (edit.new_phrase ?? "").trim(), matcher: [] };
      break;
    }
  }
  return { ...codebook, topics };
}

export function previewCodebook(codebook: CodebookData, pending: PendingEdit[]): CodebookData {
  return pending.reduce(applyLocal, codebook);
}

export function buildPutBody(baseVersion: number, edits: PendingEdit[]): { base_version: number; edits: PendingEdit[] } {
  return { base_version: baseVersion, edits };
}

export interface TopicDiff {
  topic: string;
  added: string[];
  removed: string[];
  renamedTo?: string;
}

/** What changed between two codebook versions (for the 409 conflict view). */
export function diffCodebooks(mine: CodebookData, theirs: CodebookData): TopicDiff[] {
  const out: TopicDiff[] = [];
  for (let i = 0; i < Math.max(mine.topics.length, theirs.topics.length); i++) {
    const a = mine.topics[i];
    const b = theirs.topics[i];
    if (!a || !b) continue;
    const aSet = new Set(a.keywords.map((k) => k.display));
    const bSet = new Set(b.keywords.map((k) => k.display));
    const diff: TopicDiff = {
      topic: a.name,
      added: [...bSet].filter((k) => !aSet.has(k)).sort(),
      removed: [...aSet].filter((k) => !bSet.has(k)).sort(),
    };
    if (a.name !== b.name) diff.renamedTo = b.name;
    if (diff.added.length || diff.removed.length || diff.renamedTo) out.push(diff);
  }
  return out;
}
