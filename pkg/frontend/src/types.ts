/** Wire types, one-to-one with the service JSON. The UI never derives
 *  weights, points or positions from these — it renders them as given. */

export interface KeywordData {
  display: string;
  matcher: string[];
}

export interface TopicData {
  name: string;
  keywords: KeywordData[];
}

export interface CodebookData {
  discussion_id: string;
  version: number;
  topics: TopicData[];
}

export interface EdgeData {
  source: number;
  target: number;
  weight: number;
}

export interface UnitData {
  student_id: string;
  raw_counts: number[];
  weights: number[];
  point: number[];
  centroid: number[];
}

export interface ModelPayload {
  discussion_id: string;
  codebook_version: number;
  scope: string;
  topic_names: string[];
  code_positions: number[][];
  edges: EdgeData[];
  units: UnitData[];
  variance_explained: number[];
  fit: (number | null)[] | null;
  flags: string[];
  codebook: CodebookData;
  post_count: number;
}

export interface SpanData {
  keyword: string;
  start: number;
  end: number;
}

export interface PostPayload {
  post_id: string;
  created_at: string;
  is_initial: boolean;
  text: string;
  codes: boolean[];
  matches: SpanData[][];
}

export interface StudentPayload {
  student_id: string;
  scope: string;
  codebook_version: number;
  topic_names: string[];
  code_positions: number[][];
  unit: Omit<UnitData, "student_id">;
  posts: PostPayload[];
  links: { discussion_url: string; speedgrader_url: string | null } | null;
}

export interface DiscussionItem {
  discussion_id: string;
  title: string;
  assignment_id: string | null;
  post_count: number;
  ingested: boolean;
  has_codebook: boolean;
}

export interface DiscussionList {
  course_id: string;
  stale: boolean;
  discussions: DiscussionItem[];
}

export type EditKind = "rename_topic" | "add_keyword" | "remove_keyword" | "replace_keyword";

export interface PendingEdit {
  kind: EditKind;
  topic_index: number;
  name?: string;
  phrase?: string;
  old_phrase?: string;
  new_phrase?: string;
}

export type Scope = "all" | "initial_only";

/** Raised by renderers when a payload does not have the promised shape;
 *  the app shows an error banner instead of a partial view. */
export class PayloadShapeError extends Error {}
