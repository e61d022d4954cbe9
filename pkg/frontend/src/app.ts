/** DOM wiring: one state object, re-rendered after every change.
 *
 * The model and student views are fetched from the service and rendered
 * verbatim; saving a codebook batch refetches the model for the new
 * version and redraws in place, no page reload.
 */

import { ApiClient, ConflictError, EditRejected } from "./api.js";
import { buildPutBody, diffCodebooks, previewCodebook, validateEdit } from "./editor.js";
import { renderNetworkSvg } from "./graph.js";
import { renderHighlighted } from "./highlight.js";
import {
  ViewState,
  initialState,
  pinVersion,
  queueEdit,
  dropEdit,
  saveConflicted,
  saveSucceeded,
  selectDiscussion,
  selectStudent,
  toggleScope,
} from "./state.js";
import { CodebookData, ModelPayload, PayloadShapeError, StudentPayload } from "./types.js";

const api = new ApiClient("");

let state: ViewState = initialState(new URLSearchParams(location.search).get("course") ?? "1");
let codebook: CodebookData | null = null;
let model: ModelPayload | null = null;
let student: StudentPayload | null = null;
let latestOnConflict: CodebookData | null = null;
let editError: string | null = null;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function banner(message: string | null): void {
  const box = el("banner");
  box.textContent = message ?? "";
  box.classList.toggle("hidden", message === null);
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

async function loadDiscussions(): Promise<void> {
  const listing = await api.discussions(state.courseId);
  const items = listing.discussions
    .map(
      (d) =>
        `<li><a href="#" data-discussion="${esc(d.discussion_id)}">${esc(d.title || d.discussion_id)}</a>` +
        ` <span class="muted">${d.post_count} posts${d.has_codebook ? "" : " · no codebook yet"}</span></li>`,
    )
    .join("");
  el("discussions").innerHTML =
    (listing.stale ? `<p class="stale">showing cached list; the LMS is unreachable</p>` : "") + `<ul>${items}</ul>`;
  for (const link of el("discussions").querySelectorAll("a[data-discussion]")) {
    link.addEventListener("click", (event) => {
      event.preventDefault();
      void openDiscussion((link as HTMLElement).dataset["discussion"]!);
    });
  }
}

async function openDiscussion(discussionId: string): Promise<void> {
  state = selectDiscussion(state, discussionId);
  banner(null);
  const loaded = await api.codebook(discussionId);
  codebook = loaded.codebook;
  state = pinVersion(state, loaded.version);
  await refreshModel();
}

async function refreshModel(): Promise<void> {
  if (!state.discussionId || state.pinnedVersion === null) return;
  model = await api.model(state.discussionId, state.scope, state.pinnedVersion);
  student = null;
  state = selectStudent(state, null);
  render();
}

async function openStudent(studentId: string): Promise<void> {
  if (!state.discussionId) return;
  student = await api.student(state.discussionId, studentId, state.scope, state.pinnedVersion ?? undefined);
  state = selectStudent(state, studentId);
  render();
}

function renderGroup(): void {
  if (!model) return;
  try {
    el("network").innerHTML = renderNetworkSvg(
      model.code_positions,
      model.edges,
      model.topic_names,
      model.units.map((u) => ({ id: u.student_id, point: u.point })),
    );
  } catch (err) {
    if (err instanceof PayloadShapeError) {
      el("network").innerHTML = "";
      banner(`cannot draw the network: ${err.message}`);
      return;
    }
    throw err;
  }
  const fit = model.fit ? model.fit.map((f) => (f === null ? "n/a" : f.toFixed(3))).join(", ") : "n/a";
  const variance = model.variance_explained.map((v) => (v * 100).toFixed(1) + "%").join(" / ");
  el("model-meta").innerHTML =
    `codebook v${model.codebook_version} · scope ${model.scope} · ` +
    `variance ${variance} · fit ${fit}` +
    (model.flags.length ? ` · <span class="muted">${esc(model.flags.join(", "))}</span>` : "");
  for (const dot of el("network").querySelectorAll("circle.unit")) {
    dot.addEventListener("click", () => void openStudent((dot as SVGElement).dataset["student"]!));
  }
  const exportLink = el("export-link") as HTMLAnchorElement;
  exportLink.href = api.exportUrl(state.discussionId!, state.pinnedVersion ?? undefined);
}

function renderEditor(): void {
  if (!codebook) return;
  const preview = previewCodebook(codebook, state.pendingEdits);
  const topics = preview.topics
    .map((topic, i) => {
      const keywords = topic.keywords
        .map(
          (k) =>
            `<li>${esc(k.display)} <button class="remove" data-topic="${i}" data-phrase="${esc(k.display)}">×</button></li>`,
        )
        .join("");
      return (
        `<section class="topic topic-${i}">` +
        `<input class="topic-name" data-topic="${i}" value="${esc(topic.name)}">` +
        `<ul>${keywords}</ul>` +
        `<input class="add-keyword" data-topic="${i}" placeholder="add keyword">` +
        `</section>`
      );
    })
    .join("");
  const pending = state.pendingEdits
    .map((e, i) => `<li>${esc(describeEdit(e))} <button class="drop" data-index="${i}">undo</button></li>`)
    .join("");
  el("codebook").innerHTML =
    topics +
    (state.pendingEdits.length
      ? `<div class="pending"><h3>unsaved edits</h3><ul>${pending}</ul><button id="save">save &amp; recompute</button></div>`
      : "") +
    (editError ? `<p class="edit-error">${esc(editError)}</p>` : "") +
    (state.conflict && latestOnConflict && codebook
      ? `<div class="conflict"><h3>someone saved first</h3><p>${esc(state.conflict)}</p>` +
        diffCodebooks(codebook, latestOnConflict)
          .map(
            (d) =>
              `<p><b>${esc(d.topic)}</b>${d.renamedTo ? ` → ${esc(d.renamedTo)}` : ""}` +
              `${d.added.length ? ` +[${esc(d.added.join(", "))}]` : ""}` +
              `${d.removed.length ? ` −[${esc(d.removed.join(", "))}]` : ""}</p>`,
          )
          .join("") +
        `<button id="take-latest">continue from latest</button></div>`
      : "");
  wireEditor();
}

function describeEdit(edit: { kind: string; topic_index: number; name?: string; phrase?: string; old_phrase?: string; new_phrase?: string }): string {
  switch (edit.kind) {
    case "rename_topic":
      return `rename topic ${edit.topic_index} to "${edit.name}"`;
    case "add_keyword":
      return `add "${edit.phrase}" to topic ${edit.topic_index}`;
    case "remove_keyword":
      return `remove "${edit.phrase}" from topic ${edit.topic_index}`;
    default:
      return `replace "${edit.old_phrase}" with "${edit.new_phrase}" in topic ${edit.topic_index}`;
  }
}

function tryQueue(edit: Parameters<typeof queueEdit>[1]): void {
  if (!codebook) return;
  const problem = validateEdit(codebook, state.pendingEdits, edit);
  if (problem) {
    editError = problem;  // inline: no network request happens
  } else {
    editError = null;
    state = queueEdit(state, edit);
  }
  render();
}

function wireEditor(): void {
  for (const button of el("codebook").querySelectorAll("button.remove")) {
    button.addEventListener("click", () => {
      const b = button as HTMLElement;
      tryQueue({ kind: "remove_keyword", topic_index: Number(b.dataset["topic"]), phrase: b.dataset["phrase"]! });
    });
  }
  for (const input of el("codebook").querySelectorAll("input.add-keyword")) {
    input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key !== "Enter") return;
      const box = input as HTMLInputElement;
      tryQueue({ kind: "add_keyword", topic_index: Number(box.dataset["topic"]), phrase: box.value });
    });
  }
  for (const input of el("codebook").querySelectorAll("input.topic-name")) {
    input.addEventListener("change", () => {
      const box = input as HTMLInputElement;
      tryQueue({ kind: "rename_topic", topic_index: Number(box.dataset["topic"]), name: box.value });
    });
  }
  for (const button of el("codebook").querySelectorAll("button.drop")) {
    button.addEventListener("click", () => {
      state = dropEdit(state, Number((button as HTMLElement).dataset["index"]));
      render();
    });
  }
  document.getElementById("save")?.addEventListener("click", () => void save());
  document.getElementById("take-latest")?.addEventListener("click", () => {
    if (!latestOnConflict) return;
    codebook = latestOnConflict;
    latestOnConflict = null;
    state = pinVersion(state, codebook.version);
    void refreshModel();
  });
}

async function save(): Promise<void> {
  if (!state.discussionId || state.pinnedVersion === null || !codebook) return;
  const discussionId = state.discussionId;
  const body = buildPutBody(state.pinnedVersion, state.pendingEdits);
  try {
    const saved = await api.saveCodebook(discussionId, body.base_version, body.edits);
    codebook = saved.codebook;
    state = saveSucceeded(state, saved.version);
    editError = null;
    await refreshModel();
  } catch (err) {
    if (err instanceof ConflictError) {
      const latest = await api.codebook(discussionId);
      latestOnConflict = latest.codebook;
      state = saveConflicted(state, err.detail);
      render();
      return;
    }
    if (err instanceof EditRejected) {
      editError = err.violations.join("; ");
      render();
      return;
    }
    throw err;
  }
}

function renderStudent(): void {
  const panel = el("student");
  if (!student || !model) {
    panel.classList.add("hidden");
    return;
  }
  panel.classList.remove("hidden");
  const hasEdges = student.unit.weights.some((w) => w > 0);
  // identical node pixels to the group view: same renderer, and the
  // group's coordinate envelope is reused so the scale cannot drift
  const svg = renderNetworkSvg(
    student.code_positions,
    model.edges.map((e, i) => ({ source: e.source, target: e.target, weight: student!.unit.weights[i]! })),
    student.topic_names,
    [{ id: student.student_id, point: student.unit.point }],
    { envelope: [...model.code_positions, ...model.units.map((u) => u.point)] },
  );
  const posts = student.posts
    .map(
      (p) =>
        `<article class="post${p.is_initial ? " initial" : ""}">` +
        `<header>${esc(p.post_id)} · ${esc(p.created_at)}${p.is_initial ? " · initial post" : " · reply"}</header>` +
        `<p>${renderHighlighted(p.text, p.matches)}</p></article>`,
    )
    .join("");
  const links = student.links
    ? `<p><a href="${esc(student.links.discussion_url)}" target="_blank" rel="noopener">open in LMS</a>` +
      (student.links.speedgrader_url
        ? ` · <a href="${esc(student.links.speedgrader_url)}" target="_blank" rel="noopener">grade</a>`
        : "") +
      `</p>`
    : "";
  panel.innerHTML =
    `<h2>${esc(student.student_id)} <button id="close-student">back to group</button></h2>` +
    (hasEdges ? svg : `${svg}<p class="muted">no connections in scope for this student</p>`) +
    links +
    `<div class="posts">${posts || '<p class="muted">no posts in scope</p>'}</div>`;
  document.getElementById("close-student")?.addEventListener("click", () => {
    student = null;
    state = selectStudent(state, null);
    render();
  });
}

function render(): void {
  el("scope-toggle").textContent = state.scope === "all" ? "showing: all posts" : "showing: initial posts only";
  renderGroup();
  renderEditor();
  renderStudent();
}

export function start(): void {
  el("scope-toggle").addEventListener("click", () => {
    state = toggleScope(state);
    void (async () => {
      await refreshModel();
      if (state.selectedStudent) await openStudent(state.selectedStudent);
    })();
  });
  void loadDiscussions();
}

if (typeof document !== "undefined" && document.getElementById("banner")) {
  start();
}
