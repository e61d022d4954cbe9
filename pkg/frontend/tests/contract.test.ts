/** Contract checks against a live service instance.
 *
 * Skipped unless SERVICE_URL is set; contract.sh boots the service on a
 * fixture corpus and runs exactly this file. The flow mirrors the app:
 * load the codebook and model, save an edit batch, refetch the model for
 * the new version, open a student.
 */

import assert from "node:assert/strict";
import { test } from "node:test";

import { ApiClient, ConflictError } from "../src/api.js";
import { renderNetworkSvg } from "../src/graph.js";
import { renderHighlighted, renderedSpanIds, flattenSpans } from "../src/highlight.js";

const base = process.env["SERVICE_URL"];

test("edit_and_save recomputes and re-renders from server values", { skip: !base }, async () => {
  const api = new ApiClient(base!);
  const discussion = "disc1";

  const loaded = await api.codebook(discussion);
  const before = await api.model(discussion, "all", loaded.version);
  assert.equal(before.codebook_version, loaded.version);

  // save one removal; the service answers with the next dense version
  const firstTopic = loaded.codebook.topics[0]!;
  const target = firstTopic.keywords[0]!.display;
  const saved = await api.saveCodebook(discussion, loaded.version, [
    { kind: "remove_keyword", topic_index: 0, phrase: target },
  ]);
  assert.equal(saved.version, loaded.version + 1);
  assert.ok(!saved.codebook.topics[0]!.keywords.some((k) => k.display === target));

  // the refetched model belongs to the new version; rendering it is a
  // pure function of the payload (this is the "no reload" path)
  const after = await api.model(discussion, "all", saved.version);
  assert.equal(after.codebook_version, saved.version);
  const svg = renderNetworkSvg(
    after.code_positions,
    after.edges,
    after.topic_names,
    after.units.map((u) => ({ id: u.student_id, point: u.point })),
  );
  assert.ok(svg.includes("code-node"));

  // a stale save is a conflict, not an overwrite
  await assert.rejects(
    api.saveCodebook(discussion, loaded.version, [
      { kind: "rename_topic", topic_index: 1, name: "too late" },
    ]),
    (err: unknown) => err instanceof ConflictError,
  );
});

test("student view positions are bit-identical to the group view", { skip: !base }, async () => {
  const api = new ApiClient(base!);
  const model = await api.model("disc1", "all");
  const sid = model.units[0]!.student_id;
  const student = await api.student("disc1", sid, "all", model.codebook_version);

  // the numbers themselves agree...
  assert.deepEqual(student.code_positions, model.code_positions);

  // ...and so do the rendered node pixels, using the app's wiring
  const envelope = [...model.code_positions, ...model.units.map((u) => u.point)];
  const group = renderNetworkSvg(
    model.code_positions, model.edges, model.topic_names,
    model.units.map((u) => ({ id: u.student_id, point: u.point })),
  );
  const studentSvg = renderNetworkSvg(
    student.code_positions,
    model.edges.map((e, i) => ({ ...e, weight: student.unit.weights[i]! })),
    student.topic_names,
    [{ id: sid, point: student.unit.point }],
    { envelope },
  );
  const nodes = (s: string) => s.match(/<circle class="code-node[^/]*\/>/g) ?? [];
  assert.deepEqual(nodes(group), nodes(studentSvg));
});

test("every rendered highlight maps to a server span", { skip: !base }, async () => {
  const api = new ApiClient(base!);
  const model = await api.model("disc1", "all");
  for (const unit of model.units) {
    const student = await api.student("disc1", unit.student_id, "all", model.codebook_version);
    for (const post of student.posts) {
      for (const [topic, spans] of post.matches.entries()) {
        assert.equal(post.codes[topic], spans.length > 0);
        for (const span of spans) {
          assert.ok(0 <= span.start && span.start < span.end && span.end <= post.text.length);
        }
      }
      const html = renderHighlighted(post.text, post.matches);
      const served = new Set(flattenSpans(post.matches).map((s) => s.id));
      assert.deepEqual(renderedSpanIds(html), served);
    }
  }
});
