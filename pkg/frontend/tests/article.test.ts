import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { legendConcepts, renderArticle, segmentBody } from "../src/article.js";
import type { AnnotatedArticle } from "../src/types.js";
import { byClass, findAll, textOf } from "../src/vdom.js";

const leftArticle: AnnotatedArticle = JSON.parse(
  readFileSync(new URL("./fixtures/annotated-left.json", import.meta.url), "utf-8"),
);

const HANDLERS = {
  toggleConcept: () => {},
  toggleLegend: () => {},
  backToOverview: () => {},
};

function allConcepts(payload: AnnotatedArticle): Set<string> {
  return new Set(payload.annotations.map((a) => a.concept_id));
}

describe("segmentBody", () => {
  it("concatenates back to the exact body", () => {
    const segments = segmentBody(leftArticle.body, leftArticle.annotations);
    expect(segments.map((s) => s.text).join("")).toBe(leftArticle.body);
  });

  it("covers every annotation once", () => {
    const segments = segmentBody(leftArticle.body, leftArticle.annotations);
    const annotated = segments.filter((s) => s.annotation !== null);
    expect(annotated.length).toBe(leftArticle.annotations.length);
  });

  it("slices by Unicode scalar values, not UTF-16 units", () => {
    // "📰" is one scalar value but two UTF-16 code units; the annotation
    // span counts scalars, so naive string slicing would be off by one.
    const body = "Café \u{1F4F0} report: Trump praised.";
    const annotation = {
      span: [15, 20] as [number, number],
      concept_id: "c1",
      canonical_label: "Trump",
      score: 0.4,
      label: "positive" as const,
      color_class: "positive" as const,
    };
    const segments = segmentBody(body, [annotation]);
    expect(segments.map((s) => s.text).join("")).toBe(body);
    const marked = segments.find((s) => s.annotation !== null);
    expect(marked?.text).toBe("Trump");
  });

  it("handles empty annotations", () => {
    const segments = segmentBody("plain body", []);
    expect(segments).toEqual([{ text: "plain body", annotation: null }]);
  });
});

describe("renderArticle", () => {
  it("renders text whose concatenation equals the body exactly", () => {
    const view = renderArticle(
      leftArticle,
      { highlightFilter: allConcepts(leftArticle), legendVisible: false },
      HANDLERS,
    );
    const body = byClass(view, "article-body")[0];
    expect(body).toBeDefined();
    expect(textOf(body!)).toBe(leftArticle.body);
  });

  it("body text stays exact when highlights are filtered out", () => {
    const view = renderArticle(
      leftArticle,
      { highlightFilter: new Set(), legendVisible: false },
      HANDLERS,
    );
    const body = byClass(view, "article-body")[0]!;
    expect(textOf(body)).toBe(leftArticle.body);
    expect(findAll(body, (v) => v.tag === "mark")).toHaveLength(0);
  });

  it("filtering to one concept hides exactly the other concepts' highlights", () => {
    const concepts = [...allConcepts(leftArticle)];
    expect(concepts.length).toBeGreaterThan(1);
    const keep = concepts[0]!;
    const view = renderArticle(
      leftArticle,
      { highlightFilter: new Set([keep]), legendVisible: false },
      HANDLERS,
    );
    const marks = findAll(view, (v) => v.tag === "mark");
    const expected = leftArticle.annotations.filter((a) => a.concept_id === keep);
    expect(marks).toHaveLength(expected.length);
    for (const mark of marks) {
      expect(mark.props["data-concept"]).toBe(keep);
    }
  });

  it("highlights every annotation when all concepts are on", () => {
    const view = renderArticle(
      leftArticle,
      { highlightFilter: allConcepts(leftArticle), legendVisible: false },
      HANDLERS,
    );
    const marks = findAll(view, (v) => v.tag === "mark");
    expect(marks).toHaveLength(leftArticle.annotations.length);
  });

  it("neutral mentions are underlined, not filled", () => {
    const neutral = leftArticle.annotations.find((a) => a.color_class === "neutral");
    expect(neutral).toBeDefined(); // fixture includes neutral mentions
    const view = renderArticle(
      leftArticle,
      { highlightFilter: allConcepts(leftArticle), legendVisible: false },
      HANDLERS,
    );
    const underlined = byClass(view, "hl-underline");
    expect(underlined.length).toBeGreaterThan(0);
    for (const mark of underlined) {
      expect(String(mark.props["style"] ?? "")).not.toContain("background-color");
    }
  });

  it("hovering a highlight reveals concept label and score", () => {
    const view = renderArticle(
      leftArticle,
      { highlightFilter: allConcepts(leftArticle), legendVisible: false },
      HANDLERS,
    );
    const mark = findAll(view, (v) => v.tag === "mark")[0]!;
    const title = String(mark.props["title"]);
    const annotation = leftArticle.annotations[0]!;
    expect(title).toContain(annotation.canonical_label);
    expect(title).toContain(annotation.score.toFixed(2));
  });

  it("legend lists each annotated concept once", () => {
    const concepts = legendConcepts(leftArticle);
    expect(new Set(concepts.map((c) => c.concept_id)).size).toBe(concepts.length);
    expect(new Set(concepts.map((c) => c.concept_id))).toEqual(allConcepts(leftArticle));
    const view = renderArticle(
      leftArticle,
      { highlightFilter: allConcepts(leftArticle), legendVisible: true },
      HANDLERS,
    );
    expect(byClass(view, "legend-toggle")).toHaveLength(concepts.length);
  });
});
