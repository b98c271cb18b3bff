/**
 * Article view: body text with each mention of a ranked concept wrapped in
 * a polarity-colored highlight (neutral mentions underline only). A legend
 * toggles per-concept highlighting without refetching.
 *
 * Annotation offsets count Unicode scalar values, so the body is sliced
 * over code points, never UTF-16 units. The concatenation of rendered
 * segments is exactly the article body.
 */

import { token } from "./theme.js";
import type { AnnotatedArticle, Annotation } from "./types.js";
import { h, VNode } from "./vdom.js";

export interface BodySegment {
  text: string;
  annotation: Annotation | null;
}

export function segmentBody(body: string, annotations: Annotation[]): BodySegment[] {
  const points = Array.from(body); // one entry per Unicode scalar value
  const segments: BodySegment[] = [];
  let cursor = 0;
  for (const annotation of annotations) {
    const [start, end] = annotation.span;
    if (start > cursor) {
      segments.push({ text: points.slice(cursor, start).join(""), annotation: null });
    }
    segments.push({ text: points.slice(start, end).join(""), annotation });
    cursor = end;
  }
  if (cursor < points.length) {
    segments.push({ text: points.slice(cursor).join(""), annotation: null });
  }
  return segments;
}

export interface ArticleHandlers {
  toggleConcept(conceptId: string): void;
  toggleLegend(): void;
  backToOverview(topicId: string): void;
}

export interface ArticleViewState {
  highlightFilter: ReadonlySet<string>;
  legendVisible: boolean;
}

export interface LegendConcept {
  concept_id: string;
  canonical_label: string;
}

export function legendConcepts(payload: AnnotatedArticle): LegendConcept[] {
  const seen = new Map<string, string>();
  for (const annotation of payload.annotations) {
    if (!seen.has(annotation.concept_id)) {
      seen.set(annotation.concept_id, annotation.canonical_label);
    }
  }
  return [...seen.entries()].map(([concept_id, canonical_label]) => ({
    concept_id,
    canonical_label,
  }));
}

function renderSegment(segment: BodySegment, filter: ReadonlySet<string>): VNode | string {
  const annotation = segment.annotation;
  if (!annotation || !filter.has(annotation.concept_id)) {
    return segment.text; // filtered-out highlights render as plain text
  }
  const tone = token(annotation.color_class);
  const fill =
    annotation.color_class === "neutral" ? "" : `background-color: ${tone.fill};`;
  return h(
    "mark",
    {
      class: `hl ${tone.cssClass}${annotation.color_class === "neutral" ? " hl-underline" : ""}`,
      style: fill,
      title: `${annotation.canonical_label}: ${annotation.label} (${annotation.score.toFixed(2)})`,
      "data-concept": annotation.concept_id,
      "data-label": annotation.label,
    },
    segment.text,
  );
}

export function renderArticle(
  payload: AnnotatedArticle,
  state: ArticleViewState,
  handlers: ArticleHandlers,
): VNode {
  const legend = state.legendVisible
    ? h(
        "ul",
        { class: "legend" },
        legendConcepts(payload).map((concept) =>
          h(
            "li",
            { class: "legend-item" },
            h(
              "button",
              {
                class: `legend-toggle${state.highlightFilter.has(concept.concept_id) ? " active" : ""}`,
                "data-concept": concept.concept_id,
                onClick: () => handlers.toggleConcept(concept.concept_id),
              },
              concept.canonical_label,
            ),
          ),
        ),
      )
    : null;

  const segments = segmentBody(payload.body, payload.annotations);

  return h(
    "div",
    { class: "article-view" },
    h(
      "nav",
      { class: "article-nav" },
      h(
        "button",
        { class: "back-link", onClick: () => handlers.backToOverview(payload.topic_id) },
        "← back to overview",
      ),
      h(
        "button",
        { class: "legend-switch", onClick: () => handlers.toggleLegend() },
        state.legendVisible ? "hide legend" : "show legend",
      ),
    ),
    h("header", { class: "article-header" },
      h("span", { class: "article-outlet" }, payload.outlet),
      payload.published ? h("span", { class: "article-date" }, payload.published) : null,
      h("h2", { class: "article-title" }, payload.title),
    ),
    legend,
    h(
      "div",
      { class: "article-body" },
      segments.map((segment) => renderSegment(segment, state.highlightFilter)),
    ),
  );
}
