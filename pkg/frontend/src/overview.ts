/**
 * Topic overview: one card per article (outlet, title, snippet) beside its
 * framing histogram. Every card shares the topic's concept axis and the
 * topic-wide height scale, so framing differences across outlets are
 * directly comparable. All numbers come from the server untouched.
 */

import { token } from "./theme.js";
import type { ConceptRef, HistogramBar, OverviewPayload } from "./types.js";
import { h, VNode } from "./vdom.js";

export interface OverviewHandlers {
  openArticle(articleId: string): void;
}

function barTooltip(bar: HistogramBar, concept: ConceptRef | undefined): string {
  const label = concept ? concept.canonical_label : bar.concept_id;
  return `${label}: ${bar.count} mention${bar.count === 1 ? "" : "s"}, mean polarity ${bar.mean_polarity.toFixed(2)}`;
}

export function renderBar(bar: HistogramBar, concept: ConceptRef | undefined): VNode {
  const tone = token(bar.color_class);
  if (bar.count === 0) {
    // zero-count concepts render as a gap with a small neutral marker
    return h("div", {
      class: "bar bar-gap",
      title: barTooltip(bar, concept),
      "data-concept": bar.concept_id,
      "data-count": "0",
    });
  }
  return h("div", {
    class: `bar ${tone.cssClass}`,
    style: `height: ${bar.height * 100}%; background-color: ${tone.fill};`,
    title: barTooltip(bar, concept),
    "data-concept": bar.concept_id,
    "data-count": String(bar.count),
    "data-height": String(bar.height),
  });
}

export function renderHistogram(
  articleId: string,
  payload: OverviewPayload,
): VNode {
  const article = payload.articles.find((a) => a.article_id === articleId);
  if (!article) return h("div", { class: "histogram histogram-empty" });
  const concepts = new Map(payload.concepts.map((c) => [c.concept_id, c]));
  return h(
    "div",
    { class: "histogram", role: "img", "aria-label": "framing histogram" },
    article.histogram.bars.map((bar) =>
      h(
        "div",
        { class: "bar-slot", "data-concept": bar.concept_id },
        renderBar(bar, concepts.get(bar.concept_id)),
      ),
    ),
  );
}

export function renderOverview(payload: OverviewPayload, handlers: OverviewHandlers): VNode {
  const axis = h(
    "div",
    { class: "concept-axis" },
    payload.concepts.map((c) =>
      h("span", { class: "axis-label", "data-concept": c.concept_id }, c.canonical_label),
    ),
  );

  const cards = payload.articles.map((article) =>
    h(
      "section",
      {
        class: "article-card",
        "data-article": article.article_id,
        onClick: () => handlers.openArticle(article.article_id),
      },
      h("header", { class: "card-header" },
        h("span", { class: "card-outlet" }, article.outlet),
        article.published ? h("span", { class: "card-date" }, article.published) : null,
      ),
      h("h3", { class: "card-title" }, article.title),
      h("p", { class: "card-snippet" }, article.snippet),
      renderHistogram(article.article_id, payload),
    ),
  );

  return h(
    "div",
    { class: "overview" },
    h("h2", { class: "overview-title" }, payload.title),
    h("p", { class: "overview-hint" },
      "Bar height: how often the actor is mentioned. Color: how the article portrays it.",
    ),
    axis,
    h("div", { class: "card-grid" }, cards),
  );
}
