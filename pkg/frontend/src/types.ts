/** Payload shapes for the three read-only API endpoints. */

export type ColorClass =
  | "strong-negative"
  | "negative"
  | "neutral"
  | "positive"
  | "strong-positive";

export type PolarityLabel = "negative" | "neutral" | "positive";

export interface TopicSummary {
  topic_id: string;
  title: string;
  article_count: number;
  analyzed: boolean;
}

export interface ConceptRef {
  concept_id: string;
  canonical_label: string;
  frequency: number;
}

export interface HistogramBar {
  concept_id: string;
  count: number;
  height: number;
  mean_polarity: number;
  color_class: ColorClass;
}

export interface Histogram {
  article_id: string;
  concept_order: string[];
  bars: HistogramBar[];
}

export interface OverviewArticle {
  article_id: string;
  outlet: string;
  title: string;
  published: string | null;
  snippet: string;
  histogram: Histogram;
}

export interface OverviewPayload {
  topic_id: string;
  title: string;
  concepts: ConceptRef[];
  articles: OverviewArticle[];
}

export interface Annotation {
  span: [number, number];
  concept_id: string;
  canonical_label: string;
  score: number;
  label: PolarityLabel;
  color_class: ColorClass;
}

export interface AnnotatedArticle {
  article_id: string;
  topic_id: string;
  outlet: string;
  url: string;
  title: string;
  published: string | null;
  body: string;
  annotations: Annotation[];
}
