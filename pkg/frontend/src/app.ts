/**
 * View state and navigation: topic list <-> overview <-> article view,
 * "overview first, details on demand". History integration gives working
 * browser back and deep links (/topic/{id}, /article/{id}); responses that
 * arrive after a newer navigation are discarded by sequence number.
 */

import { renderArticle } from "./article.js";
import { renderOverview } from "./overview.js";
import { renderTopics } from "./topics.js";
import type { AnnotatedArticle, OverviewPayload, TopicSummary } from "./types.js";
import { h, VNode } from "./vdom.js";

export type Route =
  | { page: "topics" }
  | { page: "overview"; topicId: string }
  | { page: "article"; articleId: string };

export function parseRoute(pathname: string): Route {
  const topic = pathname.match(/^\/topic\/([a-z0-9-]+)\/?$/);
  if (topic && topic[1]) return { page: "overview", topicId: topic[1] };
  const article = pathname.match(/^\/article\/([0-9a-f]+)\/?$/);
  if (article && article[1]) return { page: "article", articleId: article[1] };
  return { page: "topics" };
}

export function routePath(route: Route): string {
  switch (route.page) {
    case "topics":
      return "/";
    case "overview":
      return `/topic/${route.topicId}`;
    case "article":
      return `/article/${route.articleId}`;
  }
}

export interface Fetcher {
  (path: string): Promise<unknown>;
}

export interface HistoryAdapter {
  push(path: string): void;
  onPop(handler: (path: string) => void): void;
}

export interface AppState {
  route: Route;
  loading: boolean;
  error: string | null;
  topics: TopicSummary[] | null;
  overview: OverviewPayload | null;
  article: AnnotatedArticle | null;
  highlightFilter: Set<string>;
  legendVisible: boolean;
}

export class App {
  state: AppState = {
    route: { page: "topics" },
    loading: false,
    error: null,
    topics: null,
    overview: null,
    article: null,
    highlightFilter: new Set(),
    legendVisible: true,
  };

  private sequence = 0;
  fetchCount = 0;

  constructor(
    private fetcher: Fetcher,
    private history: HistoryAdapter,
    private onRender: (state: AppState) => void = () => {},
  ) {
    history.onPop((path) => {
      void this.navigate(parseRoute(path), { push: false });
    });
  }

  async start(initialPath: string): Promise<void> {
    await this.navigate(parseRoute(initialPath), { push: false });
  }

  private emit(): void {
    this.onRender(this.state);
  }

  private async fetchJson<T>(path: string): Promise<T> {
    this.fetchCount += 1;
    return (await this.fetcher(path)) as T;
  }

  async navigate(route: Route, options: { push?: boolean } = {}): Promise<void> {
    const { push = true } = options;
    const seq = ++this.sequence;
    this.state = { ...this.state, route, loading: true, error: null };
    if (push) this.history.push(routePath(route));
    this.emit();

    try {
      if (route.page === "topics") {
        const topics = await this.fetchJson<TopicSummary[]>("/api/topics");
        if (seq !== this.sequence) return; // a newer navigation superseded this one
        this.state = { ...this.state, topics, loading: false };
      } else if (route.page === "overview") {
        const overview = await this.fetchJson<OverviewPayload>(
          `/api/topics/${route.topicId}/overview`,
        );
        if (seq !== this.sequence) return;
        this.state = { ...this.state, overview, loading: false };
      } else {
        const article = await this.fetchJson<AnnotatedArticle>(
          `/api/articles/${route.articleId}/annotated`,
        );
        if (seq !== this.sequence) return;
        // default highlight filter: every ranked concept annotated in the article
        const filter = new Set(article.annotations.map((a) => a.concept_id));
        this.state = { ...this.state, article, highlightFilter: filter, loading: false };
      }
    } catch (error) {
      if (seq !== this.sequence) return;
      this.state = { ...this.state, loading: false, error: describe(error) };
    }
    this.emit();
  }

  openTopic(topicId: string): void {
    void this.navigate({ page: "overview", topicId });
  }

  openArticle(articleId: string): void {
    void this.navigate({ page: "article", articleId });
  }

  backToOverview(topicId: string): void {
    void this.navigate({ page: "overview", topicId });
  }

  /** Flip one concept's highlighting; re-renders from cached data, no fetch. */
  toggleConcept(conceptId: string): void {
    const filter = new Set(this.state.highlightFilter);
    if (filter.has(conceptId)) {
      filter.delete(conceptId);
    } else {
      filter.add(conceptId);
    }
    this.state = { ...this.state, highlightFilter: filter };
    this.emit();
  }

  toggleLegend(): void {
    this.state = { ...this.state, legendVisible: !this.state.legendVisible };
    this.emit();
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

export function renderApp(app: App): VNode {
  const state = app.state;
  let page: VNode;
  if (state.error) {
    page = h("div", { class: "error-banner" }, state.error);
  } else if (state.route.page === "topics") {
    page = state.topics
      ? renderTopics(state.topics, { openTopic: (id) => app.openTopic(id) })
      : loading();
  } else if (state.route.page === "overview") {
    page = state.overview
      ? renderOverview(state.overview, { openArticle: (id) => app.openArticle(id) })
      : loading();
  } else {
    page = state.article
      ? renderArticle(
          state.article,
          { highlightFilter: state.highlightFilter, legendVisible: state.legendVisible },
          {
            toggleConcept: (id) => app.toggleConcept(id),
            toggleLegend: () => app.toggleLegend(),
            backToOverview: (topicId) => app.backToOverview(topicId),
          },
        )
      : loading();
  }
  return h(
    "div",
    { class: "app" },
    h("header", { class: "app-header" },
      h("h1", { class: "app-name" }, "Newsalyze"),
      h("p", { class: "app-tag" }, "a bias-aware news reader"),
    ),
    page,
  );
}

function loading(): VNode {
  return h("div", { class: "loading" }, "loading…");
}
