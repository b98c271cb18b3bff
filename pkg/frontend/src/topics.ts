/** Landing page: the list of analyzed topics. */

import type { TopicSummary } from "./types.js";
import { h, VNode } from "./vdom.js";

export interface TopicsHandlers {
  openTopic(topicId: string): void;
}

export function renderTopics(topics: TopicSummary[], handlers: TopicsHandlers): VNode {
  if (topics.length === 0) {
    return h("div", { class: "topics-empty" }, "No topics in the store yet.");
  }
  return h(
    "ul",
    { class: "topic-list" },
    topics.map((topic) =>
      h(
        "li",
        { class: "topic-item", "data-topic": topic.topic_id },
        h(
          "button",
          {
            class: "topic-link",
            disabled: !topic.analyzed,
            onClick: () => handlers.openTopic(topic.topic_id),
          },
          h("span", { class: "topic-title" }, topic.title),
          h(
            "span",
            { class: "topic-meta" },
            `${topic.article_count} article${topic.article_count === 1 ? "" : "s"}` +
              (topic.analyzed ? "" : " (not analyzed yet)"),
          ),
        ),
      ),
    ),
  );
}
