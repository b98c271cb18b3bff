/**
 * Minimal virtual-DOM layer. Render functions build VNode trees that tests
 * inspect directly; only mount() touches the real DOM.
 */

export type EventHandler = (event: Event) => void;
export type PropValue = string | number | boolean | EventHandler;
export type Child = VNode | string;

export interface VNode {
  tag: string;
  props: Record<string, PropValue>;
  children: Child[];
}

export function h(
  tag: string,
  props: Record<string, PropValue> | null = null,
  ...children: (Child | Child[] | null | undefined)[]
): VNode {
  const flat: Child[] = [];
  for (const child of children) {
    if (child === null || child === undefined) continue;
    if (Array.isArray(child)) {
      flat.push(...child);
    } else {
      flat.push(child);
    }
  }
  return { tag, props: props ?? {}, children: flat };
}

/** Concatenated text content of a subtree (mirrors DOM textContent). */
export function textOf(node: Child): string {
  if (typeof node === "string") return node;
  return node.children.map(textOf).join("");
}

/** Depth-first search over a VNode tree. */
export function findAll(node: Child, match: (v: VNode) => boolean): VNode[] {
  if (typeof node === "string") return [];
  const found: VNode[] = [];
  if (match(node)) found.push(node);
  for (const child of node.children) {
    found.push(...findAll(child, match));
  }
  return found;
}

export function byClass(node: Child, className: string): VNode[] {
  return findAll(node, (v) => {
    const cls = v.props["class"];
    return typeof cls === "string" && cls.split(/\s+/).includes(className);
  });
}

export function mount(node: Child, parent: Element): void {
  parent.appendChild(toDom(node));
}

export function replaceChildren(parent: Element, node: Child): void {
  parent.replaceChildren(toDom(node));
}

function toDom(node: Child): Node {
  if (typeof node === "string") {
    return document.createTextNode(node);
  }
  const el = document.createElement(node.tag);
  for (const [key, value] of Object.entries(node.props)) {
    if (typeof value === "function") {
      el.addEventListener(key.replace(/^on/, "").toLowerCase(), value as EventHandler);
    } else if (typeof value === "boolean") {
      if (value) el.setAttribute(key, "");
    } else {
      el.setAttribute(key, String(value));
    }
  }
  for (const child of node.children) {
    el.appendChild(toDom(child));
  }
  return el;
}
