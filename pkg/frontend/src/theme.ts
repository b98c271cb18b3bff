/**
 * Pinned palette for polarity color classes.
 *
 * Redundant encoding on purpose: hue (red vs green) plus intensity, and
 * neutral highlights are underlined rather than filled, so the encoding
 * survives red-green color blindness.
 */

import type { ColorClass } from "./types.js";

export interface ColorToken {
  /** CSS class applied to bars and highlights. */
  cssClass: string;
  /** Fill color, also set inline so the palette lives in one place. */
  fill: string;
  /** Human-readable name used in tooltips and the legend. */
  name: string;
}

export const PALETTE: Record<ColorClass, ColorToken> = {
  "strong-negative": { cssClass: "pol-strong-negative", fill: "#b2182b", name: "strongly negative" },
  negative: { cssClass: "pol-negative", fill: "#ef8a62", name: "negative" },
  neutral: { cssClass: "pol-neutral", fill: "#bdbdbd", name: "neutral" },
  positive: { cssClass: "pol-positive", fill: "#7fbf7b", name: "positive" },
  "strong-positive": { cssClass: "pol-strong-positive", fill: "#1b7837", name: "strongly positive" },
};

export function token(colorClass: ColorClass): ColorToken {
  return PALETTE[colorClass];
}
