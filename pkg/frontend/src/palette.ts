const CATEGORICAL = [
  "#4e79a7",
  "#f28e2b",
  "#e15759",
  "#76b7b2",
  "#59a14f",
  "#edc948",
  "#b07aa1",
  "#ff9da7",
  "#9c755f",
  "#bab0ac",
  "#86bcb6",
  "#d37295",
];

/** Colour for a partition block; distinct for any realistic block count. */
export function blockColor(index: number): string {
  if (index < CATEGORICAL.length) return CATEGORICAL[index];
  const hue = (index * 47) % 360;
  return `hsl(${hue}, 62%, 46%)`;
}

export const TRUE_COLOR = "#2e7d32";
export const FALSE_COLOR = "#c62828";

export function answerColor(answer: boolean): string {
  return answer ? TRUE_COLOR : FALSE_COLOR;
}
