import type { AnalysisDocument } from "./types.js";
import { answerColor, blockColor } from "./palette.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 440;
const PADDING = 46;
const MARKER_RADIUS = 9;
const CLICK_SLOP = 4;

export interface MapCallbacks {
  onMarkerClick?: (label: string) => void;
  onLegendClick?: (blockIndex: number) => void;
  onLasso?: (labels: string[]) => void;
}

interface PixelPoint {
  x: number;
  y: number;
}

/** Maps data coordinates into the viewport with a single uniform scale. */
export function scaleToViewport(
  points: { x: number; y: number }[],
  width = WIDTH,
  height = HEIGHT,
  padding = PADDING,
): PixelPoint[] {
  if (points.length === 0) return [];
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = maxX - minX;
  const spanY = maxY - minY;
  const span = Math.max(spanX, spanY);
  const scale = span > 0 ? (Math.min(width, height) - 2 * padding) / span : 0;
  const cx = (minX + maxX) / 2;
  const cy = (minY + maxY) / 2;
  return points.map((p) => ({
    x: width / 2 + (p.x - cx) * scale,
    y: height / 2 - (p.y - cy) * scale,
  }));
}

export class RepairMap {
  private readonly root: HTMLElement;
  private readonly stressBox: HTMLElement;
  private readonly svg: SVGSVGElement;
  private readonly markerLayer: SVGGElement;
  private readonly lassoRect: SVGRectElement;
  private readonly legend: HTMLElement;
  private readonly tooltip: HTMLElement;
  private readonly emptyState: HTMLElement;
  private readonly markers = new Map<string, SVGCircleElement>();
  private lassoStart: PixelPoint | null = null;

  constructor(
    container: HTMLElement,
    private readonly callbacks: MapCallbacks = {},
  ) {
    this.root = document.createElement("div");
    this.root.className = "repair-map";

    const header = document.createElement("div");
    header.className = "map-header";
    this.stressBox = document.createElement("span");
    this.stressBox.className = "stress-indicator";
    header.appendChild(this.stressBox);
    this.root.appendChild(header);

    this.svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.svg.setAttribute("width", String(WIDTH));
    this.svg.setAttribute("height", String(HEIGHT));
    this.svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    this.svg.classList.add("map-canvas");
    this.markerLayer = document.createElementNS(SVG_NS, "g") as SVGGElement;
    this.svg.appendChild(this.markerLayer);
    this.lassoRect = document.createElementNS(SVG_NS, "rect") as SVGRectElement;
    this.lassoRect.classList.add("lasso-rect");
    this.lassoRect.setAttribute("visibility", "hidden");
    this.svg.appendChild(this.lassoRect);
    this.root.appendChild(this.svg);

    this.legend = document.createElement("div");
    this.legend.className = "map-legend";
    this.root.appendChild(this.legend);

    this.tooltip = document.createElement("div");
    this.tooltip.className = "map-tooltip";
    this.tooltip.style.display = "none";
    this.root.appendChild(this.tooltip);

    this.emptyState = document.createElement("div");
    this.emptyState.className = "empty-state";
    this.emptyState.textContent =
      "No analysis loaded. Fetch an analysis to see the repair map.";
    this.root.appendChild(this.emptyState);

    this.svg.addEventListener("mousedown", (e) => this.lassoBegin(e as MouseEvent));
    this.svg.addEventListener("mousemove", (e) => this.lassoMove(e as MouseEvent));
    this.svg.addEventListener("mouseup", (e) => this.lassoEnd(e as MouseEvent));

    container.appendChild(this.root);
  }

  render(analysis: AnalysisDocument | null): void {
    if (!analysis) {
      this.emptyState.style.display = "";
      this.svg.style.display = "none";
      this.legend.innerHTML = "";
      this.stressBox.textContent = "";
      for (const marker of this.markers.values()) marker.remove();
      this.markers.clear();
      return;
    }
    this.emptyState.style.display = "none";
    this.svg.style.display = "";

    const points = analysis.embedding.points;
    const pixels = scaleToViewport(points);
    const factsByLabel = new Map(analysis.repairs.map((r) => [r.label, r.facts]));
    const blockOf = new Map<string, number>();
    analysis.partition.blocks.forEach((block, i) => {
      for (const label of block) blockOf.set(label, i);
    });

    const seen = new Set<string>();
    points.forEach((point, i) => {
      seen.add(point.label);
      let marker = this.markers.get(point.label);
      if (!marker) {
        marker = document.createElementNS(SVG_NS, "circle") as SVGCircleElement;
        marker.classList.add("marker");
        marker.setAttribute("r", String(MARKER_RADIUS));
        marker.setAttribute("data-label", point.label);
        marker.addEventListener("click", () => {
          if (this.callbacks.onMarkerClick) this.callbacks.onMarkerClick(point.label);
        });
        marker.addEventListener("mouseenter", () => this.showTooltip(point.label));
        marker.addEventListener("mouseleave", () => this.hideTooltip());
        this.markerLayer.appendChild(marker);
        this.markers.set(point.label, marker);
      }
      marker.setAttribute("cx", String(pixels[i].x));
      marker.setAttribute("cy", String(pixels[i].y));
      marker.setAttribute("fill", blockColor(blockOf.get(point.label) ?? 0));
      const facts = factsByLabel.get(point.label) ?? [];
      marker.setAttribute("data-facts", facts.join("\n"));
      let title = marker.querySelector<SVGTitleElement>("title");
      if (!title) {
        title = document.createElementNS(SVG_NS, "title") as SVGTitleElement;
        marker.appendChild(title);
      }
      title.textContent = `${point.label}\n${facts.join("\n")}`;
    });
    for (const [label, marker] of this.markers) {
      if (!seen.has(label)) {
        marker.remove();
        this.markers.delete(label);
      }
    }

    this.stressBox.textContent = `stress: ${analysis.embedding.achieved_stress.toPrecision(4)}`;
    this.renderLegend(analysis.partition.blocks);
  }

  private renderLegend(blocks: string[][]): void {
    this.legend.innerHTML = "";
    blocks.forEach((block, i) => {
      const row = document.createElement("div");
      row.className = "legend-row";
      row.setAttribute("data-block", String(i));
      const swatch = document.createElement("span");
      swatch.className = "legend-swatch";
      swatch.style.backgroundColor = blockColor(i);
      row.appendChild(swatch);
      const text = document.createElement("span");
      text.textContent = `cluster ${i}: ${block.join(" ")}`;
      row.appendChild(text);
      row.addEventListener("click", () => {
        if (this.callbacks.onLegendClick) this.callbacks.onLegendClick(i);
      });
      this.legend.appendChild(row);
    });
  }

  setSelection(labels: Set<string>): void {
    for (const [label, marker] of this.markers) {
      const selected = labels.has(label);
      marker.classList.toggle("selected", selected);
      if (labels.size === 0) {
        marker.setAttribute("opacity", "1");
      } else {
        marker.setAttribute("opacity", selected ? "1" : "0.45");
      }
    }
  }

  setLegendSelection(blockIndex: number | null): void {
    const rows = this.legend.querySelectorAll(".legend-row");
    rows.forEach((row, i) => {
      (row as HTMLElement).classList.toggle("selected", i === blockIndex);
    });
  }

  setAnswerHighlight(labels: string[], answer: boolean): void {
    const highlighted = new Set(labels);
    for (const [label, marker] of this.markers) {
      if (highlighted.has(label)) {
        marker.setAttribute("stroke", answerColor(answer));
        marker.setAttribute("stroke-width", "3.5");
        marker.setAttribute("data-answer", answer ? "True" : "False");
      } else {
        marker.removeAttribute("stroke");
        marker.removeAttribute("stroke-width");
        marker.removeAttribute("data-answer");
      }
    }
  }

  marker(label: string): SVGCircleElement | undefined {
    return this.markers.get(label);
  }

  markerCount(): number {
    return this.markers.size;
  }

  private toLocal(e: MouseEvent): PixelPoint {
    const rect = this.svg.getBoundingClientRect();
    return { x: e.clientX - rect.left, y: e.clientY - rect.top };
  }

  private lassoBegin(e: MouseEvent): void {
    this.lassoStart = this.toLocal(e);
  }

  private lassoMove(e: MouseEvent): void {
    if (!this.lassoStart) return;
    const here = this.toLocal(e);
    const { x, y, w, h } = normalizeRect(this.lassoStart, here);
    if (w >= CLICK_SLOP || h >= CLICK_SLOP) {
      this.lassoRect.setAttribute("visibility", "visible");
      this.lassoRect.setAttribute("x", String(x));
      this.lassoRect.setAttribute("y", String(y));
      this.lassoRect.setAttribute("width", String(w));
      this.lassoRect.setAttribute("height", String(h));
    }
  }

  private lassoEnd(e: MouseEvent): void {
    if (!this.lassoStart) return;
    const start = this.lassoStart;
    this.lassoStart = null;
    this.lassoRect.setAttribute("visibility", "hidden");
    const { x, y, w, h } = normalizeRect(start, this.toLocal(e));
    if (w < CLICK_SLOP && h < CLICK_SLOP) return;
    const caught: string[] = [];
    for (const [label, marker] of this.markers) {
      const mx = Number(marker.getAttribute("cx"));
      const my = Number(marker.getAttribute("cy"));
      if (mx >= x && mx <= x + w && my >= y && my <= y + h) caught.push(label);
    }
    if (this.callbacks.onLasso) this.callbacks.onLasso(caught);
  }

  private showTooltip(label: string): void {
    const marker = this.markers.get(label);
    if (!marker) return;
    this.tooltip.textContent = `${label}\n${marker.getAttribute("data-facts") ?? ""}`;
    this.tooltip.style.display = "";
    this.tooltip.style.left = `${Number(marker.getAttribute("cx")) + 14}px`;
    this.tooltip.style.top = `${Number(marker.getAttribute("cy")) + 14}px`;
  }

  private hideTooltip(): void {
    this.tooltip.style.display = "none";
  }
}

function normalizeRect(a: PixelPoint, b: PixelPoint): {
  x: number;
  y: number;
  w: number;
  h: number;
} {
  return {
    x: Math.min(a.x, b.x),
    y: Math.min(a.y, b.y),
    w: Math.abs(a.x - b.x),
    h: Math.abs(a.y - b.y),
  };
}
