import { scaleLinear } from "d3-scale";
import { Series } from "./aggregate.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 24, right: 24, bottom: 48, left: 56 };

const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
];

const fmt = (v: number) => String(Math.round(v * 100) / 100);

/**
 * Deterministic SVG line chart: mean final healthy % against agents per
 * side, one series per strategy pair, mean±std error bars and a dashed
 * reference line at 50%.  Every plotted point carries its exact source
 * values in data-* attributes so tests (and tools) can read back the
 * numbers that were plotted rather than re-deriving them from pixels.
 */
export function renderChart(series: Series[]): string {
  if (series.length === 0) {
    throw new Error("nothing to plot: no series");
  }
  const xs = series.flatMap((s) => s.points.map((p) => p.agentsPerSide));
  let xMin = Math.min(...xs);
  let xMax = Math.max(...xs);
  if (xMin === xMax) {
    xMin -= 1;
    xMax += 1;
  }
  const x = scaleLinear()
    .domain([xMin, xMax])
    .range([MARGIN.left, WIDTH - MARGIN.right]);
  const y = scaleLinear()
    .domain([0, 100])
    .range([HEIGHT - MARGIN.bottom, MARGIN.top]);

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
      `font-family="sans-serif" font-size="12">`
  );
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  // axes
  const axisY = HEIGHT - MARGIN.bottom;
  out.push(`<g class="axis axis-x">`);
  out.push(
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${WIDTH - MARGIN.right}" ` +
      `y2="${axisY}" stroke="black"/>`
  );
  for (const t of x.ticks(6)) {
    const px = fmt(x(t));
    out.push(`<line x1="${px}" y1="${axisY}" x2="${px}" y2="${axisY + 5}" stroke="black"/>`);
    out.push(
      `<text x="${px}" y="${axisY + 18}" text-anchor="middle">${t}</text>`
    );
  }
  out.push(
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 10}" ` +
      `text-anchor="middle">agents per side</text>`
  );
  out.push(`</g>`);

  out.push(`<g class="axis axis-y">`);
  out.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${axisY}" stroke="black"/>`
  );
  for (const t of [0, 25, 50, 75, 100]) {
    const py = fmt(y(t));
    out.push(
      `<line x1="${MARGIN.left - 5}" y1="${py}" x2="${MARGIN.left}" y2="${py}" stroke="black"/>`
    );
    out.push(
      `<text x="${MARGIN.left - 8}" y="${py}" text-anchor="end" ` +
        `dominant-baseline="middle">${t}</text>`
    );
  }
  out.push(
    `<text transform="translate(14,${(MARGIN.top + axisY) / 2}) rotate(-90)" ` +
      `text-anchor="middle">mean final healthy %</text>`
  );
  out.push(`</g>`);

  // the even-split reference
  const y50 = fmt(y(50));
  out.push(
    `<line class="ref-line" data-y="50" x1="${MARGIN.left}" y1="${y50}" ` +
      `x2="${WIDTH - MARGIN.right}" y2="${y50}" stroke="#888" ` +
      `stroke-dasharray="6 4"/>`
  );

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    out.push(`<g class="series" data-label="${s.label}" fill="${color}" stroke="${color}">`);
    const pts = s.points
      .map((p) => `${fmt(x(p.agentsPerSide))},${fmt(y(p.meanPct))}`)
      .join(" ");
    out.push(`<polyline points="${pts}" fill="none" stroke-width="2"/>`);
    for (const p of s.points) {
      const px = fmt(x(p.agentsPerSide));
      const lo = fmt(y(Math.max(0, p.meanPct - p.std)));
      const hi = fmt(y(Math.min(100, p.meanPct + p.std)));
      out.push(
        `<line class="error-bar" x1="${px}" y1="${lo}" x2="${px}" y2="${hi}" stroke-width="1"/>`
      );
      out.push(
        `<circle class="point" data-x="${p.agentsPerSide}" ` +
          `data-y="${p.meanPct}" data-std="${p.std}" data-games="${p.games}" ` +
          `cx="${px}" cy="${fmt(y(p.meanPct))}" r="3"/>`
      );
    }
    out.push(`</g>`);
  });

  out.push(`<g class="legend">`);
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const ly = MARGIN.top + 8 + 18 * i;
    out.push(
      `<line x1="${WIDTH - MARGIN.right - 150}" y1="${ly}" ` +
        `x2="${WIDTH - MARGIN.right - 126}" y2="${ly}" stroke="${color}" stroke-width="2"/>`
    );
    out.push(
      `<text x="${WIDTH - MARGIN.right - 120}" y="${ly + 4}">${s.label}</text>`
    );
  });
  out.push(`</g>`);
  out.push(`</svg>`);
  return out.join("\n") + "\n";
}
