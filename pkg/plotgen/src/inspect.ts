/** Read back the data a chart actually plotted.
 *
 * The renderer stamps every point with data-* attributes; this parses
 * them out of the SVG text so tests can compare plotted arrays against
 * source aggregates without a DOM or pixel scraping.
 */

export interface PlottedPoint {
  x: number;
  y: number;
  std: number;
  games: number;
}

export interface PlottedSeries {
  label: string;
  points: PlottedPoint[];
}

export interface ChartData {
  refLineAt: number | null;
  series: PlottedSeries[];
  legend: string[];
}

const SERIES_RE = /<g class="series" data-label="([^"]*)"[^>]*>([\s\S]*?)<\/g>/g;
const POINT_RE =
  /<circle class="point" data-x="([^"]*)" data-y="([^"]*)" data-std="([^"]*)" data-games="([^"]*)"/g;
const REF_RE = /<line class="ref-line" data-y="([^"]*)"/;
const LEGEND_RE = /<g class="legend">([\s\S]*?)<\/g>/;
const TEXT_RE = /<text[^>]*>([^<]*)<\/text>/g;

export function readChartData(svg: string): ChartData {
  const ref = svg.match(REF_RE);
  const series: PlottedSeries[] = [];
  for (const m of svg.matchAll(SERIES_RE)) {
    const points: PlottedPoint[] = [];
    for (const p of m[2].matchAll(POINT_RE)) {
      points.push({
        x: Number(p[1]),
        y: Number(p[2]),
        std: Number(p[3]),
        games: Number(p[4]),
      });
    }
    series.push({ label: m[1], points });
  }
  const legendBlock = svg.match(LEGEND_RE);
  const legend: string[] = [];
  if (legendBlock) {
    for (const t of legendBlock[1].matchAll(TEXT_RE)) {
      legend.push(t[1]);
    }
  }
  return {
    refLineAt: ref ? Number(ref[1]) : null,
    series,
    legend,
  };
}
