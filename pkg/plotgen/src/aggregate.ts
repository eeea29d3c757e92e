import { GameRow } from "./schema.js";

/** One plotted point: a (strategy pair, swarm size) cell's aggregate. */
export interface SeriesPoint {
  agentsPerSide: number;
  meanPct: number;
  std: number;
  games: number;
}

export interface Series {
  label: string;
  points: SeriesPoint[];
}

export const meanStd = (vals: number[]) => {
  const mean = vals.reduce((a, b) => a + b, 0) / vals.length;
  const variance =
    vals.reduce((a, b) => a + (b - mean) ** 2, 0) / vals.length;
  return { mean, std: Math.sqrt(variance) };
};

/** Group rows into one series per strategy pair, points sorted by size. */
export function aggregate(rows: GameRow[]): Series[] {
  const cells = new Map<string, Map<number, number[]>>();
  for (const r of rows) {
    const label = `${r.strategyHealthy} vs ${r.strategyContaminated}`;
    let sizes = cells.get(label);
    if (!sizes) {
      sizes = new Map();
      cells.set(label, sizes);
    }
    let pcts = sizes.get(r.agentsPerSide);
    if (!pcts) {
      pcts = [];
      sizes.set(r.agentsPerSide, pcts);
    }
    pcts.push(r.finalHealthyPct);
  }
  return [...cells.keys()].sort().map((label) => {
    const sizes = cells.get(label)!;
    const points = [...sizes.keys()]
      .sort((a, b) => a - b)
      .map((agentsPerSide) => {
        const pcts = sizes.get(agentsPerSide)!;
        const { mean, std } = meanStd(pcts);
        return { agentsPerSide, meanPct: mean, std, games: pcts.length };
      });
    return { label, points };
  });
}
