import { readFileSync } from "fs";
import { csvParse } from "d3-dsv";

/** One game row from the simulation batch runner. */
export interface GameRow {
  gameId: number;
  seed: number;
  agentsPerSide: number;
  strategyHealthy: string;
  strategyContaminated: string;
  steps: number;
  termination: string;
  finalHealthy: number;
  finalContaminated: number;
  finalHealthyPct: number;
}

export const REQUIRED_COLUMNS = [
  "game_id",
  "seed",
  "agents_per_side",
  "strategy_healthy",
  "strategy_contaminated",
  "steps",
  "termination",
  "final_healthy",
  "final_contaminated",
  "final_healthy_pct",
] as const;

export class SchemaError extends Error {}

function num(raw: string | undefined, column: string, line: number): number {
  const v = Number(raw);
  if (raw === undefined || raw === "" || Number.isNaN(v)) {
    throw new SchemaError(
      `row ${line}: column ${column} is not a number (got ${JSON.stringify(raw)})`
    );
  }
  return v;
}

/** Parse one batch CSV, checking the full column set up front. */
export function parseCsv(text: string, name = "<csv>"): GameRow[] {
  const parsed = csvParse(text);
  if (parsed.columns.length === 0) {
    throw new SchemaError(`${name}: empty CSV, no header row`);
  }
  for (const col of REQUIRED_COLUMNS) {
    if (!parsed.columns.includes(col)) {
      throw new SchemaError(`${name}: missing column ${col}`);
    }
  }
  return parsed.map((r, i) => {
    const row: GameRow = {
      gameId: num(r.game_id, "game_id", i + 2),
      seed: num(r.seed, "seed", i + 2),
      agentsPerSide: num(r.agents_per_side, "agents_per_side", i + 2),
      strategyHealthy: r.strategy_healthy ?? "",
      strategyContaminated: r.strategy_contaminated ?? "",
      steps: num(r.steps, "steps", i + 2),
      termination: r.termination ?? "",
      finalHealthy: num(r.final_healthy, "final_healthy", i + 2),
      finalContaminated: num(r.final_contaminated, "final_contaminated", i + 2),
      finalHealthyPct: num(r.final_healthy_pct, "final_healthy_pct", i + 2),
    };
    if (row.finalHealthyPct < 0 || row.finalHealthyPct > 100) {
      throw new SchemaError(
        `${name} row ${i + 2}: final_healthy_pct out of [0,100]`
      );
    }
    return row;
  });
}

export function loadCsvFiles(paths: string[]): GameRow[] {
  const rows: GameRow[] = [];
  for (const path of paths) {
    rows.push(...parseCsv(readFileSync(path, "utf8"), path));
  }
  if (rows.length === 0) {
    throw new SchemaError("no data rows in any input");
  }
  return rows;
}
