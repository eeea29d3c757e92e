import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { aggregate } from "./aggregate.js";
import { renderChart } from "./chart.js";
import { SchemaError, loadCsvFiles } from "./schema.js";

export async function main(argv: string[]): Promise<number> {
  const args = yargs(argv)
    .usage("$0 --in batch1.csv [batch2.csv ...] --out fig.svg")
    .option("in", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "batch CSV files to aggregate",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .option("png", {
      type: "boolean",
      default: false,
      describe: "also rasterize to PNG next to the SVG (needs sharp)",
    })
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new SchemaError(msg);
    })
    .parseSync();

  try {
    const rows = loadCsvFiles(args.in);
    const svg = renderChart(aggregate(rows));
    writeFileSync(args.out, svg);
    if (args.png) {
      const pngPath = args.out.replace(/\.svg$/, "") + ".png";
      try {
        const sharp = (await import("sharp")).default;
        await sharp(Buffer.from(svg)).png().toFile(pngPath);
      } catch (err) {
        if ((err as NodeJS.ErrnoException).code === "ERR_MODULE_NOT_FOUND") {
          console.error(
            "error: --png needs the optional sharp package (npm install sharp)"
          );
          return 1;
        }
        throw err;
      }
    }
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    if ((err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
}

const isDirectRun =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (isDirectRun) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
