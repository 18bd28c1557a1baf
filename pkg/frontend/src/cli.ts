/** CLI: `plot chunk|strong --csv PATH --out PATH.png`
 *
 * Exit codes: 0 success, 1 bad or missing data, 2 usage error.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { renderChart } from "./chart.js";
import { CsvError, parseSummaryCsv } from "./csv.js";
import { encodePng } from "./png.js";
import { buildChunkChart, buildStrongChart } from "./plot.js";

const USAGE = "usage: plot chunk|strong --csv <summary.csv> --out <figure.png>";

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        csv: { type: "string" },
        out: { type: "string" },
      },
    });
  } catch (err) {
    console.error(`${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  const [mode] = parsed.positionals;
  const { csv, out } = parsed.values;
  if (parsed.positionals.length !== 1 || (mode !== "chunk" && mode !== "strong") || !csv || !out) {
    console.error(USAGE);
    return 2;
  }

  let text: string;
  try {
    text = readFileSync(csv, "utf-8");
  } catch (err) {
    console.error(`cannot read ${csv}: ${(err as Error).message}`);
    return 1;
  }

  try {
    const rows = parseSummaryCsv(text);
    const spec = mode === "chunk" ? buildChunkChart(rows) : buildStrongChart(rows);
    writeFileSync(out, encodePng(renderChart(spec)));
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`bad CSV: ${err.message}`);
      return 1;
    }
    throw err;
  }
  console.log(`wrote ${out}`);
  return 0;
}

const entry = process.argv[1];
if (entry !== undefined && fileURLToPath(import.meta.url) === resolve(entry)) {
  process.exit(main(process.argv.slice(2)));
}
