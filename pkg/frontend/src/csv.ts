/** Summary-CSV ingestion. The schema is the contract with the benchmark
 * harness: one header line, comma-separated, LF newlines. */

export const SUMMARY_HEADER =
  "experiment,transport,strategy,world_size,param,runs,mean_seconds,ci95_half_width";

export interface SummaryRow {
  experiment: string;
  transport: string;
  strategy: string;
  worldSize: number;
  param: number;
  runs: number;
  meanSeconds: number;
  ci95HalfWidth: number;
}

export class CsvError extends Error {}

function toInt(field: string, line: number): number {
  const v = Number(field);
  if (!Number.isInteger(v)) {
    throw new CsvError(`line ${line}: expected integer, got ${JSON.stringify(field)}`);
  }
  return v;
}

function toFinite(field: string, line: number): number {
  const v = Number(field);
  if (field.trim() === "" || !Number.isFinite(v)) {
    throw new CsvError(`line ${line}: expected number, got ${JSON.stringify(field)}`);
  }
  return v;
}

export function parseSummaryCsv(text: string): SummaryRow[] {
  const lines = text.split("\n");
  if (lines.length === 0 || lines[0].trim() === "") {
    throw new CsvError("empty CSV");
  }
  if (lines[0].trim() !== SUMMARY_HEADER) {
    throw new CsvError(`unexpected header: ${JSON.stringify(lines[0].trim())}`);
  }
  const rows: SummaryRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "") continue;
    const fields = line.split(",");
    if (fields.length !== 8) {
      throw new CsvError(`line ${i + 1}: expected 8 fields, got ${fields.length}`);
    }
    const row: SummaryRow = {
      experiment: fields[0],
      transport: fields[1],
      strategy: fields[2],
      worldSize: toInt(fields[3], i + 1),
      param: toInt(fields[4], i + 1),
      runs: toInt(fields[5], i + 1),
      meanSeconds: toFinite(fields[6], i + 1),
      ci95HalfWidth: toFinite(fields[7], i + 1),
    };
    if (row.runs < 2) {
      throw new CsvError(`line ${i + 1}: runs must be >= 2, got ${row.runs}`);
    }
    if (!(row.meanSeconds > 0)) {
      throw new CsvError(`line ${i + 1}: mean_seconds must be > 0, got ${row.meanSeconds}`);
    }
    if (row.ci95HalfWidth < 0) {
      throw new CsvError(`line ${i + 1}: ci95_half_width must be >= 0`);
    }
    rows.push(row);
  }
  return rows;
}
