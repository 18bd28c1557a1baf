import { describe, expect, it } from "vitest";

import { CsvError, parseSummaryCsv, SUMMARY_HEADER } from "../src/csv.js";

const ROW = "chunk,tcp,scatter,2,1024,50,0.0012,0.0001";

describe("parseSummaryCsv", () => {
  it("parses well-formed rows with exact values", () => {
    const rows = parseSummaryCsv(`${SUMMARY_HEADER}\n${ROW}\n`);
    expect(rows).toHaveLength(1);
    expect(rows[0]).toEqual({
      experiment: "chunk",
      transport: "tcp",
      strategy: "scatter",
      worldSize: 2,
      param: 1024,
      runs: 50,
      meanSeconds: 0.0012,
      ci95HalfWidth: 0.0001,
    });
  });

  it("accepts a trailing newline and blank lines", () => {
    const rows = parseSummaryCsv(`${SUMMARY_HEADER}\n${ROW}\n\n`);
    expect(rows).toHaveLength(1);
  });

  it("accepts zero confidence half-widths", () => {
    const rows = parseSummaryCsv(`${SUMMARY_HEADER}\nstrong,inproc,alltoall,4,256,50,0.5,0\n`);
    expect(rows[0].ci95HalfWidth).toBe(0);
  });

  it("rejects an empty file", () => {
    expect(() => parseSummaryCsv("")).toThrow(CsvError);
  });

  it("rejects a wrong header", () => {
    expect(() => parseSummaryCsv("a,b,c\n")).toThrow(/header/);
  });

  it("rejects a wrong field count", () => {
    expect(() => parseSummaryCsv(`${SUMMARY_HEADER}\nchunk,tcp,scatter,2,1024,50,0.1\n`))
      .toThrow(/8 fields/);
  });

  it("rejects non-numeric numbers", () => {
    expect(() => parseSummaryCsv(`${SUMMARY_HEADER}\nchunk,tcp,scatter,2,1024,50,slow,0\n`))
      .toThrow(CsvError);
  });

  it("rejects non-positive means and runs below two", () => {
    expect(() => parseSummaryCsv(`${SUMMARY_HEADER}\nchunk,tcp,scatter,2,1024,50,0,0\n`))
      .toThrow(/mean_seconds/);
    expect(() => parseSummaryCsv(`${SUMMARY_HEADER}\nchunk,tcp,scatter,2,1024,1,0.1,0\n`))
      .toThrow(/runs/);
  });
});
