import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { aggregate } from "../src/aggregate.js";
import { parseSweepCsv } from "../src/csv.js";
import { main, render } from "../src/render.js";

const FIXTURE = join(__dirname, "fixtures", "overloaded_sweep.csv");

function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "rsbeam-plot-"));
}

describe("render", () => {
  it("writes an SVG with one curve per strategy and leaves the input unchanged", () => {
    const before = readFileSync(FIXTURE);
    const out = join(tempDir(), "figure.svg");
    const svg = render({ inputCsv: FIXTURE, outputImage: out, title: "overloaded" });
    expect(readFileSync(out, "utf-8")).toBe(svg);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("RS");
    expect(svg).toContain("NoRS");
    expect(svg).toContain("SNR (dB)");
    expect(svg).toContain("MMF rate (bits/ch. use)");
    expect(svg).toContain("overloaded");
    expect(readFileSync(FIXTURE)).toEqual(before);
  });

  it("keeps the splitting curve above the conventional one on this input", () => {
    const rows = parseSweepCsv(readFileSync(FIXTURE, "utf-8"));
    const agg = aggregate(rows);
    const bySnr = new Map(
      agg.series.map((s) => [s.strategy, new Map(s.points.map((p) => [p.snrDb, p.meanRate]))]),
    );
    const rs = bySnr.get("RS")!;
    const nors = bySnr.get("NoRS")!;
    expect(rs.size).toBeGreaterThan(0);
    for (const [snr, nonSplit] of nors) {
      expect(rs.get(snr)!).toBeGreaterThanOrEqual(nonSplit);
    }
  });

  it("annotates the figure when unconverged rows were excluded", () => {
    const svg = render({
      inputCsv: FIXTURE,
      outputImage: join(tempDir(), "note.svg"),
    });
    expect(svg).toContain("unconverged row(s) excluded");
  });

  it("renders three curves from a three-strategy file", () => {
    const dir = tempDir();
    const csv = join(dir, "three.csv");
    const lines = ["snr_db,realization,strategy,mmf_rate_bits,iterations,converged,wall_time_ms"];
    for (const [snr, rs, nors, ss] of [
      [0, 0.7, 0.65, 0.5],
      [20, 3.8, 2.4, 3.4],
      [40, 7.0, 2.5, 6.6],
    ]) {
      lines.push(`${snr}.0,0,RS,${rs?.toFixed(6)},5,true,0`);
      lines.push(`${snr}.0,0,NoRS,${nors?.toFixed(6)},5,true,0`);
      lines.push(`${snr}.0,0,SS,${ss?.toFixed(6)},5,true,0`);
    }
    writeFileSync(csv, lines.join("\n") + "\n");
    const svg = render({ inputCsv: csv, outputImage: join(dir, "three.svg") });
    for (const name of ["RS", "NoRS", "SS"]) expect(svg).toContain(name);
    const agg = aggregate(parseSweepCsv(readFileSync(csv, "utf-8")));
    expect(agg.series.map((s) => s.strategy)).toEqual(["RS", "NoRS", "SS"]);
    const rs = new Map(agg.series[0].points.map((p) => [p.snrDb, p.meanRate]));
    for (const p of agg.series[1].points) {
      expect(rs.get(p.snrDb)!).toBeGreaterThanOrEqual(p.meanRate);
    }
  });

  it("renders a one-curve figure from a single-strategy file", () => {
    const dir = tempDir();
    const csv = join(dir, "single.csv");
    writeFileSync(
      csv,
      "snr_db,realization,strategy,mmf_rate_bits,iterations,converged,wall_time_ms\n" +
        "0.0,0,SS,0.500000,5,true,0\n10.0,0,SS,1.200000,7,true,0\n",
    );
    const svg = render({ inputCsv: csv, outputImage: join(dir, "single.svg") });
    expect(svg).toContain("SS");
    expect(svg).not.toContain("unconverged");
  });
});

describe("main", () => {
  it("succeeds on the fixture", () => {
    expect(main(["--csv", FIXTURE, "--out", join(tempDir(), "cli.svg")])).toBe(0);
  });

  it("fails with the documented error on schema mismatch", () => {
    const dir = tempDir();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "snr_db,strategy\n0.0,RS\n");
    expect(main(["--csv", bad, "--out", join(dir, "bad.svg")])).toBe(2);
  });

  it("fails on a header-only file", () => {
    const dir = tempDir();
    const empty = join(dir, "empty.csv");
    writeFileSync(
      empty,
      "snr_db,realization,strategy,mmf_rate_bits,iterations,converged,wall_time_ms\n",
    );
    expect(main(["--csv", empty, "--out", join(dir, "empty.svg")])).toBe(2);
  });

  it("requires the csv and out flags", () => {
    expect(main([])).toBe(2);
    expect(main(["--csv", FIXTURE])).toBe(2);
  });
});
