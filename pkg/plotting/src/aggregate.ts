import type { SweepRow } from "./csv.js";

export interface SeriesPoint {
  snrDb: number;
  meanRate: number;
}

export interface StrategySeries {
  strategy: string;
  points: SeriesPoint[];
}

export interface Aggregation {
  series: StrategySeries[];
  /** rows dropped because their solve did not converge */
  excludedRows: number;
}

/**
 * Mean rate per (SNR, strategy) over converged rows, in ascending SNR order.
 * Plain arithmetic means: no smoothing or resampling, so the plotted values
 * are exactly the CSV averages. Strategy order follows the given list when
 * present, first appearance in the rows otherwise; names are not validated.
 */
export function aggregate(rows: SweepRow[], strategies?: string[]): Aggregation {
  const kept = rows.filter((row) => row.converged);
  const excludedRows = rows.length - kept.length;

  const order: string[] = [];
  for (const row of rows) {
    if (!order.includes(row.strategy)) order.push(row.strategy);
  }
  const selected = strategies ?? order;

  const series: StrategySeries[] = [];
  for (const strategy of selected) {
    const sums = new Map<number, { total: number; count: number }>();
    for (const row of kept) {
      if (row.strategy !== strategy) continue;
      const bucket = sums.get(row.snrDb) ?? { total: 0, count: 0 };
      bucket.total += row.mmfRateBits;
      bucket.count += 1;
      sums.set(row.snrDb, bucket);
    }
    const points = [...sums.entries()]
      .map(([snrDb, { total, count }]) => ({ snrDb, meanRate: total / count }))
      .sort((a, b) => a.snrDb - b.snrDb);
    series.push({ strategy, points });
  }
  return { series, excludedRows };
}
