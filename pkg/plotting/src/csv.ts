import Papa from "papaparse";

export const REQUIRED_COLUMNS = [
  "snr_db",
  "realization",
  "strategy",
  "mmf_rate_bits",
  "iterations",
  "converged",
  "wall_time_ms",
] as const;

export interface SweepRow {
  snrDb: number;
  realization: number;
  strategy: string;
  mmfRateBits: number;
  iterations: number;
  converged: boolean;
  wallTimeMs: number;
}

export class CsvSchemaError extends Error {}

/** Parse a sweep CSV, rejecting inputs that do not match the schema. */
export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  const missing = REQUIRED_COLUMNS.filter((column) => !fields.includes(column));
  if (missing.length > 0) {
    throw new CsvSchemaError(`missing column(s): ${missing.join(", ")}`);
  }
  if (parsed.data.length === 0) {
    throw new CsvSchemaError("no data rows");
  }
  return parsed.data.map((record, index) => {
    const row: SweepRow = {
      snrDb: Number(record.snr_db),
      realization: Number(record.realization),
      strategy: record.strategy ?? "",
      mmfRateBits: Number(record.mmf_rate_bits),
      iterations: Number(record.iterations),
      converged: record.converged === "true",
      wallTimeMs: Number(record.wall_time_ms),
    };
    if (
      !Number.isFinite(row.snrDb) ||
      !Number.isFinite(row.mmfRateBits) ||
      row.strategy === ""
    ) {
      throw new CsvSchemaError(`unparseable data row ${index + 1}`);
    }
    return row;
  });
}
