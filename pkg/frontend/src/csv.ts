/**
 * Minimal CSV reading with schema checks for the study files.
 *
 * The producers write plain comma-separated values without quoting, so a
 * split-based parser is enough. Schema failures always name the offending
 * column so the CLI can surface it.
 */

export interface Table {
  header: string[];
  rows: string[][];
}

export class SchemaError extends Error {
  constructor(message: string, readonly column?: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export function parseCsv(text: string, file: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${file}: CSV is empty`);
  }
  const header = lines[0].split(",").map((token) => token.trim());
  const rows = lines.slice(1).map((line) => line.split(",").map((t) => t.trim()));
  if (rows.length === 0) {
    throw new SchemaError(`${file}: CSV has a header but no data rows`);
  }
  const bad = rows.findIndex((row) => row.length !== header.length);
  if (bad >= 0) {
    throw new SchemaError(
      `${file}: row ${bad + 2} has ${rows[bad].length} fields, expected ${header.length}`,
    );
  }
  return { header, rows };
}

/**
 * Map required column names to indices; extra columns are tolerated so the
 * producers can append diagnostics without breaking rendering.
 */
export function requireColumns(
  table: Table,
  required: string[],
  file: string,
): Record<string, number> {
  const index: Record<string, number> = {};
  for (const name of required) {
    const at = table.header.indexOf(name);
    if (at < 0) {
      throw new SchemaError(`${file}: missing column '${name}'`, name);
    }
    index[name] = at;
  }
  return index;
}

export function numericColumn(
  table: Table,
  column: string,
  at: number,
  file: string,
): number[] {
  return table.rows.map((row, i) => {
    const value = Number(row[at]);
    if (!Number.isFinite(value)) {
      throw new SchemaError(
        `${file}: column '${column}' row ${i + 2} is not numeric: '${row[at]}'`,
        column,
      );
    }
    return value;
  });
}
