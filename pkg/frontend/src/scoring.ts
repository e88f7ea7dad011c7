// Client-side mirror of the server's final-score computation, in exact
// integer arithmetic so the live preview always matches the server response.

export type Selection = "unset" | "na" | 0 | 1 | 2 | 3 | 4;

export const FEATURE_COUNT = 11;

export type Preview =
  | { state: "incomplete" }
  | { state: "all-na" }
  | { state: "score"; numerator: number; applicableCount: number; display: string };

/** Round-half-up of n/d to `places` decimals, using integers only. */
export function formatRatio(n: number, d: number, places: number): string {
  const scale = 10 ** places;
  const num = n * scale;
  let q = Math.floor(num / d);
  const rem = num - q * d;
  if (2 * rem >= d) q += 1;
  const whole = Math.floor(q / scale);
  const frac = (q - whole * scale).toString().padStart(places, "0");
  return `${whole}.${frac}`;
}

export function computePreview(selections: Selection[]): Preview {
  if (selections.length !== FEATURE_COUNT) {
    throw new Error(`expected ${FEATURE_COUNT} selections, got ${selections.length}`);
  }
  if (selections.some((s) => s === "unset")) {
    return { state: "incomplete" };
  }
  const levels = selections.filter((s): s is 0 | 1 | 2 | 3 | 4 => s !== "na");
  if (levels.length === 0) {
    return { state: "all-na" };
  }
  const numerator = levels.reduce<number>((a, b) => a + b, 0);
  const applicableCount = levels.length;
  return {
    state: "score",
    numerator,
    applicableCount,
    display: formatRatio(numerator, 4 * applicableCount, 2),
  };
}

/** The server prints final scores with 4 decimals; used for parity checks. */
export function serverFormat(selections: Selection[]): string | null {
  const preview = computePreview(selections);
  if (preview.state !== "score") return null;
  return formatRatio(preview.numerator, 4 * preview.applicableCount, 4);
}

/** Submit wire format: NA as null. */
export function toWire(selections: Selection[]): (number | null)[] {
  return selections.map((s) => (s === "na" ? null : s === "unset" ? null : s));
}

export function canSubmit(selections: Selection[]): boolean {
  return (
    selections.length === FEATURE_COUNT &&
    selections.every((s) => s !== "unset") &&
    selections.some((s) => s !== "na")
  );
}
