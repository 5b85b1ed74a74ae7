/** Display rounding used everywhere a service figure is shown.
 *
 * All figures (gross, budget, acquaintance, objective) render with the
 * same fixed number of decimals, so "equal within display rounding"
 * means within half a unit of the last shown digit.
 */

export const DISPLAY_DECIMALS = 2;

/** Half a unit in the last displayed place. */
export const DISPLAY_TOLERANCE = 0.5 * 10 ** -DISPLAY_DECIMALS;

export function fmtFigure(x: number): string {
  return x.toFixed(DISPLAY_DECIMALS);
}

/** Deltas carry an explicit sign so the panel reads as a ledger. */
export function fmtSigned(x: number): string {
  return (x >= 0 ? "+" : "") + x.toFixed(DISPLAY_DECIMALS);
}
