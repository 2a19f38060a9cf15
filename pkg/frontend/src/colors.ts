/** Color scale for per-face congruence residuals.
 *
 * Residuals of a faithful isometric motion sit at floating-point noise
 * (~1e-15); anything above 1e-9 would mean the motion distorts a face.  The
 * scale is logarithmic from 1e-16 (calm blue) to 1e-6 (alarm red).
 */

const LOG_LO = -16;
const LOG_HI = -6;

export function residualFraction(residual: number): number {
  const r = Math.max(residual, 1e-300);
  const f = (Math.log10(r) - LOG_LO) / (LOG_HI - LOG_LO);
  return Math.min(Math.max(f, 0), 1);
}

export function residualColor(residual: number): string {
  const f = residualFraction(residual);
  const hue = 210 * (1 - f); // 210 = blue, 0 = red
  return `hsl(${hue.toFixed(0)}, 70%, ${55 - 10 * f}%)`;
}

export function formatResidual(residual: number): string {
  return residual.toExponential(2);
}
