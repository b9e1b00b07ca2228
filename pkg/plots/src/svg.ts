/**
 * Minimal deterministic SVG line charts: linear x, log10 y, grid,
 * legend.  No timestamps, ids, or randomness, so identical inputs give
 * byte-identical output.
 */

export interface Series {
  label: string;
  xs: number[];
  ys: number[]; // all > 0, same length as xs
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 78, right: 24, top: 24, bottom: 52 };

const PALETTE = ["#0072b2", "#d55e00", "#009e73", "#cc79a7", "#e69f00", "#56b4e9"];

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    const e = Math.floor(Math.log10(a) + 1e-12);
    const m = v / 10 ** e;
    let ms = m.toPrecision(3);
    if (ms.includes(".")) ms = ms.replace(/0+$/, "").replace(/\.$/, "");
    return `${ms}e${e}`;
  }
  let s = v.toPrecision(6);
  if (s.includes(".")) s = s.replace(/0+$/, "").replace(/\.$/, "");
  return s;
}

function coord(v: number): string {
  return v.toFixed(2);
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function linTicks(lo: number, hi: number, want = 6): number[] {
  if (!(hi > lo)) return [lo];
  const step0 = (hi - lo) / (want - 1);
  const mag = 10 ** Math.floor(Math.log10(step0));
  const norm = step0 / mag;
  const step = (norm >= 5 ? 10 : norm >= 2.5 ? 5 : norm >= 1.5 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const eLo = Math.ceil(Math.log10(lo) - 1e-9);
  const eHi = Math.floor(Math.log10(hi) + 1e-9);
  const ticks: number[] = [];
  if (eHi >= eLo) {
    // at most ~9 decade labels
    const step = Math.max(1, Math.ceil((eHi - eLo + 1) / 9));
    for (let e = eLo; e <= eHi; e += step) ticks.push(10 ** e);
  }
  if (ticks.length >= 2) return ticks;
  // under a decade of range: 1-2-5 mantissa ticks
  const fine: number[] = [];
  for (let e = Math.floor(Math.log10(lo)) - 1; e <= eHi + 1; e++) {
    for (const m of [1, 2, 5]) {
      const t = m * 10 ** e;
      if (t >= lo * 0.999 && t <= hi * 1.001) fine.push(t);
    }
  }
  return fine.length >= 2 ? fine : [lo, hi];
}

export function lineChart(series: Series[], xLabel: string, yLabel: string): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;

  let xLo = Infinity;
  let xHi = -Infinity;
  let yLo = Infinity;
  let yHi = -Infinity;
  for (const s of series) {
    for (const v of s.xs) {
      if (v < xLo) xLo = v;
      if (v > xHi) xHi = v;
    }
    for (const v of s.ys) {
      if (v < yLo) yLo = v;
      if (v > yHi) yHi = v;
    }
  }
  if (xHi === xLo) {
    const pad = Math.abs(xLo) > 0 ? Math.abs(xLo) * 0.5 : 0.5;
    xLo -= pad;
    xHi += pad;
  }
  let lLo = Math.log10(yLo);
  let lHi = Math.log10(yHi);
  if (lHi === lLo) {
    lLo -= 0.5;
    lHi += 0.5;
  } else {
    const pad = (lHi - lLo) * 0.05;
    lLo -= pad;
    lHi += pad;
  }

  const sx = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW;
  const sy = (v: number) => MARGIN.top + (1 - (Math.log10(v) - lLo) / (lHi - lLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);

  // grid and ticks
  for (const t of linTicks(xLo, xHi)) {
    const px = coord(sx(t));
    parts.push(
      `<line x1="${px}" y1="${MARGIN.top}" x2="${px}" y2="${MARGIN.top + plotH}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" ` +
        `fill="#333333">${fmt(t)}</text>`,
    );
  }
  for (const t of logTicks(yLo, yHi)) {
    const py = coord(sy(t));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${MARGIN.left + plotW}" y2="${py}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" ` +
        `fill="#333333">${fmt(t)}</text>`,
    );
  }

  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333333" stroke-width="1"/>`,
  );

  // axis labels
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle" ` +
      `fill="#000000">${escapeXml(xLabel)}</text>`,
  );
  parts.push(
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" fill="#000000" ` +
      `transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">${escapeXml(yLabel)}</text>`,
  );

  // curves
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    if (s.xs.length === 1) {
      parts.push(
        `<circle cx="${coord(sx(s.xs[0]))}" cy="${coord(sy(s.ys[0]))}" r="3" ` +
          `fill="${color}"/>`,
      );
      return;
    }
    const pts = s.xs.map((x, j) => `${coord(sx(x))},${coord(sy(s.ys[j]))}`).join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
  });

  // legend, top right inside the frame
  const legendW = Math.max(...series.map((s) => s.label.length)) * 7.2 + 36;
  const legendX = MARGIN.left + plotW - legendW - 10;
  const legendY = MARGIN.top + 10;
  parts.push(
    `<rect x="${legendX}" y="${legendY}" width="${coord(legendW)}" ` +
      `height="${series.length * 18 + 10}" fill="#ffffff" fill-opacity="0.85" ` +
      `stroke="#999999" stroke-width="0.5"/>`,
  );
  series.forEach((s, i) => {
    const rowY = legendY + 14 + i * 18;
    const color = PALETTE[i % PALETTE.length];
    parts.push(
      `<line x1="${legendX + 8}" y1="${rowY - 4}" x2="${legendX + 26}" y2="${rowY - 4}" ` +
        `stroke="${color}" stroke-width="2.5"/>`,
    );
    parts.push(
      `<text x="${legendX + 31}" y="${rowY}" fill="#000000">${escapeXml(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
