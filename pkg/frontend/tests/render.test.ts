import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { parseBound, parseTrace } from "../src/csv.js";
import { HEIGHT, WIDTH, renderFigure } from "../src/render.js";

const FIXTURES = join(__dirname, "fixtures");

function trace(name: string) {
  return parseTrace(readFileSync(join(FIXTURES, name), "utf8"), name);
}

function bound(name: string) {
  return parseBound(readFileSync(join(FIXTURES, name), "utf8"), name);
}

describe("renderFigure", () => {
  it("draws one polyline per series plus the bound curve", () => {
    const svg = renderFigure({
      series: [
        { label: "p=1", points: trace("trace_p1_seed0.csv") },
        { label: "p=2", points: trace("trace_p2_seed0.csv") },
      ],
      bound: bound("bound_p1.csv"),
      title: "benchmark",
    });
    expect(svg).toContain("<svg");
    expect(svg.match(/<polyline/g)!.length).toBe(3);
    expect(svg).toContain("p=1");
    expect(svg).toContain("theoretical bound");
    expect(svg).toContain("benchmark");
  });

  it("has fixed output dimensions regardless of data", () => {
    const one = renderFigure({ series: [{ label: "a", points: trace("trace_p1_seed0.csv") }] });
    const two = renderFigure({
      series: [
        { label: "a", points: trace("trace_p1_seed0.csv") },
        { label: "b", points: trace("trace_p1.8_seed0.csv") },
      ],
    });
    for (const svg of [one, two]) {
      expect(svg).toContain(`width="${WIDTH}" height="${HEIGHT}"`);
    }
  });

  it("is deterministic for a fixed spec", () => {
    const spec = {
      series: [{ label: "x", points: trace("trace_p1.8_seed0.csv") }],
      bound: bound("bound_p1.8.csv"),
    };
    expect(renderFigure(spec)).toBe(renderFigure(spec));
  });

  it("refuses to plot when nothing is positive", () => {
    const flat = [{ k: 0, fY: 0, gap: 0, oracleCalls: 1, elapsedMs: 0 }];
    expect(() => renderFigure({ series: [{ label: "zero", points: flat }] })).toThrow(
      /no positive finite gap/,
    );
  });

  it("requires at least one series", () => {
    expect(() => renderFigure({ series: [] })).toThrow(/at least one trace/);
  });
});
