/**
 * Review-flow contract tests against recorded evaluate responses from
 * the live service on the ten-frame fixture dataset. The displayed
 * metrics must be the wire values untouched; the UI computes nothing.
 */

import { describe, expect, it } from "vitest";

import { aggregateLines, badge, disagreements, orderedRows } from "../src/review";
import type { EvaluateResponse } from "../src/types";
import evaluateBaselineJson from "./fixtures/evaluate_cv_baseline.json";
import evaluatePerfectJson from "./fixtures/evaluate_perfect.json";

const baseline = evaluateBaselineJson as unknown as EvaluateResponse;
const perfect = evaluatePerfectJson as unknown as EvaluateResponse;

describe("fixture disagreement", () => {
  it("is a single frame at soft accuracy near 0.472", () => {
    const rows = disagreements(baseline);
    expect(rows).toHaveLength(1);
    const only = rows[0]!;
    expect(only.frame_id).toBe("f05");
    expect(only.soft_accuracy).toBeCloseTo(0.472, 3);
    // full-precision value straight from the scoring service
    expect(Math.abs(only.soft_accuracy - 0.4723665527410147)).toBeLessThan(
      1e-9,
    );
  });

  it("sorts the review list ascending by soft accuracy, worst first", () => {
    const rows = orderedRows(baseline);
    expect(rows[0]!.frame_id).toBe("f05");
    for (let i = 1; i < rows.length; i++) {
      expect(rows[i]!.soft_accuracy).toBeGreaterThanOrEqual(
        rows[i - 1]!.soft_accuracy,
      );
    }
    // sorting returned a copy; the response itself keeps wire order
    expect(baseline.per_frame[0]!.frame_id).toBe("f00");
  });

  it("formats the disagreement badge from the wire value", () => {
    const row = disagreements(baseline)[0]!;
    const b = badge(row);
    expect(b.text).toBe("level 1, deviation 25.0 deg, soft 0.472");
  });
});

describe("displayed metrics equal the recorded response exactly", () => {
  it("badge carries the wire numbers unmodified for every frame", () => {
    for (const row of baseline.per_frame) {
      const b = badge(row);
      expect(Object.is(b.soft, row.soft_accuracy)).toBe(true);
      expect(Object.is(b.level, row.level)).toBe(true);
      expect(
        row.deviation === null
          ? b.deviation === null
          : Object.is(b.deviation, row.deviation),
      ).toBe(true);
      // and the text is a pure formatting of those same numbers
      const expected =
        row.deviation === null
          ? `level ${row.level}, soft ${row.soft_accuracy.toFixed(3)}`
          : `level ${row.level}, deviation ${row.deviation.toFixed(1)} deg, ` +
            `soft ${row.soft_accuracy.toFixed(3)}`;
      expect(b.text).toBe(expected);
    }
  });

  it("aggregate lines restate the wire aggregate", () => {
    const a = baseline.aggregate;
    const lines = aggregateLines(baseline);
    expect(lines[0]).toBe(`frames ${a.n_frames}`);
    expect(lines[1]).toBe(`exact match ${a.exact_match_rate.toFixed(1)} %`);
    expect(lines[2]).toBe(
      `mean soft accuracy ${a.mean_soft_accuracy.toFixed(2)} %`,
    );
    expect(lines[3]).toBe(
      `mean deviation ${(a.mean_deviation as number).toFixed(2)} deg`,
    );
  });

  it("ordering never alters a row object", () => {
    const rows = orderedRows(baseline);
    for (const row of rows) {
      const original = baseline.per_frame.find(
        (r) => r.frame_id === row.frame_id,
      );
      expect(row).toBe(original);
    }
  });
});

describe("perfect method", () => {
  it("yields an empty disagreement list", () => {
    expect(disagreements(perfect)).toHaveLength(0);
    for (const row of perfect.per_frame) {
      expect(row.soft_accuracy).toBe(1);
    }
  });
});
