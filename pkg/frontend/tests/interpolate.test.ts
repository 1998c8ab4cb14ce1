import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import { InterpolationFlow, POLL_INTERVAL_MS, canInterpolate } from "../src/interpolate";
import { AppStore } from "../src/state";
import { fetchStub, makeAtlas, makeReplot } from "./fixtures";

describe("canInterpolate", () => {
  it("requires two distinct picks (mirrors the service 409)", () => {
    expect(canInterpolate("a", "b")).toBe(true);
    expect(canInterpolate("a", "a")).toBe(false);
    expect(canInterpolate("a", null)).toBe(false);
    expect(canInterpolate(null, null)).toBe(false);
  });
});

describe("InterpolationFlow", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  function jobRoutes(statuses: Array<Record<string, unknown>>) {
    let call = 0;
    return {
      "POST /interpolate": { job_id: "job-0007" },
      "/interpolate/job-0007": () => statuses[Math.min(call++, statuses.length - 1)]!,
      "POST /interpolate/job-0007/replot": makeReplot(),
    };
  }

  it("polls once per second until the job is done, then exposes frames", async () => {
    const framePaths = Array.from({ length: 16 }, (_, i) => `jobs/job-0007/frame_${i}.png`);
    const { impl, calls } = fetchStub(
      jobRoutes([
        { job_id: "job-0007", status: "running", frame_count: 0, error: null },
        { job_id: "job-0007", status: "running", frame_count: 0, error: null },
        {
          job_id: "job-0007",
          status: "done",
          frame_count: 16,
          error: null,
          frame_paths: framePaths,
        },
      ]),
    );
    const done = vi.fn();
    const flow = new InterpolationFlow(new ApiClient("", impl), { onDone: done });
    await flow.start("tex-a", "tex-b");
    expect(flow.phase).toBe("waiting");

    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS);
    expect(calls.filter((c) => c.url === "/interpolate/job-0007").length).toBe(1);
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS);
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS);

    expect(flow.phase).toBe("done");
    expect(flow.framePaths.length).toBe(16);
    expect(done).toHaveBeenCalledWith(framePaths);
    // no further polling after completion
    await vi.advanceTimersByTimeAsync(5 * POLL_INTERVAL_MS);
    expect(calls.filter((c) => c.url === "/interpolate/job-0007").length).toBe(3);
  });

  it("rejects a degenerate pair without calling the service", async () => {
    const { impl, calls } = fetchStub({});
    const flow = new InterpolationFlow(new ApiClient("", impl));
    await expect(flow.start("same", "same")).rejects.toThrow(/distinct/);
    expect(calls.length).toBe(0);
  });

  it("reports failed jobs through onError", async () => {
    const { impl } = fetchStub(
      jobRoutes([{ job_id: "job-0007", status: "failed", frame_count: 0, error: "boom" }]),
    );
    const onError = vi.fn();
    const flow = new InterpolationFlow(new ApiClient("", impl), { onError });
    await flow.start("a", "b");
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS);
    expect(flow.phase).toBe("failed");
    expect(onError).toHaveBeenCalledWith("boom");
  });

  it("replot pushes the orange record into the store for both maps", async () => {
    const { impl } = fetchStub(
      jobRoutes([
        {
          job_id: "job-0007",
          status: "done",
          frame_count: 16,
          error: null,
          frame_paths: ["jobs/job-0007/frame_00.png"],
        },
      ]),
    );
    const store = new AppStore();
    store.setAtlas(makeAtlas());
    const flow = new InterpolationFlow(new ApiClient("", impl));
    await flow.start("a", "b");
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS);
    const record = await flow.replot(7);
    store.addDynamicPoint(record);
    expect(record.display_color).toBe("orange");
    expect(store.atlas?.dynamic_points.length).toBe(1);
  });

  it("refuses to replot before the job is done", async () => {
    const { impl } = fetchStub(
      jobRoutes([{ job_id: "job-0007", status: "running", frame_count: 0, error: null }]),
    );
    const flow = new InterpolationFlow(new ApiClient("", impl));
    await flow.start("a", "b");
    await expect(flow.replot(0)).rejects.toThrow(/no finished job/);
  });
});
