/** Interpolation job flow: start from two distinct gallery picks, poll the
 * service once per second, expose a frame scrubber when done, and replot a
 * chosen frame back into both maps. */

import type { ApiClient } from "./api";
import type { JobStatus, ReplotEntry } from "./types";

export const POLL_INTERVAL_MS = 1000;

export type FlowPhase = "idle" | "waiting" | "done" | "failed";

export interface FlowEvents {
  onUpdate?: (status: JobStatus) => void;
  onDone?: (framePaths: string[]) => void;
  onError?: (message: string) => void;
}

export function canInterpolate(refA: string | null, refB: string | null): boolean {
  // Mirrors the service's 409 on degenerate pairs: the action stays
  // disabled when the same item is picked twice.
  return refA !== null && refB !== null && refA !== refB;
}

export class InterpolationFlow {
  phase: FlowPhase = "idle";
  jobId: string | null = null;
  framePaths: string[] = [];
  error: string | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly events: FlowEvents = {},
    private readonly pollIntervalMs: number = POLL_INTERVAL_MS,
  ) {}

  async start(refA: string, refB: string): Promise<string> {
    if (!canInterpolate(refA, refB)) {
      throw new Error("interpolation needs two distinct items");
    }
    this.cancel();
    this.phase = "waiting";
    this.error = null;
    this.framePaths = [];
    const { job_id } = await this.api.startInterpolation(refA, refB);
    this.jobId = job_id;
    this.schedulePoll();
    return job_id;
  }

  private schedulePoll(): void {
    this.timer = setTimeout(() => {
      void this.poll();
    }, this.pollIntervalMs);
  }

  private async poll(): Promise<void> {
    if (!this.jobId) return;
    let status: JobStatus;
    try {
      status = await this.api.jobStatus(this.jobId);
    } catch (err) {
      this.phase = "failed";
      this.error = err instanceof Error ? err.message : String(err);
      this.events.onError?.(this.error);
      return;
    }
    this.events.onUpdate?.(status);
    if (status.status === "done") {
      this.phase = "done";
      this.framePaths = status.frame_paths ?? [];
      this.events.onDone?.(this.framePaths);
    } else if (status.status === "failed") {
      this.phase = "failed";
      this.error = status.error ?? "interpolation failed";
      this.events.onError?.(this.error);
    } else {
      this.schedulePoll();
    }
  }

  /** Re-embed one frame; the returned record is the new orange point. */
  async replot(frameIndex: number): Promise<ReplotEntry> {
    if (this.phase !== "done" || !this.jobId) {
      throw new Error("no finished job to replot from");
    }
    return this.api.replotFrame(this.jobId, frameIndex);
  }

  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.phase = "idle";
    this.jobId = null;
  }
}
