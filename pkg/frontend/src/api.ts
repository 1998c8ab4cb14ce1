/** Typed client for the exploration service. All UI state flows from here:
 * the client never computes similarities or links on its own. */

import type {
  AtlasPayload,
  GalleryItem,
  HighlightResponse,
  JobStatus,
  ReplotEntry,
  TargetObject,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  fileUrl(relPath: string): string {
    return `${this.baseUrl}/files/${relPath}`;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(0, err instanceof Error ? err.message : String(err));
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  fetchAtlas(): Promise<AtlasPayload> {
    return this.request<AtlasPayload>("/atlas");
  }

  fetchObjects(): Promise<{ objects: TargetObject[] }> {
    return this.request<{ objects: TargetObject[] }>("/objects");
  }

  highlight(kind: "term" | "texture", id: string): Promise<HighlightResponse> {
    const params = new URLSearchParams({ kind, id });
    return this.request<HighlightResponse>(`/highlight?${params}`);
  }

  listGallery(): Promise<{ items: GalleryItem[] }> {
    return this.request<{ items: GalleryItem[] }>("/gallery");
  }

  addGalleryItem(ref: string): Promise<GalleryItem> {
    return this.post<GalleryItem>("/gallery", { ref });
  }

  deleteGalleryItem(itemId: string): Promise<{ deleted: string }> {
    return this.request<{ deleted: string }>(`/gallery/${itemId}`, { method: "DELETE" });
  }

  applyTexture(objectId: string, ref: string): Promise<{ composite_image_path: string }> {
    return this.post<{ composite_image_path: string }>("/apply", {
      object_id: objectId,
      ref,
    });
  }

  startInterpolation(textureA: string, textureB: string): Promise<{ job_id: string }> {
    return this.post<{ job_id: string }>("/interpolate", {
      texture_a: textureA,
      texture_b: textureB,
    });
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.request<JobStatus>(`/interpolate/${jobId}`);
  }

  replotFrame(jobId: string, frameIndex: number): Promise<ReplotEntry> {
    return this.post<ReplotEntry>(`/interpolate/${jobId}/replot`, {
      frame_index: frameIndex,
    });
  }
}
