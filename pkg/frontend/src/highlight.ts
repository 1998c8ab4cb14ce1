/** Latest-wins highlight fetching: at most one request's result is ever
 * applied, and it is always the most recent one the user triggered. */

import type { ApiClient } from "./api";
import type { HighlightResponse } from "./types";

export class HighlightRequester {
  private sequence = 0;

  constructor(private readonly api: ApiClient) {}

  /** Resolves null when a newer request superseded this one (or it failed
   * after being superseded); errors from the latest request propagate. */
  async request(kind: "term" | "texture", id: string): Promise<HighlightResponse | null> {
    const ticket = ++this.sequence;
    try {
      const response = await this.api.highlight(kind, id);
      return ticket === this.sequence ? response : null;
    } catch (err) {
      if (ticket === this.sequence) throw err;
      return null;
    }
  }
}
