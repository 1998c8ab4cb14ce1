import type { AtlasPayload, HighlightResponse, ReplotEntry } from "../src/types";

export function makeAtlas(terms = 4, texturesPerTerm = 2): AtlasPayload {
  const termEntries = [];
  const textureEntries = [];
  for (let i = 0; i < terms; i++) {
    const termId = `term-${i}`;
    termEntries.push({
      term_id: termId,
      surface: `Mimetic${i}`,
      english_description: `description ${i}`,
      coord: [i * 1.0, -i * 0.5] as [number, number],
    });
    for (let j = 0; j < texturesPerTerm; j++) {
      const textureId = `tex-${i}-${j}`;
      textureEntries.push({
        texture_id: textureId,
        term_id: termId,
        image_path: `images/${textureId}.png`,
        thumbnail_path: `thumbs/${textureId}.png`,
        coord: [i + j * 0.25, j * 1.0] as [number, number],
      });
    }
  }
  return {
    version: 1,
    counts: { terms, textures: termEntries.length * texturesPerTerm },
    terms: termEntries,
    textures: textureEntries,
    dynamic_points: [],
    bounds: {
      image: { min_x: -10, min_y: -10, max_x: 10, max_y: 10 },
      text: { min_x: -10, min_y: -10, max_x: 10, max_y: 10 },
    },
  };
}

export function makeReplot(id = "replot-0000"): ReplotEntry {
  return {
    replot_id: id,
    job_id: "job-0000",
    frame_index: 7,
    surface: "Fuwafuwa",
    description: "a soft billowing impression",
    image_coord: [1.5, -2.0],
    text_coord: [0.5, 0.75],
    dynamic: true,
    display_color: "orange",
  };
}

export function makeHighlight(ids: string[]): HighlightResponse {
  return {
    highlighted_ids: ids,
    preview: ids.map((id) => ({
      texture_id: id,
      thumbnail_path: `thumbs/${id}.png`,
      image_path: `images/${id}.png`,
    })),
  };
}

type Handler = (init?: RequestInit) => unknown | Promise<unknown>;

/** Tiny fetch stub: route string -> JSON payload or handler. */
export function fetchStub(routes: Record<string, Handler | unknown>) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    calls.push({ url, init });
    const method = init?.method ?? "GET";
    const key = `${method} ${url}`;
    const handler = key in routes ? routes[key] : routes[url];
    if (handler === undefined) {
      return new Response(JSON.stringify({ detail: `no route ${key}` }), { status: 404 });
    }
    const body = typeof handler === "function" ? await (handler as Handler)(init) : handler;
    if (body instanceof Response) return body;
    return new Response(JSON.stringify(body), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { impl: impl as typeof fetch, calls };
}
