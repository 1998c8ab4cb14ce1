import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { HighlightRequester } from "../src/highlight";
import { MapView } from "../src/scene";
import { SelectionController } from "../src/selection";
import { AppStore } from "../src/state";
import { fetchStub, makeAtlas, makeHighlight, makeReplot } from "./fixtures";

function setup(routes: Parameters<typeof fetchStub>[0]) {
  const atlas = makeAtlas(4, 2);
  const { impl, calls } = fetchStub(routes);
  const api = new ApiClient("", impl);
  const store = new AppStore();
  store.setAtlas(atlas);
  const imageMap = new MapView("image");
  const textMap = new MapView("text");
  imageMap.populate(atlas.textures.map((x) => ({ id: x.texture_id, coord: x.coord })));
  textMap.populate(atlas.terms.map((t) => ({ id: t.term_id, coord: t.coord })));
  return { atlas, api, store, imageMap, textMap, calls };
}

describe("SelectionController", () => {
  it("term selection highlights its 1-3 textures and fills the preview", async () => {
    const response = makeHighlight(["tex-1-0", "tex-1-1"]);
    const { api, store, imageMap, textMap } = setup({
      "/highlight?kind=term&id=term-1": response,
    });
    const controller = new SelectionController(
      new HighlightRequester(api), store, imageMap, textMap,
    );
    await controller.selectTerm("term-1");
    expect(store.selection).toEqual({ kind: "term", id: "term-1" });
    // the emphasis count always matches the service response length
    expect(imageMap.highlightCount).toBe(response.highlighted_ids.length);
    expect(textMap.highlightCount).toBe(1);
    expect(store.highlight?.preview.length).toBe(2);
  });

  it("texture selection highlights exactly one term", async () => {
    const { api, store, imageMap, textMap } = setup({
      "/highlight?kind=texture&id=tex-2-0": makeHighlight(["term-2"]),
    });
    const controller = new SelectionController(
      new HighlightRequester(api), store, imageMap, textMap,
    );
    await controller.selectTexture("tex-2-0");
    expect(textMap.highlightCount).toBe(1);
    expect(store.highlight?.highlighted_ids).toEqual(["term-2"]);
  });

  it("dynamic point selection shows stored metadata with no highlight call", async () => {
    const record = makeReplot();
    let shown: [string, string] | null = null;
    const { api, store, imageMap, textMap, calls } = setup({});
    store.addDynamicPoint(record);
    imageMap.setDynamicPoints([record]);
    textMap.setDynamicPoints([record]);
    const controller = new SelectionController(
      new HighlightRequester(api), store, imageMap, textMap,
      { showDynamicInfo: (surface, description) => (shown = [surface, description]) },
    );
    controller.selectDynamic(record.replot_id);
    expect(store.selection).toEqual({ kind: "dynamic", id: record.replot_id });
    expect(shown).toEqual([record.surface, record.description]);
    expect(imageMap.highlightCount).toBe(0);
    expect(calls.length).toBe(0); // no /highlight request went out
  });

  it("selection auto-focuses the camera on the item", async () => {
    const { api, store, imageMap, textMap } = setup({
      "/highlight?kind=texture&id=tex-3-1": makeHighlight(["term-3"]),
    });
    const controller = new SelectionController(
      new HighlightRequester(api), store, imageMap, textMap,
    );
    await controller.selectTexture("tex-3-1");
    expect(imageMap.rig.focusing).toBe(true);
  });

  it("surfaces highlight errors through the view hook", async () => {
    let message: string | null = null;
    const { api, store, imageMap, textMap } = setup({
      "/highlight?kind=term&id=term-9": new Response(
        JSON.stringify({ detail: "unknown term 'term-9'" }),
        { status: 404 },
      ),
    });
    const controller = new SelectionController(
      new HighlightRequester(api), store, imageMap, textMap,
      { onHighlightError: (m) => (message = m) },
    );
    await controller.selectTerm("term-9");
    expect(message).toContain("unknown term");
  });
});

describe("HighlightRequester (latest wins)", () => {
  it("suppresses stale responses when a newer request is in flight", async () => {
    let releaseFirst!: () => void;
    const gate = new Promise<void>((resolve) => (releaseFirst = resolve));
    const { impl } = fetchStub({
      "/highlight?kind=term&id=slow": async () => {
        await gate;
        return makeHighlight(["old"]);
      },
      "/highlight?kind=term&id=fast": makeHighlight(["new"]),
    });
    const requester = new HighlightRequester(new ApiClient("", impl));
    const slow = requester.request("term", "slow");
    const fast = requester.request("term", "fast");
    expect((await fast)?.highlighted_ids).toEqual(["new"]);
    releaseFirst();
    expect(await slow).toBeNull();
  });

  it("errors from superseded requests are swallowed", async () => {
    let failFirst!: () => void;
    const gate = new Promise<void>((resolve) => (failFirst = resolve));
    const { impl } = fetchStub({
      "/highlight?kind=term&id=doomed": async () => {
        await gate;
        return new Response("{}", { status: 500 });
      },
      "/highlight?kind=term&id=ok": makeHighlight(["fine"]),
    });
    const requester = new HighlightRequester(new ApiClient("", impl));
    const doomed = requester.request("term", "doomed");
    await requester.request("term", "ok");
    failFirst();
    expect(await doomed).toBeNull();
  });
});
