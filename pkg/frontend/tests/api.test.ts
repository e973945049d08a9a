import { describe, expect, it } from "vitest";

import { ApiError, WorkbenchApi } from "../src/api.js";
import { fixtureLayout, stubFetch } from "./fixtures.js";

describe("WorkbenchApi", () => {
  it("layout round-trips the slider through the scale query parameter", async () => {
    const log = stubFetch([
      (url) =>
        url.includes("/layout")
          ? { status: 200, body: fixtureLayout(2.5) }
          : null,
    ]);
    const api = new WorkbenchApi("");
    const layout = await api.layout("sess-1", 2.5);
    expect(log[0].url).toBe("/sessions/sess-1/layout?scale=2.5");
    expect(layout.scale).toBe(2.5);
  });

  it("omits the parameter when no scale is requested", async () => {
    const log = stubFetch([
      () => ({ status: 200, body: fixtureLayout(1.0) }),
    ]);
    await new WorkbenchApi("").layout("sess-1");
    expect(log[0].url).toBe("/sessions/sess-1/layout");
  });

  it("posts ideate bodies and parses suggestions", async () => {
    const log = stubFetch([
      (url) =>
        url.endsWith("/ideate")
          ? {
              status: 200,
              body: { suggestions: ["one", "two", "three"], prompt: "one" },
            }
          : null,
    ]);
    const body = await new WorkbenchApi("").ideate("sess-1", "Lion");
    expect(log[0].body).toEqual({ subject: "Lion" });
    expect(body.suggestions).toHaveLength(3);
  });

  it("maps API failures to ApiError with the server detail", async () => {
    stubFetch([
      () => ({ status: 404, body: { detail: "unknown session 'zzz'" } }),
    ]);
    const api = new WorkbenchApi("");
    await expect(api.getSession("zzz")).rejects.toMatchObject({
      message: "unknown session 'zzz'",
      status: 404,
    });
    await expect(api.getSession("zzz")).rejects.toBeInstanceOf(ApiError);
  });

  it("builds image URLs for thumbnails and full-res", () => {
    const api = new WorkbenchApi("http://srv");
    expect(api.thumbnailUrl("s", "i")).toBe(
      "http://srv/sessions/s/images/i/thumbnail?size=128",
    );
    expect(api.fullImageUrl("s", "i")).toBe("http://srv/sessions/s/images/i/file");
  });
});
