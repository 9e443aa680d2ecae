import { describe, expect, it } from "vitest";

import { ApiError, Client } from "../src/api.js";

function fakeFetch(routes: Record<string, { status?: number; body: unknown }>) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl = async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    const route = routes[url.split("?")[0]];
    if (!route) throw new Error(`unrouted ${url}`);
    return new Response(JSON.stringify(route.body), {
      status: route.status ?? 200,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { impl, calls };
}

describe("Client", () => {
  it("builds query URLs with encoded goals", async () => {
    const { impl, calls } = fakeFetch({
      "/sessions/s1/query": { body: { revision: 2, verdicts: [] } },
    });
    const client = new Client("", impl);
    const r = await client.query("s1", "perform(a, Country)");
    expect(r.revision).toBe(2);
    expect(calls[0].url).toBe("/sessions/s1/query?goal=perform%28a%2C+Country%29");
  });

  it("posts evidence mutations as JSON", async () => {
    const { impl, calls } = fakeFetch({
      "/sessions/s1/evidence": { body: { revision: 5 } },
    });
    const client = new Client("", impl);
    await client.assert("s1", ["spoofed(ip1)"]);
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      assert: ["spoofed(ip1)"],
    });
    await client.retract("s1", ["spoofed(ip1)"]);
    expect(JSON.parse(String(calls[1].init?.body))).toEqual({
      retract: ["spoofed(ip1)"],
    });
  });

  it("surfaces structured error bodies verbatim", async () => {
    const { impl } = fakeFetch({
      "/sessions/s1/evidence": {
        status: 409,
        body: { code: "contradiction", message: "neg p contradicts p" },
      },
    });
    const client = new Client("", impl);
    const err = await client.assert("s1", ["neg p"]).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.code).toBe("contradiction");
    expect(err.message).toBe("neg p contradicts p");
  });

  it("prefixes an explicit API base", async () => {
    const { impl, calls } = fakeFetch({
      "http://localhost:7878/packs": { body: { packs: [] } },
    });
    const client = new Client("http://localhost:7878", impl);
    await client.packs();
    expect(calls[0].url).toBe("http://localhost:7878/packs");
  });
});
