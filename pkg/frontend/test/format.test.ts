import { describe, expect, it } from "vitest";

import {
  badgeFor,
  badgeLabel,
  buildLiteral,
  findStatement,
  groupByLayer,
} from "../src/format.js";

describe("buildLiteral", () => {
  it("renders predicates with and without arguments", () => {
    expect(buildLiteral("avoid", ["a", "c1"])).toBe("avoid(a, c1)");
    expect(buildLiteral("alarm", [])).toBe("alarm");
  });

  it("prefixes strong negation", () => {
    expect(buildLiteral("fperm", ["c", "pdata"], true)).toBe("neg fperm(c, pdata)");
  });
});

describe("badges", () => {
  it("maps engine statuses onto badge classes", () => {
    expect(badgeFor("accepted-sceptically")).toBe("accepted");
    expect(badgeFor("accepted-credulously")).toBe("credulous");
    expect(badgeFor("rejected")).toBe("rejected");
    expect(badgeFor("no-argument")).toBe("none");
  });

  it("labels stay human readable", () => {
    expect(badgeLabel("accepted-sceptically")).toBe("accepted");
    expect(badgeLabel("no-argument")).toBe("no argument");
  });
});

describe("groupByLayer", () => {
  it("orders tactical before operational before strategic", () => {
    const groups = groupByLayer([
      { name: "motive", arity: 2, layer: "operational" },
      { name: "sourceIP", arity: 2, layer: "tactical" },
      { name: "who", arity: 1, layer: "strategic" },
      { name: "misc", arity: 0, layer: null },
    ]);
    expect(groups.map((g) => g.layer)).toEqual([
      "tactical",
      "operational",
      "strategic",
      "unlayered",
    ]);
  });

  it("sorts predicates inside a layer", () => {
    const groups = groupByLayer([
      { name: "spoofed", arity: 1, layer: "tactical" },
      { name: "geoloc", arity: 2, layer: "tactical" },
    ]);
    expect(groups[0].predicates.map((p) => p.name)).toEqual(["geoloc", "spoofed"]);
  });
});

describe("findStatement", () => {
  const theory = [
    "rule fig2.a2: perform(Attack, Country) <- sourceIP(Attack, IP), geoloc(IP, Country).",
    "prefer fig2.c1: fig2.b4 > fig2.b2.",
  ].join("\n");

  it("locates rule and priority statements by label", () => {
    expect(findStatement(theory, "fig2.c1")).toContain("fig2.b4 > fig2.b2");
    expect(findStatement(theory, "fig2.a2")).toContain("perform(Attack, Country)");
    expect(findStatement(theory, "ghost")).toBeNull();
  });
});
