import { describe, expect, it } from "vitest";

import {
  displayedVerdict,
  initialState,
  profileFactsText,
  selectedEvidence,
  toggleEvidence,
  withProfile,
  withReport,
} from "../src/state.js";
import type { ComplianceReport, ProfileView } from "../src/types.js";

function profileView(hash: string): ProfileView {
  return {
    evidence: ["evidence(accf_stage_c)"],
    diagnoses: [],
    history: [],
    measurements: {},
    contraindications: [],
    known_absent: [],
    assertions: [],
    notes: [],
    profile_hash: hash,
  };
}

function report(hash: string, verdict: ComplianceReport["verdict"]): ComplianceReport {
  return {
    proposed: { treatment: "icd", cor_class: "class_1" },
    verdict,
    explanations: [
      { assumed_true: ["survival_year_greater_than_1"], assumed_false: [] },
    ],
    compliant_set: [],
    timings_ms: {},
    profile_hash: hash,
  };
}

describe("stale-response guard", () => {
  it("accepts a report computed against the current profile", () => {
    let state = withProfile(initialState(), profileView("h1"));
    state = withReport(state, report("h1", "repairable_with_evidence"));
    expect(displayedVerdict(state)).toBe("repairable_with_evidence");
  });

  it("drops a report computed against an older profile", () => {
    let state = withProfile(initialState(), profileView("h1"));
    state = withReport(state, report("h0", "compliant"));
    expect(state.report).toBeNull();
    expect(displayedVerdict(state)).toBeNull();
  });

  it("invalidates cached derivations when the profile moves on", () => {
    let state = withProfile(initialState(), profileView("h1"));
    state = withReport(state, report("h1", "rejected"));
    state = withProfile(state, profileView("h2"));
    expect(state.report).toBeNull();
    expect(displayedVerdict(state)).toBeNull();
  });
});

describe("known-absent toggles", () => {
  const view: ProfileView = {
    ...profileView("h1"),
    evidence: ["evidence(accf_stage_c)", "evidence(angina)"],
    diagnoses: ["diagnosis(hf_with_reduced_ef)"],
    measurements: { lvef: "16" },
    known_absent: ["diagnosis(atrial_fibrillation)"],
  };

  it("ruling out removes the fact and records the annotation", () => {
    const text = profileFactsText(view, { ruleOut: "evidence(angina)" });
    expect(text).not.toContain("evidence(angina).");
    expect(text).toContain("% known_absent: evidence(angina)");
    expect(text).toContain("evidence(accf_stage_c).");
    expect(text).toContain("measurement(lvef, 16).");
  });

  it("restoring drops the annotation without inventing a fact", () => {
    const text = profileFactsText(view, {
      restore: "diagnosis(atrial_fibrillation)",
    });
    expect(text).not.toContain("known_absent: diagnosis(atrial_fibrillation)");
    expect(text).not.toContain("diagnosis(atrial_fibrillation).");
  });
});

describe("evidence checklist", () => {
  it("only lists abduced atoms and tracks ticks", () => {
    let state = withProfile(initialState(), profileView("h1"));
    state = withReport(state, report("h1", "repairable_with_evidence"));
    expect(Object.keys(state.evidenceSelection)).toEqual([
      "survival_year_greater_than_1",
    ]);
    expect(selectedEvidence(state)).toEqual([]);
    state = toggleEvidence(state, "survival_year_greater_than_1");
    expect(selectedEvidence(state)).toEqual(["survival_year_greater_than_1"]);
    // atoms outside the explanation cannot be ticked
    expect(toggleEvidence(state, "evidence(accf_stage_c)")).toBe(state);
  });
});
