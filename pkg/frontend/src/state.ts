/** Console state: a mirror of server responses plus view bookkeeping.
 *
 * The console performs no inference of its own.  A report is shown only if
 * the profile hash it was computed against matches the current profile
 * (stale-response guard), and only one check may be in flight per session,
 * enforced with monotonically increasing request tokens.
 */

import type {
  ComplianceReport,
  ProfileView,
  Recommendation,
  Vocabulary,
} from "./types.js";

export type Screen = "profile" | "recommendations" | "check" | "evidence";

export interface ConsoleState {
  screen: Screen;
  sessionId: string | null;
  profile: ProfileView | null;
  vocabulary: Vocabulary | null;
  recommendations: Recommendation[] | null;
  proposal: { treatment: string; cor_class: string };
  report: ComplianceReport | null;
  /** atoms ticked on the evidence checklist, keyed by atom text */
  evidenceSelection: Record<string, boolean>;
  checkInFlight: boolean;
  error: string | null;
}

export function initialState(): ConsoleState {
  return {
    screen: "profile",
    sessionId: null,
    profile: null,
    vocabulary: null,
    recommendations: null,
    proposal: { treatment: "", cor_class: "class_1" },
    report: null,
    evidenceSelection: {},
    checkInFlight: false,
    error: null,
  };
}

export function withProfile(state: ConsoleState, profile: ProfileView): ConsoleState {
  const stale =
    state.report !== null && state.report.profile_hash !== profile.profile_hash;
  return {
    ...state,
    profile,
    // server state moved on: cached derivations no longer apply
    recommendations: stale ? null : state.recommendations,
    report: stale ? null : state.report,
    error: null,
  };
}

export function withReport(
  state: ConsoleState,
  report: ComplianceReport,
): ConsoleState {
  if (!state.profile || report.profile_hash !== state.profile.profile_hash) {
    return state; // stale response: computed against an older profile
  }
  const selection: Record<string, boolean> = {};
  for (const explanation of report.explanations) {
    for (const atom of explanation.assumed_true) {
      selection[atom] = false;
    }
  }
  return { ...state, report, evidenceSelection: selection, error: null };
}

export function toggleEvidence(state: ConsoleState, atom: string): ConsoleState {
  if (!(atom in state.evidenceSelection)) {
    return state;
  }
  return {
    ...state,
    evidenceSelection: {
      ...state.evidenceSelection,
      [atom]: !state.evidenceSelection[atom],
    },
  };
}

export function selectedEvidence(state: ConsoleState): string[] {
  return Object.entries(state.evidenceSelection)
    .filter(([, ticked]) => ticked)
    .map(([atom]) => atom);
}

/** The verdict the console may display: exactly the latest server verdict
 * for the current profile version, or nothing. */
export function displayedVerdict(state: ConsoleState): string | null {
  if (!state.report || !state.profile) {
    return null;
  }
  if (state.report.profile_hash !== state.profile.profile_hash) {
    return null;
  }
  return state.report.verdict;
}

/** Rebuild the fact-file text for a profile view, optionally moving one
 * atom onto or off the known-absent list.  Ruling out drops the fact;
 * restoring merely stops ruling it out (the atom does not become a fact).
 */
export function profileFactsText(
  profile: ProfileView,
  options: { ruleOut?: string; restore?: string } = {},
): string {
  const ruledOut = new Set(profile.known_absent);
  if (options.ruleOut) {
    ruledOut.add(options.ruleOut);
  }
  if (options.restore) {
    ruledOut.delete(options.restore);
  }
  const lines: string[] = [];
  const factGroups = [
    profile.evidence,
    profile.diagnoses,
    profile.history,
    profile.contraindications,
    profile.assertions,
  ];
  for (const group of factGroups) {
    for (const atom of group) {
      if (!ruledOut.has(atom)) {
        lines.push(`${atom}.`);
      }
    }
  }
  for (const [name, value] of Object.entries(profile.measurements)) {
    lines.push(`measurement(${name}, ${value}).`);
  }
  for (const atom of ruledOut) {
    lines.push(`% known_absent: ${atom}`);
  }
  return lines.join("\n") + "\n";
}
