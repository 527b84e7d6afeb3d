/** Pure rendering: console state in, HTML strings out.
 *
 * Keeping views as string builders makes every screen testable without a
 * browser; main.ts mounts the output and wires events by element id.
 */

import { ConsoleState, displayedVerdict, Screen } from "./state.js";
import type { Explanation } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const SCREEN_TITLES: Record<Screen, string> = {
  profile: "Profile",
  recommendations: "Recommendations",
  check: "Check",
  evidence: "Evidence",
};

export function renderTabs(state: ConsoleState): string {
  return (Object.keys(SCREEN_TITLES) as Screen[])
    .map((screen) => {
      const active = state.screen === screen ? " active" : "";
      return `<button class="tab${active}" data-screen="${screen}">${SCREEN_TITLES[screen]}</button>`;
    })
    .join("");
}

export function renderProfile(state: ConsoleState): string {
  if (!state.profile) {
    return `
      <section class="card">
        <h2>Load a patient profile</h2>
        <textarea id="facts-input" rows="12" spellcheck="false"
          placeholder="evidence(accf_stage_c).&#10;diagnosis(hf_with_reduced_ef).&#10;measurement(lvef, 0.16)."></textarea>
        <datalist id="vocabulary-atoms">${vocabularyOptions(state)}</datalist>
        <button id="load-profile" class="primary">Load profile</button>
      </section>`;
  }
  const profile = state.profile;
  const group = (title: string, atoms: string[]) =>
    atoms.length
      ? `<h3>${title}</h3><ul>${atoms
          .map(
            (a) =>
              `<li><code>${escapeHtml(a)}</code> <button class="link rule-out" data-atom="${escapeHtml(a)}">rule out</button></li>`,
          )
          .join("")}</ul>`
      : "";
  const measurements = Object.entries(profile.measurements)
    .map(([name, value]) => `<li><code>${escapeHtml(name)} = ${escapeHtml(value)}</code></li>`)
    .join("");
  const knownAbsent = profile.known_absent
    .map(
      (a) =>
        `<li class="known-absent"><code>${escapeHtml(a)}</code> <span class="badge muted">ruled out</span> <button class="link restore-absent" data-atom="${escapeHtml(a)}">restore</button></li>`,
    )
    .join("");
  return `
    <section class="card">
      <h2>Profile <span class="hash">${escapeHtml(profile.profile_hash)}</span></h2>
      ${group("Evidence", profile.evidence)}
      ${group("Diagnoses", profile.diagnoses)}
      ${group("History", profile.history)}
      ${measurements ? `<h3>Measurements</h3><ul>${measurements}</ul>` : ""}
      ${group("Contraindications", profile.contraindications)}
      ${group("Confirmed findings", profile.assertions)}
      ${knownAbsent ? `<h3>Known absent</h3><ul>${knownAbsent}</ul>` : ""}
      ${profile.notes.length ? `<h3>Notes</h3><ul>${profile.notes.map((n) => `<li>${escapeHtml(n)}</li>`).join("")}</ul>` : ""}
      <h3>Add a fact</h3>
      <input id="fact-entry" list="vocabulary-atoms" placeholder="history(angioedema)" />
      <datalist id="vocabulary-atoms">${vocabularyOptions(state)}</datalist>
      <button id="add-fact" class="secondary">Confirm into profile</button>
      <button id="reset-profile" class="secondary">Load a different profile</button>
    </section>`;
}

function vocabularyOptions(state: ConsoleState): string {
  if (!state.vocabulary) {
    return "";
  }
  return state.vocabulary.atoms
    .map((a) => `<option value="${escapeHtml(a)}"></option>`)
    .join("");
}

const COR_BADGES: Record<string, string> = {
  class_1: "I",
  class_2a: "IIa",
  class_2b: "IIb",
  class_3: "III",
};

export function renderRecommendations(state: ConsoleState): string {
  if (!state.recommendations) {
    return `<section class="card"><h2>Recommendations</h2>
      <p>No enumeration yet.</p>
      <button id="refresh-recommendations" class="primary">Enumerate compliant treatments</button>
    </section>`;
  }
  const rows = state.recommendations
    .map(
      (rec) => `
      <li>
        <span class="badge cor">${COR_BADGES[rec.cor_class] ?? rec.cor_class}</span>
        <code>${escapeHtml(rec.treatment)}</code>
        <button class="secondary propose" data-treatment="${escapeHtml(rec.treatment)}"
                data-class="${escapeHtml(rec.cor_class)}">Propose</button>
      </li>`,
    )
    .join("");
  return `<section class="card"><h2>Guideline-compliant recommendations</h2>
    ${state.recommendations.length ? `<ul class="rec-list">${rows}</ul>` : "<p>None derivable from this profile.</p>"}
    <button id="refresh-recommendations" class="secondary">Refresh</button>
  </section>`;
}

export function verdictBanner(state: ConsoleState): string {
  const verdict = displayedVerdict(state);
  if (state.checkInFlight) {
    return `<div class="banner pending" id="verdict-banner">Checking&hellip;</div>`;
  }
  if (verdict === null) {
    return `<div class="banner idle" id="verdict-banner">No verdict yet</div>`;
  }
  const labels: Record<string, [string, string]> = {
    compliant: ["green", "Compliant"],
    repairable_with_evidence: ["amber", "Repairable with evidence"],
    rejected: ["red", "Rejected"],
  };
  const [tone, label] = labels[verdict] ?? ["idle", verdict];
  return `<div class="banner ${tone}" id="verdict-banner" data-verdict="${verdict}">${label}</div>`;
}

export function renderCheck(state: ConsoleState): string {
  const treatments = state.vocabulary?.treatments ?? [];
  const classes = state.vocabulary?.cor_classes ?? ["class_1", "class_2a", "class_2b", "class_3"];
  const options = (values: string[], selected: string) =>
    values
      .map(
        (v) =>
          `<option value="${escapeHtml(v)}"${v === selected ? " selected" : ""}>${escapeHtml(v)}</option>`,
      )
      .join("");
  const compliantSet = state.report
    ? `<h3>Compliant set at check time</h3><ul>${state.report.compliant_set
        .map(
          (r) =>
            `<li><span class="badge cor">${COR_BADGES[r.cor_class] ?? r.cor_class}</span> <code>${escapeHtml(r.treatment)}</code></li>`,
        )
        .join("")}</ul>`
    : "";
  return `<section class="card">
    <h2>Propose a treatment</h2>
    <label>Treatment
      <select id="treatment-select">${options(treatments, state.proposal.treatment)}</select>
    </label>
    <label>Recommendation class
      <select id="class-select">${options(classes, state.proposal.cor_class)}</select>
    </label>
    <button id="run-check" class="primary"${state.checkInFlight ? " disabled" : ""}>Check compliance</button>
    ${verdictBanner(state)}
    ${compliantSet}
  </section>`;
}

export function renderEvidence(state: ConsoleState): string {
  const report = state.report;
  if (!report || displayedVerdict(state) !== "repairable_with_evidence") {
    return `<section class="card"><h2>Evidence</h2>
      ${verdictBanner(state)}
      <p>Run a check that comes back repairable to see its missing evidence.</p>
    </section>`;
  }
  const lists = report.explanations
    .map((explanation, index) => explanationChecklist(explanation, index, state))
    .join("");
  return `<section class="card">
    <h2>Missing evidence for <code>${escapeHtml(report.proposed.treatment)}</code>
        (${COR_BADGES[report.proposed.cor_class] ?? report.proposed.cor_class})</h2>
    ${verdictBanner(state)}
    ${lists}
    <button id="confirm-evidence" class="primary">Confirm ticked findings &amp; re-check</button>
  </section>`;
}

function explanationChecklist(
  explanation: Explanation,
  index: number,
  state: ConsoleState,
): string {
  const items = explanation.assumed_true
    .map((atom) => {
      const ticked = state.evidenceSelection[atom] ? " checked" : "";
      return `<li><label>
        <input type="checkbox" class="evidence-tick" data-atom="${escapeHtml(atom)}"${ticked} />
        <code>${escapeHtml(atom)}</code>
      </label></li>`;
    })
    .join("");
  const excluded = explanation.assumed_false.length
    ? `<p class="muted">requires absent: ${explanation.assumed_false
        .map((a) => `<code>${escapeHtml(a)}</code>`)
        .join(", ")}</p>`
    : "";
  return `<div class="explanation">
    <h3>Explanation ${index + 1}</h3>
    <ul class="evidence-list">${items}</ul>
    ${excluded}
  </div>`;
}

export function renderApp(state: ConsoleState): string {
  const screens: Record<Screen, (s: ConsoleState) => string> = {
    profile: renderProfile,
    recommendations: renderRecommendations,
    check: renderCheck,
    evidence: renderEvidence,
  };
  const error = state.error
    ? `<div class="banner red" id="error-banner">${escapeHtml(state.error)} <button id="dismiss-error" class="secondary">Dismiss</button></div>`
    : "";
  return `
    <header>
      <h1>Guideline advisory console</h1>
      <nav>${renderTabs(state)}</nav>
    </header>
    ${error}
    <main>${screens[state.screen](state)}</main>`;
}
