/** Browser bootstrap: mounts the console and wires events by delegation. */

import { AdvisoryClient } from "./api.js";
import { ConsoleController } from "./controller.js";
import { renderApp } from "./views.js";
import type { Screen } from "./state.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8000";

const controller = new ConsoleController(new AdvisoryClient(SERVICE_URL));
const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}

function mount(): void {
  root!.innerHTML = renderApp(controller.getState());
}

controller.subscribe(mount);
mount();
void controller.loadVocabulary();

root.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  if (target.matches(".tab")) {
    controller.show(target.dataset.screen as Screen);
  } else if (target.id === "load-profile") {
    const facts = (document.getElementById("facts-input") as HTMLTextAreaElement).value;
    void controller.loadProfile(facts);
  } else if (target.id === "reset-profile") {
    window.location.reload();
  } else if (target.id === "refresh-recommendations") {
    void controller.refreshRecommendations();
  } else if (target.matches(".propose")) {
    controller.setProposal(
      target.dataset.treatment ?? "",
      target.dataset.class ?? "class_1",
    );
    controller.show("check");
  } else if (target.id === "run-check") {
    const treatment = (document.getElementById("treatment-select") as HTMLSelectElement).value;
    const corClass = (document.getElementById("class-select") as HTMLSelectElement).value;
    void controller.check(treatment, corClass);
  } else if (target.matches(".evidence-tick")) {
    controller.toggleEvidenceAtom(target.dataset.atom ?? "");
  } else if (target.id === "confirm-evidence") {
    void controller.confirmSelectedEvidence();
  } else if (target.id === "add-fact") {
    const input = document.getElementById("fact-entry") as HTMLInputElement;
    const atom = input.value.trim();
    if (atom) {
      void controller.confirmAtoms([atom]);
    }
  } else if (target.matches(".rule-out")) {
    void controller.ruleOut(target.dataset.atom ?? "");
  } else if (target.matches(".restore-absent")) {
    void controller.restoreRuledOut(target.dataset.atom ?? "");
  } else if (target.id === "dismiss-error") {
    controller.show(controller.getState().screen);
  }
});
