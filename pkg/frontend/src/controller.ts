/** Drives the advisory workflow against the service.
 *
 * Confirming evidence posts the ticked atoms, refreshes the profile, and
 * automatically re-checks the current proposal, so the verdict banner
 * always reflects the newest server answer.
 */

import { AdvisoryClient, ApiError } from "./api.js";
import {
  ConsoleState,
  initialState,
  profileFactsText,
  selectedEvidence,
  toggleEvidence,
  withProfile,
  withReport,
} from "./state.js";

export type Listener = (state: ConsoleState) => void;

export class ConsoleController {
  private state: ConsoleState = initialState();
  private listeners: Listener[] = [];
  private checkToken = 0;

  constructor(private readonly client: AdvisoryClient) {}

  getState(): ConsoleState {
    return this.state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private update(next: ConsoleState): void {
    this.state = next;
    for (const listener of this.listeners) {
      listener(next);
    }
  }

  private fail(error: unknown): void {
    const message =
      error instanceof ApiError
        ? `${error.status}: ${error.message}`
        : String(error);
    this.update({ ...this.state, error: message, checkInFlight: false });
  }

  show(screen: ConsoleState["screen"]): void {
    this.update({ ...this.state, screen });
  }

  setProposal(treatment: string, corClass: string): void {
    this.update({
      ...this.state,
      proposal: { treatment, cor_class: corClass },
    });
  }

  toggleEvidenceAtom(atom: string): void {
    this.update(toggleEvidence(this.state, atom));
  }

  async loadVocabulary(): Promise<void> {
    try {
      const vocabulary = await this.client.vocabulary();
      this.update({ ...this.state, vocabulary });
    } catch (error) {
      this.fail(error);
    }
  }

  async loadProfile(facts: string): Promise<void> {
    try {
      const session = await this.client.createSession(facts);
      this.update({
        ...withProfile(
          { ...this.state, sessionId: session.id, report: null, recommendations: null },
          session.profile,
        ),
        screen: "profile",
      });
    } catch (error) {
      this.fail(error);
    }
  }

  async refreshRecommendations(): Promise<void> {
    if (!this.state.sessionId) {
      return;
    }
    try {
      const response = await this.client.recommendations(this.state.sessionId);
      if (response.profile_hash !== this.state.profile?.profile_hash) {
        return; // stale
      }
      this.update({
        ...this.state,
        recommendations: response.recommendations,
        screen: "recommendations",
      });
    } catch (error) {
      this.fail(error);
    }
  }

  /** One check in flight per session: a newer request invalidates the
   * older one's response via the token. */
  async check(treatment?: string, corClass?: string): Promise<void> {
    if (!this.state.sessionId || this.state.checkInFlight) {
      return;
    }
    const proposal = {
      treatment: treatment ?? this.state.proposal.treatment,
      cor_class: corClass ?? this.state.proposal.cor_class,
    };
    const token = ++this.checkToken;
    this.update({
      ...this.state,
      proposal,
      checkInFlight: true,
      screen: "check",
    });
    try {
      const report = await this.client.check(
        this.state.sessionId,
        proposal.treatment,
        proposal.cor_class,
      );
      if (token !== this.checkToken) {
        return; // superseded by a newer request
      }
      this.update({
        ...withReport({ ...this.state, checkInFlight: false }, report),
        checkInFlight: false,
      });
    } catch (error) {
      if (token === this.checkToken) {
        this.fail(error);
      }
    }
  }

  /** Records atoms as profile facts; optionally re-checks the current
   * proposal afterwards. */
  async confirmAtoms(atoms: string[], recheck = false): Promise<void> {
    if (!this.state.sessionId || atoms.length === 0) {
      return;
    }
    try {
      const response = await this.client.confirmEvidence(
        this.state.sessionId,
        atoms,
      );
      this.update(withProfile(this.state, response.profile));
      if (recheck && this.state.proposal.treatment) {
        await this.check();
      }
    } catch (error) {
      this.fail(error);
    }
  }

  /** Posts ticked evidence atoms, then re-checks the same proposal
   * automatically so the banner shows the newest verdict. */
  async confirmSelectedEvidence(): Promise<void> {
    await this.confirmAtoms(selectedEvidence(this.state), true);
  }

  /** Known-absent toggles: the service treats profiles as fact sheets, so
   * ruling a finding out (or back in) rebuilds the sheet and starts a
   * fresh session over it. */
  async ruleOut(atom: string): Promise<void> {
    if (!this.state.profile) {
      return;
    }
    await this.loadProfile(profileFactsText(this.state.profile, { ruleOut: atom }));
  }

  async restoreRuledOut(atom: string): Promise<void> {
    if (!this.state.profile) {
      return;
    }
    await this.loadProfile(profileFactsText(this.state.profile, { restore: atom }));
  }
}
