/** Payload shapes of the advisory service API. */

export interface ProfileView {
  evidence: string[];
  diagnoses: string[];
  history: string[];
  measurements: Record<string, string>;
  contraindications: string[];
  known_absent: string[];
  assertions: string[];
  notes: string[];
  profile_hash: string;
}

export interface Recommendation {
  treatment: string;
  cor_class: string;
}

export interface Explanation {
  assumed_true: string[];
  assumed_false: string[];
}

export type VerdictValue = "compliant" | "repairable_with_evidence" | "rejected";

export interface ComplianceReport {
  proposed: Recommendation;
  verdict: VerdictValue;
  explanations: Explanation[];
  compliant_set: Recommendation[];
  timings_ms: Record<string, number>;
  profile_hash: string;
}

export interface RecommendationsResponse {
  recommendations: Recommendation[];
  timings_ms: Record<string, number>;
  profile_hash: string;
}

export interface SessionResponse {
  id: string;
  profile: ProfileView;
}

export interface Vocabulary {
  atoms: string[];
  treatments: string[];
  cor_classes: string[];
}
