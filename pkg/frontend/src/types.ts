// JSON shapes of the gateway API. Field names mirror the wire format
// exactly; the console never invents fields the gateway did not send.

export type PremiseStatus = "draft" | "contested" | "committed" | "rejected";
export type ActionStatus = "pending" | "committed" | "withdrawn";
export type GateVerdict = "allowed" | "blocked" | "override-required";
export type RepairKind =
  | "investigate"
  | "reframe"
  | "negotiate"
  | "commit-confirmation"
  | "conservative-alternative";

export interface SlicePremise {
  premise_id: string;
  statement: string;
  status: PremiseStatus;
  sensitive: boolean;
  context: boolean;
}

export interface SliceEvidence {
  evidence_id: string;
  discrepancy_id: string;
  premise_id: string;
  direction: string;
  source: string;
}

export interface SliceConsequence {
  text: string;
  dominant_premise: string | null;
  if_committed: string | null;
  if_rejected: string | null;
}

export interface ProbePayload {
  probe_id: string | null;
  description: string;
  discrimination: number;
  cost: number;
}

export interface RepairOptionData {
  kind: RepairKind;
  target: string;
  probe: ProbePayload | null;
  risk_note_required: boolean;
}

export interface SliceData {
  action_id: string;
  premises: SlicePremise[];
  discrepant_evidence: SliceEvidence[];
  consequence: SliceConsequence;
  repair_options: RepairOptionData[];
  budget: { max_items: number };
  compiled_at: number;
}

export interface ActionData {
  id: string;
  description: string;
  utility: number;
  consequential: boolean;
  status: ActionStatus;
}

export interface GateData {
  verdict: GateVerdict;
  blocking_premises: { premise_id: string; status: string }[];
  checked_at: number;
}

export interface LedgerEventData {
  index: number;
  kind: string;
  payload: Record<string, unknown>;
  actor: string;
  session: string | null;
  timestamp: string;
  prev_hash: string;
  hash: string;
}

export interface EventPage {
  events: LedgerEventData[];
  head: string;
  version: number;
}

export interface HealthData {
  status: string;
  events: number;
  version: number;
  session: string | null;
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  blocking_objects?: string[];
}
