/**
 * Payload shapes of the sorting service HTTP API. Everything here mirrors the
 * JSON the server emits; the UI never computes model quantities itself.
 */

export type StatementType =
  | 'assign_exact'
  | 'assign_at_least'
  | 'assign_at_most'
  | 'assign_interval'
  | 'preference'
  | 'indifference'
  | 'more_important'
  | 'equally_important'
  | 'positive_interaction'
  | 'negative_interaction';

export interface StatementDoc {
  type: StatementType;
  [field: string]: string | number;
}

export interface SessionSummary {
  id: string;
  revision: number;
  alternatives: string[];
  nodes: Record<string, number>;
  statements: { statement: string; timestamp: number }[];
  /** Full statement payloads, in order — the editor's committed buffer. */
  documents: StatementDoc[];
}

export interface CompatibilityResult {
  revision: number;
  compatible: boolean;
  eps_star: number | null;
}

export interface AssignmentRange {
  alternative: string;
  node: string;
  possible: number[];
  necessary: number | null;
  at_least: number;
  at_most: number;
}

export interface RorResult {
  ranges: AssignmentRange[];
}

export interface MinimalSetDoc {
  pairs: [string, string][];
  signs: Record<string, string>;
}

export interface MinimalSetsResult {
  gamma_star: number;
  sets: MinimalSetDoc[];
  /** Pairs serialized as "a|b". */
  core: string[];
  complete: boolean;
}

export interface CaiResult {
  alternatives: string[];
  cai: Record<string, number[][]>;
}

export type DistanceId = 'unit' | 'absolute' | 'sqrt';

export interface AggregateResult {
  classes: Record<string, number>;
  loss: number;
  distance: string;
}

export type JobEnvelope<T> =
  | { status: 'done'; revision: number; result: T }
  | { status: 'pending'; job: string };

export interface JobStatus<T> {
  status: 'pending' | 'done' | 'failed';
  result: T | null;
  error: { error: string; message: string } | null;
  revision: number;
}
