/**
 * Client-side session view model. The view is a pure function of this state:
 * the server's session summary, a local buffer of pending statement edits,
 * and revision-stamped results. A result whose revision is behind the session
 * revision is stale and must carry a visible badge until recomputed.
 */

import type {
  AggregateResult,
  CaiResult,
  CompatibilityResult,
  MinimalSetsResult,
  RorResult,
  SessionSummary,
  StatementDoc,
} from './types';

export interface Stamped<T> {
  revision: number;
  value: T;
}

export interface SessionView {
  summary: SessionSummary | null;
  /** Statement documents as last acknowledged by the server. */
  committed: StatementDoc[];
  /** Local edits not yet submitted. */
  pending: StatementDoc[];
  dirty: boolean;
  compatibility: Stamped<CompatibilityResult> | null;
  ror: Stamped<RorResult> | null;
  minimalSets: Stamped<MinimalSetsResult> | null;
  cai: Stamped<CaiResult> | null;
  aggregate: Stamped<AggregateResult> | null;
  error: string | null;
}

export function emptyView(): SessionView {
  return {
    summary: null,
    committed: [],
    pending: [],
    dirty: false,
    compatibility: null,
    ror: null,
    minimalSets: null,
    cai: null,
    aggregate: null,
    error: null,
  };
}

export function currentRevision(view: SessionView): number {
  return view.summary ? view.summary.revision : -1;
}

/** A stamped result is stale when the statement list moved past it. */
export function isStale(view: SessionView, result: Stamped<unknown> | null): boolean {
  if (result === null) return false;
  return result.revision !== currentRevision(view);
}

export function loadSession(view: SessionView, summary: SessionSummary,
                            statements: StatementDoc[]): SessionView {
  return {
    ...view,
    summary,
    committed: statements,
    pending: [...statements],
    dirty: false,
    error: null,
  };
}

export function editPending(view: SessionView, pending: StatementDoc[]): SessionView {
  const dirty = JSON.stringify(pending) !== JSON.stringify(view.committed);
  return { ...view, pending, dirty };
}

export function addPending(view: SessionView, doc: StatementDoc): SessionView {
  return editPending(view, [...view.pending, doc]);
}

export function removePending(view: SessionView, index: number): SessionView {
  if (index < 0 || index >= view.pending.length) return view;
  return editPending(view, view.pending.filter((_, i) => i !== index));
}

/** Server acknowledged the pending buffer at a new revision. */
export function commitAccepted(view: SessionView,
                               ack: CompatibilityResult): SessionView {
  const summary = view.summary
    ? { ...view.summary, revision: ack.revision }
    : view.summary;
  return {
    ...view,
    summary,
    committed: [...view.pending],
    dirty: false,
    compatibility: { revision: ack.revision, value: ack },
    error: null,
  };
}

export function withResult<K extends 'ror' | 'minimalSets' | 'cai' | 'aggregate'>(
  view: SessionView,
  key: K,
  revision: number,
  value: NonNullable<SessionView[K]>['value'],
): SessionView {
  return { ...view, [key]: { revision, value } };
}

export function withError(view: SessionView, message: string): SessionView {
  return { ...view, error: message };
}

export function clearError(view: SessionView): SessionView {
  return { ...view, error: null };
}
