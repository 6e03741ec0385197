/**
 * Pure HTML renderers. Every function maps state to a markup string with no
 * side effects, so the whole page is reproducible from the session view.
 *
 * Numbers are printed with `fmt`, which serializes the exact value received
 * from the API (JSON round-trip identity) — the UI never reformats, rounds,
 * or recomputes a model quantity.
 */

import type {
  AggregateResult,
  AssignmentRange,
  DistanceId,
  StatementDoc,
} from './types';
import type { SessionView, Stamped } from './state';
import { isStale } from './state';

/** Serialize a payload number exactly as JSON would. */
export function fmt(value: number | null): string {
  return JSON.stringify(value);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function staleBadge(stale: boolean): string {
  return stale ? '<span class="badge stale">stale — recompute</span>' : '';
}

// -- compatibility banner -----------------------------------------------------

export function renderBanner(view: SessionView): string {
  const stamped = view.compatibility;
  if (!stamped) {
    return '<div class="banner unknown">no compatibility check yet</div>';
  }
  const { compatible, eps_star } = stamped.value;
  const stale = staleBadge(isStale(view, stamped));
  if (compatible) {
    return `<div class="banner ok">compatible (eps* = ${fmt(eps_star)})${stale}</div>`;
  }
  return `<div class="banner bad">incompatible (eps* = ${fmt(eps_star)} &le; 0)${stale}</div>`;
}

// -- statement editor ---------------------------------------------------------

const STATEMENT_LABELS: Record<string, (d: StatementDoc) => string> = {
  assign_exact: (d) => `${d.alternative} is in class C${d.cls} at ${d.node}`,
  assign_at_least: (d) => `${d.alternative} is at least C${d.cls} at ${d.node}`,
  assign_at_most: (d) => `${d.alternative} is at most C${d.cls} at ${d.node}`,
  assign_interval: (d) => `${d.alternative} is in [C${d.lo}, C${d.hi}] at ${d.node}`,
  preference: (d) => `${d.better} is better than ${d.worse} at ${d.node}`,
  indifference: (d) => `${d.a} and ${d.b} are indifferent at ${d.node}`,
  more_important: (d) => `${d.more} outweighs ${d.less} under ${d.node}`,
  equally_important: (d) => `${d.a} and ${d.b} weigh equally under ${d.node}`,
  positive_interaction: (d) => `${d.a} and ${d.b} reinforce each other under ${d.node}`,
  negative_interaction: (d) => `${d.a} and ${d.b} are redundant under ${d.node}`,
};

export function describeStatement(doc: StatementDoc): string {
  const label = STATEMENT_LABELS[doc.type];
  return label ? label(doc) : JSON.stringify(doc);
}

export function renderStatementList(view: SessionView): string {
  const items = view.pending
    .map((doc, i) =>
      `<li>${escapeHtml(describeStatement(doc))} ` +
      `<button data-remove="${i}">remove</button></li>`)
    .join('');
  const dirty = view.dirty
    ? '<span class="badge dirty">unsubmitted edits</span>'
    : '';
  return `<ul class="statements">${items}</ul>${dirty}`;
}

// -- ROR range bars -----------------------------------------------------------

export function rangeBarGeometry(range: AssignmentRange, classes: number):
    { left: number; width: number } {
  // bar spans [at_least, at_most] on a 0..100% axis split into `classes` slots
  const slot = 100 / classes;
  return {
    left: (range.at_least - 1) * slot,
    width: (range.at_most - range.at_least + 1) * slot,
  };
}

export function renderRorView(view: SessionView, node: string): string {
  const stamped = view.ror;
  if (!stamped) return '<div class="empty">no assignment ranges yet</div>';
  const classes = view.summary?.nodes[node] ?? 4;
  const rows = stamped.value.ranges
    .filter((r) => r.node === node)
    .map((r) => {
      const { left, width } = rangeBarGeometry(r, classes);
      const necessary = r.necessary !== null
        ? `<span class="necessary">necessarily C${r.necessary}</span>`
        : '';
      return `<tr><td>${escapeHtml(r.alternative)}</td>` +
        `<td><div class="bar" style="margin-left:${left}%;width:${width}%">` +
        `C${r.at_least}&ndash;C${r.at_most}</div>${necessary}</td></tr>`;
    })
    .join('');
  return `<table class="ror">${rows}</table>${staleBadge(isStale(view, stamped))}`;
}

// -- CAI heatmap --------------------------------------------------------------

/** Background for an acceptability in [0, 1]: white through the accent hue. */
export function heatColor(value: number): string {
  const clamped = Math.min(1, Math.max(0, value));
  const lightness = 100 - Math.round(clamped * 55);
  return `hsl(215 70% ${lightness}%)`;
}

export function renderCaiHeatmap(view: SessionView, node: string): string {
  const stamped = view.cai;
  if (!stamped) return '<div class="empty">no acceptability indices yet</div>';
  const block = stamped.value.cai[node];
  if (!block) return `<div class="empty">no data for ${escapeHtml(node)}</div>`;
  const classes = block[0]?.length ?? 0;
  const head = Array.from({ length: classes }, (_, h) => `<th>C${h + 1}</th>`).join('');
  const rows = stamped.value.alternatives
    .map((alternative, i) => {
      const cells = block[i]
        .map((v) =>
          `<td class="cell" style="background:${heatColor(v)}" data-value="${fmt(v)}">` +
          `${fmt(v)}</td>`)
        .join('');
      return `<tr><td>${escapeHtml(alternative)}</td>${cells}</tr>`;
    })
    .join('');
  return `<table class="heatmap"><tr><th></th>${head}</tr>${rows}</table>` +
    staleBadge(isStale(view, stamped));
}

// -- minimal sets -------------------------------------------------------------

export function renderMinimalSets(view: SessionView): string {
  const stamped = view.minimalSets;
  if (!stamped) return '<div class="empty">no minimal sets yet</div>';
  const { gamma_star, sets, core, complete } = stamped.value;
  const coreText = core.length
    ? core.map((key) => `{${escapeHtml(key.replace('|', ', '))}}`).join(', ')
    : 'empty';
  const list = sets
    .map((s) => {
      const pairs = s.pairs
        .map(([a, b]) => {
          const sign = s.signs[`${a}|${b}`] ?? '';
          return `{${escapeHtml(a)}, ${escapeHtml(b)}}${sign ? ` (${sign})` : ''}`;
        })
        .join(', ');
      return `<li>${pairs}</li>`;
    })
    .join('');
  const partial = complete ? '' : ' <em>(enumeration truncated)</em>';
  return `<p>minimum interacting pairs: ${gamma_star}${partial}</p>` +
    `<p>core: ${coreText}</p><ol>${list}</ol>` +
    staleBadge(isStale(view, stamped));
}

// -- loss aggregation ---------------------------------------------------------

export const DISTANCES: DistanceId[] = ['unit', 'absolute', 'sqrt'];

export function renderDistanceSelector(selected: DistanceId): string {
  const options = DISTANCES
    .map((d) =>
      `<option value="${d}"${d === selected ? ' selected' : ''}>${d}</option>`)
    .join('');
  return `<select id="distance">${options}</select>`;
}

export function renderAggregate(view: SessionView): string {
  const stamped = view.aggregate as Stamped<AggregateResult> | null;
  if (!stamped) return '<div class="empty">no final assignment yet</div>';
  const { classes, loss, distance } = stamped.value;
  const rows = Object.entries(classes)
    .map(([alternative, cls]) =>
      `<tr><td>${escapeHtml(alternative)}</td><td>C${cls}</td></tr>`)
    .join('');
  return `<p>distance ${escapeHtml(distance)}, total loss ${fmt(loss)}</p>` +
    `<table class="final">${rows}</table>` +
    staleBadge(isStale(view, stamped));
}

// -- shell --------------------------------------------------------------------

export function renderNodeTabs(nodes: string[], active: string): string {
  return nodes
    .map((n) =>
      `<button class="tab${n === active ? ' active' : ''}" data-node="${escapeHtml(n)}">` +
      `${escapeHtml(n)}</button>`)
    .join('');
}

export function renderError(view: SessionView): string {
  if (!view.error) return '';
  return `<div class="error">${escapeHtml(view.error)}</div>`;
}
