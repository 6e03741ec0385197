/**
 * Page bootstrap: wires the pure renderers to the API client. All state lives
 * in a single SessionView; every interaction produces a new view and a full
 * re-render, so the page is always reproducible from (session JSON, buffer).
 */

import { ApiClient } from './api';
import {
  addPending,
  commitAccepted,
  currentRevision,
  emptyView,
  loadSession,
  removePending,
  withError,
  withResult,
  type SessionView,
} from './state';
import {
  DISTANCES,
  renderAggregate,
  renderBanner,
  renderCaiHeatmap,
  renderDistanceSelector,
  renderError,
  renderMinimalSets,
  renderNodeTabs,
  renderRorView,
  renderStatementList,
} from './render';
import type { DistanceId, StatementDoc } from './types';

const SAMPLES = 10_000;
const SEED = 0;

interface UiState {
  view: SessionView;
  sessionId: string;
  activeNode: string;
  distance: DistanceId;
  busy: string | null;
}

const client = new ApiClient(
  (window as { HISORT_API?: string }).HISORT_API ?? 'http://127.0.0.1:8000',
);

const state: UiState = {
  view: emptyView(),
  sessionId: '',
  activeNode: '',
  distance: 'unit',
  busy: null,
};

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function render(): void {
  const nodes = state.view.summary ? Object.keys(state.view.summary.nodes) : [];
  el('banner').innerHTML = renderBanner(state.view);
  el('error').innerHTML = renderError(state.view);
  el('statements').innerHTML = renderStatementList(state.view);
  el('tabs').innerHTML = renderNodeTabs(nodes, state.activeNode);
  el('ror').innerHTML = renderRorView(state.view, state.activeNode);
  el('cai').innerHTML = renderCaiHeatmap(state.view, state.activeNode);
  el('minimal-sets').innerHTML = renderMinimalSets(state.view);
  el('distance-box').innerHTML = renderDistanceSelector(state.distance);
  el('aggregate').innerHTML = renderAggregate(state.view);
  el('busy').textContent = state.busy ?? '';
}

async function guard(label: string, work: () => Promise<void>): Promise<void> {
  state.busy = label;
  render();
  try {
    await work();
  } catch (err) {
    state.view = withError(state.view, err instanceof Error ? err.message : String(err));
  } finally {
    state.busy = null;
    render();
  }
}

async function openSession(id: string): Promise<void> {
  await guard(`loading ${id}`, async () => {
    const summary = await client.getSession(id);
    state.sessionId = id;
    state.activeNode = Object.keys(summary.nodes)[0] ?? '';
    state.view = loadSession(emptyView(), summary, summary.documents);
    const compat = await client.getCompatibility(id);
    state.view = { ...state.view,
      compatibility: { revision: compat.revision, value: compat } };
  });
}

async function submitStatements(): Promise<void> {
  await guard('submitting statements', async () => {
    const ack = await client.putStatements(
      state.sessionId, currentRevision(state.view), state.view.pending);
    state.view = commitAccepted(state.view, ack);
  });
}

async function refreshRor(): Promise<void> {
  const revision = currentRevision(state.view);
  await guard('computing assignment ranges', async () => {
    const result = await client.getRor(state.sessionId);
    state.view = withResult(state.view, 'ror', revision, result);
  });
}

async function refreshMinimalSets(): Promise<void> {
  const revision = currentRevision(state.view);
  await guard('enumerating minimal sets', async () => {
    const result = await client.getMinimalSets(state.sessionId);
    state.view = withResult(state.view, 'minimalSets', revision, result);
  });
}

async function refreshCai(): Promise<void> {
  const revision = currentRevision(state.view);
  await guard('sampling acceptability indices', async () => {
    const result = await client.getCai(state.sessionId, SAMPLES, SEED);
    state.view = withResult(state.view, 'cai', revision, result);
  });
}

async function refreshAggregate(): Promise<void> {
  const revision = currentRevision(state.view);
  await guard('aggregating final assignment', async () => {
    const result = await client.getAggregate(
      state.sessionId, state.activeNode, SAMPLES, SEED, state.distance);
    state.view = withResult(state.view, 'aggregate', revision, result);
  });
}

function readStatementForm(): StatementDoc | null {
  const form = el('statement-form') as unknown as HTMLFormElement;
  const data = new FormData(form);
  const doc: StatementDoc = { type: String(data.get('type')) as StatementDoc['type'] };
  for (const field of ['alternative', 'node', 'a', 'b', 'better', 'worse',
                       'more', 'less']) {
    const value = data.get(field);
    if (value) doc[field] = String(value);
  }
  for (const field of ['cls', 'lo', 'hi']) {
    const value = data.get(field);
    if (value) doc[field] = Number(value);
  }
  return doc.type ? doc : null;
}

function wire(): void {
  el('open').addEventListener('click', () => {
    const id = (el('session-id') as HTMLInputElement).value.trim();
    if (id) void openSession(id);
  });
  el('submit').addEventListener('click', () => void submitStatements());
  el('add-statement').addEventListener('click', () => {
    const doc = readStatementForm();
    if (doc) {
      state.view = addPending(state.view, doc);
      render();
    }
  });
  el('statements').addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    const index = target.dataset.remove;
    if (index !== undefined) {
      state.view = removePending(state.view, Number(index));
      render();
    }
  });
  el('tabs').addEventListener('click', (event) => {
    const node = (event.target as HTMLElement).dataset.node;
    if (node) {
      state.activeNode = node;
      render();
    }
  });
  el('distance-box').addEventListener('change', (event) => {
    const value = (event.target as HTMLSelectElement).value as DistanceId;
    if (DISTANCES.includes(value)) {
      state.distance = value;
      void refreshAggregate();
    }
  });
  el('run-ror').addEventListener('click', () => void refreshRor());
  el('run-minimal-sets').addEventListener('click', () => void refreshMinimalSets());
  el('run-cai').addEventListener('click', () => void refreshCai());
  el('run-aggregate').addEventListener('click', () => void refreshAggregate());
}

document.addEventListener('DOMContentLoaded', () => {
  wire();
  render();
});
