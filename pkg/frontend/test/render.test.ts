import { describe, expect, it } from 'vitest';

import {
  describeStatement,
  escapeHtml,
  fmt,
  heatColor,
  rangeBarGeometry,
  renderAggregate,
  renderBanner,
  renderCaiHeatmap,
  renderDistanceSelector,
  renderMinimalSets,
  renderRorView,
  renderStatementList,
} from '../src/render';
import { commitAccepted, emptyView, loadSession, withResult } from '../src/state';
import type { SessionSummary } from '../src/types';

const summary: SessionSummary = {
  id: 'eu',
  revision: 1,
  alternatives: ['Austria', 'Cyprus'],
  nodes: { Global: 4 },
  statements: [],
  documents: [],
};

function baseView() {
  return loadSession(emptyView(), summary, []);
}

describe('number formatting', () => {
  it('round-trips payload values byte for byte', () => {
    // exactly what JSON.parse produced must be printed again
    for (const raw of ['0.0024113', '1', '0.95596', '0', '1e-07', 'null']) {
      expect(fmt(JSON.parse(raw))).toBe(raw === '1e-07' ? '1e-7' : raw);
    }
  });
});

describe('compatibility banner', () => {
  it('is green with the exact eps* payload value', () => {
    let view = baseView();
    view = commitAccepted(view, { revision: 1, compatible: true, eps_star: 0.0170820 });
    const html = renderBanner(view);
    expect(html).toContain('class="banner ok"');
    expect(html).toContain(`eps* = ${JSON.stringify(0.0170820)}`);
    expect(html).not.toContain('stale');
  });

  it('turns red when incompatible', () => {
    let view = baseView();
    view = commitAccepted(view, { revision: 1, compatible: false, eps_star: -0.2 });
    expect(renderBanner(view)).toContain('class="banner bad"');
  });

  it('badges a stale check after an edit', () => {
    let view = baseView();
    view = commitAccepted(view, { revision: 1, compatible: true, eps_star: 0.1 });
    view = { ...view, summary: { ...summary, revision: 2 } };
    expect(renderBanner(view)).toContain('stale');
  });
});

describe('statement list', () => {
  it('describes every statement kind in words', () => {
    expect(describeStatement({ type: 'assign_exact', alternative: 'Italy',
                               node: 'Global', cls: 2 }))
      .toBe('Italy is in class C2 at Global');
    expect(describeStatement({ type: 'more_important', node: 'Gov',
                               more: 'D/GDP', less: 'PB/GDP' }))
      .toBe('D/GDP outweighs PB/GDP under Gov');
    expect(describeStatement({ type: 'positive_interaction', node: 'Fin',
                               a: 'CAR/GDP', b: 'CAB/GDP' }))
      .toBe('CAR/GDP and CAB/GDP reinforce each other under Fin');
  });

  it('shows the dirty badge only with unsubmitted edits', () => {
    let view = baseView();
    expect(renderStatementList(view)).not.toContain('dirty');
    view = { ...view, pending: [{ type: 'indifference', a: 'x', b: 'y',
                                  node: 'Global' }], dirty: true };
    const html = renderStatementList(view);
    expect(html).toContain('unsubmitted edits');
    expect(html).toContain('data-remove="0"');
  });
});

describe('assignment range bars', () => {
  it('maps class intervals to bar geometry', () => {
    const range = { alternative: 'Austria', node: 'Global', possible: [2, 3, 4],
                    necessary: null, at_least: 2, at_most: 4 };
    expect(rangeBarGeometry(range, 4)).toEqual({ left: 25, width: 75 });
    expect(rangeBarGeometry({ ...range, at_least: 1, at_most: 1 }, 4))
      .toEqual({ left: 0, width: 25 });
  });

  it('renders one row per alternative at the active node', () => {
    let view = baseView();
    view = withResult(view, 'ror', 1, { ranges: [
      { alternative: 'Austria', node: 'Global', possible: [2, 3],
        necessary: null, at_least: 2, at_most: 3 },
      { alternative: 'Cyprus', node: 'Global', possible: [1],
        necessary: 1, at_least: 1, at_most: 1 },
      { alternative: 'Austria', node: 'Ec', possible: [1],
        necessary: 1, at_least: 1, at_most: 1 },
    ] });
    const html = renderRorView(view, 'Global');
    expect(html.match(/<tr>/g)).toHaveLength(2);
    expect(html).toContain('C2&ndash;C3');
    expect(html).toContain('necessarily C1');
  });
});

describe('CAI heatmap', () => {
  it('prints each payload frequency verbatim', () => {
    const block = [[1, 0, 0, 0], [0.04404, 0.95596, 0, 0]];
    let view = baseView();
    view = withResult(view, 'cai', 1,
                      { alternatives: ['Austria', 'Cyprus'], cai: { Global: block } });
    const html = renderCaiHeatmap(view, 'Global');
    for (const value of block.flat()) {
      expect(html).toContain(`data-value="${JSON.stringify(value)}"`);
      expect(html).toContain(`>${JSON.stringify(value)}</td>`);
    }
  });

  it('shades higher frequencies darker', () => {
    const low = heatColor(0);
    const high = heatColor(1);
    expect(low).toBe('hsl(215 70% 100%)');
    expect(high).toBe('hsl(215 70% 45%)');
    expect(heatColor(2)).toBe(high); // clamped
  });
});

describe('minimal sets and aggregation', () => {
  it('lists supports with signs and the core', () => {
    let view = baseView();
    view = withResult(view, 'minimalSets', 1, {
      gamma_star: 2,
      sets: [{ pairs: [['Eco', 'Fin'], ['Eco', 'Gov']],
               signs: { 'Eco|Fin': '+', 'Eco|Gov': '-' } }],
      core: ['Eco|Fin'],
      complete: true,
    });
    const html = renderMinimalSets(view);
    expect(html).toContain('minimum interacting pairs: 2');
    expect(html).toContain('{Eco, Fin} (+)');
    expect(html).toContain('{Eco, Gov} (-)');
    expect(html).toContain('core: {Eco, Fin}');
  });

  it('offers the three distances and re-renders the final classes', () => {
    expect(renderDistanceSelector('absolute'))
      .toContain('<option value="absolute" selected>');
    let view = baseView();
    view = withResult(view, 'aggregate', 1,
                      { classes: { Austria: 3, Cyprus: 1 }, loss: 1.25,
                        distance: 'absolute' });
    const html = renderAggregate(view);
    expect(html).toContain('distance absolute');
    expect(html).toContain(`loss ${JSON.stringify(1.25)}`);
    expect(html).toContain('<td>Austria</td><td>C3</td>');
  });
});

describe('escaping', () => {
  it('neutralizes markup in labels', () => {
    expect(escapeHtml('<b>&"x"')).toBe('&lt;b&gt;&amp;&quot;x&quot;');
  });
});
