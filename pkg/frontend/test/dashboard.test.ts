import { describe, expect, it } from 'vitest';

import { SentinelClient } from '../src/api';
import { Dashboard, formatInterval, formatPoint } from '../src/dashboard';
import type { Heuristic, RiskStats } from '../src/types';
import heuristicsFixture from './fixtures/heuristics.json';
import { scriptedFetch } from './helpers';

const HEURISTICS = heuristicsFixture.heuristics as Heuristic[];

function jobLossRisk(): RiskStats {
  const ph1 = HEURISTICS.find((h) => h.id === 'ph-000001')!;
  return ph1.cells.find((cell) => cell.uin.id === 'job loss')!.risk;
}

describe('risk formatting', () => {
  it('rounds the reference point estimate and interval to three decimals', () => {
    const risk = jobLossRisk();
    expect(formatPoint(risk)).toBe('0.843');
    expect(formatInterval(risk)).toBe('[0.782, 0.904]');
  });
});

describe('dashboard rendering', () => {
  function renderedRoot(heuristics: Heuristic[]) {
    const root = document.createElement('div');
    const { fetchFn } = scriptedFetch();
    const dashboard = new Dashboard(root, new SentinelClient(fetchFn));
    dashboard.render(heuristics);
    return root;
  }

  it('shows the seeded workplace cell as point, interval, and severity badge', () => {
    const root = renderedRoot(HEURISTICS);
    const card = root.querySelector('[data-ph="ph-000001"]')!;
    const row = card.querySelector('[data-uin="job loss"]')!;
    expect(row.querySelector('.cell-estimate')!.textContent).toBe(
      '0.843 [0.782, 0.904]',
    );
    expect(row.querySelector('.severity-badge')!.textContent).toBe('0.904');
    expect(row.querySelector('.cell-n')!.textContent).toBe('108');
  });

  it('shows the companion reputation cell on the same card', () => {
    const root = renderedRoot(HEURISTICS);
    const card = root.querySelector('[data-ph="ph-000001"]')!;
    const row = card.querySelector('[data-uin="reputation damage"]')!;
    expect(row.querySelector('.cell-estimate')!.textContent).toBe(
      '0.214 [0.180, 0.249]',
    );
    expect(row.querySelector('.cell-n')!.textContent).toBe('322');
  });

  it('renders one card per heuristic with its attribute chips', () => {
    const root = renderedRoot(HEURISTICS);
    expect(root.querySelectorAll('.heuristic-card').length).toBe(HEURISTICS.length);
    const first = root.querySelector('[data-ph="ph-000001"]')!;
    expect(first.querySelector('.heuristic-heading')!.textContent).toBe(
      'ph-000001 to Work colleagues',
    );
    const chips = [...first.querySelectorAll('.sas-chip')].map(
      (chip) => chip.textContent,
    );
    expect(chips.sort()).toEqual(['Employment status', 'Negative', 'Work location']);
  });

  it('falls back to an empty-state message', () => {
    const root = renderedRoot([]);
    expect(root.querySelector('.dashboard-empty')).not.toBeNull();
    expect(root.querySelectorAll('.heuristic-card').length).toBe(0);
  });

  it('refresh pulls the heuristics view from the service', async () => {
    const { fetchFn, calls } = scriptedFetch({ payload: heuristicsFixture });
    const root = document.createElement('div');
    const dashboard = new Dashboard(root, new SentinelClient(fetchFn));
    await dashboard.refresh();
    expect(calls[0]).toEqual({
      url: '/api/v1/heuristics',
      method: 'GET',
      body: null,
    });
    expect(root.querySelectorAll('.heuristic-card').length).toBe(HEURISTICS.length);
  });
});
