import { SentinelClient } from './api.js';
import type { Heuristic, HeuristicCell, RiskStats } from './types.js';

export function formatPoint(risk: RiskStats): string {
  return risk.point.toFixed(3);
}

export function formatInterval(risk: RiskStats): string {
  return `[${risk.ci_lower.toFixed(3)}, ${risk.ci_upper.toFixed(3)}]`;
}

/** Horizontal whisker: interval band plus a tick at the point estimate. */
function renderWhisker(risk: RiskStats): HTMLElement {
  const track = document.createElement('div');
  track.className = 'whisker-track';
  const band = document.createElement('div');
  band.className = 'whisker-band';
  band.style.left = `${(risk.ci_lower * 100).toFixed(1)}%`;
  band.style.width = `${((risk.ci_upper - risk.ci_lower) * 100).toFixed(1)}%`;
  const tick = document.createElement('div');
  tick.className = 'whisker-tick';
  tick.style.left = `${(risk.point * 100).toFixed(1)}%`;
  track.append(band, tick);
  return track;
}

export function renderCellRow(cell: HeuristicCell): HTMLTableRowElement {
  const row = document.createElement('tr');
  row.className = 'cell-row';
  row.dataset.uin = cell.uin.id;

  const incident = document.createElement('td');
  incident.className = 'cell-incident';
  incident.textContent = cell.uin.label;

  const reports = document.createElement('td');
  reports.className = 'cell-n';
  reports.textContent = String(cell.risk.n);

  const estimate = document.createElement('td');
  estimate.className = 'cell-estimate';
  estimate.textContent = `${formatPoint(cell.risk)} ${formatInterval(cell.risk)}`;

  const severity = document.createElement('td');
  severity.className = 'cell-severity';
  const badge = document.createElement('span');
  badge.className = 'severity-badge';
  badge.textContent = cell.risk.ci_upper.toFixed(3);
  severity.appendChild(badge);

  const spread = document.createElement('td');
  spread.className = 'cell-whisker';
  spread.appendChild(renderWhisker(cell.risk));

  row.append(incident, reports, estimate, severity, spread);
  return row;
}

export function renderHeuristicCard(heuristic: Heuristic): HTMLElement {
  const card = document.createElement('section');
  card.className = 'heuristic-card';
  card.dataset.ph = heuristic.id;

  const heading = document.createElement('h3');
  heading.className = 'heuristic-heading';
  heading.textContent = `${heuristic.id} to ${heuristic.audience.label}`;
  card.appendChild(heading);

  const chips = document.createElement('div');
  chips.className = 'sas-chips';
  for (const entry of heuristic.sas) {
    const chip = document.createElement('span');
    chip.className = 'sas-chip';
    chip.title = entry.dimension;
    chip.textContent = entry.attribute;
    chips.appendChild(chip);
  }
  card.appendChild(chips);

  const table = document.createElement('table');
  table.className = 'cell-table';
  const head = document.createElement('tr');
  for (const title of ['Incident', 'Reports', 'Risk index', 'Severity', 'Spread']) {
    const cell = document.createElement('th');
    cell.textContent = title;
    head.appendChild(cell);
  }
  table.appendChild(head);
  for (const cell of heuristic.cells) {
    table.appendChild(renderCellRow(cell));
  }
  card.appendChild(table);
  return card;
}

/** Read-only view over every learned heuristic and its risk estimates. */
export class Dashboard {
  private readonly container: HTMLDivElement;

  constructor(root: HTMLElement, private readonly client: SentinelClient) {
    this.container = document.createElement('div');
    this.container.className = 'dashboard';
    root.appendChild(this.container);
  }

  async refresh(): Promise<void> {
    const response = await this.client.heuristics();
    this.render(response.heuristics);
  }

  render(heuristics: Heuristic[]): void {
    this.container.replaceChildren();
    if (heuristics.length === 0) {
      const empty = document.createElement('p');
      empty.className = 'dashboard-empty';
      empty.textContent = 'No heuristics learned yet.';
      this.container.appendChild(empty);
      return;
    }
    for (const heuristic of heuristics) {
      this.container.appendChild(renderHeuristicCard(heuristic));
    }
  }
}
