import { SentinelClient } from './api.js';
import type { ComposeResponse, NamedRef, WarningMessage } from './types.js';

export function formatSeverity(severity: number): string {
  return severity.toFixed(3);
}

/** The warning panel: one row per incident, worst first (server order). */
export function renderWarning(warning: WarningMessage): HTMLElement {
  const panel = document.createElement('div');
  panel.className = 'warning-panel';

  const heading = document.createElement('p');
  heading.className = 'warning-heading';
  heading.textContent =
    'This post looks risky. Similar disclosures led to these incidents:';
  panel.appendChild(heading);

  const table = document.createElement('table');
  table.className = 'warning-table';
  const head = document.createElement('tr');
  for (const title of ['Incident', 'Audience', 'Severity']) {
    const cell = document.createElement('th');
    cell.textContent = title;
    head.appendChild(cell);
  }
  table.appendChild(head);

  for (const item of warning.items) {
    const row = document.createElement('tr');
    row.className = 'warning-row';
    const uin = document.createElement('td');
    uin.className = 'warning-uin';
    uin.textContent = item.uin;
    const audience = document.createElement('td');
    audience.className = 'warning-audience';
    audience.textContent = item.audience;
    const severity = document.createElement('td');
    severity.className = 'warning-severity';
    severity.textContent = formatSeverity(item.severity);
    row.append(uin, audience, severity);
    table.appendChild(row);
  }
  panel.appendChild(table);
  return panel;
}

export type ComposerEvents = {
  onPublished?: (postId: string) => void;
  onRetracted?: (postId: string) => void;
};

/** Compose form plus the pending-warning decision flow. */
export class Composer {
  private readonly form: HTMLFormElement;
  private readonly textArea: HTMLTextAreaElement;
  private readonly audienceSelect: HTMLSelectElement;
  private readonly outcome: HTMLDivElement;

  constructor(
    root: HTMLElement,
    private readonly client: SentinelClient,
    private readonly userId: string,
    private readonly events: ComposerEvents = {},
  ) {
    this.form = document.createElement('form');
    this.form.className = 'composer';

    this.textArea = document.createElement('textarea');
    this.textArea.className = 'composer-text';
    this.textArea.placeholder = "What's on your mind?";
    this.textArea.rows = 4;

    this.audienceSelect = document.createElement('select');
    this.audienceSelect.className = 'composer-audience';

    const submit = document.createElement('button');
    submit.type = 'submit';
    submit.className = 'composer-submit';
    submit.textContent = 'Post';

    this.form.append(this.textArea, this.audienceSelect, submit);
    this.form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.submit();
    });

    this.outcome = document.createElement('div');
    this.outcome.className = 'composer-outcome';

    root.append(this.form, this.outcome);
  }

  setAudiences(audiences: NamedRef[]): void {
    this.audienceSelect.replaceChildren();
    for (const audience of audiences) {
      const option = document.createElement('option');
      option.value = audience.id;
      option.textContent = audience.label;
      this.audienceSelect.appendChild(option);
    }
  }

  async submit(): Promise<ComposeResponse> {
    const result = await this.client.composePost({
      user_id: this.userId,
      text: this.textArea.value,
      declared_audience: this.audienceSelect.value || 'public',
    });
    this.showResult(result);
    return result;
  }

  showResult(result: ComposeResponse): void {
    this.outcome.replaceChildren();
    if (result.status === 'published') {
      const note = document.createElement('p');
      note.className = 'published-note';
      note.textContent = `Published as ${result.post_id}.`;
      this.outcome.appendChild(note);
      return;
    }
    this.outcome.appendChild(renderWarning(result.warning));

    const actions = document.createElement('div');
    actions.className = 'warning-actions';
    const publish = document.createElement('button');
    publish.className = 'action-publish';
    publish.textContent = 'Publish anyway';
    publish.addEventListener('click', () => void this.resolve(result.post_id, 'publish'));
    const retract = document.createElement('button');
    retract.className = 'action-retract';
    retract.textContent = 'Retract';
    retract.addEventListener('click', () => void this.resolve(result.post_id, 'retract'));
    actions.append(publish, retract);
    this.outcome.appendChild(actions);
  }

  private async resolve(postId: string, action: 'publish' | 'retract'): Promise<void> {
    const decision = await this.client.decide(postId, action);
    this.outcome.replaceChildren();
    const note = document.createElement('p');
    note.className = action === 'publish' ? 'published-note' : 'retracted-note';
    note.textContent =
      action === 'publish'
        ? `Published as ${postId}. Your warning threshold is now ${decision.phi.toFixed(2)}.`
        : `Draft retracted. Your warning threshold is now ${decision.phi.toFixed(2)}.`;
    this.outcome.appendChild(note);
    if (action === 'publish') {
      this.events.onPublished?.(postId);
    } else {
      this.events.onRetracted?.(postId);
    }
  }
}
