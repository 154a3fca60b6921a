import { ApiError, SentinelClient } from './api.js';
import { Composer } from './composer.js';
import { Dashboard } from './dashboard.js';
import { IncidentForm } from './incident-form.js';

const USER_ID = 'demo-user';

function tabButton(label: string, onSelect: () => void): HTMLButtonElement {
  const button = document.createElement('button');
  button.className = 'tab-button';
  button.textContent = label;
  button.addEventListener('click', onSelect);
  return button;
}

export function mount(root: HTMLElement, client: SentinelClient): void {
  const tabs = document.createElement('nav');
  tabs.className = 'tabs';
  const composePane = document.createElement('div');
  composePane.className = 'pane';
  const dashboardPane = document.createElement('div');
  dashboardPane.className = 'pane';
  dashboardPane.hidden = true;

  const dashboard = new Dashboard(dashboardPane, client);
  tabs.append(
    tabButton('Compose', () => {
      composePane.hidden = false;
      dashboardPane.hidden = true;
    }),
    tabButton('Risk dashboard', () => {
      composePane.hidden = true;
      dashboardPane.hidden = false;
      void dashboard.refresh();
    }),
  );

  const status = document.createElement('p');
  status.className = 'status-line';

  const feed = document.createElement('ul');
  feed.className = 'feed';

  const incidentForm = new IncidentForm(composePane, client, {
    onSubmitted: (result) => {
      status.textContent = `Report recorded against ${result.matches
        .map((match) => match.ph_id)
        .join(', ')}. Thank you.`;
    },
  });

  const addToFeed = (postId: string, text: string) => {
    const entry = document.createElement('li');
    entry.className = 'feed-entry';
    const body = document.createElement('span');
    body.textContent = text;
    const remove = document.createElement('button');
    remove.className = 'feed-delete';
    remove.textContent = 'Delete';
    remove.addEventListener('click', async () => {
      const outcome = await client.deletePost(postId);
      entry.remove();
      if (outcome.prompt_incident_report) {
        incidentForm.open(postId, outcome.detected_sas);
      }
    });
    entry.append(body, ' ', remove);
    feed.prepend(entry);
  };

  const composer = new Composer(composePane, client, USER_ID, {
    onPublished: (postId) => addToFeed(postId, `(post ${postId})`),
  });

  composePane.append(status, feed);
  root.append(tabs, composePane, dashboardPane);

  client
    .vocabulary()
    .then((vocabulary) => {
      composer.setAudiences(vocabulary.audiences);
      incidentForm.setVocabulary(vocabulary);
    })
    .catch((error: unknown) => {
      status.textContent =
        error instanceof ApiError
          ? `Could not load vocabulary: ${error.message}`
          : 'Could not reach the service.';
    });
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  mount(document.getElementById('app') as HTMLElement, new SentinelClient());
}
