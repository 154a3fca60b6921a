import { SentinelClient } from './api.js';
import type {
  AttributeRef,
  IncidentReportRequest,
  ReportResponse,
  Vocabulary,
} from './types.js';

export type IncidentFormValues = {
  regretted: boolean;
  uin: string;
  unintendedAudience: string;
  consequenceLevel: string;
};

/**
 * Shape the wire payload for an incident report. A "no regret" answer
 * sends only the post id and the flag; the detail fields travel together
 * or not at all.
 */
export function buildReportPayload(
  postId: string,
  values: IncidentFormValues,
): IncidentReportRequest {
  if (!values.regretted) {
    return { post_id: postId, regretted: false };
  }
  return {
    post_id: postId,
    regretted: true,
    uin: values.uin,
    unintended_audience: values.unintendedAudience,
    consequence_level: values.consequenceLevel,
  };
}

export function renderDetectedSas(sas: AttributeRef[]): HTMLElement {
  const list = document.createElement('ul');
  list.className = 'detected-sas';
  for (const entry of sas) {
    const item = document.createElement('li');
    item.className = 'detected-sas-entry';
    item.textContent = `${entry.attribute} (${entry.dimension})`;
    list.appendChild(item);
  }
  return list;
}

export type IncidentFormEvents = {
  onSubmitted?: (result: ReportResponse) => void;
};

/**
 * Follow-up dialog shown after a sensitive post is deleted: did deleting
 * it mean the disclosure was regretted, and if so what happened?
 */
export class IncidentForm {
  private readonly container: HTMLDivElement;
  private readonly sasHost: HTMLDivElement;
  private readonly uinInput: HTMLInputElement;
  private readonly uinOptions: HTMLDataListElement;
  private readonly audienceSelect: HTMLSelectElement;
  private readonly levelSelect: HTMLSelectElement;
  private readonly regrettedBox: HTMLInputElement;
  private readonly detailFields: HTMLFieldSetElement;
  private postId: string | null = null;

  constructor(
    root: HTMLElement,
    private readonly client: SentinelClient,
    private readonly events: IncidentFormEvents = {},
  ) {
    this.container = document.createElement('div');
    this.container.className = 'incident-form';
    this.container.hidden = true;

    const heading = document.createElement('p');
    heading.className = 'incident-heading';
    heading.textContent = 'You deleted a post with sensitive attributes:';

    this.sasHost = document.createElement('div');
    this.sasHost.className = 'incident-sas';

    this.regrettedBox = document.createElement('input');
    this.regrettedBox.type = 'checkbox';
    this.regrettedBox.className = 'incident-regretted';
    this.regrettedBox.addEventListener('change', () => {
      this.detailFields.disabled = !this.regrettedBox.checked;
    });
    const regretLabel = document.createElement('label');
    regretLabel.append(this.regrettedBox, ' I regret having shared this');

    this.uinInput = document.createElement('input');
    this.uinInput.className = 'incident-uin';
    this.uinInput.setAttribute('list', 'incident-uin-options');
    this.uinOptions = document.createElement('datalist');
    this.uinOptions.id = 'incident-uin-options';

    this.audienceSelect = document.createElement('select');
    this.audienceSelect.className = 'incident-audience';

    this.levelSelect = document.createElement('select');
    this.levelSelect.className = 'incident-level';

    this.detailFields = document.createElement('fieldset');
    this.detailFields.className = 'incident-details';
    this.detailFields.disabled = true;
    this.detailFields.append(
      labeled('What happened?', this.uinInput),
      this.uinOptions,
      labeled('Who saw it that should not have?', this.audienceSelect),
      labeled('How bad was it?', this.levelSelect),
    );

    const submit = document.createElement('button');
    submit.className = 'incident-submit';
    submit.textContent = 'Send report';
    submit.addEventListener('click', () => void this.submit());

    this.container.append(heading, this.sasHost, regretLabel, this.detailFields, submit);
    root.appendChild(this.container);
  }

  setVocabulary(vocabulary: Vocabulary): void {
    this.uinOptions.replaceChildren();
    for (const incident of vocabulary.incidents) {
      const option = document.createElement('option');
      option.value = incident.label;
      this.uinOptions.appendChild(option);
    }
    this.audienceSelect.replaceChildren();
    for (const audience of vocabulary.audiences) {
      const option = document.createElement('option');
      option.value = audience.label;
      option.textContent = audience.label;
      this.audienceSelect.appendChild(option);
    }
    this.levelSelect.replaceChildren();
    for (const level of vocabulary.consequence_levels) {
      const option = document.createElement('option');
      option.value = level;
      option.textContent = level;
      this.levelSelect.appendChild(option);
    }
  }

  open(postId: string, detectedSas: AttributeRef[]): void {
    this.postId = postId;
    this.sasHost.replaceChildren(renderDetectedSas(detectedSas));
    this.regrettedBox.checked = false;
    this.detailFields.disabled = true;
    this.container.hidden = false;
  }

  values(): IncidentFormValues {
    return {
      regretted: this.regrettedBox.checked,
      uin: this.uinInput.value,
      unintendedAudience: this.audienceSelect.value,
      consequenceLevel: this.levelSelect.value,
    };
  }

  async submit(): Promise<ReportResponse | null> {
    if (this.postId === null) {
      return null;
    }
    const payload = buildReportPayload(this.postId, this.values());
    const result = await this.client.submitIncidentReport(payload);
    this.container.hidden = true;
    this.postId = null;
    this.events.onSubmitted?.(result);
    return result;
  }
}

function labeled(text: string, control: HTMLElement): HTMLLabelElement {
  const label = document.createElement('label');
  label.append(`${text} `, control);
  return label;
}
