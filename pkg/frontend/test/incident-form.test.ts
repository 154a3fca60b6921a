import { describe, expect, it } from 'vitest';

import { SentinelClient } from '../src/api';
import { IncidentForm, buildReportPayload } from '../src/incident-form';
import type { AttributeRef, Vocabulary } from '../src/types';
import deleteResponse from './fixtures/delete_response.json';
import reportRequest from './fixtures/report_request.json';
import reportResponse from './fixtures/report_response.json';
import vocabulary from './fixtures/vocabulary.json';
import { scriptedFetch } from './helpers';

describe('report payload shape', () => {
  it('matches the recorded wire request field for field', () => {
    const payload = buildReportPayload('post-000001', {
      regretted: true,
      uin: 'Job loss',
      unintendedAudience: 'Work colleagues',
      consequenceLevel: 'moderate',
    });
    expect(payload).toEqual(reportRequest);
    expect(Object.keys(payload).sort()).toEqual([
      'consequence_level',
      'post_id',
      'regretted',
      'uin',
      'unintended_audience',
    ]);
  });

  it('drops every detail field when the deletion was not regretted', () => {
    const payload = buildReportPayload('post-000007', {
      regretted: false,
      uin: 'Job loss',
      unintendedAudience: 'Work colleagues',
      consequenceLevel: 'moderate',
    });
    expect(payload).toEqual({ post_id: 'post-000007', regretted: false });
    expect(Object.keys(payload).sort()).toEqual(['post_id', 'regretted']);
  });
});

describe('incident form flow', () => {
  function buildForm(...responses: { payload: unknown; status?: number }[]) {
    const { fetchFn, calls } = scriptedFetch(...responses);
    const root = document.createElement('div');
    const form = new IncidentForm(root, new SentinelClient(fetchFn));
    form.setVocabulary(vocabulary as Vocabulary);
    return { form, root, calls };
  }

  it('stays hidden until a sensitive deletion opens it', () => {
    const { form, root } = buildForm();
    const container = root.querySelector('.incident-form') as HTMLElement;
    expect(container.hidden).toBe(true);
    form.open('post-000001', deleteResponse.detected_sas as AttributeRef[]);
    expect(container.hidden).toBe(false);
  });

  it('lists each detected attribute with its dimension', () => {
    const { form, root } = buildForm();
    form.open('post-000001', deleteResponse.detected_sas as AttributeRef[]);
    const entries = [...root.querySelectorAll('.detected-sas-entry')].map(
      (entry) => entry.textContent,
    );
    expect(entries).toEqual([
      'Employment status (Demographics)',
      'Work location (Location)',
      'Negative (Sentiment)',
    ]);
  });

  it('offers the known incidents, audiences, and consequence levels', () => {
    const { root } = buildForm();
    const levels = [...root.querySelectorAll('.incident-level option')].map(
      (option) => (option as HTMLOptionElement).value,
    );
    expect(levels).toEqual(vocabulary.consequence_levels);
    const audiences = [...root.querySelectorAll('.incident-audience option')].map(
      (option) => (option as HTMLOptionElement).value,
    );
    expect(audiences).toContain('Work colleagues');
  });

  it('submits the exact recorded request and reports the matches', async () => {
    const { form, root, calls } = buildForm({ payload: reportResponse });
    form.open('post-000001', deleteResponse.detected_sas as AttributeRef[]);

    (root.querySelector('.incident-regretted') as HTMLInputElement).click();
    (root.querySelector('.incident-uin') as HTMLInputElement).value = 'Job loss';
    (root.querySelector('.incident-audience') as HTMLSelectElement).value =
      'Work colleagues';
    (root.querySelector('.incident-level') as HTMLSelectElement).value = 'moderate';

    const result = await form.submit();
    expect(calls).toEqual([
      {
        url: '/api/v1/incident-reports',
        method: 'POST',
        body: reportRequest,
      },
    ]);
    expect(result).toEqual(reportResponse);
    expect((root.querySelector('.incident-form') as HTMLElement).hidden).toBe(true);
  });

  it('submits only the flag when nothing was regretted', async () => {
    const { form, root, calls } = buildForm({ payload: { matches: [] } });
    form.open('post-000009', []);
    (root.querySelector('.incident-uin') as HTMLInputElement).value = 'Job loss';

    await form.submit();
    expect(calls[0]!.body).toEqual({ post_id: 'post-000009', regretted: false });
  });
});
