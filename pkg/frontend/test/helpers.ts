/** Scripted fetch stub: replays queued fixture responses and records
 * every request so tests can assert the exact wire traffic. */

export type RecordedRequest = {
  url: string;
  method: string;
  body: unknown;
};

export type ScriptedResponse = {
  payload: unknown;
  status?: number;
};

export function scriptedFetch(...responses: ScriptedResponse[]) {
  const calls: RecordedRequest[] = [];
  const queue = [...responses];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({
      url,
      method: init?.method ?? 'GET',
      body: typeof init?.body === 'string' ? JSON.parse(init.body) : null,
    });
    const next = queue.shift();
    if (next === undefined) {
      throw new Error(`no scripted response left for ${url}`);
    }
    return new Response(JSON.stringify(next.payload), {
      status: next.status ?? 200,
      headers: { 'content-type': 'application/json' },
    });
  };
  return { fetchFn, calls };
}

/** Let queued microtasks (resolved fetch chains) run to completion. */
export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
