/**
 * Typed client for the annotation service endpoints.
 *
 * The fetch function is injectable so the flow logic is testable without a
 * browser or a live server.
 */

export interface Task {
  sample_id: string;
  text: string;
  aspect: string;
  choices: string[];
}

export interface Instructions {
  choices: string[];
  definitions: Record<string, string>;
}

export type SubmitOutcome = "ok" | "conflict" | "gone" | "invalid";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {}

export class AnnotationApi {
  private fetchFn: FetchLike;
  private base: string;

  constructor(fetchFn: FetchLike = fetch.bind(globalThis), base = "") {
    this.fetchFn = fetchFn;
    this.base = base;
  }

  /** The three impact definitions; throws when the config is missing. */
  async instructions(): Promise<Instructions> {
    const response = await this.fetchFn(`${this.base}/instructions`);
    if (!response.ok) {
      throw new ServiceError(`instructions unavailable (${response.status})`);
    }
    const data = (await response.json()) as Instructions;
    if (!data.definitions || Object.keys(data.definitions).length < 3) {
      throw new ServiceError("instruction config incomplete");
    }
    return data;
  }

  /** Next open task for this annotator; null when the campaign is exhausted. */
  async nextTask(annotator: string): Promise<Task | null> {
    const response = await this.fetchFn(
      `${this.base}/task?annotator=${encodeURIComponent(annotator)}`);
    if (response.status === 204) {
      return null;
    }
    if (!response.ok) {
      throw new ServiceError(`task fetch failed (${response.status})`);
    }
    return (await response.json()) as Task;
  }

  /**
   * Submit one label. Conflict (already labelled) and gone (cap reached
   * between serve and submit) are expected outcomes, not errors.
   */
  async submit(annotator: string, sampleId: string, label: string): Promise<SubmitOutcome> {
    const response = await this.fetchFn(`${this.base}/annotations`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ annotator, sample_id: sampleId, label }),
    });
    if (response.status === 201) return "ok";
    if (response.status === 409) return "conflict";
    if (response.status === 410) return "gone";
    if (response.status === 422) return "invalid";
    throw new ServiceError(`submit failed (${response.status})`);
  }
}
