/**
 * Annotation loop state machine: fetch task -> render -> one choice ->
 * submit -> next. Serializes submissions (a second choice while one is in
 * flight is ignored), skips conflicted/closed tasks, and keeps the pending
 * choice across network failures so a retry resubmits it.
 */

import { AnnotationApi, Task } from "./api.js";

export type FlowState =
  | { kind: "loading" }
  | { kind: "task"; task: Task }
  | { kind: "submitting"; task: Task; choice: string }
  | { kind: "retry"; task: Task; choice: string; message: string }
  | { kind: "done"; submitted: number }
  | { kind: "fatal"; message: string };

export type StateListener = (state: FlowState) => void;

export class AnnotationFlow {
  readonly annotator: string;
  private api: AnnotationApi;
  private listener: StateListener;
  private state: FlowState = { kind: "loading" };
  private submitted = 0;

  constructor(api: AnnotationApi, annotator: string, listener: StateListener) {
    this.api = api;
    this.annotator = annotator;
    this.listener = listener;
  }

  get current(): FlowState {
    return this.state;
  }

  get submittedCount(): number {
    return this.submitted;
  }

  private transition(state: FlowState): void {
    this.state = state;
    this.listener(state);
  }

  /** Fetch the first (or next) task. */
  async start(): Promise<void> {
    this.transition({ kind: "loading" });
    let task: Task | null;
    try {
      task = await this.api.nextTask(this.annotator);
    } catch (error) {
      this.transition({ kind: "fatal", message: String(error) });
      return;
    }
    if (task === null) {
      this.transition({ kind: "done", submitted: this.submitted });
    } else {
      this.transition({ kind: "task", task });
    }
  }

  /**
   * Submit the choice for the rendered task. Only legal in the "task"
   * state, so a double click (second call while "submitting") is a no-op.
   */
  async choose(label: string): Promise<void> {
    if (this.state.kind !== "task") {
      return;
    }
    const task = this.state.task;
    if (!task.choices.includes(label)) {
      return;
    }
    await this.trySubmit(task, label);
  }

  /** Resubmit after a network failure, preserving the pending choice. */
  async retry(): Promise<void> {
    if (this.state.kind !== "retry") {
      return;
    }
    await this.trySubmit(this.state.task, this.state.choice);
  }

  private async trySubmit(task: Task, label: string): Promise<void> {
    this.transition({ kind: "submitting", task, choice: label });
    let outcome;
    try {
      outcome = await this.api.submit(this.annotator, task.sample_id, label);
    } catch (error) {
      this.transition({ kind: "retry", task, choice: label, message: String(error) });
      return;
    }
    if (outcome === "ok") {
      this.submitted += 1;
    }
    // conflict/gone: the task was closed under us; move on to a fresh one
    await this.start();
  }
}
