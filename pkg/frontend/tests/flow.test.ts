import { describe, expect, it } from "vitest";

import { AnnotationApi, SubmitOutcome, Task } from "../src/api.js";
import { AnnotationFlow, FlowState } from "../src/flow.js";

type SubmitScript = Array<SubmitOutcome | "network-error">;

function fakeApi(tasks: Array<Task | null>, submits: SubmitScript) {
  const submitted: Array<{ sampleId: string; label: string }> = [];
  let taskIndex = 0;
  const api = {
    async nextTask(): Promise<Task | null> {
      const next = tasks[Math.min(taskIndex, tasks.length - 1)];
      taskIndex += 1;
      return next;
    },
    async submit(_a: string, sampleId: string, label: string): Promise<SubmitOutcome> {
      const outcome = submits.shift() ?? "ok";
      if (outcome === "network-error") {
        throw new Error("boom");
      }
      submitted.push({ sampleId, label });
      return outcome;
    },
  } as unknown as AnnotationApi;
  return { api, submitted };
}

function task(id: string): Task {
  return { sample_id: id, text: `text ${id} cloud`, aspect: "cloud",
           choices: ["positive", "negative", "neutral"] };
}

function collect(): { states: FlowState[]; listener: (s: FlowState) => void } {
  const states: FlowState[] = [];
  return { states, listener: (s) => states.push(s) };
}

describe("AnnotationFlow", () => {
  it("walks fetch -> choose -> submit -> next", async () => {
    const { api, submitted } = fakeApi([task("s1"), task("s2"), null], ["ok", "ok"]);
    const { listener } = collect();
    const flow = new AnnotationFlow(api, "ann", listener);
    await flow.start();
    expect(flow.current.kind).toBe("task");
    await flow.choose("negative");
    expect(submitted).toEqual([{ sampleId: "s1", label: "negative" }]);
    expect(flow.current.kind).toBe("task");
    await flow.choose("positive");
    expect(flow.current).toEqual({ kind: "done", submitted: 2 });
    expect(flow.submittedCount).toBe(2);
  });

  it("ignores a second choice while one is in flight", async () => {
    const { api, submitted } = fakeApi([task("s1"), null], ["ok"]);
    const flow = new AnnotationFlow(api, "ann", () => {});
    await flow.start();
    const first = flow.choose("positive");
    const second = flow.choose("negative"); // state is "submitting": no-op
    await Promise.all([first, second]);
    expect(submitted).toEqual([{ sampleId: "s1", label: "positive" }]);
  });

  it("rejects labels outside the choice set", async () => {
    const { api, submitted } = fakeApi([task("s1")], []);
    const flow = new AnnotationFlow(api, "ann", () => {});
    await flow.start();
    await flow.choose("meh");
    expect(submitted).toEqual([]);
    expect(flow.current.kind).toBe("task");
  });

  it("skips to a fresh task on conflict without counting it", async () => {
    const { api } = fakeApi([task("s1"), task("s2")], ["conflict"]);
    const flow = new AnnotationFlow(api, "ann", () => {});
    await flow.start();
    await flow.choose("neutral");
    expect(flow.current.kind).toBe("task");
    expect((flow.current as { task: Task }).task.sample_id).toBe("s2");
    expect(flow.submittedCount).toBe(0);
  });

  it("keeps the pending choice across a network failure and retries it", async () => {
    const { api, submitted } = fakeApi([task("s1"), null], ["network-error", "ok"]);
    const flow = new AnnotationFlow(api, "ann", () => {});
    await flow.start();
    await flow.choose("negative");
    expect(flow.current.kind).toBe("retry");
    expect((flow.current as { choice: string }).choice).toBe("negative");
    await flow.retry();
    expect(submitted).toEqual([{ sampleId: "s1", label: "negative" }]);
    expect(flow.current).toEqual({ kind: "done", submitted: 1 });
  });

  it("shows the completion screen with the personal count on exhaustion", async () => {
    const { api } = fakeApi([null], []);
    const { states, listener } = collect();
    const flow = new AnnotationFlow(api, "ann", listener);
    await flow.start();
    expect(states.at(-1)).toEqual({ kind: "done", submitted: 0 });
  });

  it("reports a fatal state when the first fetch fails", async () => {
    const api = {
      async nextTask(): Promise<Task | null> { throw new Error("down"); },
      async submit(): Promise<SubmitOutcome> { return "ok"; },
    } as unknown as AnnotationApi;
    const flow = new AnnotationFlow(api, "ann", () => {});
    await flow.start();
    expect(flow.current.kind).toBe("fatal");
  });
});
