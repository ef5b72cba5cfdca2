/**
 * DOM wiring for the two-pane annotation interface.
 *
 * Screen order: instructions (skippable for returning annotators) -> the
 * annotation loop. Pane one shows the text and its referenced technology;
 * pane two the three impact choices, clickable or via keys 1/2/3.
 */

import { AnnotationApi, Instructions } from "./api.js";
import { AnnotationFlow, FlowState } from "./flow.js";
import { getOrCreateToken, isReturningAnnotator, markInstructionsSeen } from "./identity.js";
import { choiceForKey } from "./keys.js";
import { containsWholeWord } from "./text.js";

const root = document.getElementById("app") as HTMLElement;
const api = new AnnotationApi();
const store = window.localStorage;
const annotator = getOrCreateToken(store);

let flow: AnnotationFlow | null = null;

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function clear(): void {
  root.replaceChildren();
}

function renderFatal(message: string): void {
  clear();
  const pane = el("div", "pane error-pane");
  pane.append(el("h2", "", "Unavailable"),
              el("p", "", message),
              el("p", "hint", "Check that the annotation service is running."));
  root.append(pane);
}

function renderInstructions(instructions: Instructions): void {
  clear();
  const pane = el("div", "pane instructions-pane");
  pane.append(el("h2", "", "Before you start"));
  pane.append(el("p", "", "You will see short posts that mention a technology. " +
    "For each one, judge how reading it would affect your outlook on that technology:"));
  const list = el("dl", "definitions");
  for (const choice of instructions.choices) {
    list.append(el("dt", `choice-${choice}`, choice));
    list.append(el("dd", "", instructions.definitions[choice] ?? ""));
  }
  pane.append(list);
  const button = el("button", "primary", "I understand, start annotating") as HTMLButtonElement;
  button.addEventListener("click", () => {
    markInstructionsSeen(store);
    startLoop();
  });
  pane.append(button);
  root.append(pane);
}

function renderState(state: FlowState): void {
  clear();
  switch (state.kind) {
    case "loading":
      root.append(el("div", "pane", "Loading next task…"));
      return;
    case "done": {
      const pane = el("div", "pane done-pane");
      pane.append(el("h2", "", "All done, thank you!"),
                  el("p", "", `You submitted ${state.submitted} annotation${state.submitted === 1 ? "" : "s"}.`));
      root.append(pane);
      return;
    }
    case "fatal":
      renderFatal(state.message);
      return;
    case "retry": {
      const pane = el("div", "pane error-pane");
      pane.append(el("h2", "", "Connection problem"),
                  el("p", "", state.message),
                  el("p", "", `Your choice (“${state.choice}”) is kept; retry when ready.`));
      const button = el("button", "primary", "Retry submission") as HTMLButtonElement;
      button.addEventListener("click", () => void flow?.retry());
      pane.append(button);
      root.append(pane);
      return;
    }
    case "task":
    case "submitting": {
      const task = state.task;
      const text = el("div", "pane text-pane");
      text.append(el("h2", "", "The post"));
      text.append(el("p", "tweet-text", task.text));
      const aspectLine = el("p", "aspect-line");
      aspectLine.append("Referenced technology: ");
      aspectLine.append(el("strong", "aspect", task.aspect));
      if (!containsWholeWord(task.text, task.aspect)) {
        aspectLine.append(el("span", "aspect-warning",
          " (term not visible in this text; flag it if unsure)"));
      }
      text.append(aspectLine);

      const choices = el("div", "pane choices-pane");
      choices.append(el("h2", "", "Your judgment"));
      choices.append(el("p", "hint", "Click a choice or press 1 / 2 / 3."));
      task.choices.forEach((choice, index) => {
        const button = el("button", `choice choice-${choice}`,
                          `${index + 1}. ${choice}`) as HTMLButtonElement;
        button.disabled = state.kind === "submitting";
        button.addEventListener("click", () => void flow?.choose(choice));
        choices.append(button);
      });
      const status = el("p", "status",
        state.kind === "submitting" ? "Submitting…" : `Signed in as ${annotator}`);
      choices.append(status);
      root.append(text, choices);
      return;
    }
  }
}

function startLoop(): void {
  flow = new AnnotationFlow(api, annotator, renderState);
  void flow.start();
}

window.addEventListener("keydown", (event) => {
  if (!flow || flow.current.kind !== "task") {
    return;
  }
  const choice = choiceForKey(event.key, flow.current.task.choices);
  if (choice) {
    event.preventDefault();
    void flow.choose(choice);
  }
});

async function boot(): Promise<void> {
  let instructions: Instructions;
  try {
    instructions = await api.instructions();
  } catch (error) {
    renderFatal(String(error));  // fail closed: no instructions, no tasks
    return;
  }
  if (isReturningAnnotator(store)) {
    startLoop();
  } else {
    renderInstructions(instructions);
  }
}

void boot();
