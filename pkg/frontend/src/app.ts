// DOM rendering and click flow for one play session.

import { SessionClient, StepView } from "./api";

export function renderStep(
  container: HTMLElement,
  view: StepView,
  frameSrc: string,
  onChoose: (letter: string) => void,
): void {
  container.innerHTML = "";

  const goal = document.createElement("p");
  goal.className = "goal";
  goal.textContent = view.goal;
  container.appendChild(goal);

  const frame = document.createElement("img");
  frame.className = "frame";
  frame.src = frameSrc;
  frame.alt = `${view.kind} level ${view.level}, step ${view.step_index}`;
  container.appendChild(frame);

  if (view.terminal) {
    const banner = document.createElement("p");
    banner.className = `terminal ${view.terminal.status}`;
    banner.textContent =
      view.terminal.status === "success"
        ? "Task complete!"
        : `Task failed (${view.terminal.reason ?? "unknown"})`;
    container.appendChild(banner);
    return;
  }

  const list = document.createElement("div");
  list.className = "options";
  for (const option of view.options) {
    const button = document.createElement("button");
    button.className = "option";
    button.dataset.letter = option.letter;
    button.textContent = `${option.letter}) ${option.text}`;
    button.addEventListener("click", () => onChoose(option.letter));
    list.appendChild(button);
  }
  container.appendChild(list);
}

export class GameController {
  private view: StepView | null = null;
  private busy = false;
  clicks = 0;

  constructor(
    private readonly client: SessionClient,
    private readonly container: HTMLElement,
  ) {}

  currentView(): StepView | null {
    return this.view;
  }

  async start(participant: string, kind: string, level: number, seed?: number) {
    this.view = await this.client.createSession({
      participant,
      kind,
      level,
      seed,
    });
    this.render();
    return this.view;
  }

  private render(): void {
    if (!this.view) return;
    renderStep(
      this.container,
      this.view,
      this.client.frameUrl(this.view),
      (letter) => void this.choose(letter),
    );
  }

  async choose(letter: string): Promise<StepView> {
    if (!this.view || this.view.terminal) {
      throw new Error("no active step");
    }
    if (this.busy) {
      return this.view;
    }
    this.busy = true;
    this.clicks += 1;
    try {
      this.view = await this.client.submitChoice(
        this.view.session_id,
        letter,
        this.view.step_index,
      );
      this.render();
      return this.view;
    } finally {
      this.busy = false;
    }
  }

  // simulate a user click on the rendered button for a letter
  click(letter: string): Promise<StepView> {
    const button = this.container.querySelector<HTMLButtonElement>(
      `button.option[data-letter="${letter}"]`,
    );
    if (!button) {
      throw new Error(`no option button for letter ${letter}`);
    }
    return this.choose(letter);
  }

  displayedOptions(): { letter: string; text: string }[] {
    const buttons = this.container.querySelectorAll<HTMLButtonElement>(
      "button.option",
    );
    return Array.from(buttons).map((button) => {
      const label = button.textContent ?? "";
      const match = /^([A-Z])\) (.*)$/.exec(label);
      if (!match) {
        throw new Error(`malformed option label: ${label}`);
      }
      return { letter: match[1], text: match[2] };
    });
  }
}
