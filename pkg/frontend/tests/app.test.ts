import { beforeEach, describe, expect, it } from "vitest";

import { ApiError, SessionClient, StepView } from "../src/api";
import { GameController, renderStep } from "../src/app";
import { makeFakeFetch, SessionFixture } from "./fake-fetch";
import fixtureJson from "./fixtures/cl-session.json";

const fixture = fixtureJson as unknown as SessionFixture;

function setup() {
  const { fetchFn, requests } = makeFakeFetch(fixture);
  const client = new SessionClient("", fetchFn);
  const container = document.createElement("div");
  document.body.appendChild(container);
  const controller = new GameController(client, container);
  return { client, container, controller, requests };
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("scripted classification session", () => {
  it("completes the level-1 trace in four clicks and shows success", async () => {
    const { controller, container } = setup();
    await controller.start("fixture", fixture.kind, fixture.level, fixture.seed);
    expect(fixture.clicks).toHaveLength(4);

    let view: StepView | null = controller.currentView();
    for (const letter of fixture.clicks) {
      view = await controller.click(letter);
    }
    expect(controller.clicks).toBe(4);
    expect(view?.terminal).toEqual({ status: "success", reason: "completed" });
    expect(container.querySelector(".terminal.success")?.textContent).toBe(
      "Task complete!",
    );
    expect(container.querySelectorAll("button.option")).toHaveLength(0);
  });

  it("displays exactly the options the server served, in order", async () => {
    const { controller } = setup();
    let view = await controller.start(
      "fixture", fixture.kind, fixture.level, fixture.seed,
    );
    for (const letter of fixture.clicks) {
      const served = view.options.map((o) => ({
        letter: o.letter,
        text: o.text,
      }));
      const displayed = controller.displayedOptions();
      expect(displayed).toEqual(served); // served-vs-displayed diff is empty
      view = await controller.click(letter);
    }
  });

  it("renders the goal text and the frame image for each step", async () => {
    const { controller, container } = setup();
    const view = await controller.start(
      "fixture", fixture.kind, fixture.level, fixture.seed,
    );
    expect(container.querySelector(".goal")?.textContent).toBe(view.goal);
    const img = container.querySelector<HTMLImageElement>("img.frame");
    expect(img?.getAttribute("src")).toBe(`${view.frame_url}?step=0`);
  });

  it("sends one idempotent request body per step so a double click is safe", async () => {
    const { controller, requests } = setup();
    await controller.start("fixture", fixture.kind, fixture.level, fixture.seed);
    const letter = fixture.clicks[0];
    await controller.choose(letter);
    // user clicks again before noticing the step advanced; the client sends
    // the recorded (letter, step_index) pair and the server replays its view
    const repeat = fixture.exchanges.find(
      (e) => e.method === "POST" && e.path.endsWith("/choice"),
    );
    expect(repeat).toBeDefined();
    const choicePosts = requests.filter((r) => r.path.endsWith("/choice"));
    expect(choicePosts).toHaveLength(1);
    expect(JSON.parse(choicePosts[0].body ?? "")).toEqual(repeat?.body);
  });
});

describe("renderStep", () => {
  it("shows a failure banner with the reason on terminal failure", () => {
    const container = document.createElement("div");
    const view: StepView = {
      session_id: "s",
      step_index: 3,
      goal: "g",
      kind: "CL",
      level: 1,
      frame_url: "/sessions/s/frame.png",
      options: [],
      terminal: { status: "failure", reason: "wrong-terminal-choice" },
    };
    renderStep(container, view, "/sessions/s/frame.png?step=3", () => {});
    expect(container.querySelector(".terminal.failure")?.textContent).toBe(
      "Task failed (wrong-terminal-choice)",
    );
  });
});

describe("SessionClient", () => {
  it("raises ApiError with the status code on non-2xx responses", async () => {
    const client = new SessionClient("", async () =>
      new Response("{}", { status: 409 }),
    );
    await expect(client.getStep("x")).rejects.toMatchObject({
      name: "ApiError",
      status: 409,
    });
  });

  it("cache-busts frame URLs per step", () => {
    const client = new SessionClient("");
    const view = { frame_url: "/sessions/s/frame.png", step_index: 2 } as StepView;
    expect(client.frameUrl(view)).toBe("/sessions/s/frame.png?step=2");
  });
});
