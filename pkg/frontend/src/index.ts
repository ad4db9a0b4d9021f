// Browser entry point: read the start form, then run the session loop.

import { SessionClient } from "./api";
import { GameController } from "./app";

function requireElement<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

export function bootstrap(): void {
  const form = requireElement<HTMLFormElement>("start-form");
  const stage = requireElement<HTMLDivElement>("stage");
  const client = new SessionClient("");
  const controller = new GameController(client, stage);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const participant = requireElement<HTMLInputElement>("participant").value;
    const kind = requireElement<HTMLSelectElement>("kind").value;
    const level = Number(requireElement<HTMLSelectElement>("level").value);
    void controller.start(participant || "anonymous", kind, level);
  });
}

if (typeof document !== "undefined" && document.getElementById("start-form")) {
  bootstrap();
}
