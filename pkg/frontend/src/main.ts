import { ServiceClient } from "./api.js";
import { mount } from "./render.js";
import { SessionStore } from "./store.js";

function readFile(input: HTMLInputElement): Promise<string | null> {
  const file = input.files?.[0];
  if (!file) return Promise.resolve(null);
  return file.text();
}

function init(): void {
  const urlInput = document.getElementById("service-url") as HTMLInputElement;
  const netInput = document.getElementById("net-file") as HTMLInputElement;
  const logInput = document.getElementById("log-file") as HTMLInputElement;
  const loadButton = document.getElementById("load-net") as HTMLButtonElement;
  const root = document.getElementById("workbench") as HTMLElement;

  let store = new SessionStore(new ServiceClient(urlInput.value.replace(/\/$/, "")));
  mount(root, store);

  loadButton.addEventListener("click", () => {
    void (async () => {
      const pnml = await readFile(netInput);
      if (!pnml) return;
      // Re-point at the configured service on every load.
      store = new SessionStore(new ServiceClient(urlInput.value.replace(/\/$/, "")));
      mount(root, store);
      await store.loadNet(pnml);
    })();
  });

  logInput.addEventListener("change", () => {
    void (async () => {
      const csv = await readFile(logInput);
      if (csv) await store.uploadLog(csv);
    })();
  });
}

document.addEventListener("DOMContentLoaded", init);
