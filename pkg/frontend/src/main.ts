import { App } from "./app.js";
import { HttpApi } from "./api.js";
import { keyFromEvent } from "./keys.js";

const DEFAULT_BASE = "http://127.0.0.1:8990";

function baseUrl(): string {
  const meta = document.querySelector('meta[name="pubrec-base"]');
  return meta?.getAttribute("content") || DEFAULT_BASE;
}

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");
const app = new App(root, new HttpApi(baseUrl()));

window.addEventListener("keydown", (event) => {
  const key = keyFromEvent(event);
  if (key === null) return;
  event.preventDefault(); // arrows must move the highlight, not the page
  void app.handleKey(key);
});

void app.start();
