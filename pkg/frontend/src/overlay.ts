// Modal overlays: dialogs (message + a few choices) and pickers (paged
// choice lists). Overlays capture all remote keys while open.

import type { RemoteKey } from "./keys.js";
import { MenuList, type MenuItem } from "./menu.js";

export interface Overlay {
  readonly el: HTMLElement;
  handleKey(key: RemoteKey): void | Promise<void>;
}

export interface DialogChoice {
  label: string;
  run: () => void | Promise<void>;
}

export class Dialog implements Overlay {
  readonly el: HTMLElement;
  private readonly menu: MenuList;

  constructor(message: string, choices: DialogChoice[]) {
    this.el = document.createElement("div");
    this.el.className = "dialog";
    const text = document.createElement("p");
    text.className = "dialog-message";
    text.textContent = message;
    this.el.appendChild(text);
    const items: MenuItem[] = choices.map((choice, at) => ({
      id: `choice-${at}`,
      label: choice.label,
      onOk: choice.run,
    }));
    this.menu = new MenuList(items, null, false);
    this.el.appendChild(this.menu.el);
  }

  async handleKey(key: RemoteKey): Promise<void> {
    switch (key) {
      case "up":
      case "left":
        this.menu.move(-1);
        break;
      case "down":
      case "right":
        this.menu.move(1);
        break;
      case "ok":
        await this.menu.activate();
        break;
      case "back":
        // the last choice is always the safe way out
        this.menu.select(this.menu.length - 1);
        await this.menu.activate();
        break;
      default:
        break;
    }
  }
}

export interface PickerEntry {
  id: string;
  label: string;
  preview?: string;
}

const PICKER_PAGE = 5;

export class Picker implements Overlay {
  readonly el: HTMLElement;
  private menu!: MenuList;
  private page = 0;
  private readonly body: HTMLElement;
  private readonly previewEl: HTMLElement;

  constructor(
    title: string,
    private readonly entries: PickerEntry[],
    private readonly onPick: (id: string) => void | Promise<void>,
    private readonly onCancel: () => void,
  ) {
    this.el = document.createElement("div");
    this.el.className = "picker";
    const heading = document.createElement("div");
    heading.className = "picker-title";
    heading.textContent = title;
    this.body = document.createElement("div");
    this.previewEl = document.createElement("aside");
    this.previewEl.className = "preview";
    this.el.append(heading, this.body, this.previewEl);
    this.render();
  }

  private pageCount(): number {
    return Math.max(1, Math.ceil(this.entries.length / PICKER_PAGE));
  }

  private render(): void {
    const start = this.page * PICKER_PAGE;
    const rows: MenuItem[] = this.entries
      .slice(start, start + PICKER_PAGE)
      .map((entry) => ({
        id: entry.id,
        label: entry.label,
        preview: entry.preview,
        onOk: () => this.onPick(entry.id),
      }));
    if (this.pageCount() > 1) {
      rows.push({
        id: "more",
        label: `More (${this.page + 1}/${this.pageCount()})`,
        preview: "Show the next page",
        onOk: () => {
          this.page = (this.page + 1) % this.pageCount();
          this.render();
        },
      });
    }
    rows.push({ id: "cancel", label: "Cancel", onOk: () => this.onCancel() });
    this.menu = new MenuList(rows, this.previewEl, false);
    this.body.textContent = "";
    this.body.appendChild(this.menu.el);
  }

  async handleKey(key: RemoteKey): Promise<void> {
    switch (key) {
      case "up":
        this.menu.move(-1);
        break;
      case "down":
        this.menu.move(1);
        break;
      case "ok":
        await this.menu.activate();
        break;
      case "back":
        this.onCancel();
        break;
      default:
        break;
    }
  }
}
