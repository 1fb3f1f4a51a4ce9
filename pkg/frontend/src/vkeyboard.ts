// On-screen keyboard for text entry with a remote control: an arrow-
// navigable grid where OK appends the focused cell, with dedicated
// shift/space/erase/done cells. Arrow movement wraps on both axes.

import type { RemoteKey } from "./keys.js";

type Cell =
  | { kind: "char"; char: string }
  | { kind: "shift" }
  | { kind: "space" }
  | { kind: "erase" }
  | { kind: "done" };

const LETTER_ROWS = ["ABCDEFGHIJ", "KLMNOPQRST", "UVWXYZ0123"];

function buildGrid(): Cell[][] {
  const rows: Cell[][] = LETTER_ROWS.map((row) =>
    Array.from(row, (char) => ({ kind: "char", char }) as Cell),
  );
  rows.push([
    { kind: "shift" },
    ...Array.from("456789", (char) => ({ kind: "char", char }) as Cell),
    { kind: "space" },
    { kind: "erase" },
    { kind: "done" },
  ]);
  return rows;
}

export class VirtualKeyboard {
  readonly el: HTMLElement;
  value: string;
  private caps = true;
  private row = 0;
  private col = 0;
  private readonly grid = buildGrid();
  private readonly valueEl: HTMLElement;
  private readonly gridEl: HTMLElement;

  constructor(
    label: string,
    initial: string,
    private readonly onDone: (value: string) => void | Promise<void>,
    private readonly onCancel: () => void,
  ) {
    this.value = initial;
    this.el = document.createElement("div");
    this.el.className = "vkeyboard";
    const title = document.createElement("div");
    title.className = "vk-label";
    title.textContent = label;
    this.valueEl = document.createElement("div");
    this.valueEl.className = "vk-value";
    this.gridEl = document.createElement("div");
    this.gridEl.className = "vk-grid";
    this.el.append(title, this.valueEl, this.gridEl);
    this.render();
  }

  async handleKey(key: RemoteKey): Promise<void> {
    switch (key) {
      case "up":
        this.move(-1, 0);
        break;
      case "down":
        this.move(1, 0);
        break;
      case "left":
        this.move(0, -1);
        break;
      case "right":
        this.move(0, 1);
        break;
      case "ok":
        await this.activate();
        break;
      case "back":
        this.onCancel();
        break;
      default:
        break; // color keys have no meaning inside the keyboard
    }
  }

  private move(dr: number, dc: number): void {
    const rows = this.grid.length;
    this.row = (this.row + dr + rows) % rows;
    const width = this.grid[this.row].length;
    this.col = (Math.min(this.col, width - 1) + dc + width) % width;
    this.render();
  }

  private async activate(): Promise<void> {
    const cell = this.grid[this.row][this.col];
    if (cell.kind === "char") {
      const char = /[A-Z]/.test(cell.char) && !this.caps
        ? cell.char.toLowerCase()
        : cell.char;
      this.value += char;
    } else if (cell.kind === "space") {
      this.value += " ";
    } else if (cell.kind === "shift") {
      this.caps = !this.caps;
    } else if (cell.kind === "erase") {
      // no-op on empty input
      this.value = this.value.slice(0, -1);
    } else {
      await this.onDone(this.value);
      return;
    }
    this.render();
  }

  private cellLabel(cell: Cell): string {
    switch (cell.kind) {
      case "char":
        return /[A-Z]/.test(cell.char) && !this.caps
          ? cell.char.toLowerCase()
          : cell.char;
      case "shift":
        return this.caps ? "abc" : "ABC";
      case "space":
        return "space";
      case "erase":
        return "erase";
      case "done":
        return "done";
    }
  }

  private render(): void {
    this.valueEl.textContent = this.value;
    this.gridEl.textContent = "";
    this.grid.forEach((cells, r) => {
      const rowEl = document.createElement("div");
      rowEl.className = "vk-row";
      cells.forEach((cell, c) => {
        const cellEl = document.createElement("span");
        cellEl.className = "vk-cell";
        cellEl.dataset.kind = cell.kind;
        cellEl.textContent = this.cellLabel(cell);
        cellEl.classList.toggle("selected", r === this.row && c === this.col);
        rowEl.appendChild(cellEl);
      });
      this.gridEl.appendChild(rowEl);
    });
  }
}
