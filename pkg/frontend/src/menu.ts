// Simple-menu widget per the 10-foot design rules: 3 to 8 options, the
// selected element visibly marked, a preview pane describing the focused
// option. Arrow navigation wraps around.

export interface MenuItem {
  id: string;
  label: string;
  preview?: string;
  onOk?: () => void | Promise<void>;
}

export const MENU_MIN = 3;
export const MENU_MAX = 8;

export class MenuList {
  readonly el: HTMLUListElement;
  private index = 0;

  constructor(
    private readonly items: MenuItem[],
    private readonly previewEl: HTMLElement | null = null,
    enforceBounds = true,
  ) {
    if (enforceBounds && (items.length < MENU_MIN || items.length > MENU_MAX)) {
      throw new Error(`menu must have ${MENU_MIN}..${MENU_MAX} options, got ${items.length}`);
    }
    this.el = document.createElement("ul");
    this.el.className = "menu";
    this.el.setAttribute("role", "menu");
    for (const item of items) {
      const li = document.createElement("li");
      li.className = "menu-item";
      li.dataset.id = item.id;
      li.setAttribute("role", "menuitem");
      li.textContent = item.label;
      this.el.appendChild(li);
    }
    this.refresh();
  }

  get length(): number {
    return this.items.length;
  }

  current(): MenuItem {
    return this.items[this.index];
  }

  select(index: number): void {
    this.index = ((index % this.items.length) + this.items.length) % this.items.length;
    this.refresh();
  }

  selectById(id: string): void {
    const at = this.items.findIndex((i) => i.id === id);
    if (at >= 0) this.select(at);
  }

  move(delta: number): void {
    this.select(this.index + delta);
  }

  async activate(): Promise<void> {
    const handler = this.current().onOk;
    if (handler) await handler();
  }

  private refresh(): void {
    const children = Array.from(this.el.children) as HTMLElement[];
    children.forEach((child, at) => {
      child.classList.toggle("selected", at === this.index);
      child.setAttribute("aria-selected", at === this.index ? "true" : "false");
    });
    if (this.previewEl) {
      const item = this.current();
      this.previewEl.textContent = item.preview ?? item.label;
    }
  }
}
