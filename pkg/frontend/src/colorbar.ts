// The four color keys keep one convention everywhere: red exits the
// screen, green fires the screen's main action, yellow opens the
// notification feed, blue shows the key-binding help. Every screen
// renders the bar with its green action labeled.

export interface ColorActions {
  red: { label: string; run: () => void | Promise<void> };
  green: { label: string; run: () => void | Promise<void> };
  yellow: { label: string; run: () => void | Promise<void> };
  blue: { label: string; run: () => void | Promise<void> };
}

export function renderColorBar(actions: ColorActions): HTMLElement {
  const bar = document.createElement("footer");
  bar.className = "colorbar";
  for (const color of ["red", "green", "yellow", "blue"] as const) {
    const chip = document.createElement("span");
    chip.className = `colorkey ${color}`;
    chip.dataset.color = color;
    chip.textContent = actions[color].label;
    bar.appendChild(chip);
  }
  return bar;
}
