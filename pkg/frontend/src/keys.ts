// Remote-control input model. The whole client is operable from exactly
// these ten keys; anything else is ignored.

export type RemoteKey =
  | "up"
  | "down"
  | "left"
  | "right"
  | "ok"
  | "back"
  | "red"
  | "green"
  | "yellow"
  | "blue";

// Browser keyboard stand-ins for the remote. Letter keys cover desktop
// browsers; the ColorF0..F3 codes are what HbbTV/Tizen sets deliver for
// the physical color buttons.
const KEY_MAP: Record<string, RemoteKey> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
  Enter: "ok",
  Backspace: "back",
  Escape: "back",
  r: "red",
  g: "green",
  y: "yellow",
  b: "blue",
  ColorF0Red: "red",
  ColorF1Green: "green",
  ColorF2Yellow: "yellow",
  ColorF3Blue: "blue",
};

export function keyFromEvent(event: KeyboardEvent): RemoteKey | null {
  return KEY_MAP[event.key] ?? null;
}
