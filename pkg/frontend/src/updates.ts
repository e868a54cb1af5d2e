/**
 * Back-channel rendering: app_update payload keys map onto panel widgets.
 * Known keys update their widget; unknown keys are ignored (logged only).
 */

import type { AppUpdateBody } from "./protocol.js";

export interface WidgetState {
  level: string | null;
  roundOpen: boolean | null;
  lastWinner: string | null;
  lastGesture: string | null;
  ignoredKeys: string[];
}

export function initialWidgets(): WidgetState {
  return { level: null, roundOpen: null, lastWinner: null, lastGesture: null, ignoredKeys: [] };
}

export function applyUpdate(state: WidgetState, update: AppUpdateBody): WidgetState {
  const next = { ...state, ignoredKeys: [...state.ignoredKeys] };
  for (const [key, value] of Object.entries(update.payload)) {
    switch (key) {
      case "level":
        next.level = value;
        break;
      case "round":
        next.roundOpen = value === "open";
        break;
      case "winner":
        next.lastWinner = value;
        break;
      case "gesture":
        next.lastGesture = value;
        break;
      default:
        next.ignoredKeys.push(key);
    }
  }
  return next;
}
