/**
 * Side panel state: the viewer's current selections (item, color, message
 * text) plus one-shot command buttons (undo, clear). Every change produces
 * exactly one context message whose data is the panel's full state; the
 * relay stores it wholesale under the username.
 */

export type ContextData = Record<string, string>;

export interface PanelChange {
  data: ContextData;
}

export class PanelState {
  private selections: ContextData = {};

  /** Set or replace a selection; returns the context data to send. */
  select(key: string, value: string): PanelChange {
    this.selections = { ...this.selections, [key]: value };
    return { data: { ...this.selections } };
  }

  clearSelection(key: string): PanelChange {
    const next = { ...this.selections };
    delete next[key];
    this.selections = next;
    return { data: { ...this.selections } };
  }

  /**
   * One-shot commands ride a single context message and are not retained in
   * the panel state, so later selection changes cannot re-fire them.
   */
  command(name: "undo" | "clear"): PanelChange {
    return { data: { ...this.selections, command: name } };
  }

  current(): ContextData {
    return { ...this.selections };
  }
}
