/**
 * Side panel state: the viewer's current selections (item, color, message
 * text) plus one-shot command buttons (undo, clear). Every change produces
 * exactly one context message whose data is the panel's full state; the
 * relay stores it wholesale under the username.
 */
export class PanelState {
    selections = {};
    /** Set or replace a selection; returns the context data to send. */
    select(key, value) {
        this.selections = { ...this.selections, [key]: value };
        return { data: { ...this.selections } };
    }
    clearSelection(key) {
        const next = { ...this.selections };
        delete next[key];
        this.selections = next;
        return { data: { ...this.selections } };
    }
    /**
     * One-shot commands ride a single context message and are not retained in
     * the panel state, so later selection changes cannot re-fire them.
     */
    command(name) {
        return { data: { ...this.selections, command: name } };
    }
    current() {
        return { ...this.selections };
    }
}
