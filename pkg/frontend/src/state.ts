/** Single source of truth for everything interactive. Views never keep
 * their own selection; they dispatch events here and re-render from the
 * store. At most one label is selected at a time, and that selection is
 * mirrored by every view. */

export type BarOrientation = "per-classifier" | "per-label";
export type BarMode = "grouped" | "stacked";
export type SortKey = "id" | "gt-frequency" | "f1" | "total-f1";
export type SortDirection = "asc" | "desc";

export interface HoverTarget {
  kind: "point" | "bar" | "cell" | "dot";
  label: number | null;
  run: string | null;
}

export interface ViewState {
  selectedLabel: number | null;
  barOrientation: BarOrientation;
  barMode: BarMode;
  sortKey: SortKey;
  sortDirection: SortDirection;
  hovered: HoverTarget | null;
  instancePage: number;
}

export type SelectionEvent =
  | { type: "select-label"; label: number }
  | { type: "deselect" }
  | { type: "toggle-label"; label: number }
  | { type: "hover"; target: HoverTarget }
  | { type: "unhover" }
  | { type: "set-orientation"; orientation: BarOrientation }
  | { type: "set-bar-mode"; mode: BarMode }
  | { type: "set-sort"; key: SortKey; direction: SortDirection }
  | { type: "set-page"; page: number };

export function initialViewState(): ViewState {
  return {
    selectedLabel: null,
    barOrientation: "per-label",
    barMode: "grouped",
    sortKey: "id",
    sortDirection: "asc",
    hovered: null,
    instancePage: 0,
  };
}

export type Listener = (state: ViewState) => void;

export class ViewStateStore {
  private state: ViewState = initialViewState();
  private listeners = new Set<Listener>();

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  /** The one mutation entry point. Applies the event, then notifies every
   * listener with the new state so all views stay in lockstep. */
  syncSelection(event: SelectionEvent): ViewState {
    this.state = reduce(this.state, event);
    for (const listener of this.listeners) {
      listener(this.state);
    }
    return this.state;
  }
}

function reduce(state: ViewState, event: SelectionEvent): ViewState {
  switch (event.type) {
    case "select-label":
      // selecting replaces any previous selection; the instance list starts
      // over because its filter changed
      return { ...state, selectedLabel: event.label, instancePage: 0 };
    case "deselect":
      return { ...state, selectedLabel: null, hovered: null, instancePage: 0 };
    case "toggle-label":
      if (state.selectedLabel === event.label) {
        return reduce(state, { type: "deselect" });
      }
      return reduce(state, { type: "select-label", label: event.label });
    case "hover":
      return { ...state, hovered: event.target };
    case "unhover":
      return { ...state, hovered: null };
    case "set-orientation":
      return { ...state, barOrientation: event.orientation };
    case "set-bar-mode":
      return { ...state, barMode: event.mode };
    case "set-sort":
      return { ...state, sortKey: event.key, sortDirection: event.direction };
    case "set-page":
      // paging must not disturb the selection
      return { ...state, instancePage: Math.max(0, event.page) };
  }
}
