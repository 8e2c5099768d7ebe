import { opsForCell } from "./affordances.js";
import { SessionStore, cellKey } from "./store.js";
import { OP_LABEL, SYMBOL_GLYPH } from "./types.js";
import type { OpRecord, RelationSymbol } from "./types.js";

interface Selection {
  row: string;
  col: string;
}

const LEGEND: [RelationSymbol, string][] = [
  ["->", "direct follows"],
  ["<-", "direct precedes"],
  ["||", "concurrent"],
  ["-", "exclusive"],
  ["<", "eventually follows"],
  [">", "eventually precedes"],
  ["<>", "unordered, unforced"],
];

export function mount(root: HTMLElement, store: SessionStore): void {
  let selection: Selection | null = null;

  const el = <K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
  ): HTMLElementTagNameMap[K] => {
    const node = document.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
  };

  const describeOp = (op: OpRecord): string =>
    "b" in op ? `${OP_LABEL[op.op]}: ${op.a}, ${op.b}` : `${OP_LABEL[op.op]}: ${op.a}`;

  function renderGrid(container: HTMLElement): void {
    container.replaceChildren();
    const { matrix, highlighted, error } = store.state;
    if (!matrix) {
      container.append(el("p", "hint", "Load a workflow net to begin."));
      return;
    }
    const table = el("table", "grid");
    const head = el("tr");
    head.append(el("th"));
    for (const activity of matrix.activities) {
      head.append(el("th", undefined, activity));
    }
    table.append(head);
    matrix.activities.forEach((row, i) => {
      const tr = el("tr");
      tr.append(el("th", undefined, row));
      matrix.activities.forEach((col, j) => {
        const symbol = matrix.cells[i][j] as RelationSymbol;
        const td = el("td", "cell", SYMBOL_GLYPH[symbol]);
        td.dataset.row = row;
        td.dataset.col = col;
        if (highlighted.has(cellKey(row, col))) td.classList.add("changed");
        if (selection && selection.row === row && selection.col === col) {
          td.classList.add("selected");
        }
        if (error && error.row === row && error.col === col) {
          td.classList.add("rejected");
          td.title = error.message;
        }
        td.addEventListener("click", () => {
          selection = { row, col };
          renderAll();
        });
        tr.append(td);
      });
      table.append(tr);
    });
    container.append(table);
  }

  function renderActions(container: HTMLElement): void {
    container.replaceChildren();
    const { matrix } = store.state;
    container.append(el("h2", undefined, "Cell actions"));
    if (!matrix || !selection) {
      container.append(el("p", "hint", "Select a cell to see applicable relaxations."));
      return;
    }
    const { row, col } = selection;
    const i = matrix.activities.indexOf(row);
    const j = matrix.activities.indexOf(col);
    if (i < 0 || j < 0) {
      selection = null;
      return;
    }
    const symbol = matrix.cells[i][j] as RelationSymbol;
    container.append(
      el("p", "hint", `(${row}, ${col}) is ${SYMBOL_GLYPH[symbol]}`),
    );
    const ops = opsForCell(row, col, symbol);
    if (!ops.length) {
      container.append(el("p", "hint", "No relaxation applies to this cell."));
    }
    for (const op of ops) {
      const button = el("button", undefined, describeOp(op));
      button.addEventListener("click", () => void store.applyOp(op, row, col));
      container.append(button);
    }
  }

  function renderHistory(container: HTMLElement): void {
    container.replaceChildren();
    container.append(el("h2", undefined, "History"));
    const undoButton = el("button", undefined, "Undo last");
    undoButton.disabled = store.state.history.length === 0;
    undoButton.addEventListener("click", () => void store.undo());
    container.append(undoButton);
    const list = el("ol");
    for (const op of store.state.history) {
      list.append(el("li", undefined, describeOp(op)));
    }
    container.append(list);
  }

  function renderPreviews(container: HTMLElement): void {
    container.replaceChildren();
    container.append(el("h2", undefined, "Constraints"));
    container.append(el("pre", "preview", store.state.constraintsPreview ?? ""));
    const heading = el("h2", undefined, "SQL ");
    const select = el("select");
    for (const mode of ["paper", "violation"] as const) {
      const option = el("option", undefined, mode);
      option.value = mode;
      option.selected = store.state.sqlMode === mode;
      select.append(option);
    }
    select.addEventListener("change", () =>
      void store.setSqlMode(select.value as "paper" | "violation"),
    );
    heading.append(select);
    container.append(heading);
    container.append(el("pre", "preview", store.state.sqlPreview ?? ""));
  }

  function renderConformance(container: HTMLElement): void {
    container.replaceChildren();
    container.append(el("h2", undefined, "Conformance"));
    const { logTraces, rateDisplay, report } = store.state;
    if (logTraces !== null) {
      container.append(el("p", "hint", `Log loaded: ${logTraces} trace(s).`));
    }
    const checkButton = el("button", undefined, "Check log");
    checkButton.disabled = logTraces === null;
    checkButton.addEventListener("click", () => void store.check());
    container.append(checkButton);
    if (rateDisplay !== null) {
      const rate = el("p", "rate");
      rate.id = "conformance-rate";
      rate.textContent = `conformance rate: ${rateDisplay}`;
      container.append(rate);
    }
    if (report) {
      const table = el("table", "summary");
      const head = el("tr");
      head.append(el("th", undefined, "constraint"), el("th", undefined, "violated traces"));
      table.append(head);
      for (const entry of report.constraints) {
        const tr = el("tr");
        tr.append(
          el("td", undefined, entry.constraint),
          el("td", undefined, String(entry.violated_traces)),
        );
        table.append(tr);
      }
      container.append(table);
    }
  }

  function renderLegendAndStatus(container: HTMLElement): void {
    container.replaceChildren();
    const legend = el("p", "legend");
    legend.append(
      ...LEGEND.map(([symbol, label]) => el("span", undefined, `${SYMBOL_GLYPH[symbol]} ${label}`)),
    );
    container.append(legend);
    if (store.state.error && store.state.error.row === null) {
      container.append(el("p", "error", store.state.error.message));
    } else if (store.state.error) {
      container.append(
        el(
          "p",
          "error",
          `Edit rejected at (${store.state.error.row}, ${store.state.error.col}): ${store.state.error.message}`,
        ),
      );
    }
    if (store.state.busy) container.append(el("p", "hint", "waiting for service…"));
  }

  const sections = {
    status: el("div", "status"),
    grid: el("div", "grid-holder"),
    actions: el("div", "panel"),
    history: el("div", "panel"),
    conformance: el("div", "panel"),
    previews: el("div", "previews"),
  };
  const left = el("div", "left");
  left.append(sections.status, sections.grid, sections.previews);
  const right = el("div", "right");
  right.append(sections.actions, sections.history, sections.conformance);
  root.replaceChildren(left, right);

  function renderAll(): void {
    renderLegendAndStatus(sections.status);
    renderGrid(sections.grid);
    renderActions(sections.actions);
    renderHistory(sections.history);
    renderConformance(sections.conformance);
    renderPreviews(sections.previews);
  }

  store.onChange(renderAll);
  renderAll();
}
