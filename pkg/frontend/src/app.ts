/**
 * Application shell: wires the export loader, warning banner, lens
 * switcher, level slider, search panel and the two linked views.
 */

import {
  applyBranchHighlight,
  applyTermHighlight,
  renderKinship,
  renderSeabed,
} from "./render.js";
import { PhyloExport, SchemaError, validateExport } from "./schema.js";
import { coGroupTerms, searchTerms } from "./search.js";
import {
  Lens,
  ViewState,
  activeExport,
  createState,
  recenterOnBranch,
  selectTerm,
  setLens,
  setLevel,
} from "./state.js";

export class App {
  private state: ViewState | null = null;
  private readonly root: HTMLElement;

  constructor(root: HTMLElement) {
    this.root = root;
  }

  /** Parse and load one export file per level; renders both views. */
  loadExports(raw: unknown[]): void {
    const exports: PhyloExport[] = raw.map((data) => validateExport(data));
    this.state = createState(exports);
    this.renderChrome();
    this.renderViews();
  }

  loadFromError(err: unknown): void {
    const box = this.ensure("div", "error-box");
    box.textContent = err instanceof SchemaError ? err.message : `failed to load export: ${err}`;
  }

  get viewState(): ViewState {
    if (!this.state) throw new Error("no export loaded");
    return this.state;
  }

  private ensure<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className: string,
  ): HTMLElementTagNameMap[K] {
    let node = this.root.querySelector<HTMLElementTagNameMap[K]>(`.${className}`);
    if (!node) {
      node = document.createElement(tag);
      node.className = className;
      this.root.appendChild(node);
    }
    return node;
  }

  private ensureSvg(className: string): SVGSVGElement {
    let node = this.root.querySelector<SVGSVGElement>(`svg.${className}`);
    if (!node) {
      node = document.createElementNS("http://www.w3.org/2000/svg", "svg");
      node.setAttribute("class", className);
      this.root.appendChild(node);
    }
    return node;
  }

  private renderChrome(): void {
    const state = this.viewState;
    const exp = activeExport(state);

    const banner = this.ensure("div", "warning-banner");
    if (exp.metadata.group_warning) {
      banner.textContent = exp.metadata.warnings.join(" — ") || "large export: rendering may be slow";
      banner.removeAttribute("hidden");
    } else {
      banner.setAttribute("hidden", "hidden");
    }

    const slider = this.ensure("input", "level-slider");
    slider.type = "range";
    slider.min = "0";
    slider.max = String(state.exports.length - 1);
    slider.value = String(state.levelIndex);
    slider.oninput = () => {
      this.state = setLevel(this.viewState, Number(slider.value));
      this.renderChrome();
      this.renderViews();
    };
    const levelLabel = this.ensure("span", "level-label");
    levelLabel.textContent = `level ${exp.metadata.level}`;

    const lensBar = this.ensure("div", "lens-bar");
    lensBar.textContent = "";
    for (const lens of ["macro", "mezzo", "micro"] as Lens[]) {
      const button = document.createElement("button");
      button.textContent = lens;
      button.className = `lens-${lens}` + (state.lens === lens ? " active" : "");
      button.onclick = () => {
        this.state = setLens(this.viewState, lens);
        this.renderViews();
      };
      lensBar.appendChild(button);
    }

    const search = this.ensure("input", "search-box");
    search.type = "search";
    search.oninput = () => this.renderSearchResults(search.value);
  }

  private renderSearchResults(query: string): void {
    const exp = activeExport(this.viewState);
    const list = this.ensure("ul", "search-results");
    list.textContent = "";
    for (const result of searchTerms(exp, query)) {
      const item = document.createElement("li");
      item.textContent = `${result.term} (${result.groupIds.length})`;
      item.dataset.term = result.term;
      item.onclick = () => this.clickTerm(result.term);
      list.appendChild(item);
    }
  }

  private renderViews(): void {
    const state = this.viewState;
    const exp = activeExport(state);
    renderSeabed(this.ensureSvg("seabed"), exp);
    const kinship = this.ensureSvg("kinship");
    renderKinship(kinship, state);
    for (const peak of this.ensureSvg("seabed").querySelectorAll(".peak")) {
      peak.addEventListener("click", () =>
        this.clickPeak(peak.getAttribute("data-branch") ?? ""),
      );
      peak.addEventListener("mouseenter", () =>
        applyBranchHighlight(kinship, this.ensureSvg("seabed"), peak.getAttribute("data-branch")),
      );
      peak.addEventListener("mouseleave", () =>
        applyBranchHighlight(kinship, this.ensureSvg("seabed"), null),
      );
    }
    if (state.selection?.kind === "term") {
      applyTermHighlight(kinship, exp, state.selection.id);
      this.renderTermPanel(state.selection.id);
    }
  }

  clickPeak(branchId: string): void {
    this.state = recenterOnBranch(this.viewState, branchId);
    this.renderViews();
  }

  clickTerm(term: string): void {
    const before = this.viewState;
    this.state = selectTerm(before, term);
    if (this.state === before) {
      const toast = this.ensure("div", "toast");
      toast.textContent = `unknown term: ${term}`;
      return;
    }
    this.renderViews();
  }

  private renderTermPanel(term: string): void {
    const exp = activeExport(this.viewState);
    const panel = this.ensure("div", "term-panel");
    panel.textContent = "";
    const heading = document.createElement("h3");
    heading.textContent = term;
    panel.appendChild(heading);
    const more = document.createElement("a");
    more.className = "find-more";
    more.href = `https://en.wikipedia.org/wiki/Special:Search?search=${encodeURIComponent(term)}`;
    more.textContent = "find more";
    more.target = "_blank";
    panel.appendChild(more);
    const related = document.createElement("ul");
    related.className = "co-group-terms";
    for (const t of coGroupTerms(exp, term)) {
      const item = document.createElement("li");
      item.textContent = t;
      related.appendChild(item);
    }
    panel.appendChild(related);
  }
}

/** Browser entry point: file picker plus optional ?export= URL parameter. */
export function mount(root: HTMLElement): App {
  const app = new App(root);
  const picker = document.createElement("input");
  picker.type = "file";
  picker.className = "export-picker";
  picker.multiple = true;
  picker.onchange = async () => {
    try {
      const files = [...(picker.files ?? [])];
      const raw = await Promise.all(files.map(async (f) => JSON.parse(await f.text())));
      app.loadExports(raw);
    } catch (err) {
      app.loadFromError(err);
    }
  };
  root.appendChild(picker);

  const url = new URL(window.location.href).searchParams.get("export");
  if (url) {
    fetch(url)
      .then((r) => r.json())
      .then((data) => app.loadExports([data]))
      .catch((err) => app.loadFromError(err));
  }
  return app;
}
