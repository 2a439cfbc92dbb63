// Single-page application: rule editor with a diagnostics gutter on the
// left, event/annotation timeline on the right. The define -> annotate
// -> inspect -> refine loop lives entirely on the HTTP API.

import { ApiClient, NetworkError } from "./api.js";
import { EditorSession, renderDiagnostics } from "./editor.js";
import {
  Lane,
  ZoomWindow,
  buildLanes,
  fullExtent,
  provenanceOf,
  visibleItems,
  zoomAround,
} from "./timeline.js";
import type { AnnotationRecord, TimelineEvent } from "./types.js";

export interface AppState {
  session: EditorSession;
  events: TimelineEvent[];
  annotations: AnnotationRecord[];
  zoom: ZoomWindow | null;
  selection: string | null;
  annotateInFlight: boolean;
  status: string;
}

export class App {
  readonly state: AppState;
  private readonly elements: {
    banner: HTMLElement;
    editor: HTMLTextAreaElement;
    gutter: HTMLElement;
    editorStatus: HTMLElement;
    saveButton: HTMLButtonElement;
    annotateButton: HTMLButtonElement;
    lanes: HTMLElement;
    provenance: HTMLElement;
    zoomLabel: HTMLElement;
  };

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly projectId: string,
  ) {
    this.state = {
      session: new EditorSession(api, projectId),
      events: [],
      annotations: [],
      zoom: null,
      selection: null,
      annotateInFlight: false,
      status: "",
    };
    this.elements = this.buildSkeleton();
    this.state.session.onChange(() => this.renderEditor());
  }

  async start(): Promise<void> {
    await this.state.session.loadInitial();
    this.elements.editor.value = this.state.session.text;
    await this.refreshTimeline();
    this.render();
  }

  private buildSkeleton() {
    this.root.innerHTML = `
      <header>
        <h1>chronotate</h1>
        <span id="project-label"></span>
        <span id="banner" class="banner" hidden></span>
      </header>
      <main>
        <section class="editor-pane">
          <div class="toolbar">
            <button id="check">Check</button>
            <button id="save">Save</button>
            <button id="annotate">Annotate</button>
            <span id="editor-status"></span>
          </div>
          <textarea id="editor" spellcheck="false"></textarea>
          <ul id="gutter" class="gutter"></ul>
        </section>
        <section class="timeline-pane">
          <div class="toolbar">
            <button id="zoom-in">+</button>
            <button id="zoom-out">-</button>
            <button id="zoom-reset">fit</button>
            <span id="zoom-label"></span>
          </div>
          <div id="lanes" class="lanes"></div>
          <div id="provenance" class="provenance"></div>
        </section>
      </main>
    `;
    const get = <T extends HTMLElement>(selector: string): T => {
      const element = this.root.querySelector(selector);
      if (element === null) throw new Error(`missing element ${selector}`);
      return element as T;
    };
    get<HTMLElement>("#project-label").textContent = this.projectId;

    const elements = {
      banner: get<HTMLElement>("#banner"),
      editor: get<HTMLTextAreaElement>("#editor"),
      gutter: get<HTMLElement>("#gutter"),
      editorStatus: get<HTMLElement>("#editor-status"),
      saveButton: get<HTMLButtonElement>("#save"),
      annotateButton: get<HTMLButtonElement>("#annotate"),
      lanes: get<HTMLElement>("#lanes"),
      provenance: get<HTMLElement>("#provenance"),
      zoomLabel: get<HTMLElement>("#zoom-label"),
    };

    elements.editor.addEventListener("input", () => {
      this.state.session.setText(elements.editor.value);
    });
    get<HTMLButtonElement>("#check").addEventListener("click", () => {
      void this.state.session.checkNow();
    });
    elements.saveButton.addEventListener("click", () => void this.onSave());
    elements.annotateButton.addEventListener("click", () => void this.onAnnotate());
    get<HTMLButtonElement>("#zoom-in").addEventListener("click", () => this.setZoom(0.5));
    get<HTMLButtonElement>("#zoom-out").addEventListener("click", () => this.setZoom(2));
    get<HTMLButtonElement>("#zoom-reset").addEventListener("click", () => {
      this.state.zoom = fullExtent(this.state.events, this.state.annotations);
      this.renderTimeline();
    });
    return elements;
  }

  private setZoom(factor: number): void {
    if (this.state.zoom === null) return;
    this.state.zoom = zoomAround(this.state.zoom, factor);
    this.renderTimeline();
  }

  private async onSave(): Promise<void> {
    let outcome = await this.state.session.save();
    if (!outcome.saved && outcome.reason === "diagnostics") {
      const proceed = window.confirm(
        `${outcome.diagnostics.length} diagnostic(s) remain. Save anyway?`,
      );
      if (proceed) outcome = await this.state.session.save(true);
    }
    this.state.status = outcome.saved ? "rules saved" : "not saved";
    this.render();
  }

  private async onAnnotate(): Promise<void> {
    if (this.state.annotateInFlight) return;
    this.state.annotateInFlight = true;
    this.state.status = "annotating...";
    this.render();
    try {
      const result = await this.api.annotate(this.projectId);
      if (result.kind === "in_progress") {
        this.state.status = "annotation in progress, try again shortly";
      } else if (result.kind === "diagnostics") {
        this.state.session.adoptDiagnostics(result.diagnostics);
        this.state.status = "rules have diagnostics; fix them in the editor";
      } else {
        this.state.annotations = result.document.records;
        this.state.status = `annotated: ${result.document.records.length} annotation(s)`;
        await this.refreshTimeline();
      }
    } catch (error) {
      if (error instanceof NetworkError) {
        this.state.session.serverReachable = false;
        this.state.status = "server unreachable";
      } else {
        this.state.status = String(error);
      }
    } finally {
      this.state.annotateInFlight = false;
      this.render();
    }
  }

  async refreshTimeline(): Promise<void> {
    try {
      const [timeline, annotations] = await Promise.all([
        this.api.getTimeline(this.projectId),
        this.api.getAnnotations(this.projectId),
      ]);
      this.state.events = timeline.events;
      this.state.annotations = annotations;
      this.state.session.serverReachable = true;
      if (this.state.zoom === null) {
        this.state.zoom = fullExtent(this.state.events, this.state.annotations);
      }
    } catch (error) {
      if (!(error instanceof NetworkError)) throw error;
      this.state.session.serverReachable = false;
    }
    this.renderTimeline();
  }

  select(annotationId: string | null): void {
    this.state.selection = annotationId;
    this.renderTimeline();
  }

  render(): void {
    this.renderEditor();
    this.renderTimeline();
  }

  private renderEditor(): void {
    const session = this.state.session;
    this.elements.banner.hidden = session.serverReachable;
    this.elements.banner.textContent = session.serverReachable
      ? ""
      : "server unreachable; editing continues locally";
    renderDiagnostics(this.elements.gutter, session.diagnostics, session.diagnosticsStale);
    const parts: string[] = [];
    if (session.checking) parts.push("checking...");
    if (session.dirty) parts.push("unsaved changes");
    if (session.diagnosticsStale) parts.push("diagnostics out of date");
    if (this.state.status !== "") parts.push(this.state.status);
    this.elements.editorStatus.textContent = parts.join(" | ");
    this.elements.annotateButton.disabled = this.state.annotateInFlight;
  }

  private renderTimeline(): void {
    const zoom = this.state.zoom;
    const lanesElement = this.elements.lanes;
    lanesElement.textContent = "";
    if (zoom === null) return;
    this.elements.zoomLabel.textContent = `${zoom.startMs}..${zoom.endMs} ms`;
    const highlight = this.state.selection
      ? provenanceOf(this.state.annotations, this.state.selection)
      : { rules: [], eventIds: new Set<string>() };

    for (const lane of buildLanes(this.state.events, this.state.annotations)) {
      const row = document.createElement("div");
      row.className = `lane ${lane.kind}`;
      row.dataset.label = lane.label;
      const label = document.createElement("span");
      label.className = "lane-label";
      label.textContent = lane.label;
      row.appendChild(label);
      const track = document.createElement("div");
      track.className = "track";
      for (const item of visibleItems(lane, zoom)) {
        const block = this.renderItem(lane, item, zoom, highlight.eventIds);
        track.appendChild(block);
      }
      row.appendChild(track);
      lanesElement.appendChild(row);
    }
    this.renderProvenance(highlight.rules);
  }

  private renderItem(
    lane: Lane,
    item: { id: string; startMs: number; endMs: number; label: string },
    zoom: ZoomWindow,
    highlightedEvents: Set<string>,
  ): HTMLElement {
    const width = zoom.endMs - zoom.startMs;
    const block = document.createElement("div");
    block.className = "item";
    block.dataset.id = item.id;
    block.title = `${item.label} [${item.startMs}, ${item.endMs})`;
    block.textContent = item.label;
    const left = ((item.startMs - zoom.startMs) / width) * 100;
    const right = ((item.endMs - zoom.startMs) / width) * 100;
    block.style.left = `${Math.max(0, left)}%`;
    block.style.width = `${Math.min(100, right) - Math.max(0, left)}%`;
    if (lane.kind === "annotations") {
      block.classList.add("annotation");
      block.classList.toggle("selected", item.id === this.state.selection);
      block.addEventListener("click", () => {
        this.select(item.id === this.state.selection ? null : item.id);
      });
    } else if (highlightedEvents.has(item.id)) {
      block.classList.add("highlight");
    }
    return block;
  }

  private renderProvenance(rules: string[]): void {
    const element = this.elements.provenance;
    if (this.state.selection === null) {
      element.textContent = "";
      return;
    }
    element.textContent =
      rules.length > 0
        ? `selected ${this.state.selection}: produced by ${rules.join(", ")}`
        : `selected ${this.state.selection}`;
  }
}
