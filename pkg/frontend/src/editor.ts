// Rule editor session: a plain-text buffer with debounced server-side
// checking. The session never parses rule text itself; diagnostics are
// whatever the API reported for the exact text version they were
// computed against, and they are flagged stale the moment the buffer
// moves on.

import { ApiClient, NetworkError } from "./api.js";
import type { Diagnostic } from "./types.js";

export type SaveOutcome =
  | { saved: true }
  | { saved: false; reason: "diagnostics"; diagnostics: Diagnostic[] }
  | { saved: false; reason: "network" };

export class EditorSession {
  text = "";
  savedText: string | null = null;
  /** The exact buffer contents the current diagnostics were computed for. */
  checkedText: string | null = null;
  diagnostics: Diagnostic[] = [];
  serverReachable = true;
  checking = false;

  private timer: ReturnType<typeof setTimeout> | null = null;
  private listeners: Array<() => void> = [];

  constructor(
    private readonly api: ApiClient,
    readonly projectId: string,
    private readonly debounceMs = 400,
  ) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  get dirty(): boolean {
    return this.savedText === null || this.text !== this.savedText;
  }

  get diagnosticsStale(): boolean {
    return this.checkedText !== null && this.checkedText !== this.text;
  }

  async loadInitial(): Promise<void> {
    try {
      const text = await this.api.getRules(this.projectId);
      this.text = text;
      this.savedText = text;
      this.serverReachable = true;
    } catch (error) {
      if (!(error instanceof NetworkError)) throw error;
      this.serverReachable = false;
    }
    this.notify();
  }

  /** Buffer edit: marks diagnostics stale and schedules a debounced check. */
  setText(text: string): void {
    if (text === this.text) return;
    this.text = text;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.checkNow();
    }, this.debounceMs);
    this.notify();
  }

  /** Immediate rules:check of the current buffer. Never loses the buffer. */
  async checkNow(): Promise<Diagnostic[]> {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    const snapshot = this.text;
    this.checking = true;
    this.notify();
    try {
      const result = await this.api.checkRules(this.projectId, snapshot);
      this.serverReachable = true;
      this.diagnostics = result.diagnostics;
      this.checkedText = snapshot;
    } catch (error) {
      if (!(error instanceof NetworkError)) throw error;
      this.serverReachable = false;
    } finally {
      this.checking = false;
      this.notify();
    }
    return this.diagnostics;
  }

  /** Externally produced diagnostics (a 422 from annotate) for this buffer. */
  adoptDiagnostics(diagnostics: Diagnostic[]): void {
    this.diagnostics = diagnostics;
    this.checkedText = this.savedText;
    this.notify();
  }

  /**
   * PUT the buffer. Refuses while the latest check has findings unless
   * the user confirmed the override with force.
   */
  async save(force = false): Promise<SaveOutcome> {
    if (this.checkedText !== this.text) {
      await this.checkNow();
    }
    if (!this.serverReachable) {
      return { saved: false, reason: "network" };
    }
    if (this.diagnostics.length > 0 && !force) {
      return { saved: false, reason: "diagnostics", diagnostics: this.diagnostics };
    }
    try {
      await this.api.putRules(this.projectId, this.text);
    } catch (error) {
      if (!(error instanceof NetworkError)) throw error;
      this.serverReachable = false;
      this.notify();
      return { saved: false, reason: "network" };
    }
    this.savedText = this.text;
    this.notify();
    return { saved: true };
  }
}

/**
 * Render the diagnostics list into a gutter element. Each entry carries
 * the API-reported position in data attributes, so tests (and click
 * handlers) can trace every rendered position back to the payload.
 */
export function renderDiagnostics(
  gutter: HTMLElement,
  diagnostics: Diagnostic[],
  stale: boolean,
): void {
  gutter.textContent = "";
  gutter.classList.toggle("stale", stale);
  for (const diagnostic of diagnostics) {
    const entry = document.createElement("li");
    entry.className = `diagnostic ${diagnostic.severity}`;
    entry.dataset.line = String(diagnostic.line);
    entry.dataset.col = String(diagnostic.col);
    entry.dataset.code = diagnostic.code;
    entry.textContent = `${diagnostic.line}:${diagnostic.col} ${diagnostic.message}`;
    gutter.appendChild(entry);
  }
}

/** 0-based character offset of a 1-based line/col position in the buffer. */
export function positionToOffset(text: string, line: number, col: number): number {
  const lines = text.split("\n");
  let offset = 0;
  for (let i = 0; i < Math.min(line - 1, lines.length); i += 1) {
    offset += lines[i]!.length + 1;
  }
  return offset + (col - 1);
}
