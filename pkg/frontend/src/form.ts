// Annotation form: one blinded (source, translation) pair, eleven feature
// rows, live preview, keyboard-first input.
//
// Shortcuts: digits 0-4 set the active feature's level, "n" marks it NA,
// arrow keys move between features, Enter submits when the form is complete.

import type { AssignmentPayload } from "./api.js";
import {
  FEATURE_COUNT,
  Selection,
  canSubmit,
  computePreview,
  toWire,
} from "./scoring.js";

export type SubmitHandler = (scores: (number | null)[]) => Promise<void>;

const LEVEL_KEYS = ["0", "1", "2", "3", "4"];

export class AnnotationForm {
  readonly selections: Selection[];
  activeFeature = 0;
  submitting = false;
  lastError: string | null = null;

  private previewEl!: HTMLElement;
  private submitEl!: HTMLButtonElement;
  private errorEl!: HTMLElement;
  private rows: HTMLElement[] = [];

  constructor(
    private root: HTMLElement,
    readonly payload: AssignmentPayload,
    private onSubmit: SubmitHandler,
  ) {
    this.selections = Array<Selection>(FEATURE_COUNT).fill("unset");
    this.render();
  }

  private render(): void {
    const { payload } = this;
    this.root.textContent = "";

    const progress = document.createElement("div");
    progress.className = "progress";
    const pct =
      payload.progress.total === 0
        ? 0
        : Math.floor((100 * payload.progress.done) / payload.progress.total);
    progress.textContent = `${payload.progress.done} / ${payload.progress.total} (${pct}%)`;
    const bar = document.createElement("div");
    bar.className = "progress-bar";
    bar.style.width = `${pct}%`;
    progress.appendChild(bar);
    this.root.appendChild(progress);

    const source = document.createElement("blockquote");
    source.className = "source-text";
    source.textContent = payload.source_text;
    const target = document.createElement("blockquote");
    target.className = "target-text";
    target.textContent = payload.target_text;
    this.root.append(source, target);

    const table = document.createElement("div");
    table.className = "features";
    this.rows = [];
    payload.rubric.features.forEach((feature, i) => {
      const row = document.createElement("div");
      row.className = "feature-row";
      row.dataset.feature = String(feature.ordinal);

      const label = document.createElement("details");
      const summary = document.createElement("summary");
      summary.textContent = `${feature.ordinal}. ${feature.short_name.replace(/_/g, " ")}`;
      const help = document.createElement("p");
      help.textContent = feature.description;
      label.append(summary, help);
      row.appendChild(label);

      const buttons = document.createElement("div");
      buttons.className = "levels";
      for (let level = 0; level <= 4; level++) {
        buttons.appendChild(
          this.levelButton(i, level as Selection, `${level} ${payload.rubric.scale_labels[String(level)]}`),
        );
      }
      buttons.appendChild(this.levelButton(i, "na", "NA"));
      row.appendChild(buttons);
      table.appendChild(row);
      this.rows.push(row);
    });
    this.root.appendChild(table);

    this.previewEl = document.createElement("div");
    this.previewEl.className = "preview";
    this.errorEl = document.createElement("div");
    this.errorEl.className = "error";
    this.submitEl = document.createElement("button");
    this.submitEl.className = "submit";
    this.submitEl.textContent = "Submit";
    this.submitEl.addEventListener("click", () => void this.submit());
    this.root.append(this.previewEl, this.errorEl, this.submitEl);

    this.refresh();
  }

  private levelButton(feature: number, value: Selection, text: string): HTMLButtonElement {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.textContent = text;
    btn.dataset.value = String(value);
    btn.addEventListener("click", () => {
      this.setSelection(feature, value);
      this.activeFeature = feature;
      this.refresh();
    });
    return btn;
  }

  setSelection(feature: number, value: Selection): void {
    this.selections[feature] = value;
  }

  refresh(): void {
    const preview = computePreview(this.selections);
    if (preview.state === "score") {
      this.previewEl.textContent = `Score: ${preview.display}`;
    } else if (preview.state === "all-na") {
      this.previewEl.textContent =
        "Every feature is marked NA; at least one must be scored.";
    } else {
      this.previewEl.textContent = "incomplete";
    }
    this.submitEl.disabled = this.submitting || !canSubmit(this.selections);
    this.errorEl.textContent = this.lastError ?? "";
    this.rows.forEach((row, i) => {
      row.classList.toggle("active", i === this.activeFeature);
      const buttons = row.querySelectorAll<HTMLButtonElement>(".levels button");
      buttons.forEach((btn) => {
        btn.classList.toggle(
          "selected",
          btn.dataset.value === String(this.selections[i]),
        );
      });
    });
  }

  handleKey(event: KeyboardEvent): void {
    if (LEVEL_KEYS.includes(event.key)) {
      this.setSelection(this.activeFeature, Number(event.key) as Selection);
      this.moveActive(1);
    } else if (event.key === "n" || event.key === "N") {
      this.setSelection(this.activeFeature, "na");
      this.moveActive(1);
    } else if (event.key === "ArrowDown" || event.key === "ArrowRight") {
      this.moveActive(1);
    } else if (event.key === "ArrowUp" || event.key === "ArrowLeft") {
      this.moveActive(-1);
    } else if (event.key === "Enter") {
      void this.submit();
      return;
    } else {
      return;
    }
    event.preventDefault();
    this.refresh();
  }

  private moveActive(delta: number): void {
    this.activeFeature = Math.min(
      FEATURE_COUNT - 1,
      Math.max(0, this.activeFeature + delta),
    );
  }

  async submit(): Promise<void> {
    if (this.submitting || !canSubmit(this.selections)) return;
    this.submitting = true;
    this.lastError = null;
    this.refresh();
    try {
      await this.onSubmit(toWire(this.selections));
    } catch (err) {
      // selections stay intact; the judge retries without re-entering scores
      this.lastError = err instanceof Error ? err.message : String(err);
    } finally {
      this.submitting = false;
      this.refresh();
    }
  }
}
