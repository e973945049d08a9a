/** DOM panels: prompt controls with suggestions, modifier popup, history. */

import { ApiError, WorkbenchApi, type ModifierMenu, type PromptEntry } from "./api.js";

export interface PanelCallbacks {
  onPromptChanged(prompt: string): void;
  onLayoutChanged(): void;
  onError(message: string): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Subject ideation + steering + style extension. The first suggestion
 *  always propagates to the prompt field; later picks are one click. */
export class SuggestionPanel {
  readonly root: HTMLElement;
  readonly promptField: HTMLTextAreaElement;
  readonly subjectInput: HTMLInputElement;
  readonly steerInput: HTMLInputElement;
  readonly styleInput: HTMLInputElement;
  readonly optionsBox: HTMLElement;
  readonly errorBox: HTMLElement;
  private selectedIndex = 0;

  constructor(
    private readonly api: WorkbenchApi,
    private readonly sessionId: string,
    private readonly callbacks: PanelCallbacks,
  ) {
    this.root = el("div", "suggestion-panel");
    this.promptField = el("textarea", "prompt-field");
    this.promptField.rows = 4;
    this.subjectInput = el("input", "subject-input");
    this.subjectInput.placeholder = "atomic subject, e.g. Lion";
    this.steerInput = el("input", "steer-input");
    this.steerInput.placeholder = "steer the subject matter";
    this.styleInput = el("input", "style-input");
    this.styleInput.placeholder = "atomic style, e.g. studio ghibli";
    this.optionsBox = el("div", "suggestion-options");
    this.errorBox = el("div", "error-banner");
    this.errorBox.hidden = true;

    const extendButton = el("button", "extend-subject", "Extend subject");
    extendButton.addEventListener("click", () => void this.extendSubject());
    const steerButton = el("button", "steer-subject", "Steer");
    steerButton.addEventListener("click", () => void this.steer());
    const styleButton = el("button", "extend-style", "Extend style");
    styleButton.addEventListener("click", () => void this.extendStyle());

    this.root.append(
      this.errorBox,
      this.promptField,
      this.subjectInput,
      extendButton,
      this.steerInput,
      steerButton,
      this.styleInput,
      styleButton,
      this.optionsBox,
    );
  }

  private showError(message: string): void {
    this.errorBox.textContent = message;
    this.errorBox.hidden = false;
    this.callbacks.onError(message);
  }

  private clearError(): void {
    this.errorBox.hidden = true;
    this.errorBox.textContent = "";
  }

  private renderOptions(suggestions: string[]): void {
    this.optionsBox.replaceChildren();
    suggestions.forEach((suggestion, index) => {
      const option = el("button", "suggestion-option", suggestion);
      option.dataset.index = String(index);
      option.addEventListener("click", () => {
        this.selectedIndex = index;
        this.promptField.value = suggestion;
        this.callbacks.onPromptChanged(suggestion);
      });
      this.optionsBox.append(option);
    });
  }

  async extendSubject(): Promise<void> {
    const subject = this.subjectInput.value.trim();
    if (!subject) return;
    try {
      const body = await this.api.ideate(this.sessionId, subject);
      this.clearError();
      this.renderOptions(body.suggestions);
      this.selectedIndex = 0;
      // first suggestion propagates automatically
      this.promptField.value = body.suggestions[0];
      this.callbacks.onPromptChanged(body.suggestions[0]);
    } catch (error) {
      this.showError(error instanceof ApiError ? error.message : String(error));
    }
  }

  async steer(): Promise<void> {
    const instruction = this.steerInput.value.trim();
    if (!instruction) return;
    const priorPrompt = this.promptField.value;
    try {
      const body = await this.api.steer(this.sessionId, instruction);
      this.clearError();
      this.renderOptions(body.suggestions);
      // options replaced; the prompt field stays untouched until a pick
      this.promptField.value = priorPrompt;
    } catch (error) {
      this.showError(error instanceof ApiError ? error.message : String(error));
    }
  }

  async extendStyle(): Promise<void> {
    const style = this.styleInput.value.trim();
    if (!style) return;
    try {
      const body = await this.api.extendStyle(
        this.sessionId,
        style,
        this.selectedIndex,
      );
      this.clearError();
      this.promptField.value = body.prompt;
      this.callbacks.onPromptChanged(body.prompt);
    } catch (error) {
      this.showError(error instanceof ApiError ? error.message : String(error));
    }
  }
}

const MENU_TABS = [
  ["image", "Image modifiers"],
  ["cluster", "Cluster modifiers"],
  ["unique", "Unique to this cluster"],
] as const;

/** Pop-up with three collapsible sub-menus of Add-able modifiers. */
export class ModifierPopup {
  readonly root: HTMLElement;

  constructor(
    private readonly api: WorkbenchApi,
    private readonly sessionId: string,
    private readonly callbacks: PanelCallbacks & {
      promptField: HTMLTextAreaElement;
    },
  ) {
    this.root = el("div", "modifier-popup");
    this.root.hidden = true;
  }

  close(notice?: string): void {
    this.root.hidden = true;
    this.root.replaceChildren();
    if (notice) this.callbacks.onError(notice);
  }

  async open(imageId: string): Promise<void> {
    let menu: ModifierMenu;
    try {
      menu = await this.api.menu(this.sessionId, imageId);
    } catch (error) {
      // stale image (hidden prompt, pruned layout): close with a notice
      this.close(
        error instanceof ApiError && error.status === 404
          ? "image is no longer on the canvas"
          : String(error),
      );
      return;
    }
    this.root.hidden = false;
    this.root.replaceChildren();
    this.root.dataset.imageId = imageId;

    const caption = el("div", "menu-caption", menu.caption);
    this.root.append(caption);

    const rankings = {
      image: menu.image_modifiers,
      cluster: menu.cluster_modifiers,
      unique: menu.cluster_unique_modifiers,
    };
    for (const [key, label] of MENU_TABS) {
      const details = el("details", `submenu submenu-${key}`);
      details.open = key === "image";
      details.append(el("summary", undefined, label));
      for (const [phrase, score] of rankings[key]) {
        const row = el("div", "modifier-row");
        row.append(el("span", "modifier-phrase", phrase));
        row.append(el("span", "modifier-score", score.toFixed(3)));
        const addButton = el("button", "modifier-add", "Add");
        addButton.dataset.phrase = phrase;
        addButton.addEventListener("click", () => void this.add(phrase));
        row.append(addButton);
        details.append(row);
      }
      this.root.append(details);
    }
  }

  async add(phrase: string): Promise<void> {
    const field = this.callbacks.promptField;
    try {
      const body = await this.api.integrate(this.sessionId, phrase);
      field.value = body.merged;
      this.callbacks.onPromptChanged(body.merged);
      if (body.fallback) {
        this.callbacks.onError(
          "integration provider unavailable; appended the modifier instead",
        );
      }
    } catch (error) {
      // total failure: offer the naive merge locally, flagged as a warning
      const naive = `${field.value}, ${phrase}`;
      field.value = naive;
      this.callbacks.onPromptChanged(naive);
      this.callbacks.onError(
        `integration failed (${error instanceof Error ? error.message : error}); ` +
          "used a plain comma-append",
      );
    }
  }
}

/** Prompt history with visibility toggles; toggling refetches the layout. */
export class PromptHistoryPanel {
  readonly root: HTMLElement;

  constructor(
    private readonly api: WorkbenchApi,
    private readonly sessionId: string,
    private readonly callbacks: PanelCallbacks,
  ) {
    this.root = el("div", "prompt-history");
  }

  render(entries: PromptEntry[]): void {
    this.root.replaceChildren();
    for (const entry of entries) {
      const row = el("label", "history-row");
      const checkbox = el("input") as HTMLInputElement;
      checkbox.type = "checkbox";
      checkbox.checked = entry.visible;
      checkbox.dataset.promptId = entry.prompt_id;
      checkbox.addEventListener("change", () => {
        void this.toggle(entry.prompt_id, checkbox.checked);
      });
      row.append(checkbox, el("span", "history-prompt", entry.prompt));
      this.root.append(row);
    }
  }

  async toggle(promptId: string, visible: boolean): Promise<void> {
    try {
      await this.api.setPromptVisible(this.sessionId, promptId, visible);
      this.callbacks.onLayoutChanged();
    } catch (error) {
      this.callbacks.onError(
        error instanceof ApiError ? error.message : String(error),
      );
    }
  }
}
