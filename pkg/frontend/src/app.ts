/** Application shell: owns no authoritative state. Everything it shows is
 *  refetchable from the API, so a hard reload reproduces the exact scene. */

import { WorkbenchApi, type LayoutWire, type SessionState } from "./api.js";
import { computeTiles, drawBoard, tileAt, type Tile } from "./board.js";
import { drawMinimap } from "./minimap.js";
import {
  clampSlider,
  dragImage,
  initialViewState,
  panBy,
  resetUnpinnedOverrides,
  setSlider,
  zoomAt,
  type ViewState,
} from "./state.js";
import { ModifierPopup, PromptHistoryPanel, SuggestionPanel } from "./panels.js";

export class WorkbenchApp {
  view: ViewState = initialViewState();
  layout: LayoutWire = { images: [], clusters: [], scale: 1.0 };
  session: SessionState | null = null;

  readonly canvas: HTMLCanvasElement;
  readonly minimapCanvas: HTMLCanvasElement;
  readonly slider: HTMLInputElement;
  readonly statusLine: HTMLElement;
  readonly suggestionPanel: SuggestionPanel;
  readonly modifierPopup: ModifierPopup;
  readonly historyPanel: PromptHistoryPanel;
  readonly generateButton: HTMLButtonElement;
  readonly batchInput: HTMLInputElement;

  private readonly imageCache = new Map<string, HTMLImageElement>();
  /** Tiles from the most recent render; hit-testing and tests read these. */
  tiles: Tile[] = [];

  constructor(
    readonly api: WorkbenchApi,
    readonly sessionId: string,
    readonly rootElement: HTMLElement,
  ) {
    this.canvas = document.createElement("canvas");
    this.canvas.className = "board";
    this.canvas.width = 1200;
    this.canvas.height = 800;
    this.minimapCanvas = document.createElement("canvas");
    this.minimapCanvas.className = "minimap";
    this.minimapCanvas.width = 220;
    this.minimapCanvas.height = 220;

    this.slider = document.createElement("input");
    this.slider.type = "range";
    this.slider.className = "scale-slider";
    this.slider.min = "0.5";
    this.slider.max = "3";
    this.slider.step = "0.1";
    this.slider.value = "1";

    this.statusLine = document.createElement("div");
    this.statusLine.className = "status-line";

    const callbacks = {
      onPromptChanged: () => this.renderStatus(""),
      onLayoutChanged: () => void this.refreshLayout(),
      onError: (message: string) => this.renderStatus(message),
    };
    this.suggestionPanel = new SuggestionPanel(api, sessionId, callbacks);
    this.modifierPopup = new ModifierPopup(api, sessionId, {
      ...callbacks,
      promptField: this.suggestionPanel.promptField,
    });
    this.historyPanel = new PromptHistoryPanel(api, sessionId, callbacks);

    this.generateButton = document.createElement("button");
    this.generateButton.className = "generate";
    this.generateButton.textContent = "Generate";
    this.batchInput = document.createElement("input");
    this.batchInput.type = "number";
    this.batchInput.value = "10";
    this.batchInput.className = "batch-size";

    rootElement.append(
      this.suggestionPanel.root,
      this.batchInput,
      this.generateButton,
      this.canvas,
      this.minimapCanvas,
      this.slider,
      this.statusLine,
      this.historyPanel.root,
      this.modifierPopup.root,
    );
    this.bindEvents();
  }

  private bindEvents(): void {
    this.slider.addEventListener("input", () => {
      this.view = setSlider(this.view, Number(this.slider.value));
      this.slider.value = String(this.view.slider);
      this.render(); // optimistic
      void this.refreshLayout(); // authoritative round-trip via ?scale=
    });

    this.generateButton.addEventListener("click", () => void this.generate());

    this.canvas.addEventListener("wheel", (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
      this.view = zoomAt(
        this.view,
        event.offsetX,
        event.offsetY,
        factor,
        this.canvas.width,
        this.canvas.height,
      );
      this.render();
    });

    let dragging: { tile: Tile | null; lastX: number; lastY: number } | null = null;
    this.canvas.addEventListener("mousedown", (event) => {
      dragging = {
        tile: tileAt(this.tiles, event.offsetX, event.offsetY),
        lastX: event.offsetX,
        lastY: event.offsetY,
      };
    });
    this.canvas.addEventListener("mousemove", (event) => {
      if (!dragging) return;
      const dx = event.offsetX - dragging.lastX;
      const dy = event.offsetY - dragging.lastY;
      dragging.lastX = event.offsetX;
      dragging.lastY = event.offsetY;
      if (dragging.tile) {
        // drag a tile: client-side override only, server layout untouched
        this.view = dragImage(
          this.view,
          dragging.tile.id,
          dx / this.view.viewport.zoom,
          dy / this.view.viewport.zoom,
        );
      } else {
        this.view = panBy(this.view, dx, dy);
      }
      this.render();
    });
    this.canvas.addEventListener("mouseup", (event) => {
      const wasDrag =
        dragging &&
        (Math.abs(event.offsetX - dragging.lastX) > 2 ||
          Math.abs(event.offsetY - dragging.lastY) > 2);
      const tile = dragging?.tile ?? null;
      dragging = null;
      if (tile && !wasDrag) {
        this.view = { ...this.view, selectedImage: tile.id };
        this.render();
      }
    });
    this.canvas.addEventListener("dblclick", (event) => {
      const tile = tileAt(this.tiles, event.offsetX, event.offsetY);
      if (tile) void this.modifierPopup.open(tile.id);
    });
  }

  async boot(): Promise<void> {
    await this.refreshSession();
  }

  async refreshSession(): Promise<void> {
    this.session = await this.api.getSession(this.sessionId);
    this.layout = this.session.layout;
    this.historyPanel.render(this.session.prompt_history);
    if (!this.suggestionPanel.promptField.value) {
      this.suggestionPanel.promptField.value = this.session.current_prompt;
    }
    this.render();
  }

  async refreshLayout(): Promise<void> {
    this.layout = await this.api.layout(this.sessionId, this.view.slider);
    this.view = resetUnpinnedOverrides(this.view);
    if (this.session) {
      this.session = await this.api.getSession(this.sessionId);
      this.historyPanel.render(this.session.prompt_history);
    }
    // a stale popup for an image that left the canvas closes with a notice
    const openFor = this.modifierPopup.root.dataset.imageId;
    if (
      openFor &&
      !this.modifierPopup.root.hidden &&
      !this.layout.images.some((img) => img.id === openFor)
    ) {
      this.modifierPopup.close("image is no longer on the canvas");
    }
    this.render();
  }

  async generate(): Promise<void> {
    const prompt = this.suggestionPanel.promptField.value.trim();
    if (!prompt) {
      this.renderStatus("write or extend a prompt first");
      return;
    }
    const batch = Math.max(1, Number(this.batchInput.value) || 10);
    this.generateButton.disabled = true;
    try {
      const { job_id } = await this.api.generate(this.sessionId, prompt, batch);
      this.renderStatus("generating…");
      for (;;) {
        const job = await this.api.jobStatus(this.sessionId, job_id);
        if (job.status === "done") break;
        if (job.status === "error") {
          this.renderStatus(`generation failed: ${job.error}`);
          return;
        }
        await new Promise((resolve) => setTimeout(resolve, 250));
      }
      this.renderStatus("");
      await this.refreshSession();
    } finally {
      this.generateButton.disabled = false;
    }
  }

  renderStatus(message: string): void {
    this.statusLine.textContent = message;
  }

  private lookupImage(tile: Tile): CanvasImageSource | null {
    const wantFull = tile.wantsFullRes;
    const key = `${tile.id}:${wantFull ? "full" : "thumb"}`;
    const cached = this.imageCache.get(key);
    if (cached) return cached.complete && cached.naturalWidth > 0 ? cached : null;
    const img = new Image();
    img.src = wantFull
      ? this.api.fullImageUrl(this.sessionId, tile.id)
      : this.api.thumbnailUrl(this.sessionId, tile.id);
    img.onload = () => this.render();
    this.imageCache.set(key, img);
    return null;
  }

  private context2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
    try {
      return canvas.getContext("2d");
    } catch {
      return null; // canvas-less environments (jsdom tests)
    }
  }

  render(): void {
    const slider = clampSlider(this.view.slider);
    this.view = { ...this.view, slider };
    const computation = computeTiles(
      this.layout,
      this.view,
      this.canvas.width,
      this.canvas.height,
    );
    this.tiles = computation.tiles;
    const ctx = this.context2d(this.canvas);
    if (ctx) {
      drawBoard(
        ctx,
        computation,
        this.canvas.width,
        this.canvas.height,
        (tile) => this.lookupImage(tile),
        this.view.selectedImage,
      );
    }
    const miniCtx = this.context2d(this.minimapCanvas);
    if (miniCtx) {
      drawMinimap(
        miniCtx,
        this.layout,
        this.view,
        this.minimapCanvas.width,
        this.minimapCanvas.height,
        this.canvas.width,
        this.canvas.height,
      );
    }
  }
}

export async function startApp(
  root: HTMLElement,
  baseUrl = "",
  existingSessionId?: string,
): Promise<WorkbenchApp> {
  const api = new WorkbenchApi(baseUrl);
  const sessionId =
    existingSessionId ?? (await api.createSession()).session_id;
  const app = new WorkbenchApp(api, sessionId, root);
  await app.boot();
  return app;
}
