/** Typed client for the session HTTP API. The UI talks to nothing else. */

export interface LayoutImage {
  id: string;
  x: number;
  y: number;
  cluster: number;
}

export interface LayoutCluster {
  id: number;
  color: number;
  exemplar: string;
}

export interface MinimapEntry {
  cluster: number;
  color: number;
  centroid: [number, number];
  bounding_box: [number, number, number, number];
}

export interface LayoutWire {
  images: LayoutImage[];
  clusters: LayoutCluster[];
  scale: number;
  clamped?: boolean;
  minimap?: MinimapEntry[];
}

export interface PromptEntry {
  prompt_id: string;
  prompt: string;
  negative_prompt: string;
  visible: boolean;
}

export interface SessionState {
  id: string;
  created_at: string;
  layout_seed: number;
  current_prompt: string;
  suggestions: string[];
  prompt_history: PromptEntry[];
  batches: Array<{
    prompt_id: string;
    images: Array<{
      id: string;
      seed: number;
      blocked: boolean;
      failed: boolean;
      missing: boolean;
    }>;
  }>;
  layout: LayoutWire;
}

export interface ModifierMenu {
  image_modifiers: Array<[string, number]>;
  cluster_modifiers: Array<[string, number]>;
  cluster_unique_modifiers: Array<[string, number]>;
  caption: string;
}

export interface IdeateResponse {
  suggestions: string[];
  prompt: string;
}

export interface IntegrateResponse {
  merged: string;
  fallback: boolean;
}

export interface JobStatus {
  job_id: string;
  status: "pending" | "running" | "done" | "error";
  result: { prompt_id: string; image_ids: string[] } | null;
  error: string | null;
}

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(detail, response.status);
  }
  return (await response.json()) as T;
}

export class WorkbenchApi {
  constructor(private readonly base: string = "") {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return parseOrThrow<T>(response);
  }

  private async get<T>(path: string): Promise<T> {
    return parseOrThrow<T>(await fetch(this.base + path));
  }

  createSession(): Promise<{ session_id: string }> {
    return this.post("/sessions", {});
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.get(`/sessions/${sessionId}`);
  }

  ideate(sessionId: string, subject: string): Promise<IdeateResponse> {
    return this.post(`/sessions/${sessionId}/ideate`, { subject });
  }

  steer(sessionId: string, instruction: string): Promise<IdeateResponse> {
    return this.post(`/sessions/${sessionId}/steer`, { instruction });
  }

  extendStyle(
    sessionId: string,
    atomicStyle: string,
    subjectIndex: number,
  ): Promise<{ prompt: string; modifiers: string[]; zero_shot_fallback: boolean }> {
    return this.post(`/sessions/${sessionId}/extend-style`, {
      atomic_style: atomicStyle,
      subject_index: subjectIndex,
    });
  }

  generate(
    sessionId: string,
    prompt: string,
    batchSize: number,
    negativePrompt = "",
  ): Promise<{ job_id: string }> {
    return this.post(`/sessions/${sessionId}/generate`, {
      prompt,
      negative_prompt: negativePrompt,
      batch_size: batchSize,
    });
  }

  jobStatus(sessionId: string, jobId: string): Promise<JobStatus> {
    return this.get(`/sessions/${sessionId}/jobs/${jobId}`);
  }

  /** Slider values round-trip through the scale query parameter exactly. */
  layout(sessionId: string, scale?: number): Promise<LayoutWire> {
    const query = scale === undefined ? "" : `?scale=${scale}`;
    return this.get(`/sessions/${sessionId}/layout${query}`);
  }

  menu(sessionId: string, imageId: string): Promise<ModifierMenu> {
    return this.get(`/sessions/${sessionId}/images/${imageId}/menu`);
  }

  integrate(sessionId: string, modifier: string): Promise<IntegrateResponse> {
    return this.post(`/sessions/${sessionId}/integrate`, { modifier });
  }

  setPromptVisible(
    sessionId: string,
    promptId: string,
    visible: boolean,
  ): Promise<LayoutWire> {
    return this.post(`/sessions/${sessionId}/prompts/${promptId}/visible`, {
      visible,
    });
  }

  thumbnailUrl(sessionId: string, imageId: string, size = 128): string {
    return `${this.base}/sessions/${sessionId}/images/${imageId}/thumbnail?size=${size}`;
  }

  fullImageUrl(sessionId: string, imageId: string): string {
    return `${this.base}/sessions/${sessionId}/images/${imageId}/file`;
  }
}
