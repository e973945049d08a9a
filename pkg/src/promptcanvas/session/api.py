"""HTTP JSON API over the workbench service."""

from __future__ import annotations

import io

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel
from PIL import Image

from ..errors import (
    ContractViolation,
    InputError,
    PromptcanvasError,
    ProviderError,
    SessionLookupError,
    SuggestionError,
)
from .service import WorkbenchService


class IdeateBody(BaseModel):
    subject: str


class SteerBody(BaseModel):
    instruction: str


class ExtendStyleBody(BaseModel):
    atomic_style: str
    subject_index: int | None = None
    subject: str | None = None


class GenerateBody(BaseModel):
    prompt: str
    negative_prompt: str = ""
    batch_size: int = 10
    seed: int | None = None


class IntegrateBody(BaseModel):
    modifier: str
    prompt: str | None = None


class VisibleBody(BaseModel):
    visible: bool


def _guard(fn):
    try:
        return fn()
    except SessionLookupError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    except (InputError, ContractViolation) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except (ProviderError, SuggestionError) as exc:
        raise HTTPException(status_code=502, detail=str(exc)) from exc
    except PromptcanvasError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc


def create_app(service: WorkbenchService) -> FastAPI:
    app = FastAPI(title="promptcanvas", version="0.1.0")

    @app.post("/sessions")
    def create_session_endpoint():
        session = service.new_session()
        return {"session_id": session.id}

    @app.get("/sessions/{session_id}")
    def get_session_endpoint(session_id: str):
        return _guard(lambda: service.session_state(session_id))

    @app.post("/sessions/{session_id}/ideate")
    def ideate_endpoint(session_id: str, body: IdeateBody):
        return _guard(lambda: service.ideate(session_id, body.subject))

    @app.post("/sessions/{session_id}/steer")
    def steer_endpoint(session_id: str, body: SteerBody):
        return _guard(lambda: service.steer(session_id, body.instruction))

    @app.post("/sessions/{session_id}/extend-style")
    def extend_style_endpoint(session_id: str, body: ExtendStyleBody):
        return _guard(lambda: service.extend_style(
            session_id, body.atomic_style,
            subject_index=body.subject_index, subject=body.subject,
        ))

    @app.post("/sessions/{session_id}/generate")
    def generate_endpoint(session_id: str, body: GenerateBody):
        job = _guard(lambda: service.start_generate_job(
            session_id,
            prompt=body.prompt,
            negative_prompt=body.negative_prompt,
            batch_size=body.batch_size,
            seed=body.seed,
        ))
        return {"job_id": job.id}

    @app.get("/sessions/{session_id}/jobs/{job_id}")
    def job_endpoint(session_id: str, job_id: str):
        _guard(lambda: service.get_session(session_id))
        job = service.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return {"job_id": job.id, "status": job.status,
                "result": job.result, "error": job.error}

    @app.get("/sessions/{session_id}/layout")
    def layout_endpoint(session_id: str, scale: float | None = None):
        return _guard(lambda: service.layout(session_id, scale=scale))

    @app.get("/sessions/{session_id}/images/{image_id}/menu")
    def menu_endpoint(session_id: str, image_id: str):
        return _guard(lambda: service.menu(session_id, image_id))

    @app.get("/sessions/{session_id}/images/{image_id}/file")
    def image_file_endpoint(session_id: str, image_id: str):
        def fetch():
            session = service.get_session(session_id)
            image = session.image_by_id(image_id)
            if image.pixels is None:
                raise SessionLookupError(f"image {image_id!r} has no pixels")
            return image.pixels
        return Response(content=_guard(fetch), media_type="image/png")

    @app.get("/sessions/{session_id}/images/{image_id}/thumbnail")
    def thumbnail_endpoint(session_id: str, image_id: str, size: int = 128):
        def fetch():
            session = service.get_session(session_id)
            image = session.image_by_id(image_id)
            if image.pixels is None:
                raise SessionLookupError(f"image {image_id!r} has no pixels")
            img = Image.open(io.BytesIO(image.pixels)).convert("RGB")
            img.thumbnail((size, size))
            buf = io.BytesIO()
            img.save(buf, format="PNG")
            return buf.getvalue()
        return Response(content=_guard(fetch), media_type="image/png")

    @app.post("/sessions/{session_id}/integrate")
    def integrate_endpoint(session_id: str, body: IntegrateBody):
        return _guard(lambda: service.integrate(
            session_id, body.modifier, prompt=body.prompt
        ))

    @app.post("/sessions/{session_id}/prompts/{prompt_id}/visible")
    def visibility_endpoint(session_id: str, prompt_id: str, body: VisibleBody):
        return _guard(lambda: service.set_prompt_visibility(
            session_id, prompt_id, body.visible
        ))

    @app.get("/sessions/{session_id}/validate")
    def validate_endpoint(session_id: str):
        return {"problems": _guard(lambda: service.validate(session_id))}

    return app
