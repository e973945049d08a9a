"""Shared one-shot HTTP JSON exchange with bounded retries."""

from __future__ import annotations

import os
import time

import requests

from .errors import ProviderError

RETRIES = 2
BACKOFF_SECONDS = 0.25
TOKEN_ENV = "PROMPTCANVAS_API_TOKEN"


def post_json(url: str, payload: dict, token_env: str = TOKEN_ENV,
              retries: int = RETRIES, backoff: float = BACKOFF_SECONDS) -> dict:
    """POST JSON, return parsed JSON; 2 retries with exponential backoff."""
    headers = {"Content-Type": "application/json"}
    token = os.environ.get(token_env)
    if token:
        headers["Authorization"] = f"Bearer {token}"
    last_error: Exception | None = None
    for attempt in range(retries + 1):
        if attempt:
            time.sleep(backoff * (2 ** (attempt - 1)))
        try:
            resp = requests.post(url, json=payload, headers=headers, timeout=60)
            resp.raise_for_status()
            return resp.json()
        except (requests.RequestException, ValueError) as exc:
            last_error = exc
    raise ProviderError(
        f"request to {url} failed after {retries} retries: {last_error}",
        retries=retries,
    )
