"""Client for chat-completion style model endpoints."""

import random
import threading
import time
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import requests

from ..config import AgentSpec, api_key_from_env
from ..display import console, debug_log
from ..protocol import PROMPT_VERSION, RoundContext
from .base import Agent, AgentUnavailable, AuthError

# Statuses worth retrying: timeouts, rate limits and overloaded upstreams
TRANSIENT_STATUS = {408, 425, 429, 500, 502, 503, 504}

DEFAULT_CONCURRENCY = 4


class RemoteAgent(Agent):
    """Agent backed by a remote chat-completion endpoint."""

    def __init__(
        self,
        spec: AgentSpec,
        reprompt_budget: int = 2,
        prompt_version: str = PROMPT_VERSION,
        gate: Optional[threading.BoundedSemaphore] = None,
        session: Optional[requests.Session] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        """Initialize the remote agent.

        Args:
            spec: Endpoint, model and retry settings
            reprompt_budget: Extra attempts allowed after an unusable reply
            prompt_version: Which packaged prompt templates to render
            gate: Semaphore shared by every agent of a batch to bound in-flight requests
            session: HTTP session to use (a new one by default)
            sleep: Called with the backoff delay between attempts
        """
        super().__init__(spec.model_name or "remote", reprompt_budget, prompt_version)
        api_key = api_key_from_env(spec)
        if not api_key:
            raise AuthError(f"Environment variable {spec.api_key_env} is not set")
        self.spec = spec
        self._headers = {
            "Content-Type": "application/json",
            spec.auth_header: f"{spec.auth_scheme} {api_key}".strip(),
        }
        self._gate = gate or threading.BoundedSemaphore(DEFAULT_CONCURRENCY)
        self._owns_session = session is None
        self._session = session or requests.Session()
        self._sleep = sleep
        self._jitter = random.Random()

    def reply(
        self,
        context: RoundContext,
        messages: List[Dict[str, str]],
        rng: np.random.Generator,
    ) -> Tuple[str, float]:
        return self.remote_decide(messages)

    def close(self) -> None:
        if self._owns_session:
            self._session.close()

    def remote_decide(self, messages: List[Dict[str, str]]) -> Tuple[str, float]:
        """Send one chat-completion request, retrying transient failures.

        Returns:
            The assistant text verbatim and the latency of the successful attempt in ms

        Raises:
            AuthError: if the endpoint rejects the credential
            AgentUnavailable: once the retry policy is exhausted
        """
        policy = self.spec.retry_policy
        # Built once so every attempt carries the same body
        body = {
            "model": self.spec.model_name,
            "messages": [dict(m) for m in messages],
            "temperature": self.spec.temperature,
            "max_tokens": self.spec.max_tokens,
        }
        failure = "no attempt made"
        for attempt in range(1, policy.max_attempts + 1):
            retry_after = None
            start = time.perf_counter()
            try:
                with self._gate:
                    response = self._session.post(
                        self.spec.endpoint_url,
                        json=body,
                        headers=self._headers,
                        timeout=self.spec.timeout,
                    )
            except (requests.Timeout, requests.ConnectionError) as e:
                failure = type(e).__name__
            except requests.RequestException as e:
                raise AgentUnavailable(f"Request to {self.spec.endpoint_url} failed: {e}") from e
            else:
                status = response.status_code
                if status in (401, 403):
                    raise AuthError(f"Endpoint rejected the credential (HTTP {status})")
                if status in TRANSIENT_STATUS:
                    failure = f"HTTP {status}"
                    retry_after = _retry_after(response)
                elif status >= 400:
                    raise AgentUnavailable(
                        f"Endpoint returned HTTP {status}: {response.text[:200]}"
                    )
                else:
                    latency_ms = (time.perf_counter() - start) * 1000.0
                    text = _completion_text(response)
                    debug_log(f"{self.name} replied in {latency_ms:.0f} ms")
                    return text, latency_ms

            if attempt == policy.max_attempts:
                break
            delay = policy.delay(attempt)
            delay += self._jitter.uniform(0, policy.jitter * delay)
            if retry_after is not None:
                delay = max(delay, min(retry_after, policy.max_backoff))
            console.log(
                f"[yellow]{failure} from {self.name} "
                f"(attempt {attempt}/{policy.max_attempts}), retrying in {delay:.1f}s[/yellow]"
            )
            self._sleep(delay)

        console.log(
            f"[red]{self.name} unavailable after {policy.max_attempts} attempts ({failure})[/red]"
        )
        raise AgentUnavailable(
            f"{self.name} unavailable after {policy.max_attempts} attempts (last: {failure})"
        )


def _retry_after(response) -> Optional[float]:
    value = response.headers.get("Retry-After") if response.headers else None
    try:
        return float(value) if value is not None else None
    except (TypeError, ValueError):
        return None


def _completion_text(response) -> str:
    try:
        content = response.json()["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as e:
        raise AgentUnavailable(f"Malformed completion body: {e}") from e
    return content if isinstance(content, str) else ""
