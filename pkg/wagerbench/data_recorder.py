"""Append-only JSONL recording of benchmark sessions."""

import json
import threading
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple

from .display import console, debug_log

MANIFEST_NAME = "manifest.json"
ROUNDS_DIR = "rounds"
SESSIONS_DIR = "sessions"


def dumps_line(row: Dict[str, Any]) -> str:
    """Serialize one record as a single JSONL line (no trailing newline)."""
    return json.dumps(row, ensure_ascii=False, allow_nan=False)


def read_jsonl(path: Path) -> Iterator[Tuple[int, str]]:
    """Yield (1-based line number, stripped text) for every non-blank line."""
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            text = line.strip()
            if text:
                yield number, text


class DatasetRecorder:
    """Owns the on-disk layout of one dataset directory.

    Layout::

        <root>/manifest.json
        <root>/rounds/<condition_id>.jsonl    one line per logged round
        <root>/sessions/<condition_id>.jsonl  one end-of-session marker per session
    """

    def __init__(self, root: Path):
        """Initialize the recorder.

        Args:
            root: Dataset directory (created on first write)
        """
        self.root = Path(root)

    @property
    def manifest_path(self) -> Path:
        return self.root / MANIFEST_NAME

    def rounds_path(self, condition_id: str) -> Path:
        return self.root / ROUNDS_DIR / f"{condition_id}.jsonl"

    def sessions_path(self, condition_id: str) -> Path:
        return self.root / SESSIONS_DIR / f"{condition_id}.jsonl"

    def prepare(self) -> None:
        """Create the directory layout."""
        for sub in (ROUNDS_DIR, SESSIONS_DIR):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    def read_manifest(self) -> Optional[Dict[str, Any]]:
        """Return the manifest, or None when the dataset has none yet."""
        if not self.manifest_path.exists():
            return None
        with open(self.manifest_path, "r", encoding="utf-8") as f:
            return json.load(f)

    def write_manifest(self, manifest: Dict[str, Any]) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.manifest_path, "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")

    def markers(self, condition_id: str) -> List[Dict[str, Any]]:
        """End-of-session markers already written for a condition."""
        path = self.sessions_path(condition_id)
        if not path.exists():
            return []
        return [json.loads(text) for _, text in read_jsonl(path)]

    def prune_unmarked(self, condition_id: str, completed: Iterable[int]) -> int:
        """Drop rounds of sessions that never got a marker (interrupted mid-session).

        Returns:
            Number of round lines removed
        """
        path = self.rounds_path(condition_id)
        if not path.exists():
            return 0
        keep = set(completed)
        kept: List[str] = []
        dropped = 0
        for _, text in read_jsonl(path):
            if json.loads(text).get("iteration") in keep:
                kept.append(text)
            else:
                dropped += 1
        if dropped:
            with open(path, "w", encoding="utf-8") as f:
                f.writelines(line + "\n" for line in kept)
            console.log(
                f"[yellow]Dropped {dropped} rounds of interrupted sessions "
                f"in {condition_id}[/yellow]"
            )
        return dropped

    def append_session(
        self, condition_id: str, rounds: List[Dict[str, Any]], marker: Dict[str, Any]
    ) -> None:
        """Append a finished session: its rounds first, then its marker."""
        if rounds:
            with open(self.rounds_path(condition_id), "a", encoding="utf-8") as f:
                f.writelines(dumps_line(row) + "\n" for row in rounds)
        with open(self.sessions_path(condition_id), "a", encoding="utf-8") as f:
            f.write(dumps_line(marker) + "\n")


class ConditionWriter:
    """Single writer for one condition's files.

    Sessions may finish in any order; they are written in iteration order so
    that parallel and serial batches leave identical files.
    """

    def __init__(self, recorder: DatasetRecorder, condition_id: str, pending: Iterable[int]):
        self.recorder = recorder
        self.condition_id = condition_id
        self._order = sorted(pending)
        self._next = 0
        self._buffer: Dict[int, Tuple[List[Dict[str, Any]], Dict[str, Any]]] = {}
        self._lock = threading.Lock()
        self.written = 0

    def submit(self, iteration: int, rounds: List[Dict[str, Any]], marker: Dict[str, Any]) -> None:
        with self._lock:
            self._buffer[iteration] = (rounds, marker)
            while self._next < len(self._order) and self._order[self._next] in self._buffer:
                self._write(self._order[self._next])
                self._next += 1

    def close(self) -> None:
        """Write whatever is still buffered, skipping sessions that never finished."""
        with self._lock:
            for iteration in sorted(self._buffer):
                self._write(iteration)
            self._next = len(self._order)

    def _write(self, iteration: int) -> None:
        rounds, marker = self._buffer.pop(iteration)
        self.recorder.append_session(self.condition_id, rounds, marker)
        self.written += 1
        debug_log(f"{self.condition_id} iteration {iteration}: {len(rounds)} rounds written")
