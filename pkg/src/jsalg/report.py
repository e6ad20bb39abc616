"""Verification reports, deterministic JSON serialization, worker pools and
the seeded generator used by all sampled checks.

Reports are byte-identical across runs and worker counts: canonical JSON is
dumped with sorted keys and compact separators, rationals render as "num/den",
and wall-clock timings are kept out of the canonical form (the text format
shows them).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import get_context

from .scalars import rat_str


@dataclass
class Report:
    suite: str
    params: dict
    certified_span: object
    status: str  # "pass" | "fail" | "error"
    counterexample: dict | None = None
    details: dict | None = None
    elapsed_ms: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json_dict(self, include_timing: bool = False) -> dict:
        d = {
            "suite": self.suite,
            "params": _jsonable(self.params),
            "certifiedSpan": _jsonable(self.certified_span),
            "status": self.status,
        }
        if self.counterexample is not None:
            d["counterexample"] = _jsonable(self.counterexample)
        if self.details is not None:
            d["details"] = _jsonable(self.details)
        if include_timing and self.elapsed_ms is not None:
            d["elapsedMs"] = round(self.elapsed_ms, 3)
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(
            self.to_json_dict(include_timing), sort_keys=True, separators=(",", ":")
        )

    def text(self) -> str:
        lines = [f"[{self.status.upper()}] {self.suite}"]
        if self.params:
            lines.append(f"  params: {json.dumps(_jsonable(self.params), sort_keys=True)}")
        lines.append(f"  certified: {json.dumps(_jsonable(self.certified_span), sort_keys=True)}")
        if self.counterexample:
            lines.append(
                f"  counterexample: {json.dumps(_jsonable(self.counterexample), sort_keys=True)}"
            )
        if self.details:
            lines.append(f"  details: {json.dumps(_jsonable(self.details), sort_keys=True)}")
        if self.elapsed_ms is not None:
            lines.append(f"  elapsed: {self.elapsed_ms:.1f} ms")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, Fraction):
        return rat_str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def merge_reports(suite: str, params: dict, reports: list[Report]) -> Report:
    """Combine sub-reports in their given (canonical) order."""
    status = "pass"
    ce = None
    for r in reports:
        if not r.passed and status == "pass":
            status = r.status
            ce = {"suite": r.suite, **(r.counterexample or {})}
    return Report(
        suite=suite,
        params=params,
        certified_span=[r.certified_span for r in reports],
        status=status,
        counterexample=ce,
        details={"subSuites": [r.suite for r in reports], "subStatus": [r.status for r in reports]},
    )


class DetRand:
    """Tiny deterministic LCG, stable across platforms and Python versions.

    Used by every sampled check (ideal-closure sampling, short-triple element
    sampling) so seeded runs are reproducible byte for byte.
    """

    __slots__ = ("state",)

    MASK = (1 << 64) - 1

    def __init__(self, seed: int = 0):
        self.state = (seed * 6364136223846793005 + 1442695040888963407) & self.MASK

    def next_int(self) -> int:
        self.state = (self.state * 6364136223846793005 + 1442695040888963407) & self.MASK
        return self.state >> 16

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.next_int() % (hi - lo + 1)

    def rational(self, num_range: int = 9, den_range: int = 4) -> Fraction:
        num = self.randint(-num_range, num_range)
        den = self.randint(1, den_range)
        return Fraction(num, den)


def resolve_workers(workers=None) -> int:
    if workers is None:
        env = os.environ.get("JSALG_WORKERS", "")
        try:
            workers = int(env) if env else 1
        except ValueError:
            workers = 1
    return max(1, int(workers))


def pmap_chunks(fn, chunks: list, workers=None):
    """Map fn over chunks, serially or via a fork pool; results keep the
    chunk order, so any downstream merge is schedule-independent."""
    workers = resolve_workers(workers)
    if workers <= 1 or len(chunks) <= 1:
        return [fn(ch) for ch in chunks]
    ctx = get_context("fork")
    with ctx.Pool(min(workers, len(chunks))) as pool:
        return pool.map(fn, chunks)
