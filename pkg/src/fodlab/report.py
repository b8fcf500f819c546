"""Axiom reports: one record per law, JSON-serializable and replayable."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .poly import PolyMap
from .syntax import format_map


@dataclass
class Counterexample:
    inputs: list[str]
    lhs: str
    rhs: str

    def to_dict(self) -> dict:
        return {"inputs": list(self.inputs), "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class LawRecord:
    suite: str
    law: str
    anchor: str
    trials: int = 0
    passed: bool = True
    counterexample: Counterexample | None = None

    def to_dict(self) -> dict:
        d = {
            "suite": self.suite,
            "law": self.law,
            "paper_anchor": self.anchor,
            "trials": self.trials,
            "passed": self.passed,
        }
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample.to_dict()
        return d


@dataclass
class AxiomReport:
    suite: str
    laws: list[LawRecord] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.laws)

    def law(self, name: str) -> LawRecord:
        for r in self.laws:
            if r.law == name:
                return r
        raise KeyError(name)

    def to_dict(self, timing: bool = True) -> dict:
        d = {"suite": self.suite, "passed": self.passed, "laws": [r.to_dict() for r in self.laws]}
        if timing:
            d["wall_time"] = round(self.wall_time, 6)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = []
        for r in self.laws:
            mark = "PASS" if r.passed else "FAIL"
            lines.append(f"[{mark}] {self.suite}/{r.law} ({r.trials} trials) {r.anchor}")
            if r.counterexample is not None:
                ce = r.counterexample
                for inp in ce.inputs:
                    lines.append(f"       input: {inp}")
                lines.append(f"       lhs:   {ce.lhs}")
                lines.append(f"       rhs:   {ce.rhs}")
        lines.append(f"{self.suite}: {'passed' if self.passed else 'FAILED'}")
        return "\n".join(lines)


def _lit(x) -> str:
    if isinstance(x, PolyMap):
        return format_map(x)
    to_literal = getattr(x, "to_literal", None)
    if to_literal is not None:
        return to_literal()
    return str(x)


class SuiteRecorder:
    """Accumulates law outcomes; keeps only the first counterexample per law."""

    def __init__(self, suite: str, anchors: dict[str, str]):
        self.suite = suite
        self.anchors = anchors
        self.records = {name: LawRecord(suite, name, anchor) for name, anchor in anchors.items()}
        self._t0 = time.perf_counter()

    def check(self, law: str, lhs, rhs, inputs: Iterable = ()) -> bool:
        rec = self.records[law]
        rec.trials += 1
        ok = lhs == rhs
        if not ok and rec.passed:
            rec.passed = False
            rec.counterexample = Counterexample([_lit(i) for i in inputs], _lit(lhs), _lit(rhs))
        return ok

    def holds(self, law: str, ok: bool, inputs: Iterable = (), lhs="true", rhs="false") -> bool:
        """Record a boolean verdict (``lhs``/``rhs`` describe the failure)."""
        rec = self.records[law]
        rec.trials += 1
        if not ok and rec.passed:
            rec.passed = False
            rec.counterexample = Counterexample([_lit(i) for i in inputs], _lit(lhs), _lit(rhs))
        return ok

    def guarded(self, law: str, thunk: Callable[[], None], inputs: Iterable = ()) -> None:
        """Run a check; an exception inside it counts as a failure of ``law``."""
        try:
            thunk()
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            self.holds(law, False, inputs, lhs=f"error: {exc}", rhs="no error")

    def report(self) -> AxiomReport:
        return AxiomReport(self.suite, list(self.records.values()), time.perf_counter() - self._t0)
