"""Axiom reports with exact residuals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exactq import is_zero, normalize, to_lists


class StructureError(ValueError):
    """Malformed data: wrong shapes, broken (anti)symmetry, bad indices."""


class PreconditionError(ValueError):
    """An operation was called on data that fails its stated precondition."""

    def __init__(self, message: str, report: "AxiomReport | None" = None):
        super().__init__(message)
        self.report = report


class UnsupportedCase(ValueError):
    """The restricted solver was asked for a case outside its linear regime."""


@dataclass
class AxiomResult:
    name: str
    passed: bool = True
    checked: int = 0
    witness: Optional[tuple] = None
    where: str = ""
    residual: Optional[np.ndarray] = None
    kind: str = "axiom"

    def to_json(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "passed": self.passed, "checked": self.checked}
        if not self.passed:
            out["witness"] = list(self.witness) if self.witness is not None else None
            out["where"] = self.where
            out["residual"] = to_lists(self.residual) if self.residual is not None else None
        return out


@dataclass
class AxiomReport:
    title: str
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def names(self) -> list[str]:
        return [r.name for r in self.results]

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def axioms(self) -> list[AxiomResult]:
        return [r for r in self.results if r.kind == "axiom"]

    def summary(self) -> str:
        ax = self.axioms()
        good = sum(r.passed for r in ax)
        noun = "axiom" if len(ax) == 1 else "axioms"
        verdict = "pass" if good == len(ax) else "hold"
        line = f"{good}/{len(ax)} {noun} {verdict}"
        pre = [r for r in self.results if r.kind != "axiom" and not r.passed]
        if pre:
            line += f"; {len(pre)} precondition failure(s)"
        return line

    def render(self) -> str:
        lines = [f"{self.title}: {self.summary()}"]
        for r in self.results:
            mark = "ok  " if r.passed else "FAIL"
            tag = "" if r.kind == "axiom" else f" [{r.kind}]"
            line = f"  {mark} {r.name}{tag} ({r.checked} checked)"
            if not r.passed:
                line += f" at {r.where}"
                if r.residual is not None:
                    line += " residual " + _fmt_residual(r.residual)
            lines.append(line)
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "summary": self.summary(),
            "results": [r.to_json() for r in self.results],
        }

    def extend(self, other: "AxiomReport", prefix: str = "") -> None:
        for r in other.results:
            r2 = AxiomResult(**{**r.__dict__})
            r2.name = prefix + r.name
            self.results.append(r2)


def _fmt_residual(res) -> str:
    flat = to_lists(np.asarray(res, dtype=object).reshape(-1))
    return "(" + ", ".join(flat) + ")"


class ReportBuilder:
    """Accumulates per-axiom results, keeping the first violation of each."""

    def __init__(self, title: str):
        self.report = AxiomReport(title)
        self._by_name: dict[str, AxiomResult] = {}

    def _slot(self, name: str, kind: str) -> AxiomResult:
        if name not in self._by_name:
            res = AxiomResult(name, kind=kind)
            self._by_name[name] = res
            self.report.results.append(res)
        return self._by_name[name]

    def declare(self, name: str, kind: str = "axiom") -> None:
        self._slot(name, kind)

    def element(self, name: str, witness: tuple, residual, labels: Sequence[str] = (), kind: str = "axiom") -> None:
        slot = self._slot(name, kind)
        slot.checked += 1
        if slot.passed and not is_zero(residual):
            slot.passed = False
            slot.witness = tuple(witness)
            slot.where = _label(witness, labels)
            slot.residual = normalize(residual)

    def tensor(self, name: str, residual: np.ndarray, labels: Sequence[str], kind: str = "axiom") -> None:
        """Residual tensor indexed by basis tuple; trailing axis is the output vector."""
        slot = self._slot(name, kind)
        residual = np.asarray(residual, dtype=object)
        k = len(labels)
        outer = residual.shape[:k]
        slot.checked += int(np.prod(outer)) if outer else 1
        if not slot.passed:
            return
        for idx in np.ndindex(*outer):
            vec = residual[idx]
            if not is_zero(vec):
                slot.passed = False
                slot.witness = tuple(int(i) for i in idx)
                slot.where = _label(idx, labels)
                slot.residual = normalize(vec)
                return

    def flag(self, name: str, passed: bool, where: str = "", kind: str = "axiom", residual=None) -> None:
        slot = self._slot(name, kind)
        slot.checked += 1
        if slot.passed and not passed:
            slot.passed = False
            slot.where = where
            slot.witness = ()
            slot.residual = None if residual is None else normalize(residual)

    def done(self) -> AxiomReport:
        return self.report


def _label(idx, labels) -> str:
    if not labels:
        return "(" + ", ".join(str(i) for i in idx) + ")"
    return "(" + ", ".join(f"{lab}={i}" for lab, i in zip(labels, idx)) + ")"
