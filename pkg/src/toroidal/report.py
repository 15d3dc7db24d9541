"""Verification reports: per-check counts plus witnessed violations."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class Violation:
    check: str
    witness: str
    detail: str = ""


@dataclass
class Report:
    suite: str
    counts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    max_witnesses: int = 50

    @property
    def ok(self) -> bool:
        return not self.violations and not self.counts.get("__dropped__", 0)

    @property
    def checked(self) -> int:
        return sum(v for k, v in self.counts.items() if k != "__dropped__")

    def count(self, check: str, n: int = 1) -> None:
        self.counts[check] = self.counts.get(check, 0) + n

    def fail(self, check: str, witness: str, detail: str = "") -> None:
        if len(self.violations) < self.max_witnesses:
            self.violations.append(Violation(check, witness, detail))
        else:
            self.counts["__dropped__"] = self.counts.get("__dropped__", 0) + 1

    def note(self, text: str) -> None:
        if text not in self.notes:
            self.notes.append(text)

    def failures_by_check(self) -> dict:
        out: dict = {}
        for v in self.violations:
            out[v.check] = out.get(v.check, 0) + 1
        return out

    def merge(self, other: "Report") -> "Report":
        for k, v in other.counts.items():
            self.count(k, v)
        for v in other.violations:
            self.fail(v.check, v.witness, v.detail)
        for n in other.notes:
            self.note(n)
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["counts"] = dict(sorted(self.counts.items()))
        d["ok"] = self.ok
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(
            suite=d["suite"],
            counts=dict(d["counts"]),
            violations=[Violation(**v) for v in d["violations"]],
            notes=list(d["notes"]),
            max_witnesses=d.get("max_witnesses", 50),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "Report":
        return cls.from_dict(json.loads(s))

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"[{status}] {self.suite}: {self.checked} identities, {len(self.violations)} violations"]
        fails = self.failures_by_check()
        for k, n in sorted(self.counts.items()):
            if k == "__dropped__":
                continue
            lines.append(f"    {k:<28} {n:>8} checked  {fails.get(k, 0):>4} failed")
        for v in self.violations[:10]:
            lines.append(f"    ! {v.check} at {v.witness} {v.detail}".rstrip())
        for n in self.notes:
            lines.append(f"    note: {n}")
        return "\n".join(lines)
