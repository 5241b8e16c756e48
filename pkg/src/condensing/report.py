"""Run reports: a human rendering and a versioned line-oriented key=value rendering."""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

KV_VERSION = "condensing-kv/1"


def _clean(value) -> str:
    return str(value).replace("\\", "\\\\").replace("\n", "\\n")


@dataclass
class Check:
    name: str
    ok: bool
    expected: str = ""
    actual: str = ""


@dataclass
class RunReport:
    """What a command did and found.

    Entries keep insertion order, which the commands fix, so the key=value
    output is byte-stable for identical inputs.  Timing appears only in the
    human rendering.
    """
    command: list
    status: str = "pass"
    entries: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    laws: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    started: float = field(default_factory=time.perf_counter)
    elapsed: float | None = None

    def add(self, key: str, value):
        self.entries.append((key, _clean(value)))

    def add_input(self, label: str, text: str):
        self.inputs.append((label, text))

    def add_domain(self, prefix: str, rho):
        amb = rho.ambient
        self.add(f"{prefix}.size", len(rho))
        for i, x in enumerate(rho.elements):
            self.add(f"{prefix}.{i}", amb.name(x))

    def check(self, name: str, ok: bool, expected="", actual=""):
        self.checks.append(Check(name, bool(ok), _clean(expected), _clean(actual)))
        if not ok:
            self.status = "fail"

    def add_law(self, group: str, violation, ambient):
        self.laws.append((group, _clean(violation.render(ambient))))
        self.status = "fail"

    @property
    def digest(self) -> str:
        h = hashlib.sha256()
        for label, text in self.inputs:
            h.update(label.encode())
            h.update(b"\0")
            h.update(text.encode())
            h.update(b"\0")
        return h.hexdigest()

    def finish(self):
        if self.elapsed is None:
            self.elapsed = time.perf_counter() - self.started
        return self

    def render_kv(self) -> str:
        lines = [f"format={KV_VERSION}",
                 f"command={_clean(' '.join(self.command))}",
                 f"inputs.sha256={self.digest}",
                 f"status={self.status}"]
        lines += [f"{k}={v}" for k, v in self.entries]
        for i, c in enumerate(self.checks):
            lines.append(f"check.{i}.name={c.name}")
            lines.append(f"check.{i}.ok={'true' if c.ok else 'false'}")
            if not c.ok:
                lines.append(f"check.{i}.expected={c.expected}")
                lines.append(f"check.{i}.actual={c.actual}")
        lines.append(f"laws.violations={len(self.laws)}")
        for i, (group, text) in enumerate(self.laws):
            lines.append(f"laws.{i}={group}: {text}")
        return "\n".join(lines) + "\n"

    def render_human(self) -> str:
        self.finish()
        out = [f"$ condensing {' '.join(self.command)}"]
        width = max((len(k) for k, _ in self.entries), default=0)
        for k, v in self.entries:
            out.append(f"  {k.ljust(width)}  {v}")
        for c in self.checks:
            mark = "ok  " if c.ok else "FAIL"
            out.append(f"  [{mark}] {c.name}")
            if not c.ok:
                out.append(f"         expected: {c.expected}")
                out.append(f"         actual:   {c.actual}")
        if self.laws:
            out.append(f"  law violations ({len(self.laws)}):")
            out += [f"    {group}: {text}" for group, text in self.laws]
        out.append(f"  status: {self.status.upper()}  ({self.elapsed:.2f}s)")
        return "\n".join(out) + "\n"

    def render(self, fmt: str) -> str:
        return self.render_kv() if fmt == "kv" else self.render_human()
