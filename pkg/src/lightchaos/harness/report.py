"""Run experiments, render reports, persist them, and turn them into an exit code."""

from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .. import __version__
from .config import RunConfig
from .registry import EVIDENCE, FLAGGED, UNKNOWN, get_experiment

SCHEMA_VERSION = 1

EXIT_OK, EXIT_MISMATCH, EXIT_UNKNOWN = 0, 1, 2


@dataclass
class RunReport:
    """Everything needed to replay one experiment.

    Wall-clock time is carried separately from the serialized body so that
    identical runs serialize to identical bytes.
    """

    experiment: dict
    config: dict
    checks: list
    flags: list = field(default_factory=list)
    version: str = __version__
    wall_clock: float | None = None

    @property
    def seed(self) -> int:
        return self.config["seed"]

    def to_json(self) -> dict:
        witnesses, certificates = [], []
        for c in self.checks:
            res = c.get("result", {})
            witnesses += [{"check": c["name"], **w} for w in res.get("witnesses", [])]
            if "certificate" in res:
                certificates.append({"check": c["name"], **res["certificate"]})
        return {
            "schema": SCHEMA_VERSION,
            "experiment": self.experiment,
            "verdicts": self.checks,
            "witnesses": witnesses,
            "certificates": certificates,
            "flags": self.flags,
            "seed": self.seed,
            "budget": self.config["budget"],
            "config": self.config,
            "version": self.version,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RunReport":
        return cls(data["experiment"], data["config"], data["verdicts"], data["flags"], data["version"])


def run_experiment(name: str, config: RunConfig | None = None) -> RunReport:
    spec = get_experiment(name)
    config = config or RunConfig()
    start = time.perf_counter()
    checks = spec.runner(config)
    elapsed = time.perf_counter() - start
    flags = []
    for c in checks:
        if c.flagged:
            flags.append({"check": c.name, "claim": c.claim, "computed": c.status})
    if spec.expected == FLAGGED or spec.flags:
        flags += [{"check": None, "claim": spec.anchor, "computed": note} for note in spec.flags]
    return RunReport(spec.to_json(), config.to_json(), [c.to_json() for c in checks], flags, wall_clock=elapsed)


def render_report(report: RunReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_json(), sort_keys=True, indent=1) + "\n").encode()
    if fmt in ("md", "markdown"):
        return render_markdown(report).encode()
    raise ValueError(f"unknown format {fmt!r}")


def parse_report(data: bytes) -> RunReport:
    return RunReport.from_json(json.loads(data))


def render_markdown(report: RunReport) -> str:
    exp = report.experiment
    lines = [f"# {exp['name']}", "", f"System `{exp['system']}`, scheme `{exp['scheme']}`.", f"Anchor: {exp['anchor']}", ""]
    if report.flags:
        lines += ["> **DISCREPANCY**: the computed verdicts below disagree with a stated claim.", ">"]
        for fl in report.flags:
            who = f"`{fl['check']}`: " if fl["check"] else ""
            lines.append(f"> - {who}claim: {fl['claim']}; computed: {fl['computed']}")
        lines.append("")
    for c in report.checks:
        mark = "ok" if c["match"] else "MISMATCH"
        lines += [
            f"## {c['name']}",
            "",
            f"- expected: {c['expected']}",
            f"- computed: {c['status']} ({mark})",
            f"- anchor: {c['anchor']}",
        ]
        if "claim" in c:
            lines.append(f"- stated claim: {c['claim']}")
        res = c.get("result", {})
        if "certificate" in res:
            lines.append(f"- certificate: `{json.dumps(res['certificate'], sort_keys=True)[:400]}`")
        if res.get("witnesses"):
            lines.append(f"- witnesses: {len(res['witnesses'])}")
        lines.append("")
    lines.append(f"seed {report.seed}, version {report.version}")
    if report.wall_clock is not None:
        lines.append(f"wall clock {report.wall_clock:.2f} s")
    return "\n".join(lines) + "\n"


def _atomic_write(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def replay_bundle(report: RunReport) -> dict:
    body = report.to_json()
    return {
        "experiment": body["experiment"],
        "config": body["config"],
        "witnesses": body["witnesses"],
        "certificates": body["certificates"],
        "version": body["version"],
    }


def run_dir(out_dir: str | Path) -> Path:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")
    return Path(out_dir) / stamp


def write_report(report: RunReport, directory: Path, fmt: str = "json") -> Path:
    name = report.experiment["name"]
    suffix = "json" if fmt == "json" else "md"
    path = directory / f"{name}.{suffix}"
    _atomic_write(path, render_report(report, fmt))
    _atomic_write(directory / f"{name}.replay.json", (json.dumps(replay_bundle(report), sort_keys=True, indent=1) + "\n").encode())
    meta = {"wall_clock_seconds": report.wall_clock}
    _atomic_write(directory / f"{name}.meta.json", (json.dumps(meta) + "\n").encode())
    return path


def verify_claims(reports) -> int:
    """0 when every check matches, 1 on any mismatch, else 2 if an UNKNOWN blocks a decision."""
    unknown = False
    for r in reports:
        for c in r.checks:
            if c["expected"] == EVIDENCE:
                continue
            if c["status"] == UNKNOWN:
                unknown = True
            elif not c["match"]:
                return EXIT_MISMATCH
    return EXIT_UNKNOWN if unknown else EXIT_OK
