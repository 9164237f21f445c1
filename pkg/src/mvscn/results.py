"""CSV result rows (schema version 1) and the flat config-file format."""
from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable

from mvscn.core import NetworkConfig
from mvscn.experiment import ExperimentResult, ExperimentSpec

SCHEMA_VERSION = 1
COLUMNS = (
    "arch", "c", "l", "w_max", "M", "density_target", "density_measured_mean", "ce",
    "deletion_rate", "addition_rate", "iterations", "trials", "queries", "errors",
    "mer", "stderr", "seed",
)

CONFIG_KEYS = {
    "arch", "c", "l", "w_max", "density", "density_target", "M", "ce",
    "deletion_rate", "addition_rate", "iterations", "trials", "seed",
}


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def result_row(res: ExperimentResult) -> dict[str, str]:
    s = res.spec
    vals = {
        "arch": s.arch.value, "c": s.config.c, "l": s.config.l, "w_max": s.config.w_max,
        "M": s.M_resolved, "density_target": s.density_target,
        "density_measured_mean": res.density_measured_mean, "ce": s.ce,
        "deletion_rate": s.deletion_rate, "addition_rate": s.addition_rate,
        "iterations": s.iterations, "trials": len(res.rows), "queries": res.queries,
        "errors": res.errors, "mer": res.mer, "stderr": res.stderr, "seed": s.master_seed,
    }
    return {k: _num(vals[k]) for k in COLUMNS}


def format_csv(rows: Iterable[dict[str, str]]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\r\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write ``text`` to ``path`` so that readers never see a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


class ConfigError(ValueError):
    pass


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key == "density_target":
            key = "density"
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def spec_from_mapping(kv: dict[str, str]) -> ExperimentSpec:
    """Build an :class:`ExperimentSpec` from string config values."""
    kv = dict(kv)
    if "density" in kv and "M" in kv:
        raise ConfigError("give either density or M, not both")
    if "density" not in kv and "M" not in kv:
        raise ConfigError("one of density or M is required")
    try:
        cfg = NetworkConfig(
            c=int(kv.pop("c", 8)), l=int(kv.pop("l", 16)), w_max=int(kv.pop("w_max", 1)),
        )
        trials = kv.pop("trials", None)
        density = kv.pop("density", None)
        M = kv.pop("M", None)
        return ExperimentSpec(
            config=cfg,
            arch=kv.pop("arch", "II"),
            M=int(M) if M is not None else None,
            density_target=float(density) if density is not None else None,
            ce=float(kv.pop("ce", 0.5)),
            deletion_rate=float(kv.pop("deletion_rate", 0.0)),
            addition_rate=float(kv.pop("addition_rate", 0.0)),
            iterations=int(kv.pop("iterations", 4)),
            trials=int(trials) if trials not in (None, "", "auto") else None,
            master_seed=int(kv.pop("seed", 0)),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from None


def load_config(path: str | Path) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    return parse_config_text(text)
