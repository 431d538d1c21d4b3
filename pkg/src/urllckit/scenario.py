"""Plain-text scenario files: `key = value` lines with # comments.

One flat namespace per file.  Unknown keys are rejected and every value is
range checked on the way in, so a typo fails loudly instead of silently
running the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .simcore import MonteCarloConfig

__all__ = [
    "ScenarioError",
    "Field",
    "Scenario",
    "parse_kv_text",
    "parse_kv_file",
    "apply_schema",
]


class ScenarioError(ValueError):
    """Malformed scenario file or parameter set."""


@dataclass(frozen=True)
class Field:
    """One schema entry: converter (raises ValueError on bad input) + default."""

    convert: Callable[[str], object]
    default: object


@dataclass(frozen=True)
class Scenario:
    """A parsed run request: which module, with what parameters, to where."""

    module: str
    params: dict
    out: Optional[str]
    mc: MonteCarloConfig


def parse_kv_text(text: str, source: str = "<scenario>") -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise ScenarioError(
                f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key in out:
            raise ScenarioError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def parse_kv_file(path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {p}: {exc}") from exc
    return parse_kv_text(text, source=str(p))


def apply_schema(raw: dict, schema: dict, source: str = "<scenario>") -> dict:
    """Convert raw strings through the schema; unknown keys are an error."""
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ScenarioError(f"{source}: unknown keys: {', '.join(unknown)}")
    cfg = {}
    for key, fld in schema.items():
        if key in raw:
            try:
                cfg[key] = fld.convert(raw[key])
            except ValueError as exc:
                raise ScenarioError(f"{source}: invalid {key}: {exc}") from exc
        else:
            cfg[key] = fld.default
    return cfg


# ---- converter factories ----------------------------------------------------

def int_field(lo: Optional[int] = None, hi: Optional[int] = None):
    def convert(s: str) -> int:
        v = int(s)
        if lo is not None and v < lo:
            raise ValueError(f"must be >= {lo}, got {v}")
        if hi is not None and v > hi:
            raise ValueError(f"must be <= {hi}, got {v}")
        return v
    return convert


def float_field(lo: Optional[float] = None, hi: Optional[float] = None,
                open_lo: bool = False):
    def convert(s: str) -> float:
        v = float(s)
        if lo is not None and (v <= lo if open_lo else v < lo):
            raise ValueError(f"must be {'>' if open_lo else '>='} {lo}, got {v}")
        if hi is not None and v > hi:
            raise ValueError(f"must be <= {hi}, got {v}")
        return v
    return convert


def choice_field(options):
    opts = tuple(options)

    def convert(s: str) -> str:
        if s not in opts:
            raise ValueError(f"must be one of {opts}, got {s!r}")
        return s
    return convert


def list_field(item_convert: Callable[[str], object], length: Optional[int] = None):
    def convert(s: str):
        parts = [p.strip() for p in s.split(",") if p.strip()]
        if not parts:
            raise ValueError("empty list")
        if length is not None and len(parts) != length:
            raise ValueError(f"expected {length} items, got {len(parts)}")
        return tuple(item_convert(p) for p in parts)
    return convert


def bool_field():
    def convert(s: str) -> bool:
        low = s.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"must be a boolean, got {s!r}")
    return convert
