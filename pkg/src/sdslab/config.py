"""Capacity limits shared by all exhaustive routines."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .exceptions import ParseError

ENV_VAR = "SDSLAB_LIMITS"


@dataclass(frozen=True)
class Limits:
    aut_vertices: int = 12
    edges: int = 24
    states: int = 2**24
    perm_vertices: int = 9

    @classmethod
    def from_env(cls, environ=None) -> "Limits":
        """Read overrides such as ``SDSLAB_LIMITS="edges=30,states=1048576"``."""
        environ = os.environ if environ is None else environ
        raw = environ.get(ENV_VAR, "").strip()
        if not raw:
            return cls()
        return cls().updated(**parse_limits(raw))

    def updated(self, **overrides) -> "Limits":
        clean = {k: int(v) for k, v in overrides.items() if v is not None}
        return replace(self, **clean)


def parse_limits(text: str) -> dict:
    names = {f.name for f in fields(Limits)}
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in names:
            raise ParseError(f"bad limit entry {item!r}; known limits: {sorted(names)}")
        try:
            out[key] = int(value)
        except ValueError:
            raise ParseError(f"limit {key} needs an integer, got {value!r}") from None
    return out


DEFAULT_LIMITS = Limits()
