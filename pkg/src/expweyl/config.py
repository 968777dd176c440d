"""Session configuration: signature fields plus output and fuzz settings."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import WeylAlgebra
from .errors import SignatureMismatch

__all__ = ["SessionConfig", "load_config", "build_algebra"]

_FORMATS = ("text", "structured")


@dataclass(frozen=True)
class SessionConfig:
    n: int = 1
    rank: int = 1
    p: tuple[int, ...] = (2,)
    t: tuple[tuple[int, ...], ...] = ((0,),)
    hbar_order: int | None = None
    t_shift: bool = False
    format: str = "text"
    seed: int = 0

    def __post_init__(self):
        if self.format not in _FORMATS:
            raise SignatureMismatch(f"format must be one of {_FORMATS}")
        object.__setattr__(self, "p", tuple(int(v) for v in self.p))
        object.__setattr__(self, "t", tuple(tuple(int(c) for c in row) for row in self.t))

    def replace(self, **kw) -> "SessionConfig":
        data = {
            "n": self.n,
            "rank": self.rank,
            "p": self.p,
            "t": self.t,
            "hbar_order": self.hbar_order,
            "t_shift": self.t_shift,
            "format": self.format,
            "seed": self.seed,
        }
        data.update(kw)
        return SessionConfig(**data)


def load_config(path: str) -> SessionConfig:
    """Read a JSON config file with the SessionConfig fields."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SignatureMismatch(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise SignatureMismatch(f"config file is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise SignatureMismatch("config file must hold one JSON object")
    unknown = set(raw) - {"n", "rank", "p", "t", "hbar_order", "t_shift", "format", "seed"}
    if unknown:
        raise SignatureMismatch(f"unknown config fields: {sorted(unknown)}")
    return SessionConfig(**raw)


def build_algebra(config: SessionConfig) -> WeylAlgebra:
    """Algebra for a session; signature invariants are validated on build."""
    base = WeylAlgebra(n=config.n, rank=config.rank, p=config.p, t=config.t)
    if config.t_shift:
        order = config.hbar_order if config.hbar_order is not None else 1
        return base.with_t_shift(order)
    if config.hbar_order is not None:
        return base.with_hbar(config.hbar_order)
    return base
