"""Perturbation polynomials f = sum a_ij x^i y^j, g = sum b_ij x^i y^j and
their JSON coefficient-file form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import Family, SystemParams


def monomials(n: int) -> list[tuple[int, int]]:
    """All (i, j) with i + j <= n, ordered by total degree then by i."""
    return [(i, d - i) for d in range(n + 1) for i in range(d, -1, -1)]


def _parse_key(key: str) -> tuple[int, int]:
    parts = key.split(",")
    if len(parts) != 2:
        raise ValueError(f"bad monomial key {key!r}, expected 'i,j'")
    i, j = (int(p) for p in parts)
    if i < 0 or j < 0:
        raise ValueError(f"negative exponent in key {key!r}")
    return i, j


@dataclass
class PerturbationCoeffs:
    n: int
    a: dict = field(default_factory=dict)
    b: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("degree must be non-negative")
        self.a = {tuple(k): float(v) for k, v in self.a.items()}
        self.b = {tuple(k): float(v) for k, v in self.b.items()}
        for key in (*self.a, *self.b):
            i, j = key
            if i < 0 or j < 0 or i + j > self.n:
                raise ValueError(f"monomial {key} outside degree {self.n}")

    @classmethod
    def zeros(cls, n: int) -> "PerturbationCoeffs":
        return cls(n)

    @classmethod
    def one_hot(cls, n: int, which: str, i: int, j: int, value: float = 1.0):
        if which == "a":
            return cls(n, a={(i, j): value})
        if which == "b":
            return cls(n, b={(i, j): value})
        raise ValueError("which must be 'a' or 'b'")

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, scale: float = 1.0):
        mons = monomials(n)
        av = rng.standard_normal(len(mons)) * scale
        bv = rng.standard_normal(len(mons)) * scale
        return cls(n, a=dict(zip(mons, av)), b=dict(zip(mons, bv)))

    def get_a(self, i: int, j: int) -> float:
        return self.a.get((i, j), 0.0)

    def get_b(self, i: int, j: int) -> float:
        return self.b.get((i, j), 0.0)

    def is_zero(self) -> bool:
        return not any(self.a.values()) and not any(self.b.values())

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat arrays indexed i*(n+1)+j, as consumed by the ODE kernels."""
        fa = np.zeros((self.n + 1) ** 2)
        fb = np.zeros_like(fa)
        for (i, j), v in self.a.items():
            fa[i * (self.n + 1) + j] = v
        for (i, j), v in self.b.items():
            fb[i * (self.n + 1) + j] = v
        return fa, fb

    def eval_fg(self, x, y):
        f = sum(v * x ** i * y ** j for (i, j), v in self.a.items()) if self.a else 0.0 * x
        g = sum(v * x ** i * y ** j for (i, j), v in self.b.items()) if self.b else 0.0 * x
        return f, g


@dataclass
class CoeffFile:
    params: SystemParams
    coeffs: PerturbationCoeffs

    def to_dict(self) -> dict:
        return {
            "family": self.params.family.value,
            "b": self.params.b,
            "c": self.params.c,
            "n": self.coeffs.n,
            "a": {f"{i},{j}": v for (i, j), v in sorted(self.coeffs.a.items())},
            "b_coeffs": {f"{i},{j}": v for (i, j), v in sorted(self.coeffs.b.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CoeffFile":
        known = {"family", "b", "c", "n", "a", "b_coeffs"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown keys in coefficient file: {sorted(extra)}")
        for key in ("family", "b", "n"):
            if key not in data:
                raise ValueError(f"coefficient file lacks {key!r}")
        family = Family(data["family"])
        b = float(data["b"])
        c = float(data.get("c", b)) if family is Family.X210 else float(data["c"])
        params = SystemParams(family, b, c)
        n = int(data["n"])
        a = {_parse_key(k): float(v) for k, v in data.get("a", {}).items()}
        bc = {_parse_key(k): float(v) for k, v in data.get("b_coeffs", {}).items()}
        return cls(params, PerturbationCoeffs(n, a=a, b=bc))

    @classmethod
    def load(cls, path) -> "CoeffFile":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")
