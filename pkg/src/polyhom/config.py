"""Flat ``key = value`` run configuration.

Blank lines and ``#`` comments are ignored.  List values are whitespace or
comma separated; fractions such as ``1/4`` are accepted wherever a real is.
A matrix is four reals in row-major order, or ``arc:<t>`` for a point of the
curved part of the hull of B.

Example::

    p = 4
    N = 16 32
    k = 1 2
    A = arc:0.5
    eps = 1/2 1/4 1/8 1/16
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    pass


def _real(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {s!r}") from exc


def _items(s: str):
    return [v for v in s.replace(",", " ").split() if v]


@dataclass
class RunConfig:
    p: float = 4.0
    N: list = field(default_factory=lambda: [16])
    k: list = field(default_factory=lambda: [1])
    A: str = "arc:0.5"
    eps: list = field(default_factory=lambda: [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)])
    t_samples: list = field(default_factory=lambda: [i / 10 for i in range(1, 10)])
    arc_points: int = 21
    hull_tol: float = 1e-9
    scan_step: float = 1e-3
    zero_tol: float = 1e-8
    support_tol: float = 1e-6
    corrupt_fraction: float = 0.01
    field_N: int = 60
    field_eps: Fraction = Fraction(1, 5)
    y_bins: int = 4
    lambda_lo: float = -4.0
    lambda_hi: float = 4.0
    lambda_n: int = 32
    U: list = field(default_factory=lambda: [Fraction(0), Fraction(7, 10), Fraction(0), Fraction(1)])
    V: list = field(default_factory=lambda: [Fraction(0), Fraction(1, 2), Fraction(0), Fraction(1)])
    cert_N: int = 16
    cert_k: int = 1
    method: str = "lbfgs"
    max_iter: int = 100_000
    gtol: float = 1e-9
    variant: str = "default"
    seed: int = 0
    threads: int = 1
    out: str = "polyhom-out"

    def matrix_A(self) -> np.ndarray:
        return parse_matrix(self.A)

    def validate(self) -> "RunConfig":
        if self.p < 2:
            raise ConfigError("p must be at least 2")
        if not self.N or any(n < 4 or n % 2 for n in self.N):
            raise ConfigError("N values must be even and at least 4")
        if not self.k or any(v < 1 for v in self.k):
            raise ConfigError("k values must be positive")
        if any(e <= 0 or (1 / e).denominator != 1 for e in self.eps):
            raise ConfigError("eps values must be reciprocals of integers")
        if any(not 0 <= t <= 1 for t in self.t_samples):
            raise ConfigError("t_samples must lie in [0, 1]")
        for name in ("hull_tol", "scan_step", "zero_tol", "support_tol"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 < self.corrupt_fraction < 1:
            raise ConfigError("corrupt_fraction must lie in (0, 1)")
        if len(self.U) != 4 or len(self.V) != 4:
            raise ConfigError("U and V take four numbers: x0 x1 y0 y1")
        if self.variant not in ("default", "convex-phase2"):
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.method not in ("lbfgs", "gd"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.threads < 1 or self.arc_points < 2 or self.y_bins < 1 or self.lambda_n < 1:
            raise ConfigError("counts must be positive")
        if self.cert_N < 4 or self.cert_N % 2 or self.cert_k < 1:
            raise ConfigError("cert_N must be even and at least 4")
        self.matrix_A()
        return self

    def as_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, list):
                v = [str(x) if isinstance(x, Fraction) else x for x in v]
            elif isinstance(v, Fraction):
                v = str(v)
            out[f.name] = v
        return out


def parse_matrix(s: str) -> np.ndarray:
    from .hulls import b_arc

    s = str(s).strip()
    if s.startswith("arc:"):
        t = float(_real(s[4:]))
        if not 0 <= t <= 1:
            raise ConfigError("arc parameter must lie in [0, 1]")
        return b_arc(t)
    vals = [float(_real(v)) for v in _items(s)]
    if len(vals) != 4:
        raise ConfigError("a matrix takes four entries a11 a12 a21 a22")
    return np.array(vals).reshape(2, 2)


_LIST_INT = {"N", "k"}
_LIST_FRAC = {"eps", "U", "V"}
_LIST_REAL = {"t_samples"}
_INT = {"arc_points", "field_N", "y_bins", "lambda_n", "cert_N", "cert_k", "max_iter", "seed", "threads"}
_FRAC = {"field_eps"}
_STR = {"A", "method", "variant", "out"}


def _convert(key: str, raw: str):
    if key in _STR:
        return raw
    if key in _LIST_INT or key in _INT:
        vals = [_real(v) for v in _items(raw)]
        if any(v.denominator != 1 for v in vals):
            raise ConfigError(f"{key} takes integers")
        ints = [int(v) for v in vals]
        if key in _INT:
            if len(ints) != 1:
                raise ConfigError(f"{key} takes one value")
            return ints[0]
        return ints
    if key in _LIST_FRAC:
        return [_real(v) for v in _items(raw)]
    if key in _LIST_REAL:
        return [float(_real(v)) for v in _items(raw)]
    vals = _items(raw)
    if len(vals) != 1:
        raise ConfigError(f"{key} takes one value")
    return _real(vals[0]) if key in _FRAC else float(_real(vals[0]))


def parse_config(text: str) -> RunConfig:
    known = {f.name for f in dataclasses.fields(RunConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _convert(key, raw)
    return RunConfig(**values).validate()


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return parse_config(text)
