"""
Attractive central potentials.

Every model is an immutable dataclass that can be called on a radius (or an
array of radii) and returns V(r) in units of the particle mass. The models
used throughout the package are

    Coulomb         V(r) = -v/r
    ShiftedCoulomb  V(r) = -a/r + b
    MehtaPatil      V(r) = -(v/r) [1 - (1 - 1/Z) lam r / (1 + lam r)]
    Interpolated    V(r) = V1(r) + a (V2(r) - V1(r)),  0 <= a <= 1
    Tabulated       piecewise-linear through (r, V) nodes

plus two building blocks used to generate ordered pairs, `GaussianWell`
and `Sum`.

Envelope theory views a potential as a function of h = -1/r, V(r) = g(h(r));
`transform_of` returns g together with its first two derivatives.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

#: CODATA 2018 value.
FINE_STRUCTURE = 1 / 137.035999084

DEFAULT_TOL = 1e-12


def default_grid(n: int = 512, r_lo: float = 1e-3, r_hi: float = 1e2) -> np.ndarray:
    """Log-spaced radii used when no grid is supplied."""
    return np.geomspace(r_lo, r_hi, n)


class PotentialModel:
    """Base class of all potential models."""

    kind: str = "abstract"

    @property
    def domain(self) -> tuple[float, float]:
        """Open interval of radii on which the model is defined."""
        return (0.0, math.inf)

    def _values(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, r):
        return eval_potential(self, r)

    def coulomb_strength(self) -> float:
        """Coefficient u of the -u/r singularity at the origin (0 if regular)."""
        return 0.0


def eval_potential(model: PotentialModel, r):
    """Evaluate ``model`` at radius ``r`` (scalar or array).

    Raises ValueError for non-positive radii and for radii outside the
    model's domain.
    """
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError(f"radius must be positive, got {r!r}")
    lo, hi = model.domain
    if np.any(arr < lo) or np.any(arr > hi):
        raise ValueError(f"radius outside model domain [{lo}, {hi}]")
    out = model._values(arr)
    if arr.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Coulomb(PotentialModel):
    v: float
    kind = "coulomb"

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError("Coulomb coupling must be positive")

    def _values(self, r):
        return -self.v / r

    def coulomb_strength(self):
        return self.v


@dataclass(frozen=True)
class ShiftedCoulomb(PotentialModel):
    a: float
    b: float = 0.0
    kind = "shifted_coulomb"

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("ShiftedCoulomb coupling must be positive")

    def _values(self, r):
        return -self.a / r + self.b

    def coulomb_strength(self):
        return self.a


@dataclass(frozen=True)
class MehtaPatil(PotentialModel):
    """Screened Coulomb potential with coupling v, inverse screening length
    lam and atomic number Z (``math.inf`` gives the fully screened limit)."""

    v: float
    lam: float
    Z: float
    kind = "mehta_patil"

    def __post_init__(self):
        if not (self.v > 0 and self.lam > 0 and self.Z >= 1):
            raise ValueError("MehtaPatil needs v > 0, lam > 0, Z >= 1")

    @property
    def screening(self) -> float:
        """1 - 1/Z."""
        return 1.0 - 1.0 / self.Z

    def _values(self, r):
        x = self.lam * r
        return -(self.v / r) * (1.0 - self.screening * x / (1.0 + x))

    def coulomb_strength(self):
        return self.v


@dataclass(frozen=True)
class GaussianWell(PotentialModel):
    """V(r) = -depth * exp(-(r/width)^2)."""

    depth: float
    width: float
    kind = "gaussian_well"

    def __post_init__(self):
        if not (self.depth >= 0 and self.width > 0):
            raise ValueError("GaussianWell needs depth >= 0, width > 0")

    def _values(self, r):
        return -self.depth * np.exp(-((r / self.width) ** 2))


@dataclass(frozen=True)
class Sum(PotentialModel):
    terms: tuple[PotentialModel, ...]
    kind = "sum"

    def __post_init__(self):
        if not self.terms:
            raise ValueError("Sum needs at least one term")
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def domain(self):
        lo = max(t.domain[0] for t in self.terms)
        hi = min(t.domain[1] for t in self.terms)
        return (lo, hi)

    def _values(self, r):
        return sum(t._values(r) for t in self.terms)

    def coulomb_strength(self):
        return sum(t.coulomb_strength() for t in self.terms)


@dataclass(frozen=True)
class Interpolated(PotentialModel):
    """The one-parameter family V1 + a (V2 - V1) joining two potentials."""

    lower: PotentialModel
    upper: PotentialModel
    a: float
    kind = "interpolated"

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ValueError("mixing weight must lie in [0, 1]")

    @property
    def domain(self):
        return (max(self.lower.domain[0], self.upper.domain[0]),
                min(self.lower.domain[1], self.upper.domain[1]))

    def _values(self, r):
        v1 = self.lower._values(r)
        if self.a == 0.0:
            return v1
        v2 = self.upper._values(r)
        if self.a == 1.0:
            return v2
        return v1 + self.a * (v2 - v1)

    def coulomb_strength(self):
        u1 = self.lower.coulomb_strength()
        return u1 + self.a * (self.upper.coulomb_strength() - u1)

    def at(self, a: float) -> "Interpolated":
        return Interpolated(self.lower, self.upper, a)


@dataclass(frozen=True)
class Tabulated(PotentialModel):
    """Linear interpolation through ``(r, V)`` nodes.

    Attractiveness is not enforced here; see `is_attractive`.
    """

    r: tuple[float, ...]
    V: tuple[float, ...]
    source: str | None = field(default=None, compare=False)
    kind = "tabulated"

    def __post_init__(self):
        r = tuple(float(x) for x in self.r)
        V = tuple(float(x) for x in self.V)
        if len(r) != len(V) or len(r) < 2:
            raise ValueError("Tabulated needs at least two (r, V) nodes")
        if r[0] <= 0 or any(b <= a for a, b in zip(r, r[1:])):
            raise ValueError("Tabulated radii must be positive and strictly increasing")
        if not all(math.isfinite(x) for x in V):
            raise ValueError("Tabulated values must be finite")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "V", V)

    @classmethod
    def from_function(cls, f: Callable, r: Sequence[float]) -> "Tabulated":
        r = np.asarray(r, dtype=float)
        return cls(tuple(r), tuple(np.asarray(f(r), dtype=float)))

    @classmethod
    def from_csv(cls, path) -> "Tabulated":
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    continue  # header line
        r, V = zip(*rows)
        return cls(r, V, source=str(path))

    @property
    def domain(self):
        return (self.r[0], self.r[-1])

    def _values(self, r):
        return np.interp(r, self.r, self.V)


def mehta_patil_params(Z: float, alpha: float = FINE_STRUCTURE) -> tuple[float, float]:
    """Atomic-model parameters (v, lam) = (alpha Z, 0.98 alpha Z^(1/3))."""
    if Z < 1 or alpha <= 0:
        raise ValueError("need Z >= 1 and alpha > 0")
    return alpha * Z, 0.98 * alpha * Z ** (1.0 / 3.0)


# ---------------------------------------------------------------------------
# ordering and attractiveness

@dataclass(frozen=True)
class Ordering:
    """Outcome of a pointwise comparison; truthy when the ordering holds."""

    holds: bool
    witness: float | None = None
    max_excess: float = 0.0

    def __bool__(self):
        return self.holds


def _grid_for(models, grid):
    g = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if g.size == 0:
        raise ValueError("grid must be nonempty")
    lo = max(m.domain[0] for m in models)
    hi = min(m.domain[1] for m in models)
    if grid is None:
        g = g[(g >= lo) & (g <= hi)]
    return g


def pointwise_leq(m1: PotentialModel, m2: PotentialModel, grid=None,
                  tol: float = DEFAULT_TOL) -> Ordering:
    """Check V1(r) <= V2(r) + tol on every grid radius."""
    g = _grid_for((m1, m2), grid)
    excess = eval_potential(m1, g) - eval_potential(m2, g)
    bad = np.nonzero(excess > tol)[0]
    if bad.size:
        return Ordering(False, float(g[bad[0]]), float(excess.max()))
    return Ordering(True, None, float(max(excess.max(), 0.0)))


def is_attractive(model: PotentialModel, grid=None, tol: float = DEFAULT_TOL,
                  monotone: bool = True) -> bool:
    """V <= 0 on the grid and, if ``monotone``, nondecreasing in r."""
    g = _grid_for((model,), grid)
    v = eval_potential(model, g)
    if np.any(v > tol):
        return False
    if monotone and np.any(np.diff(v) < -tol * np.maximum(1.0, np.abs(v[1:]))):
        return False
    return True


# ---------------------------------------------------------------------------
# envelope transform g(h), h = -1/r

@dataclass(frozen=True)
class TransformFunction:
    """g(h) with derivatives g1 = g', g2 = g'' on ``domain`` (h < 0)."""

    g: Callable[[float], float]
    g1: Callable[[float], float]
    g2: Callable[[float], float]
    domain: tuple[float, float] = (-math.inf, 0.0)
    analytic: bool = True
    curvature: str | None = None  # known sign of g'', if any

    def _check(self, h):
        h = np.asarray(h, dtype=float)
        lo, hi = self.domain
        if np.any(h >= 0) or np.any(h < lo) or np.any(h > hi):
            raise ValueError(f"h={h} outside transform domain {self.domain}")

    def value(self, h):
        self._check(h)
        return self.g(h)

    def first(self, h):
        self._check(h)
        return self.g1(h)

    def second(self, h):
        self._check(h)
        return self.g2(h)


def _numeric_transform(model: PotentialModel) -> TransformFunction:
    lo, hi = model.domain
    h_lo = -1.0 / lo if lo > 0 else -math.inf
    h_hi = -1.0 / hi if math.isfinite(hi) else 0.0

    def g(h):
        return eval_potential(model, -1.0 / np.asarray(h, dtype=float))

    def _step(h):
        return 1e-4 * np.maximum(np.abs(h), 1e-3)

    def _inside(h, s):
        # shift the stencil centre so that h +- s stays in the domain
        return np.clip(h, h_lo + s, h_hi - 1.01 * s)

    def g1(h):
        h = np.asarray(h, dtype=float)
        s = _step(h)
        c = _inside(h, s)
        return (g(c + s) - g(c - s)) / (2 * s)

    def g2(h):
        h = np.asarray(h, dtype=float)
        s = _step(h) * 10
        c = _inside(h, s)
        return (g(c + s) - 2 * g(c) + g(c - s)) / s**2

    return TransformFunction(g, g1, g2, domain=(h_lo, h_hi), analytic=False)


def transform_of(model: PotentialModel) -> TransformFunction:
    """g(h) such that V(r) = g(-1/r).

    Closed forms for Coulomb, ShiftedCoulomb and MehtaPatil; anything else
    gets g(h) = V(-1/h) with finite-difference derivatives.
    """
    if isinstance(model, Coulomb):
        v = model.v
        return TransformFunction(lambda h: v * np.asarray(h, dtype=float),
                                 lambda h: v + 0.0 * np.asarray(h, dtype=float),
                                 lambda h: 0.0 * np.asarray(h, dtype=float),
                                 curvature="linear")
    if isinstance(model, ShiftedCoulomb):
        a, b = model.a, model.b
        return TransformFunction(lambda h: a * np.asarray(h, dtype=float) + b,
                                 lambda h: a + 0.0 * np.asarray(h, dtype=float),
                                 lambda h: 0.0 * np.asarray(h, dtype=float),
                                 curvature="linear")
    if isinstance(model, MehtaPatil):
        v, lam, c = model.v, model.lam, model.screening

        def g(h):
            h = np.asarray(h, dtype=float)
            return v * (h + lam * c * (1.0 + lam / (h - lam)))

        def g1(h):
            h = np.asarray(h, dtype=float)
            return v * (1.0 - lam**2 * c / (h - lam) ** 2)

        def g2(h):
            h = np.asarray(h, dtype=float)
            return 2.0 * v * lam**2 * c / (h - lam) ** 3

        return TransformFunction(g, g1, g2, curvature="concave" if c > 0 else "linear")
    return _numeric_transform(model)


# ---------------------------------------------------------------------------
# text specs

_FIELDS = {
    "coulomb": (Coulomb, ("v",)),
    "shifted_coulomb": (ShiftedCoulomb, ("a", "b")),
    "mehta_patil": (MehtaPatil, ("v", "lam", "Z")),
    "gaussian_well": (GaussianWell, ("depth", "width")),
}


def to_spec(model: PotentialModel) -> dict:
    """Plain-dict description of ``model``; inverse of `from_spec`."""
    if isinstance(model, Interpolated):
        return {"kind": "interpolated", "a": model.a,
                "lower": to_spec(model.lower), "upper": to_spec(model.upper)}
    if isinstance(model, Sum):
        return {"kind": "sum", "terms": [to_spec(t) for t in model.terms]}
    if isinstance(model, Tabulated):
        return {"kind": "tabulated", "nodes": [list(p) for p in zip(model.r, model.V)]}
    cls, names = _FIELDS[model.kind]
    out = {"kind": model.kind}
    for n in names:
        val = getattr(model, n)
        out[n] = "inf" if val == math.inf else val
    return out


def from_spec(spec: dict, base_dir: str | Path | None = None) -> PotentialModel:
    """Build a model from a dict with a ``kind`` discriminator.

    Tabulated models take either inline ``nodes`` or a two-column CSV
    ``path`` (resolved against ``base_dir``).
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("potential spec needs a 'kind' field")
    kind = spec["kind"]
    if kind == "interpolated":
        return Interpolated(from_spec(spec["lower"], base_dir),
                            from_spec(spec["upper"], base_dir), float(spec["a"]))
    if kind == "sum":
        return Sum(tuple(from_spec(t, base_dir) for t in spec["terms"]))
    if kind == "tabulated":
        if "nodes" in spec:
            r, V = zip(*spec["nodes"])
            return Tabulated(r, V)
        path = Path(spec["path"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return Tabulated.from_csv(path)
    if kind not in _FIELDS:
        raise ValueError(f"unknown potential kind {kind!r}")
    cls, names = _FIELDS[kind]
    extra = set(spec) - set(names) - {"kind"}
    if extra:
        raise ValueError(f"unexpected fields for {kind}: {sorted(extra)}")
    kwargs = {n: float(spec[n]) for n in names if n in spec}
    return cls(**kwargs)


def parse_inline(text: str) -> PotentialModel:
    """Parse ``"kind:key=value,key=value"``, e.g. ``"mehta_patil:v=0.5,lam=0.2,Z=2"``."""
    kind, _, rest = text.partition(":")
    spec: dict = {"kind": kind.strip()}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"malformed field {item!r} in {text!r}")
        spec[key.strip()] = val.strip()
    return from_spec(spec)
