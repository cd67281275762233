"""Seeded property checks of the comparison and monotonicity theorems.

Ordered pairs V1 <= V2 are drawn from three generators and both
eigenvalues are solved channel by channel; the ordering E1 <= E2 is asserted
with a slack of two solver tolerances. Interpolation families
V1 + a (V2 - V1) give the monotonicity checks. Pairs where one eigenvalue
does not exist (or, for Klein-Gordon, where E1 <= 0) fall outside the
theorems' hypotheses and are counted separately.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._shooting import NodeCountError, NoBoundState, SolverConfig
from .analytic import DiracChannel, KGChannel
from .dirac import solve_dirac
from .kg import solve_kg
from .potentials import (Coulomb, GaussianWell, Interpolated, MehtaPatil, PotentialModel, Sum,
                         is_attractive, pointwise_leq, to_spec)

__all__ = [
    "PairSpec", "ComparisonReport", "MonotonicityReport", "FamilySuiteReport",
    "sample_ordered_pairs", "verify_comparison", "compare_pairs", "verify_monotonicity",
    "theorem2_suite", "theorem4_suite", "monotonicity_suite",
    "DIRAC_SUITE_CHANNELS", "KG_SUITE_CHANNELS", "DIRAC_FAMILY_CHANNELS", "KG_FAMILY_CHANNELS",
]

DIRAC_SUITE_CHANNELS = tuple(DiracChannel(d, 0.5, -1, nu) for d in (2, 3, 5) for nu in (0, 1))
KG_SUITE_CHANNELS = tuple(KGChannel(3, ell, nu) for ell in (0, 1) for nu in (0, 1))
DIRAC_FAMILY_CHANNELS = (DiracChannel(3, 0.5, -1, 0), DiracChannel(3, 0.5, -1, 1),
                         DiracChannel(3, 0.5, 1, 0))
KG_FAMILY_CHANNELS = (KGChannel(3, 0, 0), KGChannel(3, 0, 1), KGChannel(3, 1, 0))


@dataclass(frozen=True)
class PairSpec:
    """Generator settings for `sample_ordered_pairs`.

    Couplings stay below ``u_max`` (0.45 keeps every suite channel,
    including d=2 with |k_d| = 1/2, subcritical).
    """

    kinds: tuple[str, ...] = ("coulomb", "mehta_patil", "perturbed")
    u_min: float = 0.05
    u_max: float = 0.45
    lam_range: tuple[float, float] = (0.02, 0.5)
    Z_values: tuple[int, ...] = (1, 2, 8, 20, 40)
    well_depth: tuple[float, float] = (0.01, 0.2)
    well_width: tuple[float, float] = (0.5, 5.0)


def sample_ordered_pairs(seed: int, n: int, spec: PairSpec | None = None
                         ) -> list[tuple[PotentialModel, PotentialModel]]:
    """``n`` pairs (V1, V2) with V1 <= V2 everywhere, reproducible from ``seed``.

    Kinds rotate through ``spec.kinds``: two Coulomb couplings; one
    Mehta-Patil potential at two atomic numbers (more screening is
    shallower); a base potential with and without an extra Gaussian well.
    """
    spec = spec or PairSpec()
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        kind = spec.kinds[i % len(spec.kinds)]
        if kind == "coulomb":
            u1 = rng.uniform(2 * spec.u_min, spec.u_max)
            u2 = rng.uniform(spec.u_min, u1)
            out.append((Coulomb(u1), Coulomb(u2)))
        elif kind == "mehta_patil":
            v = rng.uniform(spec.u_min, spec.u_max)
            lam = rng.uniform(*spec.lam_range)
            Z1, Z2 = sorted(rng.choice(spec.Z_values, size=2, replace=False))
            out.append((MehtaPatil(v, lam, float(Z1)), MehtaPatil(v, lam, float(Z2))))
        elif kind == "perturbed":
            v = rng.uniform(spec.u_min, spec.u_max - spec.u_min)
            base = (Coulomb(v) if rng.random() < 0.5
                    else MehtaPatil(v, rng.uniform(*spec.lam_range), float(rng.choice(spec.Z_values))))
            well = GaussianWell(rng.uniform(*spec.well_depth), rng.uniform(*spec.well_width))
            out.append((Sum((base, well)), base))
        else:
            raise ValueError(f"unknown pair kind {kind!r}")
    return out


def _solver(equation: str) -> Callable:
    if equation == "dirac":
        return solve_dirac
    if equation == "klein_gordon":
        return solve_kg
    raise ValueError(f"unknown equation {equation!r}")


def _dump(obj: dict, deterministic: bool) -> str:
    if deterministic:
        obj = {k: v for k, v in obj.items() if k != "elapsed"}
    return json.dumps(obj, indent=2, sort_keys=True)


@dataclass
class ComparisonReport:
    equation: str
    pairs_tested: int
    channels: list[str]
    slack: float
    rows: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    excluded: list[dict] = field(default_factory=list)
    max_ordering_slack: float = -np.inf  # largest E1 - E2 seen
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "equation": self.equation, "pairs_tested": self.pairs_tested,
            "channels": self.channels, "slack": self.slack, "passed": self.passed,
            "max_ordering_slack": float(self.max_ordering_slack), "rows": self.rows,
            "violations": self.violations, "excluded": self.excluded, "elapsed": self.elapsed,
        }

    def to_json(self, deterministic: bool = True) -> str:
        return _dump(self.to_dict(), deterministic)

    def to_text(self) -> str:
        lines = [
            f"comparison ({self.equation}): {self.pairs_tested} pairs x {len(self.channels)} channels",
            f"  compared {len(self.rows)}, excluded {len(self.excluded)}, "
            f"violations {len(self.violations)} (slack {self.slack:.3g})",
            f"  largest E1 - E2: {self.max_ordering_slack:.3e}",
        ]
        for v in self.violations:
            lines.append(f"  VIOLATION pair {v['pair']} {v['channel']}: "
                         f"E1={v['E1']:.9g} E2={v['E2']:.9g} gap={v['gap']:.3e}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def compare_pairs(pairs: Sequence[tuple[PotentialModel, PotentialModel]],
                  channels: Sequence[DiracChannel | KGChannel], equation: str = "dirac",
                  cfg: SolverConfig | None = None, m: float = 1.0,
                  slack: float | None = None) -> ComparisonReport:
    """Solve both members of every pair in every channel and check E1 <= E2 + slack."""
    cfg = cfg or SolverConfig()
    slack = 2 * cfg.e_tol if slack is None else slack
    solve = _solver(equation)
    t0 = time.perf_counter()
    rep = ComparisonReport(equation, len(pairs), [str(c) for c in channels], slack)
    for p, (m1, m2) in enumerate(pairs):
        order = pointwise_leq(m1, m2)
        if not order:
            raise ValueError(f"pair {p} is not ordered: V1 > V2 at r={order.witness:.6g}")
        if equation == "klein_gordon" and not is_attractive(m2, monotone=False):
            raise ValueError(f"pair {p}: Klein-Gordon comparison needs V2 <= 0")
        for ch in channels:
            try:
                E1 = solve(m1, ch, m, cfg).energy
                E2 = solve(m2, ch, m, cfg).energy
            except NoBoundState as exc:
                rep.excluded.append({"pair": p, "channel": str(ch), "reason": str(exc)})
                continue
            if equation == "klein_gordon" and not E1 > 0:
                rep.excluded.append({"pair": p, "channel": str(ch), "reason": f"E1={E1:.9g} <= 0"})
                continue
            gap = E1 - E2
            row = {"pair": p, "channel": str(ch), "E1": E1, "E2": E2, "gap": gap}
            rep.rows.append(row)
            rep.max_ordering_slack = max(rep.max_ordering_slack, gap)
            if gap > slack:
                rep.violations.append(row)
    rep.elapsed = time.perf_counter() - t0
    return rep


def verify_comparison(m1: PotentialModel, m2: PotentialModel,
                      channels: Sequence[DiracChannel | KGChannel], equation: str = "dirac",
                      cfg: SolverConfig | None = None, m: float = 1.0) -> ComparisonReport:
    return compare_pairs([(m1, m2)], channels, equation, cfg, m)


@dataclass
class MonotonicityReport:
    family: dict
    equation: str
    a_grid: list[float]
    energies: dict[str, list[float]]
    monotone: dict[str, bool]
    worst_decrease: float  # largest E(a_i) - E(a_{i+1}) seen; <= slack when monotone
    slack: float
    excluded: dict[str, str] = field(default_factory=dict)
    ambiguous: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.monotone.values())

    def to_dict(self) -> dict:
        return {"family": self.family, "equation": self.equation, "a_grid": self.a_grid,
                "energies": self.energies, "monotone": self.monotone, "passed": self.passed,
                "worst_decrease": float(self.worst_decrease), "slack": self.slack,
                "excluded": self.excluded, "ambiguous": self.ambiguous}


def verify_monotonicity(family: Interpolated | Callable[[float], PotentialModel],
                        channels: Sequence[DiracChannel | KGChannel], equation: str = "dirac",
                        a_grid: Sequence[float] = tuple(np.linspace(0, 1, 9)),
                        cfg: SolverConfig | None = None, m: float = 1.0) -> MonotonicityReport:
    """Solve along a one-parameter family and check E(a) is nondecreasing.

    ``family`` is an `Interpolated` model (its endpoints must be ordered) or
    any callable a -> model, which is checked to be pointwise nondecreasing
    between successive grid points.
    """
    cfg = cfg or SolverConfig()
    slack = 2 * cfg.e_tol
    solve = _solver(equation)
    a_grid = [float(a) for a in a_grid]
    if any(b < a for a, b in zip(a_grid, a_grid[1:])):
        raise ValueError("a_grid must be increasing")
    if isinstance(family, Interpolated):
        if not pointwise_leq(family.lower, family.upper):
            raise ValueError("family endpoints are not ordered")
        models = [family.at(a) for a in a_grid]
        desc = to_spec(family.at(0.0))
        desc.pop("a")
    else:
        models = [family(a) for a in a_grid]
        for a, b in zip(models, models[1:]):
            if not pointwise_leq(a, b):
                raise ValueError("family is not nondecreasing in its parameter")
        desc = {"kind": "parametric", "members": [to_spec(x) for x in models]}
    energies, monotone, excluded, ambiguous = {}, {}, {}, {}
    worst = -np.inf
    for ch in channels:
        key = str(ch)
        try:
            Es = [solve(x, ch, m, cfg).energy for x in models]
        except NoBoundState as exc:
            excluded[key] = str(exc)
            continue
        except NodeCountError as exc:
            ambiguous[key] = str(exc)
            monotone[key] = False
            continue
        energies[key] = Es
        drops = [a - b for a, b in zip(Es, Es[1:])]
        drop = max(drops) if drops else -np.inf
        worst = max(worst, drop)
        monotone[key] = drop <= slack
    return MonotonicityReport(desc, equation, a_grid, energies, monotone, worst, slack,
                              excluded, ambiguous)


@dataclass
class FamilySuiteReport:
    equation: str
    reports: list[MonotonicityReport]
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def worst_decrease(self) -> float:
        return max((r.worst_decrease for r in self.reports), default=-np.inf)

    def to_dict(self) -> dict:
        return {"equation": self.equation, "families": len(self.reports), "passed": self.passed,
                "worst_decrease": float(self.worst_decrease),
                "reports": [r.to_dict() for r in self.reports], "elapsed": self.elapsed}

    def to_json(self, deterministic: bool = True) -> str:
        return _dump(self.to_dict(), deterministic)

    def to_text(self) -> str:
        bad = [i for i, r in enumerate(self.reports) if not r.passed]
        excl = sum(len(r.excluded) for r in self.reports)
        lines = [f"monotonicity ({self.equation}): {len(self.reports)} families, "
                 f"{excl} excluded channel runs",
                 f"  largest decrease along a: {self.worst_decrease:.3e}"]
        lines += [f"  NOT MONOTONE family {i}: {self.reports[i].monotone}" for i in bad]
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def theorem2_suite(seed: int = 42, n_pairs: int = 50, cfg: SolverConfig | None = None,
                   channels=DIRAC_SUITE_CHANNELS) -> ComparisonReport:
    """Dirac comparison over seeded pairs (default 50 pairs x 6 channels)."""
    return compare_pairs(sample_ordered_pairs(seed, n_pairs), channels, "dirac", cfg)


def theorem4_suite(seed: int = 42, n_pairs: int = 50, cfg: SolverConfig | None = None,
                   channels=KG_SUITE_CHANNELS) -> ComparisonReport:
    """Klein-Gordon comparison over seeded pairs of negative potentials."""
    return compare_pairs(sample_ordered_pairs(seed, n_pairs), channels, "klein_gordon", cfg)


def monotonicity_suite(equation: str = "dirac", seed: int = 42, n_families: int = 20,
                       a_points: int = 9, cfg: SolverConfig | None = None,
                       channels=None) -> FamilySuiteReport:
    """Interpolation families between seeded ordered pairs."""
    if channels is None:
        channels = DIRAC_FAMILY_CHANNELS if equation == "dirac" else KG_FAMILY_CHANNELS
    t0 = time.perf_counter()
    grid = np.linspace(0, 1, a_points)
    # the families use a separate stream so they do not repeat the pair suites
    pairs = sample_ordered_pairs(seed + 1, n_families)
    reports = [verify_monotonicity(Interpolated(lo, hi, 0.0), channels, equation, grid, cfg)
               for lo, hi in pairs]
    return FamilySuiteReport(equation, reports, time.perf_counter() - t0)
