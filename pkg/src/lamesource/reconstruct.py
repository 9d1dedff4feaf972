"""Cosine-series assembly, truncation, and exact error norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from . import fields as fd
from .fields import TrigField, cos_f, ONE
from .interpolation import NodeSet, interp_coeff
from .numerics import DOUBLE
from .problem import DataBundle


def kappa(m: int, n: int, p: int) -> int:
    """Multiplicity weight of the cosine basis on the unit cube: 1, 2, 4 or 8."""
    if min(m, n, p) < 0:
        raise ValueError("indices must be nonnegative")
    return (2 if m else 1) * (2 if n else 1) * (2 if p else 1)


@dataclass(frozen=True)
class CoefficientTable:
    """Interpolated cosine-coefficient estimates for one source component."""

    r: int
    j: int
    coef: Dict[Tuple[int, int, int], complex]

    def __post_init__(self):
        want = {(m, n, p) for m in range(self.r + 1) for n in range(self.r + 1) for p in range(self.r + 1)}
        if set(self.coef) != want:
            raise ValueError("coefficient grid must cover [0, r]^3 exactly")

    def max_imag(self) -> float:
        return max(abs(c.imag) for c in self.coef.values())


def build_coefficient_table(
    bundle: DataBundle, j: int, nodes: NodeSet, ops=DOUBLE
) -> CoefficientTable:
    """Full [0, r]^3 grid of interpolated coefficients.

    The interpolant along the imaginary axis is shared across m for each
    (n, p), so the sampling cost is 24 r functional evaluations per (n, p).
    """
    from .interpolation import _even_pair_eval, _positive_samples

    r = nodes.r
    coef: Dict[Tuple[int, int, int], complex] = {}
    for n in range(r + 1):
        for p in range(r + 1):
            pos = _positive_samples(bundle, j, n, p, nodes, ops)
            for m in range(r + 1):
                mpi = ops.mul_pi(float(m)) if ops.is_extended else m * math.pi
                coef[(m, n, p)] = complex(
                    _even_pair_eval(nodes, pos, -(mpi * mpi), ops)
                )
    return CoefficientTable(r, j, coef)


@dataclass(frozen=True)
class CosineSeries:
    """sum kappa(m,n,p) c(m,n,p) cos(m pi x1) cos(n pi x2) cos(p pi x3)."""

    r: int
    coef: Dict[Tuple[int, int, int], float]

    def __post_init__(self):
        for key, c in self.coef.items():
            if len(key) != 3 or min(key) < 0:
                raise ValueError("bad coefficient index")

    def value(self, m: int, n: int, p: int) -> float:
        return self.coef.get((m, n, p), 0.0)

    def display_coefficient(self, m: int, n: int, p: int) -> float:
        """The multiplier actually in front of the cosine product."""
        return kappa(m, n, p) * self.value(m, n, p)

    def l2_norm_sq(self) -> float:
        return sum(kappa(*k) * c * c for k, c in sorted(self.coef.items()))

    def h1_norm_sq(self) -> float:
        return sum(
            kappa(*k) * (1.0 + math.pi**2 * (k[0] ** 2 + k[1] ** 2 + k[2] ** 2)) * c * c
            for k, c in sorted(self.coef.items())
        )

    def to_field(self) -> TrigField:
        terms = []
        for (m, n, p), c in sorted(self.coef.items()):
            axes = tuple(ONE if k == 0 else cos_f(k) for k in (m, n, p))
            terms.append(fd.SeparableTerm(kappa(m, n, p) * c, axes))
        return TrigField(terms)

    def __call__(self, x):
        return self.to_field()(x)

    def sample_grid(self, resolution: int = 33) -> np.ndarray:
        """Values on a uniform (resolution)^3 grid including both endpoints."""
        s = np.linspace(0.0, 1.0, resolution)
        x1, x2, x3 = np.meshgrid(s, s, s, indexing="ij")
        return np.real(self.to_field()((x1, x2, x3)))


def truncate(w: TrigField, r: int, ops=DOUBLE) -> CosineSeries:
    """Exact cosine-series truncation to frequencies at most r pi per axis.

    Separability keeps this cheap: each term contributes a tensor product of
    three 1D integral tables, so the cost is O(terms * r) integrals plus
    O(terms * r^3) multiplications.
    """
    if w.has_time:
        raise ValueError("truncation requires a time-independent field")
    from .numerics import PiArg

    coef = {
        (m, n, p): 0.0
        for m in range(r + 1)
        for n in range(r + 1)
        for p in range(r + 1)
    }
    for term in w.terms:
        tables = [
            [
                complex(
                    fd.integrate_axis(term.axes[i], fd.Kernel.COS_A, PiArg(float(m), 0.0), ops)
                ).real
                for m in range(r + 1)
            ]
            for i in range(3)
        ]
        c = complex(term.coefficient).real
        for m in range(r + 1):
            cm = c * tables[0][m]
            if cm == 0.0:
                continue
            for n in range(r + 1):
                cmn = cm * tables[1][n]
                if cmn == 0.0:
                    continue
                for p in range(r + 1):
                    coef[(m, n, p)] += cmn * tables[2][p]
    return CosineSeries(r, coef)


def assemble(table: CoefficientTable) -> CosineSeries:
    """Regularized series from an interpolated coefficient table.

    The true limit coefficients are real; the imaginary residue is reported
    separately via CoefficientTable.max_imag() as a conditioning diagnostic.
    """
    return CosineSeries(table.r, {k: c.real for k, c in table.coef.items()})


def _cross_terms(series: CosineSeries, exact: TrigField, weighted: bool):
    parts = []
    for (m, n, p), c in sorted(series.coef.items()):
        fc = complex(fd.fourier_coefficient(exact, m, n, p)).real
        wgt = 1.0 + math.pi**2 * (m * m + n * n + p * p) if weighted else 1.0
        parts.append((kappa(m, n, p), wgt, c, fc))
    return parts


def l2_error_sq(series: CosineSeries, exact: TrigField) -> float:
    """Exact squared L2 distance between the series and a trig field."""
    if exact.has_time:
        raise ValueError("exact field must be time-independent")
    total = 0.0
    in_span = 0.0
    for kap, _w, c, fc in _cross_terms(series, exact, weighted=False):
        total += kap * (c - fc) ** 2
        in_span += kap * fc * fc
    out_span = max(fd.l2_norm_sq(exact) - in_span, 0.0)
    return total + out_span


def l2_error(series: CosineSeries, exact: TrigField) -> float:
    return math.sqrt(l2_error_sq(series, exact))


def h1_error_sq(series: CosineSeries, exact: TrigField) -> float:
    """Exact squared H1 distance, with modes weighted by 1 + pi^2 |k|^2."""
    if exact.has_time:
        raise ValueError("exact field must be time-independent")
    total = 0.0
    in_span = 0.0
    for kap, w, c, fc in _cross_terms(series, exact, weighted=True):
        total += kap * w * (c - fc) ** 2
        in_span += kap * w * fc * fc
    out_span = max(fd.h1_norm_sq(exact) - in_span, 0.0)
    return total + out_span


def h1_error(series: CosineSeries, exact: TrigField) -> float:
    return math.sqrt(h1_error_sq(series, exact))


def lemma5_check(w: TrigField, r: int) -> dict:
    """Exact two-sided evaluation of the truncation bounds at one r.

    L2 defect against ||w||_H1 / (pi sqrt(r)) and H1 defect against
    4 ||w||_H2 / r^(1/4).
    """
    series = truncate(w, r)
    l2_defect = l2_error(series, w)
    h1_defect = h1_error(series, w)
    l2_bound = fd.h1_norm(w) / (math.pi * math.sqrt(r))
    h1_bound = 4.0 * fd.h2_norm(w) / r**0.25
    return {
        "r": r,
        "l2_defect": l2_defect,
        "l2_bound": l2_bound,
        "l2_bound_ok": l2_defect <= l2_bound,
        "h1_defect": h1_defect,
        "h1_bound": h1_bound,
        "h1_bound_ok": h1_defect <= h1_bound,
    }
