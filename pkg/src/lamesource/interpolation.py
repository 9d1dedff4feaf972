"""Regularization parameter, node sets, and stable Lagrange interpolation.

The data functional is sampled on the integer node family +-(5r+1 .. 29r)
along the imaginary frequency axis and interpolated back to the small real
cosine frequencies m pi.  The evaluator uses the second barycentric form;
weights over integer nodes are exact big-integer products (normalized before
conversion), so node counts that would overflow a direct float product stay
representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

import mpmath

from .kernels import Frequency, H
from .numerics import DOUBLE
from .problem import DataBundle


def select_r(epsilon: float) -> int:
    """The unique integer in (ln(1/eps)/60, ln(1/eps)/60 + 1]."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    lower = math.log(1.0 / epsilon) / 60.0
    r = math.floor(lower) + 1
    # membership re-check guards the exact-integer boundary
    if not (lower < r <= lower + 1.0):
        r = math.ceil(lower)
    return int(r)


@dataclass(frozen=True)
class NodeSet:
    """Symmetric integer nodes +-(5r + j), j = 1..24r; 48r in total."""

    r: int
    nodes: Tuple[float, ...]

    @property
    def positive(self) -> Tuple[float, ...]:
        return self.nodes[len(self.nodes) // 2 :]


def build_nodes(r: int) -> NodeSet:
    if r < 1:
        raise ValueError("node set needs r >= 1")
    pos = [float(5 * r + j) for j in range(1, 24 * r + 1)]
    neg = [-v for v in reversed(pos)]
    return NodeSet(r, tuple(neg + pos))


def amplification_log10(r: int) -> float:
    """log10 of the worst-case noise amplification 48 r e^{30 r}."""
    if r < 1:
        raise ValueError("amplification defined for r >= 1")
    return math.log10(48.0 * r) + 30.0 * r * math.log10(math.e)


@lru_cache(maxsize=64)
def _weights_cached(xs: Tuple[float, ...]) -> Tuple[Tuple[float, ...], bool]:
    """Barycentric weights up to one common positive factor.

    Integer nodes get exact big-integer products turned into correctly
    rounded floats; anything else falls back to log-magnitude accumulation.
    Returns (weights, exact_flag).
    """
    n = len(xs)
    if all(x == int(x) and abs(x) < 2**53 for x in xs):
        ints = [int(x) for x in xs]
        prods = []
        for j in range(n):
            acc = 1
            for k in range(n):
                if k != j:
                    acc *= ints[j] - ints[k]
            prods.append(acc)
        scale = min(prods, key=abs)
        return tuple(float(Fraction(scale, p)) for p in prods), True
    logs = []
    signs = []
    for j in range(n):
        s = 1.0
        acc = 0.0
        for k in range(n):
            if k == j:
                continue
            d = xs[j] - xs[k]
            if d == 0.0:
                raise ValueError("nodes must be distinct")
            if d < 0.0:
                s = -s
            acc += math.log(abs(d))
        logs.append(acc)
        signs.append(s)
    low = min(logs)
    return tuple(signs[j] * math.exp(low - logs[j]) for j in range(n)), False


def _weights(xs: Sequence[float], ops):
    xs = tuple(float(x) for x in xs)
    if not ops.is_extended:
        return _weights_cached(xs)[0]
    n = len(xs)
    if all(x == int(x) and abs(x) < 2**53 for x in xs):
        ints = [int(x) for x in xs]
        prods = []
        for j in range(n):
            acc = 1
            for k in range(n):
                if k != j:
                    acc *= ints[j] - ints[k]
            prods.append(acc)
        scale = min(prods, key=abs)
        with mpmath.workdps(ops.dps):
            return [mpmath.mpf(scale) / mpmath.mpf(p) for p in prods]
    raise ValueError("extended-precision weights require integer nodes")


def lagrange_eval(nodes, values, z, ops=DOUBLE):
    """Interpolating polynomial through (nodes, values), at a complex point.

    Second barycentric form with mean-centered values; exact (to rounding)
    for polynomial data of degree below the node count, and exact for
    constant data.  A point within 1e-14 relative of a node returns that
    node's stored value.
    """
    xs = list(nodes.nodes) if isinstance(nodes, NodeSet) else [float(x) for x in nodes]
    vals = list(values)
    if len(xs) != len(vals) or not xs:
        raise ValueError("need one value per node")
    for x, v in zip(xs, vals):
        if abs(complex(z) - x) <= 1e-14 * (1.0 + abs(x)):
            return v
    if all(v == vals[0] for v in vals[1:]):
        return vals[0]
    w = _weights(xs, ops)
    zc = z if ops.is_extended else complex(z)
    num_parts = []
    den_parts = []
    for j in range(len(xs)):
        t = w[j] / (zc - xs[j])
        num_parts.append(t * vals[j])
        den_parts.append(t)
    return ops.fsum(num_parts) / ops.fsum(den_parts)


def _even_pair_eval(nodes: "NodeSet", pos_values, z_sq, ops):
    """Barycentric interpolant of even data, reduced to positive nodes.

    For the symmetric node set and mirrored values the pair (x, -x)
    contributes w_x * 2x / (z^2 - x^2) in both sums; with z^2 real every
    quantity here is real, so the result carries no rounding-born imaginary
    part at the evaluation points i m pi.
    """
    xs = nodes.nodes
    w = _weights(xs, ops)
    half = len(xs) // 2
    num_parts = []
    den_parts = []
    for i, x in enumerate(nodes.positive):
        wx = w[half + i]
        c = wx * (2.0 * x) / (z_sq - x * x)
        num_parts.append(c * pos_values[i])
        den_parts.append(c)
    return ops.fsum(num_parts) / ops.fsum(den_parts)


def sample_functional(
    bundle: DataBundle, j: int, n: int, p: int, nodes: NodeSet, ops=DOUBLE
):
    """Values of z -> H(-i z, n pi, p pi) on the full node set.

    Only positive nodes are evaluated; the functional is even in z, so the
    negative half is mirrored (bit-identical by construction).
    """
    pos = _positive_samples(bundle, j, n, p, nodes, ops)
    return list(reversed(pos)) + pos


def _positive_samples(bundle, j, n, p, nodes, ops):
    return [H(bundle, Frequency.canonical(z, n, p), j, ops) for z in nodes.positive]


def interp_coeff(
    bundle: DataBundle,
    j: int,
    m: int,
    n: int,
    p: int,
    nodes: NodeSet,
    ops=DOUBLE,
    mirror: bool = True,
):
    """Interpolated cosine coefficient estimate at frequency (m pi, n pi, p pi).

    Samples the data functional on the node set and evaluates the Lagrange
    interpolant at i m pi through its even-pair reduction.  With mirror=True
    only positive nodes are sampled; mirror=False also evaluates the negative
    nodes and uses their average with the mirrored value (identical bits, as
    the functional is evaluated in a form even in z).
    """
    for idx in (m, n, p):
        if idx < 0 or idx > nodes.r:
            raise ValueError("coefficient indices must lie in [0, r]")
    pos = _positive_samples(bundle, j, n, p, nodes, ops)
    if not mirror:
        neg = [
            H(bundle, Frequency.canonical(z, n, p), j, ops)
            for z in nodes.nodes[: len(nodes.nodes) // 2]
        ]
        pos = [
            0.5 * (a + b) for a, b in zip(reversed(neg), pos)
        ]
    mpi = ops.mul_pi(float(m)) if ops.is_extended else m * math.pi
    return _even_pair_eval(nodes, pos, -(mpi * mpi), ops)
