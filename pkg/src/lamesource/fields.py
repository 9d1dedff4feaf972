"""Separable trigonometric fields on the unit cube (optionally times [0, T]).

A field is a finite sum of terms c * f1(x1) f2(x2) f3(x3) [* ft(t)], where
each factor is 1, cos(k*pi*s) or sin(k*pi*s).  Frequencies are stored as the
multiplier k of pi, so every integral, derivative, norm and restriction used
by the reconstruction pipeline is available in closed form.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .numerics import DOUBLE, PiArg, as_piarg, kc, ks, neumaier_csum


class FactorKind(enum.Enum):
    ONE = "one"
    COS = "cos"
    SIN = "sin"


class Kernel(enum.Enum):
    """1D projection kernel: cos(a x) or sin(a x)."""

    COS_A = "cos"
    SIN_A = "sin"


def _norm_mult(k: float) -> float:
    k = float(k)
    return float(int(k)) if k.is_integer() else k


@dataclass(frozen=True)
class AxisFactor:
    """One 1D factor: 1, cos(k pi s) or sin(k pi s)."""

    kind: FactorKind
    k: float = 0.0  # multiplier of pi

    def __post_init__(self):
        object.__setattr__(self, "k", _norm_mult(self.k))
        if self.kind is FactorKind.ONE and self.k != 0.0:
            raise ValueError("constant factor must have zero frequency")
        if self.kind is FactorKind.SIN and self.k == 0.0:
            raise ValueError("sin factor with zero frequency is identically zero")

    def __call__(self, s):
        if self.kind is FactorKind.ONE:
            return np.ones_like(np.asarray(s, dtype=float))
        w = self.k * math.pi
        if self.kind is FactorKind.COS:
            return np.cos(w * np.asarray(s, dtype=float))
        return np.sin(w * np.asarray(s, dtype=float))


ONE = AxisFactor(FactorKind.ONE, 0.0)


def cos_f(k: float) -> AxisFactor:
    return AxisFactor(FactorKind.COS, k)


def sin_f(k: float) -> AxisFactor:
    return AxisFactor(FactorKind.SIN, k)


@dataclass(frozen=True)
class SeparableTerm:
    coefficient: complex
    axes: tuple[AxisFactor, AxisFactor, AxisFactor]
    time: Optional[AxisFactor] = None

    def signature(self):
        key = tuple((a.kind.value, a.k) for a in self.axes)
        tkey = None if self.time is None else (self.time.kind.value, self.time.k)
        return key, tkey


class TrigField:
    """Canonicalized finite sum of separable trig terms."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[SeparableTerm] = ()):
        merged: dict = {}
        order: list = []
        for t in terms:
            if t.coefficient == 0:
                continue
            sig = t.signature()
            if sig in merged:
                merged[sig] = merged[sig] + complex(t.coefficient)
            else:
                merged[sig] = complex(t.coefficient)
                order.append((sig, t))
        out = []
        for sig, t in order:
            c = merged[sig]
            if c != 0:
                out.append(SeparableTerm(c, t.axes, t.time))
        self.terms = tuple(out)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "TrigField":
        return TrigField(())

    @staticmethod
    def constant(c: complex) -> "TrigField":
        return TrigField((SeparableTerm(c, (ONE, ONE, ONE)),))

    @staticmethod
    def product(
        coefficient: complex,
        axes: Sequence[AxisFactor],
        time: Optional[AxisFactor] = None,
    ) -> "TrigField":
        a = tuple(axes)
        if len(a) != 3:
            raise ValueError("need exactly three axis factors")
        return TrigField((SeparableTerm(complex(coefficient), a, time),))

    # -- algebra -------------------------------------------------------------

    def __add__(self, other: "TrigField") -> "TrigField":
        return TrigField(self.terms + other.terms)

    def __sub__(self, other: "TrigField") -> "TrigField":
        return self + (-1.0) * other

    def __rmul__(self, c) -> "TrigField":
        return TrigField(
            tuple(SeparableTerm(c * t.coefficient, t.axes, t.time) for t in self.terms)
        )

    __mul__ = __rmul__

    def __neg__(self) -> "TrigField":
        return (-1.0) * self

    # -- structure -----------------------------------------------------------

    @property
    def has_time(self) -> bool:
        return any(t.time is not None for t in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def max_coeff(self) -> float:
        return max((abs(t.coefficient) for t in self.terms), default=0.0)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x, t=None):
        """Evaluate at a point (or numpy-broadcast grid) x, optional time t."""
        if self.has_time and t is None:
            raise ValueError("field has time factors; a time value is required")
        if not self.has_time and t is not None:
            raise ValueError("field is time-independent; no time value expected")
        x = [np.asarray(xi, dtype=float) for xi in x]
        total = None
        for term in self.terms:
            v = term.coefficient * term.axes[0](x[0]) * term.axes[1](x[1]) * term.axes[2](x[2])
            if term.time is not None:
                v = v * term.time(t)
            total = v if total is None else total + v
        if total is None:
            shape = np.broadcast(*x).shape
            return np.zeros(shape, dtype=complex) if shape else 0j
        return total

    # -- calculus ------------------------------------------------------------

    def differentiate(self, axis: int) -> "TrigField":
        """Exact partial derivative along spatial axis 0..2 (or 't')."""
        out = []
        for term in self.terms:
            if axis == "t":
                f = term.time
                if f is None or f.kind is FactorKind.ONE:
                    continue
                c, nf = _diff_factor(term.coefficient, f)
                if c == 0:
                    continue
                out.append(SeparableTerm(c, term.axes, nf))
            else:
                f = term.axes[axis]
                if f.kind is FactorKind.ONE:
                    continue
                c, nf = _diff_factor(term.coefficient, f)
                if c == 0:
                    continue
                axes = list(term.axes)
                axes[axis] = nf
                out.append(SeparableTerm(c, tuple(axes), term.time))
        return TrigField(out)

    def restrict(self, axis: int, value: float) -> "TrigField":
        """Substitute x_axis = value; that axis factor becomes constant."""
        out = []
        for term in self.terms:
            f = term.axes[axis]
            fac = _factor_at(f, value)
            if fac == 0.0:
                continue
            axes = list(term.axes)
            axes[axis] = ONE
            out.append(SeparableTerm(term.coefficient * fac, tuple(axes), term.time))
        return TrigField(out)

    def at_time(self, t: float) -> "TrigField":
        """Time slice u(., t) of a time-dependent field."""
        out = []
        for term in self.terms:
            if term.time is None:
                out.append(term)
                continue
            fac = _factor_at(term.time, t)
            if fac == 0.0:
                continue
            out.append(SeparableTerm(term.coefficient * fac, term.axes, None))
        return TrigField(out)

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> list:
        def fd(f: AxisFactor):
            return {"kind": f.kind.value, "k": f.k}

        return [
            {
                "coef_re": t.coefficient.real,
                "coef_im": t.coefficient.imag,
                "axes": [fd(a) for a in t.axes],
                "time": None if t.time is None else fd(t.time),
            }
            for t in self.terms
        ]

    @staticmethod
    def from_json_dict(data: list) -> "TrigField":
        def pf(d):
            return AxisFactor(FactorKind(d["kind"]), d["k"])

        terms = []
        for td in data:
            axes = tuple(pf(d) for d in td["axes"])
            time = None if td.get("time") is None else pf(td["time"])
            terms.append(
                SeparableTerm(complex(td["coef_re"], td["coef_im"]), axes, time)
            )
        return TrigField(terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def loads(s: str) -> "TrigField":
        return TrigField.from_json_dict(json.loads(s))

    def __repr__(self):
        return f"TrigField({len(self.terms)} terms)"


def _diff_factor(c: complex, f: AxisFactor):
    w = f.k * math.pi
    if f.kind is FactorKind.COS:
        return -c * w, AxisFactor(FactorKind.SIN, f.k)
    return c * w, AxisFactor(FactorKind.COS, f.k)


def _factor_at(f: AxisFactor, s: float):
    """Factor value at a point, exact for integer multiples of pi."""
    if f.kind is FactorKind.ONE:
        return 1.0
    ks_prod = f.k * s
    if f.kind is FactorKind.COS:
        return DOUBLE.cospi(ks_prod)
    return DOUBLE.sinpi(ks_prod)


# -- 1D closed-form integrals --------------------------------------------------


def integrate_axis(factor: AxisFactor, kernel: Kernel, a, ops=DOUBLE):
    """integral_0^1 factor(x) * k(a x) dx with k = cos or sin, a complex.

    Total on all inputs; resonant (|a| equal to the factor frequency) and
    a = 0 cases fall out of the entire-function forms used internally.
    `a` may be a complex number or a PiArg.
    """
    b = as_piarg(a)
    m, y = b.mul, b.im
    k = factor.k
    if kernel is Kernel.COS_A:
        if factor.kind is FactorKind.ONE:
            return kc(ops, b)
        if factor.kind is FactorKind.COS:
            return 0.5 * (kc(ops, PiArg(k - m, -y)) + kc(ops, PiArg(k + m, y)))
        return 0.5 * (ks(ops, PiArg(k + m, y)) + ks(ops, PiArg(k - m, -y)))
    else:
        if factor.kind is FactorKind.ONE:
            return ks(ops, b)
        if factor.kind is FactorKind.COS:
            return 0.5 * (ks(ops, PiArg(m + k, y)) + ks(ops, PiArg(m - k, y)))
        return 0.5 * (kc(ops, PiArg(k - m, -y)) - kc(ops, PiArg(k + m, y)))


def volume_integral(w: TrigField, kernel_spec, ops=DOUBLE):
    """integral over the unit cube of w(x) * prod_i k_i(a_i x_i) dx.

    kernel_spec is a sequence of three (Kernel, a) pairs.
    """
    if w.has_time:
        raise ValueError("volume integral requires a time-independent field")
    spec = [(kern, as_piarg(a)) for kern, a in kernel_spec]
    parts = []
    for term in w.terms:
        v = term.coefficient
        for i in range(3):
            kern, a = spec[i]
            v = v * integrate_axis(term.axes[i], kern, a, ops)
        parts.append(v)
    return ops.fsum(parts)


def fourier_coefficient(w: TrigField, m: int, n: int, p: int, ops=DOUBLE):
    """Cosine-basis volume integral of w against cos(m pi x1)cos(n pi x2)cos(p pi x3)."""
    return volume_integral(
        w,
        [
            (Kernel.COS_A, PiArg(m, 0.0)),
            (Kernel.COS_A, PiArg(n, 0.0)),
            (Kernel.COS_A, PiArg(p, 0.0)),
        ],
        ops,
    )


# -- exact inner products and norms --------------------------------------------


def _axis_inner(f: AxisFactor, g: AxisFactor) -> float:
    """integral_0^1 f(x) g(x) dx, exact for integer multiples of pi."""
    ki, kj = f.k, g.k
    int_path = float(ki).is_integer() and float(kj).is_integer()
    if int_path:
        ki, kj = int(ki), int(kj)
        if f.kind is FactorKind.ONE and g.kind is FactorKind.ONE:
            return 1.0
        if FactorKind.ONE in (f.kind, g.kind):
            other = g if f.kind is FactorKind.ONE else f
            if other.kind is FactorKind.COS:
                return 1.0 if other.k == 0 else 0.0
            ko = int(other.k)
            return 0.0 if ko % 2 == 0 else 2.0 / (ko * math.pi)
        if f.kind is g.kind:
            if f.kind is FactorKind.COS:
                if ki == kj:
                    return 1.0 if ki == 0 else 0.5
                return 0.0
            return 0.5 if ki == kj else 0.0
        # cos * sin with integer multipliers
        kc_, ks_ = (ki, kj) if f.kind is FactorKind.COS else (kj, ki)
        if (kc_ + ks_) % 2 == 0:
            return 0.0
        return 2.0 * ks_ / ((ks_ * ks_ - kc_ * kc_) * math.pi)
    # general frequencies: closed-form via the kernel integrals
    kern = Kernel.COS_A if g.kind in (FactorKind.ONE, FactorKind.COS) else Kernel.SIN_A
    return complex(integrate_axis(f, kern, PiArg(g.k, 0.0))).real


def inner(w1: TrigField, w2: TrigField) -> float:
    """Real L2 inner product over the unit cube (real fields expected)."""
    if w1.has_time or w2.has_time:
        raise ValueError("norms are defined for time-independent fields")
    parts = []
    for t1 in w1.terms:
        for t2 in w2.terms:
            v = t1.coefficient * t2.coefficient.conjugate()
            for i in range(3):
                v *= _axis_inner(t1.axes[i], t2.axes[i])
            parts.append(v)
    return neumaier_csum(parts).real


def l2_norm_sq(w: TrigField) -> float:
    return max(inner(w, w), 0.0)


def l2_norm(w: TrigField) -> float:
    return math.sqrt(l2_norm_sq(w))


def h1_norm_sq(w: TrigField) -> float:
    s = l2_norm_sq(w)
    for axis in range(3):
        s += l2_norm_sq(w.differentiate(axis))
    return s


def h1_norm(w: TrigField) -> float:
    return math.sqrt(h1_norm_sq(w))


def h2_norm_sq(w: TrigField) -> float:
    """Squared Sobolev H2 norm: all multi-index derivatives up to order 2."""
    s = h1_norm_sq(w)
    for i in range(3):
        di = w.differentiate(i)
        for j in range(i, 3):
            s += l2_norm_sq(di.differentiate(j))
    return s


def h2_norm(w: TrigField) -> float:
    return math.sqrt(h2_norm_sq(w))
