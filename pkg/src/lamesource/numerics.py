"""Scalar numeric kernels shared by the whole package.

Everything here is exact-closed-form material: trig of pi-multiples with the
integer cases reduced exactly, overflow-free hyperbolic ratios, the two basic
antiderivatives on [0, 1], and compensated summation.  All routines come in a
double-precision flavor (math/cmath) and an extended-precision flavor
(mpmath), selected by passing an ops object.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import mpmath


@dataclass(frozen=True)
class PiArg:
    """A complex number of the form mul*pi + 1j*im.

    Keeping the pi-multiple separate lets sin/cos evaluate exactly at integer
    multiples of pi, which is where all the cancellation-sensitive spectral
    arguments of this package live.
    """

    mul: float
    im: float

    @staticmethod
    def from_complex(a: complex) -> "PiArg":
        a = complex(a)
        return PiArg(a.real / math.pi, a.imag)

    def to_complex(self) -> complex:
        return complex(self.mul * math.pi, self.im)

    def __neg__(self) -> "PiArg":
        return PiArg(-self.mul, -self.im)

    def is_zero(self) -> bool:
        return self.mul == 0.0 and self.im == 0.0


def as_piarg(a) -> PiArg:
    return a if isinstance(a, PiArg) else PiArg.from_complex(a)


class DoubleOps:
    """Double-precision backend (math/cmath)."""

    is_extended = False
    pi = math.pi

    @staticmethod
    def mul_pi(m):
        return m * math.pi

    @staticmethod
    def make(re, im):
        return complex(re, im)

    @staticmethod
    def real(x):
        return complex(x).real

    @staticmethod
    def to_complex(x) -> complex:
        return complex(x)

    @staticmethod
    def sinpi(x):
        # reduce to [-1/2, 1/2]: sin(pi x) = (-1)^m sin(pi r), x = m + r
        m = math.floor(x + 0.5)
        r = x - m
        s = math.sin(math.pi * r)
        return -s if (m & 1) else s

    @staticmethod
    def cospi(x):
        m = math.floor(x + 0.5)
        r = x - m
        c = math.cos(math.pi * r)
        return -c if (m & 1) else c

    @staticmethod
    def sinh(x):
        return math.sinh(x)

    @staticmethod
    def cosh(x):
        return math.cosh(x)

    @staticmethod
    def exp(x):
        return math.exp(x)

    @staticmethod
    def log(x):
        return math.log(x)

    @staticmethod
    def sqrt(x):
        return math.sqrt(x)

    @staticmethod
    def tanh(x):
        return math.tanh(x)

    @staticmethod
    def sech(x):
        # 2 e^{-x} / (1 + e^{-2x}); overflow-free for any x >= 0
        e = math.exp(-abs(x))
        return 2.0 * e / (1.0 + e * e)

    @staticmethod
    def hypot_abs(z) -> float:
        return abs(complex(z))

    @staticmethod
    def fsum(terms: Iterable) -> complex:
        return neumaier_csum(terms)


class ExtendedOps:
    """mpmath backend; dps >= 30 per the precision contract."""

    is_extended = True

    def __init__(self, dps: int = 35):
        if dps < 30:
            raise ValueError("extended mode requires at least 30 digits")
        self.dps = dps

    @property
    def pi(self):
        with mpmath.workdps(self.dps):
            return +mpmath.pi

    def mul_pi(self, m):
        with mpmath.workdps(self.dps):
            return mpmath.pi * m

    def make(self, re, im):
        with mpmath.workdps(self.dps):
            return mpmath.mpc(re, im)

    def real(self, x):
        return mpmath.mpc(x).real

    @staticmethod
    def to_complex(x) -> complex:
        return complex(x)

    def sinpi(self, x):
        with mpmath.workdps(self.dps):
            return mpmath.sinpi(x)

    def cospi(self, x):
        with mpmath.workdps(self.dps):
            return mpmath.cospi(x)

    def sinh(self, x):
        with mpmath.workdps(self.dps):
            return mpmath.sinh(x)

    def cosh(self, x):
        with mpmath.workdps(self.dps):
            return mpmath.cosh(x)

    def exp(self, x):
        with mpmath.workdps(self.dps):
            return mpmath.exp(x)

    def log(self, x):
        with mpmath.workdps(self.dps):
            return mpmath.log(x)

    def sqrt(self, x):
        with mpmath.workdps(self.dps):
            return mpmath.sqrt(x)

    def tanh(self, x):
        with mpmath.workdps(self.dps):
            return mpmath.tanh(x)

    def sech(self, x):
        with mpmath.workdps(self.dps):
            return mpmath.sech(x)

    def hypot_abs(self, z):
        with mpmath.workdps(self.dps):
            return abs(mpmath.mpc(z))

    def fsum(self, terms: Iterable):
        with mpmath.workdps(self.dps):
            return mpmath.fsum(terms, absolute=False)


DOUBLE = DoubleOps()


def extended(dps: int = 35) -> ExtendedOps:
    return ExtendedOps(dps)


def neumaier_csum(terms: Iterable) -> complex:
    """Compensated (Neumaier) summation of complex terms."""
    sre = 0.0
    cre = 0.0
    sim = 0.0
    cim = 0.0
    for t in terms:
        t = complex(t)
        x = t.real
        tmp = sre + x
        if abs(sre) >= abs(x):
            cre += (sre - tmp) + x
        else:
            cre += (x - tmp) + sre
        sre = tmp
        y = t.imag
        tmp = sim + y
        if abs(sim) >= abs(y):
            cim += (sim - tmp) + y
        else:
            cim += (y - tmp) + sim
        sim = tmp
    return complex(sre + cre, sim + cim)


def kc(ops, b: PiArg):
    """Entire function sin(b)/b = integral_0^1 cos(b x) dx; even in b.

    The sign of b is normalized first so the evaluation is bitwise even.
    """
    if b.mul < 0.0 or (b.mul == 0.0 and b.im < 0.0):
        b = -b
    if b.is_zero():
        return ops.make(1.0, 0.0)
    m, y = b.mul, b.im
    sb = ops.make(ops.sinpi(m) * ops.cosh(y), ops.cospi(m) * ops.sinh(y))
    return sb / ops.make(ops.mul_pi(m), y)


def ks(ops, b: PiArg):
    """Entire function (1 - cos b)/b = integral_0^1 sin(b x) dx; odd in b.

    Computed as 2 sin(b/2)^2 / b, which is cancellation-free for small b.
    """
    sign = 1.0
    if b.mul < 0.0 or (b.mul == 0.0 and b.im < 0.0):
        b, sign = -b, -1.0
    if b.is_zero():
        return ops.make(0.0, 0.0)
    m, y = b.mul, b.im
    sh = ops.make(
        ops.sinpi(m / 2.0) * ops.cosh(y / 2.0),
        ops.cospi(m / 2.0) * ops.sinh(y / 2.0),
    )
    return sign * (2.0 * sh * sh / ops.make(ops.mul_pi(m), y))
