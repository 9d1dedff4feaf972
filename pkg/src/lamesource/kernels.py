"""Complex-frequency data functionals.

For admissible frequencies alpha (alpha . alpha <= 0) the clamped Lame system
ties the unknown source's cosine transform to closed-form functionals of the
observed data: two modulation denominators D1/D2, data blocks E1j/E2j built
from (g, h, X), and final-state blocks E1j*/E2j* that the reconstruction drops.
Everything is evaluated in overflow-free shifted-exponential form and is
bitwise even in the imaginary frequency component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from . import fields as fd
from .fields import FactorKind, Kernel, TrigField
from .numerics import DOUBLE, ExtendedOps, PiArg, extended
from .problem import FACES, DataBundle, face_normal_sign

ADMISSIBLE_RTOL = 1e-12


@dataclass(frozen=True)
class Frequency:
    """A complex frequency triple with alpha . alpha real and <= 0.

    Components are stored as PiArg values (mul * pi + i * im) so that the
    canonical family (-i z, n pi, p pi) keeps its pi-multiples exact.
    """

    args: Tuple[PiArg, PiArg, PiArg]

    def __post_init__(self):
        aa = complex(sum(a.to_complex() ** 2 for a in self.args))
        scale = 1.0 + sum(abs(a.to_complex()) ** 2 for a in self.args)
        tol = ADMISSIBLE_RTOL * scale
        if abs(aa.imag) > tol or aa.real > tol:
            raise ValueError(f"inadmissible frequency: alpha.alpha = {aa}")

    @staticmethod
    def canonical(z: float, n: int, p: int) -> "Frequency":
        """The pipeline family alpha = (-i z, n pi, p pi)."""
        return Frequency((PiArg(0.0, -float(z)), PiArg(float(n), 0.0), PiArg(float(p), 0.0)))

    @staticmethod
    def from_alpha(a1: complex, a2: complex, a3: complex) -> "Frequency":
        return Frequency(
            (PiArg.from_complex(a1), PiArg.from_complex(a2), PiArg.from_complex(a3))
        )

    @property
    def alpha(self) -> Tuple[complex, complex, complex]:
        return tuple(a.to_complex() for a in self.args)

    @property
    def norm0_sq(self) -> float:
        return -sum(a.to_complex() ** 2 for a in self.args).real

    @property
    def norm0(self) -> float:
        return math.sqrt(max(self.norm0_sq, 0.0))

    def canonical_args(self) -> Tuple[PiArg, PiArg, PiArg]:
        """Per-component sign normalization.

        All functionals below are even in each component separately (every
        sine kernel factor pairs with one matching alpha factor), so flipping
        signs here changes nothing mathematically while making evaluation
        bitwise even in z.
        """
        out = []
        for a in self.args:
            if a.mul < 0.0 or (a.mul == 0.0 and a.im > 0.0):
                a = -a
            out.append(a)
        return tuple(out)


@dataclass(frozen=True)
class KernelIndex:
    j: int
    k: int

    def __post_init__(self):
        if self.j not in (1, 2, 3) or self.k not in (1, 2, 3):
            raise ValueError("kernel indices must lie in 1..3")


def g_kernel(idx: KernelIndex):
    """Sign and per-axis cos/sin structure of the projection kernel G_k^j."""
    j0, k0 = idx.j - 1, idx.k - 1
    if j0 == k0:
        return 1.0, (Kernel.COS_A, Kernel.COS_A, Kernel.COS_A)
    kinds = [Kernel.COS_A, Kernel.COS_A, Kernel.COS_A]
    kinds[j0] = Kernel.SIN_A
    kinds[k0] = Kernel.SIN_A
    return -1.0, tuple(kinds)


def _kernel_struct(j0: int, k0: int):
    return g_kernel(KernelIndex(j0 + 1, k0 + 1))


def hyp_ratio(a: float, horizon: float, t: float, ops=DOUBLE):
    """sinh(a (T - t)) / cosh(a T), overflow-free for a T up to ~1e4."""
    if a <= 0.0:
        raise ValueError("rate must be positive")
    if not (0.0 <= t <= horizon):
        raise ValueError("time outside [0, T]")
    e1 = ops.exp(-a * t)
    e2 = ops.exp(-2.0 * a * (horizon - t))
    e3 = ops.exp(-2.0 * a * horizon)
    return e1 * (1.0 - e2) / (1.0 + e3)


def _time_weight_integral(tf, a, horizon, ops):
    """integral_0^T f(t) sinh(a (T - t)) / cosh(a T) dt for f in {1, cos, sin}.

    Closed forms; cos/sin frequencies are multiples of pi so the endpoint
    values reduce exactly.
    """
    sech_aT = ops.sech(a * horizon)
    if tf is None or tf.kind is FactorKind.ONE:
        return (1.0 - sech_aT) / a
    w = ops.mul_pi(tf.k)
    denom = a * a + w * w
    if tf.kind is FactorKind.COS:
        return a * (1.0 - ops.cospi(tf.k * horizon) * sech_aT) / denom
    return (w * ops.tanh(a * horizon) - a * ops.sinpi(tf.k * horizon) * sech_aT) / denom


def _kernel_face_value(kern: Kernel, arg: PiArg, side: int, ops):
    """Kernel axis factor cos(a x) or sin(a x) evaluated at x = side."""
    if side == 0:
        if kern is Kernel.COS_A:
            return ops.make(1.0, 0.0)
        return ops.make(0.0, 0.0)
    m, y = arg.mul, arg.im
    if kern is Kernel.COS_A:
        return ops.make(ops.cospi(m) * ops.cosh(y), -ops.sinpi(m) * ops.sinh(y))
    return ops.make(ops.sinpi(m) * ops.cosh(y), ops.cospi(m) * ops.sinh(y))


def _volume_block(w: TrigField, j0: int, k0: int, args, ops):
    """integral over the cube of w G_k^j, sign included."""
    sign, kinds = _kernel_struct(j0, k0)
    val = fd.volume_integral(w, list(zip(kinds, args)), ops)
    return sign * val


def _surface_terms(bundle: DataBundle, j0: int, coefs, args, a_e, ops):
    """List of all face/time-integrated boundary contributions.

    coefs[k] multiplies the component-k kernel block; the caller supplies
    alpha products (and the norm0^2 shift for the diagonal block).
    """
    horizon = bundle.horizon
    parts = []
    for face in FACES:
        axis, side = face
        for k0 in range(3):
            coef = coefs[k0]
            if coef == 0:
                continue
            sign, kinds = _kernel_struct(j0, k0)
            w = bundle.traction.component(face, k0)
            for term in w.terms:
                v = coef * sign * term.coefficient
                for ax in range(3):
                    if ax == axis:
                        v = v * _kernel_face_value(kinds[ax], args[ax], side, ops)
                    else:
                        v = v * fd.integrate_axis(term.axes[ax], kinds[ax], args[ax], ops)
                v = v * _time_weight_integral(term.time, a_e, horizon, ops)
                parts.append(v)
    return parts


def _require_positive_norm(freq: Frequency):
    if not freq.norm0_sq > 0.0:
        raise ValueError("frequency must satisfy alpha . alpha < 0 strictly")


def _alphas(args, ops):
    return [ops.make(ops.mul_pi(a.mul), a.im) for a in args]


def _norm0(args, ops):
    s = None
    for a in args:
        w = ops.mul_pi(a.mul)
        contrib = a.im * a.im - w * w
        s = contrib if s is None else s + contrib
    return ops.sqrt(s)


def D(bundle: DataBundle, freq: Frequency, e: int, ops=DOUBLE):
    """Modulation denominator: -|alpha|_0^2 * (phi against the damped ratio)."""
    if e not in (1, 2):
        raise ValueError("branch index must be 1 or 2")
    _require_positive_norm(freq)
    args = freq.canonical_args()
    n0 = _norm0(args, ops)
    rate = (bundle.constants.k1 if e == 1 else bundle.constants.k2) * n0
    parts = []
    for term in bundle.phi.phi.terms:
        parts.append(
            term.coefficient * _time_weight_integral(term.time, rate, bundle.horizon, ops)
        )
    return -(n0 * n0) * ops.fsum(parts)


def E1(bundle: DataBundle, freq: Frequency, j: int, ops=DOUBLE):
    """First data block: g-volume, h-volume and boundary-history parts."""
    _require_positive_norm(freq)
    j0 = j - 1
    args = freq.canonical_args()
    alpha = _alphas(args, ops)
    n0 = _norm0(args, ops)
    c = bundle.constants
    a1 = c.k1 * n0
    g_sum = ops.fsum(
        alpha[k] * _volume_block(bundle.g[k], j0, k, args, ops) for k in range(3)
    )
    h_sum = ops.fsum(
        alpha[k] * _volume_block(bundle.h[k], j0, k, args, ops) for k in range(3)
    )
    surf = ops.fsum(
        _surface_terms(bundle, j0, [alpha[0], alpha[1], alpha[2]], args, a1, ops)
    )
    aj = alpha[j0]
    return -c.k1 * n0 * aj * g_sum - ops.tanh(a1 * bundle.horizon) * aj * h_sum - aj * surf


def _mixed_block(wvec, j0, args, alpha, n0, ops):
    """-|a|0^2 w_j G_j^j - alpha_j sum_k alpha_k w_k G_k^j, integrated."""
    diag = _volume_block(wvec[j0], j0, j0, args, ops)
    mix = ops.fsum(
        alpha[k] * _volume_block(wvec[k], j0, k, args, ops) for k in range(3)
    )
    return -(n0 * n0) * diag - alpha[j0] * mix


def E2(bundle: DataBundle, freq: Frequency, j: int, ops=DOUBLE):
    """Second data block, shear-rate weighted."""
    _require_positive_norm(freq)
    j0 = j - 1
    args = freq.canonical_args()
    alpha = _alphas(args, ops)
    n0 = _norm0(args, ops)
    c = bundle.constants
    a2 = c.k2 * n0
    w_g = _mixed_block(bundle.g, j0, args, alpha, n0, ops)
    w_h = _mixed_block(bundle.h, j0, args, alpha, n0, ops)
    coefs = [alpha[j0] * alpha[k] for k in range(3)]
    coefs[j0] = coefs[j0] + n0 * n0
    surf = ops.fsum(_surface_terms(bundle, j0, coefs, args, a2, ops))
    return -c.k2 * n0 * w_g - ops.tanh(a2 * bundle.horizon) * w_h + surf


def Estar1(u_final, constants, horizon: float, freq: Frequency, j: int, ops=DOUBLE):
    """Final-state block dropped by the method (first branch)."""
    _require_positive_norm(freq)
    j0 = j - 1
    args = freq.canonical_args()
    alpha = _alphas(args, ops)
    n0 = _norm0(args, ops)
    a1 = constants.k1 * n0
    mix = ops.fsum(
        alpha[k] * _volume_block(u_final[k], j0, k, args, ops) for k in range(3)
    )
    return constants.k1 * n0 * ops.sech(a1 * horizon) * alpha[j0] * mix


def Estar2(u_final, constants, horizon: float, freq: Frequency, j: int, ops=DOUBLE):
    """Final-state block dropped by the method (second branch)."""
    _require_positive_norm(freq)
    j0 = j - 1
    args = freq.canonical_args()
    alpha = _alphas(args, ops)
    n0 = _norm0(args, ops)
    a2 = constants.k2 * n0
    w = _mixed_block(u_final, j0, args, alpha, n0, ops)
    return constants.k2 * n0 * ops.sech(a2 * horizon) * w


def zero_guard(freq: Frequency) -> float:
    return 1e-30 * (1.0 + freq.norm0_sq)


def H(bundle: DataBundle, freq: Frequency, j: int, ops=DOUBLE):
    """Data functional approximating the source's cosine transform.

    Defined as E1/D1 + E2/D2, with an exact-zero branch when either
    denominator is numerically zero.
    """
    d1 = D(bundle, freq, 1, ops)
    d2 = D(bundle, freq, 2, ops)
    guard = zero_guard(freq)
    if abs(d1) <= guard or abs(d2) <= guard:
        return ops.make(0.0, 0.0)
    return E1(bundle, freq, j, ops) / d1 + E2(bundle, freq, j, ops) / d2


def source_transform(w: TrigField, freq: Frequency, ops=DOUBLE):
    """Cosine transform of a time-independent field at a frequency triple."""
    args = freq.canonical_args()
    return fd.volume_integral(
        w, [(Kernel.COS_A, a) for a in args], ops
    )


def lemma1_residual(
    bundle: DataBundle,
    f,
    u_final,
    freq: Frequency,
    j: int,
    ops=DOUBLE,
) -> float:
    """Relative defect of the exact-identity closure at one frequency.

    Zero (to rounding) iff (u, f) solves the system with the bundle's data
    under the bundle's boundary sign convention.
    """
    d1 = D(bundle, freq, 1, ops)
    d2 = D(bundle, freq, 2, ops)
    guard = zero_guard(freq)
    if abs(d1) <= guard or abs(d2) <= guard:
        raise ZeroDivisionError("denominator vanishes at this frequency")
    lhs = source_transform(f[j - 1], freq, ops)
    rhs = (E1(bundle, freq, j, ops) + Estar1(u_final, bundle.constants, bundle.horizon, freq, j, ops)) / d1
    rhs = rhs + (
        E2(bundle, freq, j, ops) + Estar2(u_final, bundle.constants, bundle.horizon, freq, j, ops)
    ) / d2
    return float(abs(lhs - rhs) / (1.0 + abs(lhs)))
