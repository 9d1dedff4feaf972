"""Problem data model: elastic constants, observation bundle, hypothesis
checks, the boundary traction operator, and the built-in benchmark instances
(exact, disturbed, and scaled-disturbance families).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from . import fields as fd
from .fields import ONE, TrigField, cos_f, sin_f

Face = Tuple[int, int]  # (axis 0..2, side 0|1)

FACES: Tuple[Face, ...] = tuple((axis, side) for axis in range(3) for side in (0, 1))


def face_normal_sign(face: Face) -> float:
    """Outward normal component along the face axis: -1 at side 0, +1 at side 1."""
    return 1.0 if face[1] == 1 else -1.0


@dataclass(frozen=True)
class LameConstants:
    lam: float
    mu: float

    def __post_init__(self):
        if not (self.mu > 0.0 and self.lam + 2.0 * self.mu > 0.0):
            raise ValueError("need mu > 0 and lam + 2*mu > 0")

    @property
    def k1(self) -> float:
        """sqrt(lam + 2 mu), the pressure-wave speed factor."""
        return math.sqrt(self.lam + 2.0 * self.mu)

    @property
    def k2(self) -> float:
        """sqrt(mu), the shear-wave speed factor."""
        return math.sqrt(self.mu)


def validate_w2(c: LameConstants, horizon: float) -> bool:
    """Observation window long enough for uniqueness: T > 2 max(1/k2, 1/k1)."""
    return horizon > 2.0 * max(1.0 / c.k2, 1.0 / c.k1)


def validate_w2prime(c: LameConstants, horizon: float) -> bool:
    """Stronger window condition used by the error analysis: factor 12*sqrt(5)."""
    return horizon > 12.0 * math.sqrt(5.0) * max(1.0 / c.k2, 1.0 / c.k1)


_W1_SAMPLES = 1 << 14


def find_w1_witness(phi: TrigField, horizon: float) -> Tuple[float, float]:
    """Largest dyadic-grid prefix (0, L) on which |phi| >= |phi(0)|/2.

    The time profile must be bounded away from zero near t = 0 with a single
    sign; the returned pair (L, C) witnesses that.
    """
    phi0 = complex(phi((0.0, 0.0, 0.0), 0.0)).real
    if phi0 == 0.0:
        raise ValueError("time profile vanishes at t = 0; no sign witness exists")
    c_val = abs(phi0) / 2.0
    sgn = 1.0 if phi0 > 0 else -1.0
    lam = 0.0
    for i in range(1, _W1_SAMPLES + 1):
        t = horizon * i / _W1_SAMPLES
        v = complex(phi((0.0, 0.0, 0.0), t)).real
        if sgn * v < c_val:
            break
        lam = t
    if lam == 0.0:
        raise ValueError("time profile drops below half its initial value immediately")
    return lam, c_val


@dataclass(frozen=True)
class SourceTimeProfile:
    """Known time factor of the forcing, with its sign witness (Lambda, C)."""

    phi: TrigField
    lam: float
    c: float

    def __post_init__(self):
        if self.phi.has_time is False and not self.phi.is_zero():
            raise ValueError("time profile must carry time factors")
        if not (self.lam > 0.0 and self.c > 0.0):
            raise ValueError("witness requires Lambda > 0 and C > 0")

    @staticmethod
    def from_field(phi: TrigField, horizon: float) -> "SourceTimeProfile":
        lam, c = find_w1_witness(phi, horizon)
        profile = SourceTimeProfile(phi, lam, c)
        profile.verify(horizon)
        return profile

    def verify(self, horizon: float) -> None:
        phi0 = complex(self.phi((0.0, 0.0, 0.0), 0.0)).real
        sgn = 1.0 if phi0 > 0 else -1.0
        n = _W1_SAMPLES
        for i in range(1, n + 1):
            t = self.lam * i / n
            if t >= self.lam:
                break
            v = complex(self.phi((0.0, 0.0, 0.0), t)).real
            if sgn * v < self.c * (1.0 - 1e-12):
                raise ValueError("sign witness fails on (0, Lambda)")


@dataclass(frozen=True)
class BoundaryTraction:
    """Surface-stress history per face of the cube.

    Each face carries three components as fields in the in-face coordinates
    and time; the outward normal is substituted as +-1, so these are plain
    scalar fields.
    """

    data: Dict[Face, Tuple[TrigField, TrigField, TrigField]]

    def __post_init__(self):
        if set(self.data) != set(FACES):
            raise ValueError("boundary data must cover exactly the 6 faces")
        for (axis, _side), comps in self.data.items():
            if len(comps) != 3:
                raise ValueError("three components per face required")
            for w in comps:
                for term in w.terms:
                    if term.axes[axis].kind is not fd.FactorKind.ONE:
                        raise ValueError(
                            "face field must not depend on the face-normal axis"
                        )

    def component(self, face: Face, k: int) -> TrigField:
        return self.data[face][k]

    def scaled(self, s: float) -> "BoundaryTraction":
        return BoundaryTraction(
            {f: tuple(s * w for w in comps) for f, comps in self.data.items()}
        )

    def __add__(self, other: "BoundaryTraction") -> "BoundaryTraction":
        return BoundaryTraction(
            {
                f: tuple(a + b for a, b in zip(self.data[f], other.data[f]))
                for f in self.data
            }
        )

    def __neg__(self) -> "BoundaryTraction":
        return self.scaled(-1.0)

    @staticmethod
    def zero() -> "BoundaryTraction":
        z = TrigField.zero()
        return BoundaryTraction({f: (z, z, z) for f in FACES})


@dataclass(frozen=True)
class DataBundle:
    """One observation I = (phi, X, g, h) plus constants and horizon."""

    constants: LameConstants
    horizon: float
    phi: SourceTimeProfile
    traction: BoundaryTraction
    g: Tuple[TrigField, TrigField, TrigField]
    h: Tuple[TrigField, TrigField, TrigField]
    x_convention: str = "paper"

    def __post_init__(self):
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")
        for w in (*self.g, *self.h):
            if w.has_time:
                raise ValueError("initial data must be time-independent")

    def with_flipped_traction(self) -> "DataBundle":
        tag = "traction" if self.x_convention == "paper" else "paper"
        return replace(self, traction=-self.traction, x_convention=tag)

    def to_json_dict(self) -> dict:
        return {
            "constants": {"lambda": self.constants.lam, "mu": self.constants.mu},
            "horizon": self.horizon,
            "phi": {
                "field": self.phi.phi.to_json_dict(),
                "w1": {"Lambda": self.phi.lam, "C": self.phi.c},
            },
            "traction": [
                {
                    "axis": axis,
                    "side": side,
                    "components": [w.to_json_dict() for w in self.traction.data[(axis, side)]],
                }
                for (axis, side) in FACES
            ],
            "g": [w.to_json_dict() for w in self.g],
            "h": [w.to_json_dict() for w in self.h],
            "x_convention": self.x_convention,
        }

    @staticmethod
    def from_json_dict(d: dict) -> "DataBundle":
        constants = LameConstants(d["constants"]["lambda"], d["constants"]["mu"])
        phi = SourceTimeProfile(
            TrigField.from_json_dict(d["phi"]["field"]),
            d["phi"]["w1"]["Lambda"],
            d["phi"]["w1"]["C"],
        )
        traction = BoundaryTraction(
            {
                (fd_["axis"], fd_["side"]): tuple(
                    TrigField.from_json_dict(c) for c in fd_["components"]
                )
                for fd_ in d["traction"]
            }
        )
        g = tuple(TrigField.from_json_dict(w) for w in d["g"])
        h = tuple(TrigField.from_json_dict(w) for w in d["h"])
        return DataBundle(
            constants, d["horizon"], phi, traction, g, h, d.get("x_convention", "paper")
        )


@dataclass(frozen=True)
class ExperimentConfig:
    epsilon: float = 0.01
    disturbance_n: Optional[int] = 10
    r_override: Optional[int] = None
    components: Tuple[int, ...] = (1, 2, 3)
    output_dir: str = "out"

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")
        if self.disturbance_n is not None and self.disturbance_n < 0:
            raise ValueError("disturbance index must be a positive integer (or 0/None)")
        if self.r_override is not None and self.r_override < 1:
            raise ValueError("r override must be >= 1")
        comps = tuple(self.components)
        if not comps or any(j not in (1, 2, 3) for j in comps):
            raise ValueError("components must be a nonempty subset of {1, 2, 3}")

    @staticmethod
    def from_json_dict(d: dict) -> "ExperimentConfig":
        kw = {}
        if "epsilon" in d:
            kw["epsilon"] = float(d["epsilon"])
        if "n" in d:
            kw["disturbance_n"] = None if d["n"] in (None, 0) else int(d["n"])
        if "r_override" in d:
            kw["r_override"] = None if d["r_override"] is None else int(d["r_override"])
        if "components" in d:
            kw["components"] = tuple(int(j) for j in d["components"])
        if "output_dir" in d:
            kw["output_dir"] = str(d["output_dir"])
        unknown = set(d) - {"epsilon", "n", "r_override", "components", "output_dir"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return ExperimentConfig(**kw)


# -- traction operator ----------------------------------------------------------


def stress_tensor(c: LameConstants, u: Tuple[TrigField, TrigField, TrigField]):
    """Symmetric stress field S of a displacement field, entrywise exact."""
    grads = [[u[j].differentiate(k) for k in range(3)] for j in range(3)]
    div = grads[0][0] + grads[1][1] + grads[2][2]
    s = [[None] * 3 for _ in range(3)]
    for j in range(3):
        for k in range(3):
            if j == k:
                s[j][k] = c.lam * div + 2.0 * c.mu * grads[j][j]
            else:
                s[j][k] = c.mu * (grads[j][k] + grads[k][j])
    return s


def traction_from_displacement(
    c: LameConstants, u: Tuple[TrigField, TrigField, TrigField], face: Face
) -> Tuple[TrigField, TrigField, TrigField]:
    """(stress . outward normal) restricted to a face of the cube."""
    axis, side = face
    sgn = face_normal_sign(face)
    s = stress_tensor(c, u)
    return tuple(sgn * s[j][axis].restrict(axis, float(side)) for j in range(3))


def traction_of(
    c: LameConstants, u: Tuple[TrigField, TrigField, TrigField]
) -> BoundaryTraction:
    return BoundaryTraction(
        {face: traction_from_displacement(c, u, face) for face in FACES}
    )


# -- benchmark instances ---------------------------------------------------------


def _sin3(k1: float, k2: float, k3: float, time: Optional[fd.AxisFactor] = None):
    return TrigField.product(1.0, (sin_f(k1), sin_f(k2), sin_f(k3)), time)


def example_exact() -> Tuple[DataBundle, Tuple[TrigField, ...], Tuple[TrigField, ...]]:
    """Benchmark instance with a known closed-form solution pair.

    mu = 1, lam = -1, T = 30; the time profile is 23 pi^2 cos(pi t), the
    initial velocity vanishes, and the sources are single products of sines.
    The boundary fields are stored in the 'paper' sign convention; flip with
    DataBundle.with_flipped_traction() for the traction convention.
    """
    constants = LameConstants(lam=-1.0, mu=1.0)
    horizon = 30.0
    phi_field = TrigField.product(23.0 * math.pi**2, (ONE, ONE, ONE), cos_f(1))
    phi = SourceTimeProfile.from_field(phi_field, horizon)

    f1 = _sin3(4, 2, 2)
    f2 = _sin3(2, 4, 2)
    f3 = _sin3(2, 2, 4)
    f_exact = (f1, f2, f3)
    ct = cos_f(1)
    u_exact = (_sin3(4, 2, 2, ct), _sin3(2, 4, 2, ct), _sin3(2, 2, 4, ct))

    g = f_exact
    z = TrigField.zero()
    h = (z, z, z)

    # boundary stress, written per face with the normal substituted as +-1
    pi2 = 2.0 * math.pi
    pi4 = 4.0 * math.pi

    def two_sin(coef, axes_k):
        ax = [ONE, ONE, ONE]
        for axis, k in axes_k:
            ax[axis] = sin_f(k)
        return TrigField.product(coef, tuple(ax), ct)

    data: Dict[Face, Tuple[TrigField, TrigField, TrigField]] = {}
    for axis in range(3):
        for side in (0, 1):
            n = 1.0 if side == 1 else -1.0
            o1, o2 = [a for a in range(3) if a != axis]  # in-face axes
            comps = []
            for j in range(3):
                if j == axis:
                    # normal component: -4 pi sin(2 pi s) sin(2 pi s') n_axis
                    comps.append(two_sin(-pi4 * n, [(o1, 2), (o2, 2)]))
                else:
                    other = [a for a in range(3) if a not in (axis, j)][0]
                    # shear component: -2 pi sin(4 pi x_j) sin(2 pi x_other) n_axis
                    comps.append(two_sin(-pi2 * n, [(j, 4), (other, 2)]))
            data[(axis, side)] = tuple(comps)
    traction = BoundaryTraction(data)

    bundle = DataBundle(constants, horizon, phi, traction, g, h, "paper")
    return bundle, f_exact, u_exact


def disturbance_fields(n: int):
    """The size-n data disturbance and its effect on the solution pair.

    Returns (dg, dX, du, df): the common initial-data bump, the per-face
    boundary bump (paper sign convention), and the induced solution changes.
    """
    if n < 1:
        raise ValueError("disturbance index must be >= 1")
    amp = 1.0 / n**1.5
    k = 2 * n
    dg = amp * _sin3(k, k, k)
    ct = cos_f(1)
    du = amp * _sin3(k, k, k, ct)
    df = ((12.0 * n * n - 1.0) / (23.0 * n**1.5)) * _sin3(k, k, k)

    coef = -2.0 * math.pi / math.sqrt(n)
    data: Dict[Face, Tuple[TrigField, TrigField, TrigField]] = {}
    for axis in range(3):
        for side in (0, 1):
            nsgn = 1.0 if side == 1 else -1.0
            o1, o2 = [a for a in range(3) if a != axis]
            ax = [ONE, ONE, ONE]
            ax[o1] = sin_f(k)
            ax[o2] = sin_f(k)
            bump = TrigField.product(coef * nsgn, tuple(ax), ct)
            data[(axis, side)] = (bump, bump, bump)
    dX = BoundaryTraction(data)
    return dg, dX, du, df


def example_disturbed(
    n: int, scale: float = 1.0
) -> Tuple[DataBundle, Tuple[TrigField, ...], Tuple[TrigField, ...]]:
    """Exact instance plus the size-n disturbance (optionally scaled)."""
    bundle, f_exact, u_exact = example_exact()
    if n == 0 or scale == 0.0:
        return bundle, f_exact, u_exact
    dg, dX, du, df = disturbance_fields(n)
    g = tuple(w + scale * dg for w in bundle.g)
    traction = bundle.traction + dX.scaled(scale)
    f_n = tuple(w + scale * df for w in f_exact)
    u_n = tuple(w + scale * du for w in u_exact)
    new_bundle = replace(bundle, g=g, traction=traction)
    return new_bundle, f_n, u_n


def lemma2_diagnostic(bundle: DataBundle, alpha, prec=None) -> dict:
    """Lower-bound check on both modulation denominators at one frequency."""
    from . import kernels

    ops = prec if prec is not None else kernels.DOUBLE
    d1 = kernels.D(bundle, alpha, 1, ops)
    d2 = kernels.D(bundle, alpha, 2, ops)
    c = bundle.constants
    bound = (
        0.25
        * alpha.norm0
        * bundle.phi.c
        * min(1.0 / c.k2, 1.0 / c.k1)
    )
    ok = abs(d1) >= bound and abs(d2) >= bound
    return {"D1": complex(d1), "D2": complex(d2), "bound": float(bound), "ok": bool(ok)}
