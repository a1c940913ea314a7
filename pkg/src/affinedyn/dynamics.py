"""Classification of affine composition operators and their spectra."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .symbols import AffineSymbol, check_alpha

SINGLETON_ONE = "singleton_one"
UNIT_CIRCLE = "unit_circle"
SPIRAL_WITH_ZERO = "spiral_with_zero"
CIRCLE = "circle"
CLOSED_DISC = "closed_disc"

NOT_APPLICABLE = "not_applicable"

# Citation tags attached to report fields.
CITE = {
    "norm": "norm formula: ||C_phi|| = phi'(oo)^((alpha+2)/2)",
    "invertible": "invertibility: C_phi invertible iff Re(b) = 0",
    "unitary": "prop:normal + prop:estimates(i): isometric and invertible iff a = 1, Re(b) = 0",
    "normal": "prop:normal: normal iff a = 1 or Re(b) = 0",
    "expansive": "prop:uniformly-expansive: expansive iff uniformly expansive iff a != 1",
    "expansive_na": "definition: expansivity requires an invertible operator",
    "positive_expansive": "prop:uniformly-positive-expansive: iff a in (0,1)",
    "li_yorke": "cor:no-irregular-vectors: never Li-Yorke chaotic",
    "shadowing_i": "thm:shadowing(i): a in (0,1) and Re(b) = 0",
    "shadowing_ii": "thm:shadowing(ii): a > 1",
    "shadowing_a1": "thm:shadowing proof: a = 1 gives a normal, non-hyperbolic operator",
    "shadowing_fixed": "lemma:shadowing: interior fixed point rules out shadowing",
    "shadowing_identity": "trivial extension: identity is normal with spectrum {1}",
    "cesaro": "prop:cesaro: absolutely Cesaro bounded iff a >= 1",
    "spectrum_identity": "trivial extension: identity operator",
    "spectrum_parabolic_i": "thm:spectrum-parabolic(i): b in iR, b != 0",
    "spectrum_parabolic_ii": "thm:spectrum-parabolic(ii): Re(b) > 0",
    "spectrum_hyperbolic_i": "thm:spectrum-hyperbolic(i): b in iR",
    "spectrum_hyperbolic_ii": "thm:spectrum-hyperbolic(ii): Re(b) > 0",
    "hyperbolic": "hyperbolic: spectrum disjoint from the unit circle",
}


def operator_norm(phi: AffineSymbol, alpha: float) -> float:
    """||C_phi|| = a^(-(alpha+2)/2), evaluated as exp of a log."""
    return math.exp(log_operator_norm(phi, alpha))


def log_operator_norm(phi: AffineSymbol, alpha: float) -> float:
    return -(check_alpha(alpha) + 2.0) / 2.0 * math.log(phi.a)


@dataclass(frozen=True)
class SpectrumDescriptor:
    kind: str
    radius: float | None = None
    generator: complex | None = None

    def __post_init__(self) -> None:
        if self.kind in (CIRCLE, CLOSED_DISC):
            if self.radius is None or not self.radius > 0:
                raise ValueError(f"{self.kind} needs a positive radius")
        elif self.kind == SPIRAL_WITH_ZERO:
            if self.generator is None or not complex(self.generator).real > 0:
                raise ValueError("spiral needs a generator with positive real part")
        elif self.kind not in (SINGLETON_ONE, UNIT_CIRCLE):
            raise ValueError(f"unknown spectrum kind {self.kind!r}")

    @property
    def max_modulus(self) -> float:
        if self.kind in (CIRCLE, CLOSED_DISC):
            return float(self.radius)
        # singleton {1}, the unit circle and the spiral all reach modulus 1
        return 1.0

    def contains(self, lam: complex, tol: float = 1e-12) -> bool:
        lam = complex(lam)
        r = abs(lam)
        if self.kind == SINGLETON_ONE:
            return abs(lam - 1.0) <= tol
        if self.kind == UNIT_CIRCLE:
            return abs(r - 1.0) <= tol
        if self.kind == CIRCLE:
            return abs(r - self.radius) <= tol * max(1.0, self.radius)
        if self.kind == CLOSED_DISC:
            return r <= self.radius * (1.0 + tol)
        # spiral {exp(-b t) : t >= 0} U {0}
        if r <= tol:
            return True
        b = complex(self.generator)
        if r > 1.0 + tol:
            return False
        t = -math.log(r) / b.real
        return abs(cmath.exp(-b * t) - lam) <= tol * max(1.0, abs(b)) + 1e-9 * r

    def sample(self, count: int = 512, decay: float = 1e-3) -> np.ndarray:
        """Points on the set (boundary for discs) for plotting."""
        theta = np.linspace(0.0, 2.0 * np.pi, count)
        if self.kind == SINGLETON_ONE:
            return np.array([1.0 + 0j])
        if self.kind == UNIT_CIRCLE:
            return np.exp(1j * theta)
        if self.kind in (CIRCLE, CLOSED_DISC):
            return self.radius * np.exp(1j * theta)
        b = complex(self.generator)
        t_max = -math.log(decay) / b.real
        t = np.linspace(0.0, t_max, count)
        return np.exp(-b * t)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        if self.radius is not None:
            out["radius"] = self.radius
        if self.generator is not None:
            g = complex(self.generator)
            out["generator_re"] = g.real
            out["generator_im"] = g.imag
        return out


def spectrum(phi: AffineSymbol, alpha: float) -> SpectrumDescriptor:
    if phi.a == 1.0:
        if phi.b == 0:
            return SpectrumDescriptor(SINGLETON_ONE)
        if phi.re_b_zero:
            return SpectrumDescriptor(UNIT_CIRCLE)
        return SpectrumDescriptor(SPIRAL_WITH_ZERO, generator=phi.b)
    r = operator_norm(phi, alpha)
    return SpectrumDescriptor(CIRCLE if phi.re_b_zero else CLOSED_DISC, radius=r)


def spectrum_citation(phi: AffineSymbol) -> str:
    if phi.a == 1.0:
        if phi.b == 0:
            return CITE["spectrum_identity"]
        return CITE["spectrum_parabolic_i" if phi.re_b_zero else "spectrum_parabolic_ii"]
    return CITE["spectrum_hyperbolic_i" if phi.re_b_zero else "spectrum_hyperbolic_ii"]


def is_hyperbolic(s: SpectrumDescriptor) -> bool:
    """True iff the spectrum misses the unit circle."""
    if s.kind == CIRCLE:
        return s.radius != 1.0
    if s.kind == CLOSED_DISC:
        return s.radius < 1.0
    return False


@dataclass(frozen=True)
class Entry:
    value: Any
    citation: str

    def to_json(self) -> dict[str, Any]:
        v = NOT_APPLICABLE if self.value is None else self.value
        return {"value": v, "citation": self.citation}


@dataclass(frozen=True)
class DynamicsReport:
    symbol: AffineSymbol
    alpha: float
    operator_norm: Entry
    invertible: Entry
    unitary: Entry
    normal: Entry
    expansive: Entry
    uniformly_expansive: Entry
    positive_expansive: Entry
    uniformly_positive_expansive: Entry
    li_yorke: Entry
    positive_shadowing: Entry
    cesaro_bounded: Entry
    hyperbolic: Entry
    spectrum: SpectrumDescriptor
    spectrum_citation: str
    fields: tuple[str, ...] = field(
        default=(
            "operator_norm",
            "invertible",
            "unitary",
            "normal",
            "expansive",
            "uniformly_expansive",
            "positive_expansive",
            "uniformly_positive_expansive",
            "li_yorke",
            "positive_shadowing",
            "cesaro_bounded",
            "hyperbolic",
        ),
        repr=False,
    )

    def values(self) -> dict[str, Any]:
        return {name: getattr(self, name).value for name in self.fields}

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"symbol": self.symbol.to_json(), "alpha": self.alpha}
        for name in self.fields:
            out[name] = getattr(self, name).to_json()
        out["spectrum"] = {"value": self.spectrum.to_json(), "citation": self.spectrum_citation}
        return out

    def table(self) -> str:
        rows = [(name, _fmt(getattr(self, name).value), getattr(self, name).citation) for name in self.fields]
        rows.append(("spectrum", _fmt_spectrum(self.spectrum), self.spectrum_citation))
        w0 = max(len(r[0]) for r in rows)
        w1 = max(len(r[1]) for r in rows)
        return "\n".join(f"{a:<{w0}}  {b:<{w1}}  {c}" for a, b, c in rows)


def _fmt(v: Any) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _fmt_spectrum(s: SpectrumDescriptor) -> str:
    if s.kind in (CIRCLE, CLOSED_DISC):
        return f"{s.kind}({s.radius:.12g})"
    if s.kind == SPIRAL_WITH_ZERO:
        return f"{s.kind}({complex(s.generator)})"
    return s.kind


def classify(phi: AffineSymbol, alpha: float) -> DynamicsReport:
    alpha = check_alpha(alpha)
    a = phi.a
    zero_re = phi.re_b_zero
    spec = spectrum(phi, alpha)
    hyper = is_hyperbolic(spec)

    invertible = zero_re
    if invertible:
        exp_val: bool | None = a != 1.0
        exp_cite = CITE["expansive"]
    else:
        exp_val = None
        exp_cite = CITE["expansive_na"]

    if a > 1.0:
        shadow, shadow_cite = True, CITE["shadowing_ii"]
    elif a < 1.0 and zero_re:
        shadow, shadow_cite = True, CITE["shadowing_i"]
    elif a < 1.0:
        shadow, shadow_cite = False, CITE["shadowing_fixed"]
    elif phi.b == 0:
        shadow, shadow_cite = False, CITE["shadowing_identity"]
    else:
        shadow, shadow_cite = False, CITE["shadowing_a1"]

    pos_exp = 0.0 < a < 1.0
    return DynamicsReport(
        symbol=phi,
        alpha=alpha,
        operator_norm=Entry(operator_norm(phi, alpha), CITE["norm"]),
        invertible=Entry(invertible, CITE["invertible"]),
        unitary=Entry(a == 1.0 and zero_re, CITE["unitary"]),
        normal=Entry(a == 1.0 or zero_re, CITE["normal"]),
        expansive=Entry(exp_val, exp_cite),
        uniformly_expansive=Entry(exp_val, exp_cite),
        positive_expansive=Entry(pos_exp, CITE["positive_expansive"]),
        uniformly_positive_expansive=Entry(pos_exp, CITE["positive_expansive"]),
        li_yorke=Entry(False, CITE["li_yorke"]),
        positive_shadowing=Entry(shadow, shadow_cite),
        cesaro_bounded=Entry(a >= 1.0, CITE["cesaro"]),
        hyperbolic=Entry(hyper, CITE["hyperbolic"]),
        spectrum=spec,
        spectrum_citation=spectrum_citation(phi),
    )


SWEEP_COLUMNS = ("a", "b_re", "b_im", "alpha", "operator_norm") + DynamicsReport.__dataclass_fields__["fields"].default[1:] + (
    "spectrum_kind",
    "spectrum_radius",
)


def sweep_rows(params) -> list[list[Any]]:
    """Header plus one classification row per (a, b, alpha)."""
    rows: list[list[Any]] = [list(SWEEP_COLUMNS)]
    for a, b, alpha in params:
        phi = AffineSymbol(a, complex(b))
        rep = classify(phi, alpha)
        vals = rep.values()
        row: list[Any] = [phi.a, phi.b.real, phi.b.imag, rep.alpha]
        for name in rep.fields:
            v = vals[name]
            row.append(NOT_APPLICABLE if v is None else (str(v).lower() if isinstance(v, bool) else v))
        row += [rep.spectrum.kind, "" if rep.spectrum.radius is None else rep.spectrum.radius]
        rows.append(row)
    return rows
