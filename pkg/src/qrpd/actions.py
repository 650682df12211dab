"""Named gate triples, the reduced two-angle membership test, and
rational-angle detection for environment periodicity."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .qcore import ALGEBRA_TOL, Unitary2, make_unitary

RATIONAL_TOL = 1e-9


@dataclass(frozen=True)
class ActionTriple:
    """An SU(2) action given by its rotation angles, optionally named."""

    theta: float
    alpha: float = 0.0
    phi: float = 0.0
    name: Optional[str] = None

    def unitary(self) -> Unitary2:
        return make_unitary(self.theta, self.alpha, self.phi)


# Angles marked arbitrary in the defining table (alpha, phi for C; phi for Q)
# are irrelevant there and stored as 0 so serialization is deterministic.
_NAMED = {
    "C": ActionTriple(0.0, 0.0, 0.0, name="C"),
    "D": ActionTriple(math.pi, math.pi / 2, 0.0, name="D"),
    "Q": ActionTriple(math.pi, 0.0, 0.0, name="Q"),
    "H": ActionTriple(math.pi, math.pi / 4, math.pi / 2, name="H"),
    "R3": ActionTriple(2.0 * math.pi / 3.0, math.pi / 2, 0.0, name="R3"),
}


def named_action(name: str) -> ActionTriple:
    """Look up one of the standard actions C, D, Q, H, R3."""
    key = str(name).strip().upper()
    try:
        return _NAMED[key]
    except KeyError:
        raise KeyError(f"unknown action name {name!r}; expected one of "
                       f"{', '.join(sorted(_NAMED))}") from None


def two_param_membership(a: ActionTriple) -> bool:
    """Whether the action lies in the conventional two-angle gate family.

    That family is cut out of the three-angle space by
    cos^2(theta/2) + sin^2(theta/2) (cos^2(alpha) + sin^2(phi) sin^2(alpha)) = 1,
    equivalently sin(theta/2) sin(alpha) cos(phi) = 0.  The mirror family
    (cos^2(phi) in place of sin^2(phi)) is a distinct subspace that contains
    the plain bit-flip gate and is intentionally not tested here.
    """
    half = 0.5 * a.theta
    lhs = (math.cos(half) ** 2
           + math.sin(half) ** 2 * (math.cos(a.alpha) ** 2
                                    + math.sin(a.phi) ** 2 * math.sin(a.alpha) ** 2))
    return abs(lhs - 1.0) <= ALGEBRA_TOL


@dataclass(frozen=True)
class RationalAngle:
    """theta = (p/q) * 2*pi in lowest terms, q >= 1."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError("denominator must be >= 1")
        g = gcd(self.p, self.q)
        if g > 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)

    @property
    def radians(self) -> float:
        return 2.0 * math.pi * self.p / self.q


def rational_of(theta: float, max_q: int) -> Optional[RationalAngle]:
    """Best rational representation theta ~ (p/q) 2*pi with q <= max_q.

    Returns None unless the representation is exact within 1e-9 radians.
    Fraction.limit_denominator walks the continued-fraction convergents
    (and semiconvergents), so the returned q is minimal.
    """
    if max_q < 1:
        raise ValueError("max_q must be >= 1")
    frac = Fraction(theta / (2.0 * math.pi)).limit_denominator(max_q)
    candidate = RationalAngle(frac.numerator, frac.denominator)
    if abs(theta - candidate.radians) < RATIONAL_TOL:
        return candidate
    return None


_PI_PATTERN = re.compile(
    r"^\s*([+-]?\d*\.?\d*)\s*pi\s*(?:/\s*([+-]?\d+\.?\d*))?\s*$", re.IGNORECASE)


def parse_angle(text: str) -> float:
    """Parse radians from a float literal or a pi fraction such as
    'pi/4', '2pi/3', '-pi'."""
    token = str(text).strip()
    try:
        return float(token)
    except ValueError:
        pass
    m = _PI_PATTERN.match(token)
    if not m:
        raise ValueError(f"cannot parse angle {text!r}")
    coef_text, den_text = m.group(1), m.group(2)
    if coef_text in ("", "+"):
        coef = 1.0
    elif coef_text == "-":
        coef = -1.0
    else:
        coef = float(coef_text)
    den = float(den_text) if den_text else 1.0
    if den == 0:
        raise ValueError(f"zero denominator in angle {text!r}")
    return coef * math.pi / den


def parse_action(text: str) -> ActionTriple:
    """Parse an action: a standard name or a raw 'theta,alpha,phi' triple."""
    token = str(text).strip()
    if token.upper() in _NAMED:
        return _NAMED[token.upper()]
    parts = token.split(",")
    if len(parts) != 3:
        raise ValueError(f"action {text!r} is neither a known name nor a "
                         f"'theta,alpha,phi' triple")
    theta, alpha, phi = (parse_angle(p) for p in parts)
    return ActionTriple(theta, alpha, phi)
