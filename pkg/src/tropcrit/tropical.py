"""Tropical membership, rigid rays, critical slopes, boundary strata.

A weight w lies in the tropical variety of I iff the saturated initial
ideal init_w(I) : (t_1...t_p)^infty is proper.  A ray is rigid iff the
homogeneity space of its initial ideal is one-dimensional; the rigid rays
are in bijection with the codimension-one critical slopes, realized here
as the hyperplanes orthogonal to the rays.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import AlphaNotOnHyperplane, NotInTropicalVariety
from .groebner import (
    Ideal,
    InitialIdealEngine,
    groebner_basis,
    homogeneity_space,
    saturate,
)
from .linalg import (
    inverse,
    make_primitive,
    unimodular_completion,
    unimodular_variant,
    vec_gcd,
)
from .rings import Polynomial, dot


class ConnectednessAssumed(UserWarning):
    """Boundary strata are assumed connected; this is not verified."""


class BoundLimitedSearch(UserWarning):
    """Ray search is exhaustive only within the given coordinate bound."""


@dataclass(frozen=True)
class Ray:
    """Primitive integer direction in the tropical variety.

    Direction is meaningful: v and -v are different rays (they give the
    same slope hyperplane).
    """

    v: tuple
    rigid: bool = True
    source: str = "searched"  # searched | flacet | user

    def __post_init__(self):
        if not any(self.v):
            raise ValueError("ray vector must be nonzero")
        if vec_gcd(self.v) != 1:
            raise ValueError(f"ray vector {self.v} is not primitive")
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))


def _sign_normalize(normal):
    for x in normal:
        if x > 0:
            return tuple(normal)
        if x < 0:
            return tuple(-y for y in normal)
    raise ValueError("zero normal vector")


@dataclass(frozen=True)
class SlopeHyperplane:
    """Integer-normal hyperplane in data space.

    Projective slopes (offset 0) are normalized up to sign; affine
    hyperplanes keep their exact normal and offset.
    """

    normal: tuple
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        normal = make_primitive(self.normal)
        if self.offset == 0:
            normal = _sign_normalize(normal)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", Fraction(self.offset))

    def form_string(self, svars=None) -> str:
        names = svars or [f"s{i}" for i in range(len(self.normal))]
        parts = []
        for c, name in zip(self.normal, names):
            if c == 0:
                continue
            if c == 1:
                term = name
            elif c == -1:
                term = f"-{name}"
            else:
                term = f"{c}*{name}"
            if parts and not term.startswith("-"):
                parts.append(f"+{term}")
            else:
                parts.append(term)
        lhs = "".join(parts)
        return lhs if self.offset == 0 else f"{lhs} = {self.offset}"

    def __str__(self):
        return self.form_string()


@dataclass(frozen=True)
class StratumModel:
    """Presentation of a boundary stratum as an ideal in p-1 torus
    coordinates; ``transform`` is unimodular and maps the ray to e1."""

    ideal: Ideal
    transform: tuple  # rows of the unimodular matrix U with U v = e1


class TropicalEngine:
    """Caches per-ideal work (base Groebner basis, per-weight results)."""

    def __init__(self, ideal: Ideal, budget=None):
        self.ideal = ideal
        self.budget = budget
        self.engine = InitialIdealEngine(ideal, budget)
        self.nvars = ideal.nvars
        e = tuple(1 for _ in range(self.nvars))
        self.torus_monomial = Polynomial({e: Fraction(1)}, ideal.vars)
        self._initial = {}
        self._contains = {}
        self._rigid = {}

    def initial(self, w) -> Ideal:
        w = tuple(int(x) for x in w)
        if w not in self._initial:
            self._initial[w] = self.engine.initial(w, self.budget)
        return self._initial[w]

    def contains(self, w) -> bool:
        w = tuple(int(x) for x in w)
        if w in self._contains:
            return self._contains[w]
        J = self.initial(w)
        if J.is_zero:
            result = True  # the full torus
        elif any(g.is_term() for g in J.gens):
            result = False
        else:
            S = saturate(J, self.torus_monomial, self.budget)
            result = not (S.gens and groebner_basis(S, budget=self.budget).is_unit)
        self._contains[w] = result
        return result

    def is_rigid(self, w) -> bool:
        w = tuple(int(x) for x in w)
        if w in self._rigid:
            return self._rigid[w]
        if not self.contains(w):
            raise NotInTropicalVariety(f"{w} is not in the tropical variety")
        J = self.initial(w)
        if J.is_zero:
            # the full torus: no perturbation ever changes the initial ideal
            result = False
        else:
            basis = homogeneity_space(J, self.budget)
            result = len(basis) == 1
        self._rigid[w] = result
        return result


def trop_contains(ideal: Ideal, w, budget=None) -> bool:
    """True iff the saturated initial ideal at w is proper."""
    return TropicalEngine(ideal, budget).contains(w)


def is_rigid(ideal: Ideal, w, budget=None) -> bool:
    """True iff the homogeneity space of init_w is exactly one line."""
    return TropicalEngine(ideal, budget).is_rigid(w)


def find_rigid_rays(ideal: Ideal, bound: int = 3, budget=None, engine=None):
    """All rigid rays with coordinates in [-bound, bound], exhaustively.

    Only primitive vectors are tested; the result is labeled exhaustive
    within the bound (rays with larger coordinates are not found).
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    eng = engine or TropicalEngine(ideal, budget)
    p = ideal.nvars
    warnings.warn(
        "rigidity assumes connected boundary strata (not verified)",
        ConnectednessAssumed,
        stacklevel=2,
    )
    rays = []
    for w in product(range(-bound, bound + 1), repeat=p):
        if not any(w) or vec_gcd(w) != 1:
            continue
        if eng.contains(w) and eng.is_rigid(w):
            rays.append(Ray(v=w, rigid=True, source="searched"))
    return sorted(rays, key=lambda r: r.v)


def critical_slopes(rays) -> list:
    """Projective hyperplanes orthogonal to the rays, deduplicated up to
    sign of the normal."""
    out = []
    seen = set()
    for ray in rays:
        h = SlopeHyperplane(normal=ray.v)
        if h not in seen:
            seen.add(h)
            out.append(h)
    return sorted(out, key=lambda h: h.normal)


def _stratum_vars(p):
    return tuple(f"u{i}" for i in range(1, p))


def stratum_model(ideal: Ideal, ray: Ray, budget=None, engine=None, variant=0) -> StratumModel:
    """Quotient of V(init_w) by the one-parameter subgroup of the ray.

    A unimodular change of torus coordinates straightens the ray to e1;
    the initial ideal becomes homogeneous in the first new variable, which
    is then set to 1.
    """
    eng = engine or TropicalEngine(ideal, budget)
    if not eng.contains(ray.v):
        raise NotInTropicalVariety(f"{ray.v} is not in the tropical variety")
    J = eng.initial(ray.v)
    p = ideal.nvars
    B = unimodular_variant(unimodular_completion(ray.v), variant)
    U = [[int(x) for x in row] for row in inverse(B)]
    new_vars = _stratum_vars(p)
    gens = []
    for g in J.gens:
        t = g.apply_exponent_map(B).laurent_normalize()
        firsts = {e[0] for e in t.terms}
        assert len(firsts) <= 1, "initial form must be homogeneous along the ray"
        dropped = Polynomial({e[1:]: c for e, c in t.terms.items()}, new_vars)
        if not dropped.is_zero:
            gens.append(dropped)
    return StratumModel(
        ideal=Ideal(gens, new_vars),
        transform=tuple(tuple(row) for row in U),
    )


def stratum_euler_char(
    ideal: Ideal, ray: Ray, rng=None, budget=None, engine=None, variant=0
) -> int:
    """Euler characteristic of the open boundary stratum of the ray,
    via the signed generic critical-point count on the stratum."""
    from .mle import torus_euler_characteristic

    model = stratum_model(ideal, ray, budget, engine, variant)
    return torus_euler_characteristic(model.ideal, rng=rng, budget=budget)


def certify_escape_direction(ideal: Ideal, ray: Ray, alpha, rng=None, budget=None, engine=None) -> bool:
    """Certificate that the ray is an escape direction for generic data on
    its slope hyperplane: requires rigidity and a nonzero stratum Euler
    characteristic."""
    alpha = tuple(Fraction(a) for a in alpha)
    if dot(alpha, ray.v) != 0:
        raise AlphaNotOnHyperplane(
            f"data vector {alpha} is not orthogonal to the ray {ray.v}"
        )
    eng = engine or TropicalEngine(ideal, budget)
    if not eng.contains(ray.v):
        raise NotInTropicalVariety(f"{ray.v} is not in the tropical variety")
    if not eng.is_rigid(ray.v):
        return False
    return stratum_euler_char(ideal, ray, rng=rng, budget=budget, engine=eng) != 0


def weighted_ray_sum(ideal: Ideal, rays, rng=None, budget=None, engine=None):
    """Sum of stratum Euler characteristics times ray vectors (reported,
    not asserted; vanishes in every worked example)."""
    if not rays:
        return tuple(0 for _ in range(ideal.nvars))
    eng = engine or TropicalEngine(ideal, budget)
    total = [0] * ideal.nvars
    for ray in rays:
        chi = stratum_euler_char(ideal, ray, rng=rng, budget=budget, engine=eng)
        for i, x in enumerate(ray.v):
            total[i] += chi * x
    return tuple(total)
