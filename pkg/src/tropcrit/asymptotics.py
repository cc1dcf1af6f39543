"""Series lifts of critical points along curves of data vectors.

A data curve alpha(t) approaching a slope hyperplane is substituted into
the symbolic critical system; branches are Laurent-series solutions in t.
Branches with nonzero valuations (escaping branches) are handled by the
valuation ansatz x_i = t^{v_i} X_i followed by clearing and, when the
t = 0 layer is degenerate, saturating by t before the Hensel lift.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from random import Random

from .errors import (
    NoConvergence,
    NotZeroDimensional,
    SingularJacobian,
    TruncationTooShort,
)
from .groebner import (
    Ideal,
    groebner_basis,
    quotient_basis,
    saturate,
    solve_degree_one,
    solve_zero_dim_numeric,
)
from .linalg import inverse
from .mle import CriticalSystem, VarietySpec
from .rings import Polynomial, dot
from .series import LaurentSeries, poly_eval_series

CURVE_VAR = "t"
DEFAULT_ORDER = 8
RESIDUAL_RTOL = 1e-10
NUMERIC_ZERO = 1e-8


class ApproximateBranch(UserWarning):
    """Branch coefficients are floating approximations."""


@dataclass(frozen=True)
class DataCurve:
    """Polynomial curve of data vectors, one component per coordinate."""

    components: tuple

    @classmethod
    def parse(cls, texts):
        return cls(tuple(Polynomial.parse(s, (CURVE_VAR,)) for s in texts))

    @property
    def p(self) -> int:
        return len(self.components)

    def value_at_zero(self):
        return tuple(c.constant_coeff() for c in self.components)

    def derivative_at_zero(self):
        return tuple(
            c.derivative(CURVE_VAR).constant_coeff() for c in self.components
        )

    def validate(self, ray=None, slopes=None, rng=None):
        """Value at t=0 on the ray's hyperplane, transverse approach, and
        a generic point off every given slope at one random rational t."""
        a0 = self.value_at_zero()
        if ray is not None:
            if dot(a0, ray.v) != 0:
                raise ValueError(
                    f"curve value {a0} at t=0 is not on the hyperplane of {ray.v}"
                )
            pairing = Polynomial.zero((CURVE_VAR,))
            for c, v in zip(self.components, ray.v):
                pairing = pairing + c * v
            slope = pairing.derivative(CURVE_VAR).constant_coeff()
            if slope == 0:
                raise ValueError("curve does not cross the hyperplane transversely")
        if slopes:
            rng = rng or Random(7)
            t0 = Fraction(rng.randint(1, 997), rng.randint(1, 997))
            val = tuple(c.evaluate({CURVE_VAR: t0}) for c in self.components)
            for h in slopes:
                if dot(h.normal, val) == 0:
                    raise ValueError(
                        f"curve is not generic: lies on {h} at t={t0}"
                    )


@dataclass
class SeriesSolution:
    """Branch of critical points as truncated Laurent series."""

    branch: tuple  # LaurentSeries per unknown
    valuations: tuple  # leading orders of the unknowns
    exact: bool
    residual_order: int  # residuals vanish (numerically) below this order


def _substitute_curve(system: CriticalSystem, curve: DataCurve):
    """Equations in (unknowns, aux, t) with the curve in the data slots."""
    if system.data_vars:
        ring = system.unknowns + system.aux + (CURVE_VAR,)
        mapping = {
            s: c.extend_ring(ring)
            for s, c in zip(system.data_vars, curve.components)
        }
        return [eq.subs_polys(mapping) for eq in system.equations], ring
    raise ValueError("series lifting needs the symbolic critical system")


def _rescale(equations, ring, valuations):
    """Substitute x_j = t^{v_j} X_j and clear the global t-power of each
    equation; the result is polynomial in (X, t)."""
    n = len(ring) - 1  # unknowns and aux, t last
    out = []
    for eq in equations:
        shifted = {}
        for e, c in eq.terms.items():
            k = e[-1] + sum(valuations[j] * e[j] for j in range(n))
            key = e[:-1] + (k,)
            shifted[key] = shifted.get(key, Fraction(0)) + c
        shifted = {e: c for e, c in shifted.items() if c}
        if not shifted:
            continue
        m0 = min(e[-1] for e in shifted)
        out.append(
            Polynomial({e[:-1] + (e[-1] - m0,): c for e, c in shifted.items()}, ring)
        )
    return out


def _jacobian_at(equations, ring, point, exact):
    """Jacobian with respect to the unknowns at (point, t=0)."""
    n = len(ring) - 1
    env = {ring[j]: point[j] for j in range(n)}
    env[CURVE_VAR] = Fraction(0) if exact else 0.0
    rows = []
    for eq in equations:
        row = []
        for j in range(n):
            row.append(eq.derivative(ring[j]).evaluate(env))
        rows.append(row)
    return rows


def _num_inverse(rows):
    import numpy as np

    m = np.array([[complex(x) for x in row] for row in rows])
    if m.shape[0] != m.shape[1]:
        return None
    if abs(np.linalg.det(m)) < 1e-12 * max(1.0, np.abs(m).max() ** m.shape[0]):
        return None
    return np.linalg.inv(m)


def _square_subsystem(equations, ring, point, exact):
    """Equations with an invertible Jacobian at the seed, or None."""
    n = len(ring) - 1
    if len(equations) < n:
        return None, None
    best = None
    for subset in combinations(range(len(equations)), n):
        eqs = [equations[i] for i in subset]
        jac = _jacobian_at(eqs, ring, point, exact)
        if exact:
            inv = inverse(jac)
            if inv is not None:
                return eqs, inv
        else:
            inv = _num_inverse(jac)
            if inv is not None:
                return eqs, inv
    return best, None


def _evaluate_residuals(equations, ring, series_env, order):
    out = []
    for eq in equations:
        out.append(poly_eval_series(eq, series_env, order + 1))
    return out


def _abs_poly(eq):
    return Polynomial({e: abs(c) for e, c in eq.terms.items()}, eq.vars)


def _abs_env(env):
    out = {}
    for name, s in env.items():
        out[name] = LaurentSeries(
            s.valuation, [abs(complex(c)) for c in s.coeffs], s.truncation_order
        )
    return out


def _residuals_vanish(equations, env, order, exact):
    """Exact residuals must be zero; floating residuals are compared to the
    magnitude of the terms feeding each coefficient."""
    failures = []
    abs_env = None if exact else _abs_env(env)
    for eq in equations:
        r = poly_eval_series(eq, env, order + 1)
        if exact:
            if not r.is_zero:
                failures.append(r.valuation)
            continue
        mag = poly_eval_series(_abs_poly(eq), abs_env, order + 1)
        for k in range(min(r.truncation_order, order + 1)):
            c = abs(complex(r.coeff(k)))
            m = abs(complex(mag.coeff(k))) if k < mag.truncation_order else 0.0
            if c > RESIDUAL_RTOL * max(1.0, m):
                failures.append(k)
                break
    return failures


def _hensel(equations, ring, seed, order, exact):
    """Order-by-order linear lift; the Jacobian at the seed must be
    invertible for the supplied (square) system."""
    import numpy as np

    n = len(ring) - 1
    eqs, inv = _square_subsystem(equations, ring, seed, exact)
    if eqs is None:
        raise SingularJacobian("no square subsystem with invertible Jacobian")
    coeffs = [[seed[j]] + [Fraction(0) if exact else 0.0] * order for j in range(n)]

    def env(upto):
        e = {
            ring[j]: LaurentSeries(0, coeffs[j][: upto + 1], upto + 1)
            for j in range(n)
        }
        e[CURVE_VAR] = LaurentSeries.t_power(1, upto + 1)
        return e

    for k in range(1, order + 1):
        residuals = _evaluate_residuals(eqs, ring, env(k), k)
        rhs = [r.coeff(k) if k < r.truncation_order else 0 for r in residuals]
        if exact:
            delta = [
                -sum(inv[i][j] * Fraction(rhs[j]) for j in range(n))
                for i in range(n)
            ]
        else:
            delta = list(-(inv @ np.array([complex(x) for x in rhs])))
        for j in range(n):
            coeffs[j][k] = delta[j]
    # final residual check against the FULL system
    failures = _residuals_vanish(equations, env(order), order, exact)
    if failures:
        raise NoConvergence(
            f"residual of order {min(failures)} does not vanish"
        )
    return coeffs


def _scale(seed):
    vals = [abs(complex(x)) for x in seed] + [1.0]
    return max(vals)


def _layer_solved(equations, ring, seed, exact) -> bool:
    """Does the seed solve the t = 0 layer (magnitude-weighted in floating
    arithmetic)?"""
    n = len(ring) - 1
    env0 = {ring[j]: seed[j] for j in range(n)}
    env0[CURVE_VAR] = Fraction(0) if exact else 0.0
    for eq in equations:
        v = eq.evaluate(env0)
        if exact:
            if v != 0:
                return False
        else:
            env_abs = {ring[j]: abs(complex(seed[j])) for j in range(n)}
            env_abs[CURVE_VAR] = 0.0
            m = _abs_poly(eq).evaluate(env_abs)
            if abs(complex(v)) > RESIDUAL_RTOL * max(1.0, abs(complex(m))):
                return False
    return True


def series_newton_lift(
    system: CriticalSystem,
    curve: DataCurve,
    seed,
    order: int = DEFAULT_ORDER,
    valuations=None,
) -> SeriesSolution:
    """Lift a t=0 seed to a truncated Laurent-series branch.

    ``seed`` holds the leading coefficients of the unknowns; escaping
    branches supply the valuation vector of the unknowns.  Rational seeds
    produce exact branches; floating seeds produce floating branches with
    a residual-based acceptance test.
    """
    equations, ring = _substitute_curve(system, curve)
    n = len(ring) - 1
    seed = tuple(seed)
    if len(seed) != n:
        raise ValueError(f"seed must give {n} leading coefficients")
    valuations = tuple(valuations) if valuations else (0,) * n
    if len(valuations) != n:
        raise ValueError(f"valuations must cover all {n} unknowns")
    exact = all(isinstance(x, (int, Fraction)) for x in seed)
    if exact:
        seed = tuple(Fraction(x) for x in seed)
    else:
        seed = tuple(complex(x) for x in seed)
        warnings.warn(
            "floating seed: branch coefficients are approximations",
            ApproximateBranch,
            stacklevel=2,
        )
    rescaled = _rescale(equations, ring, valuations)
    extra = _rescaled_saturators(system, curve, ring, valuations)
    if not _layer_solved(rescaled, ring, seed, exact):
        # degenerate t = 0 layer: saturate by t before judging the seed
        rescaled = _saturated_equations(rescaled, ring, extra)
        if not _layer_solved(rescaled, ring, seed, exact):
            raise NoConvergence("seed does not solve the initial layer")
    try:
        coeffs = _hensel(rescaled, ring, seed, order, exact)
    except SingularJacobian:
        rescaled = _saturated_equations(rescaled, ring, extra)
        if not _layer_solved(rescaled, ring, seed, exact):
            raise NoConvergence("seed does not solve the saturated layer")
        coeffs = _hensel(rescaled, ring, seed, order, exact)
    branch = []
    for j in range(n):
        series = LaurentSeries(
            valuations[j], coeffs[j], valuations[j] + order + 1
        )
        branch.append(series)
    vals = tuple(
        b.valuation if not b.is_zero else b.truncation_order for b in branch
    )
    return SeriesSolution(
        branch=tuple(branch),
        valuations=vals,
        exact=exact,
        residual_order=order + 1,
    )


_SAT_CACHE = {}


def _saturated_equations(equations, ring, extra=()):
    """Generators of the t-(and unknown-)saturated ideal of the system."""
    key = (tuple(equations), ring, tuple(extra))
    if key in _SAT_CACHE:
        return _SAT_CACHE[key]
    I = Ideal(list(equations), ring)
    n = len(ring) - 1
    I = saturate(I, Polynomial.variable(CURVE_VAR, ring))
    for j in range(n):
        I = saturate(I, Polynomial.variable(ring[j], ring))
    for f in extra:
        I = saturate(I, f)
    gens = list(I.gens)
    _SAT_CACHE[key] = gens
    return gens


def _rescaled_saturators(system, curve, ring, valuations):
    """System saturators carried through the curve substitution and the
    valuation rescaling (their vanishing loci are spurious)."""
    out = []
    for f in system.saturators:
        if system.data_vars and set(f.vars) & set(system.data_vars):
            mapping = {
                s: c.extend_ring(ring)
                for s, c in zip(system.data_vars, curve.components)
            }
            f = f.subs_polys(mapping)
        else:
            f = f.extend_ring(ring)
        [g] = _rescale([f], ring, valuations) or [None]
        if g is not None and not g.is_constant():
            out.append(g)
    return out


def branch_seeds(
    system: CriticalSystem,
    curve: DataCurve,
    valuations=None,
    rng=None,
    budget=None,
):
    """Leading coefficients of all branches with the given valuation
    ansatz: solve the t = 0 layer of the saturated rescaled system.

    Returns (exact_seeds, numeric_seeds); exact seeds are rational tuples
    (found when the layer has degree one), numeric seeds complex tuples.
    """
    rng = rng or Random(23)
    equations, ring = _substitute_curve(system, curve)
    n = len(ring) - 1
    valuations = tuple(valuations) if valuations else (0,) * n
    rescaled = _rescale(equations, ring, valuations)
    extra = _rescaled_saturators(system, curve, ring, valuations)
    gens = _saturated_equations(rescaled, ring, extra)
    if not gens:
        raise NotZeroDimensional("saturated system is trivial")
    # t = 0 layer
    layer = []
    unknown_ring = ring[:-1]
    for g in gens:
        terms = {}
        for e, c in g.terms.items():
            if e[-1] == 0:
                terms[e[:-1]] = c
        if terms:
            layer.append(Polynomial(terms, unknown_ring))
    I0 = Ideal(layer, unknown_ring)
    for j in range(n):
        I0 = saturate(I0, Polynomial.variable(unknown_ring[j], unknown_ring), budget)
    if I0.is_zero:
        raise NotZeroDimensional("t=0 layer is not zero-dimensional")
    G = groebner_basis(I0, budget=budget)
    if G.is_unit:
        return [], []
    basis = quotient_basis(G)
    if len(basis) == 1:
        return [solve_degree_one(G)], []
    numeric = solve_zero_dim_numeric(G, rng)
    # cluster duplicates (multiplicities)
    unique = []
    for s in numeric:
        if not any(
            max(abs(a - b) for a, b in zip(s, u)) < 1e-7 * _scale(s) for u in unique
        ):
            unique.append(s)
    return [], unique


def refine_seed_exact(system, curve, seed, valuations=None, bits: int = 192):
    """Newton-refine a floating seed on the exact saturated t=0 layer,
    in rational arithmetic, to roughly 2^-bits accuracy.

    Only real seeds are refined; complex seeds are returned unchanged.
    """
    if any(abs(complex(x).imag) > 1e-9 * _scale(seed) for x in seed):
        return seed
    equations, ring = _substitute_curve(system, curve)
    n = len(ring) - 1
    valuations = tuple(valuations) if valuations else (0,) * n
    rescaled = _rescale(equations, ring, valuations)
    gens = _saturated_equations(rescaled, ring)
    unknown_ring = ring[:-1]
    layer = []
    for g in gens:
        terms = {e[:-1]: c for e, c in g.terms.items() if e[-1] == 0}
        terms = {e: c for e, c in terms.items() if c}
        if terms:
            layer.append(Polynomial(terms, unknown_ring))
    x = [Fraction(complex(v).real).limit_denominator(10**12) for v in seed]
    scale = Fraction(2) ** (2 * bits)
    target = Fraction(1, 2**bits)
    for _ in range(64):
        env = dict(zip(unknown_ring, x))
        vals = [eq.evaluate(env) for eq in layer]
        if all(abs(v) < target for v in vals):
            return tuple(x)
        jac = [
            [eq.derivative(v).evaluate(env) for v in unknown_ring] for eq in layer
        ]
        sub, inv = None, None
        for subset in combinations(range(len(layer)), n):
            m = [jac[i] for i in subset]
            inv_try = inverse(m)
            if inv_try is not None:
                sub, inv = subset, inv_try
                break
        if inv is None:
            raise SingularJacobian("refinement Jacobian is singular")
        rhs = [vals[i] for i in sub]
        delta = [sum(inv[i][j] * rhs[j] for j in range(n)) for i in range(n)]
        x = [
            Fraction(round((xi - di) * scale), scale)
            for xi, di in zip(x, delta)
        ]
    raise NoConvergence("seed refinement did not reach the target accuracy")


def valuation_vector(sol: SeriesSolution, spec: VarietySpec):
    """Orders ord_t of the coordinate functions along the branch."""
    fs = spec.tuple_polys()
    unknowns = spec.unknowns
    trunc = min(b.truncation_order for b in sol.branch)
    env = dict(zip(unknowns, sol.branch))
    out = []
    for f in fs:
        val = poly_eval_series(f, env, trunc)
        if sol.exact:
            out.append(_series_order(val, True))
        else:
            mag = poly_eval_series(_abs_poly(f), _abs_env(env), trunc)
            out.append(_series_order(val, False, magnitude=mag))
    return tuple(out)


def _series_order(series: LaurentSeries, exact: bool, magnitude=None) -> int:
    """First certified-nonzero order.

    Floating coefficients are compared against the magnitude series (the
    same evaluation with absolute values): by the triangle inequality a
    computed coefficient never exceeds its magnitude bound, so the ratio
    measures cancellation.
    """
    if exact:
        if series.is_zero:
            raise TruncationTooShort(
                "series vanishes to truncation order; cannot certify its order"
            )
        return series.valuation
    for i, c in enumerate(series.coeffs):
        k = series.valuation + i
        m = abs(complex(c))
        if magnitude is not None:
            bound = (
                abs(complex(magnitude.coeff(k)))
                if k < magnitude.truncation_order
                else 0.0
            )
            bound = max(bound, 1e-300)
        else:
            # no cancellation information: fall back to a global scale
            bound = max([abs(complex(x)) for x in series.coeffs] + [1.0])
        if m > NUMERIC_ZERO * bound:
            return k
    raise TruncationTooShort("no numerically nonzero coefficient found")
