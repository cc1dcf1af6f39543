"""Hyperplane-arrangement combinatorics.

Intersection lattices are computed with exact rational linear algebra.
Flacets (flats whose restriction and contraction matroids are both
connected) index the rays of the tropical variety of the complement; the
ray recipe and the Moebius-function Euler characteristic live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import NotCentral
from .linalg import make_primitive, rank
from .rings import Polynomial
from .tropical import Ray


@dataclass(frozen=True)
class Flat:
    """Closed set of hyperplane indices with the codimension of its
    intersection."""

    members: frozenset
    rank: int

    def key(self):
        return (self.rank, tuple(sorted(self.members)))


class Arrangement:
    """List of affine functionals a.x + c in n variables.

    ``projective_closure`` appends the hyperplane at infinity (always
    last) when central data is required.
    """

    def __init__(self, rows, nvars=None, projective_closure=False, vars=None):
        rows = [
            (tuple(Fraction(x) for x in coeffs), Fraction(const))
            for coeffs, const in rows
        ]
        if nvars is None:
            nvars = len(rows[0][0]) if rows else 0
        self.nvars = nvars
        self.vars = tuple(vars) if vars else tuple(f"x{i+1}" for i in range(nvars))
        for coeffs, _ in rows:
            if len(coeffs) != nvars:
                raise ValueError("functional length does not match nvars")
            if not any(coeffs):
                raise ValueError("functional must involve the variables")
        for (a1, c1), (a2, c2) in combinations(rows, 2):
            m1 = [list(a1) + [c1]]
            m2 = [list(a2) + [c2]]
            if rank(m1 + m2) == 1:
                raise ValueError("proportional functionals are not allowed")
        self.rows = rows
        self.projective_closure = bool(projective_closure)

    @property
    def size(self) -> int:
        return len(self.rows)

    def is_central(self) -> bool:
        return all(c == 0 for _, c in self.rows)

    def functional_polys(self):
        """The defining functionals as polynomials in the ambient vars."""
        out = []
        for coeffs, const in self.rows:
            terms = {}
            for i, a in enumerate(coeffs):
                if a:
                    e = [0] * self.nvars
                    e[i] = 1
                    terms[tuple(e)] = a
            if const:
                terms[(0,) * self.nvars] = const
            out.append(Polynomial(terms, self.vars))
        return out

    def central_vectors(self):
        """Linear functionals of the centralized arrangement.

        Central input passes through; otherwise the projective closure
        homogenizes each functional and appends the infinity hyperplane as
        the last vector.  Raises NotCentral when neither applies.
        """
        if self.is_central() and not self.projective_closure:
            return [list(a) for a, _ in self.rows]
        if not self.projective_closure:
            raise NotCentral(
                "affine arrangement needs projective_closure for matroid operations"
            )
        vectors = [list(a) + [c] for a, c in self.rows]
        vectors.append([Fraction(0)] * self.nvars + [Fraction(1)])
        return vectors


# -- matroid of a vector list ------------------------------------------------------


def _subset_rank(vectors, subset) -> int:
    rows = [vectors[i] for i in subset]
    return rank(rows) if rows else 0


def _closure(vectors, subset):
    r = _subset_rank(vectors, subset)
    closed = set(subset)
    for i in range(len(vectors)):
        if i not in closed and _subset_rank(vectors, list(subset) + [i]) == r:
            closed.add(i)
    return frozenset(closed)


def matroid_flats(vectors):
    """All flats of the linear matroid, as Flat records."""
    n = len(vectors)
    bottom = _closure(vectors, [])
    flats = {bottom: _subset_rank(vectors, bottom)}
    frontier = [bottom]
    while frontier:
        nxt = []
        for F in frontier:
            for e in range(n):
                if e in F:
                    continue
                G = _closure(vectors, list(F) + [e])
                if G not in flats:
                    flats[G] = _subset_rank(vectors, G)
                    nxt.append(G)
        frontier = nxt
    return sorted(
        (Flat(members=F, rank=r) for F, r in flats.items()),
        key=lambda f: f.key(),
    )


def matroid_connected(vectors, ground=None, contract=None) -> bool:
    """Connectivity of the (minor of the) linear matroid.

    ``ground`` restricts, ``contract`` contracts; matroids with at most one
    element count as connected.
    """
    contract = frozenset(contract or [])
    if ground is None:
        ground = [i for i in range(len(vectors)) if i not in contract]
    ground = sorted(set(ground) - contract)
    if len(ground) <= 1:
        return True
    base = _subset_rank(vectors, contract)

    def rk(subset):
        return _subset_rank(vectors, list(contract) + list(subset)) - base

    total = rk(ground)
    rest = ground[1:]
    for size in range(0, len(rest) + 1):
        for extra in combinations(rest, size):
            part = [ground[0]] + list(extra)
            if len(part) == len(ground):
                continue
            other = [e for e in ground if e not in part]
            if rk(part) + rk(other) == total:
                return False
    return True


# -- affine intersection lattice -------------------------------------------------------


def intersection_lattice(arr: Arrangement):
    """All nonempty intersections of subfamilies, closed and ranked,
    bottom (the ambient space) included."""
    rows = [list(a) + [c] for a, c in arr.rows]
    n = arr.nvars

    def aug_rank(subset):
        return rank([rows[i] for i in subset]) if subset else 0

    def coeff_rank(subset):
        return rank([rows[i][:n] for i in subset]) if subset else 0

    def nonempty(subset):
        return aug_rank(subset) == coeff_rank(subset)

    def closure(subset):
        if not subset:
            return frozenset()
        closed = set(subset)
        r = aug_rank(subset)
        for i in range(len(rows)):
            if i not in closed and aug_rank(list(subset) + [i]) == r:
                closed.add(i)
        return frozenset(closed)

    flats = {frozenset(): 0}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for F in frontier:
            for e in range(len(rows)):
                if e in F:
                    continue
                S = list(F) + [e]
                if not nonempty(S):
                    continue
                G = closure(S)
                if G not in flats:
                    flats[G] = coeff_rank(G)
                    nxt.append(G)
        frontier = nxt
    return sorted(
        (Flat(members=F, rank=r) for F, r in flats.items()),
        key=lambda f: f.key(),
    )


def flacets(arr: Arrangement):
    """Proper flats whose restriction and contraction are both connected."""
    vectors = arr.central_vectors()
    total_rank = rank(vectors)
    out = []
    for flat in matroid_flats(vectors):
        if flat.rank == 0 or flat.rank >= total_rank:
            continue
        if matroid_connected(vectors, ground=flat.members) and matroid_connected(
            vectors, contract=flat.members
        ):
            out.append(flat)
    return out


def flacet_rays(arr: Arrangement):
    """Ray per flacet: 0/1 incidence over the centralized hyperplanes,
    shifted by a multiple of the all-ones vector so the last coordinate
    vanishes, which is then dropped."""
    vectors = arr.central_vectors()
    q = len(vectors)
    out = []
    for flat in flacets(arr):
        inc = [1 if i in flat.members else 0 for i in range(q)]
        shift = inc[-1]
        vec = tuple(x - shift for x in inc[:-1])
        if not any(vec):
            continue
        out.append(Ray(v=make_primitive(vec), rigid=True, source="flacet"))
    return sorted(out, key=lambda r: r.v)


def chi_complement(arr: Arrangement) -> int:
    """Euler characteristic of the affine complement via the Moebius
    function of the intersection lattice (characteristic polynomial at 1)."""
    flats = intersection_lattice(arr)
    mu = {}
    for flat in flats:  # sorted by rank, so everything below comes first
        if not flat.members:
            mu[flat.members] = 1
        else:
            mu[flat.members] = -sum(
                mu[g.members] for g in flats if g.members < flat.members
            )
    return sum(mu.values())
