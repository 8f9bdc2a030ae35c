"""Exponent sets, the canonical monomial mapping, and polynomial lifts.

Every polynomial mapping P: Z^k -> Z^{d0} with integer coefficients and
P(0) = 0 factors through the canonical mapping Q whose coordinates are all
monomials y^gamma, where gamma runs over the nonzero exponent vectors with
entries bounded by the degree cap.  An integer linear map L reads off the
coefficients, so that P = L o Q.  This module builds the exponent set,
evaluates Q exactly in arbitrary-precision integer arithmetic, constructs L,
and applies the anisotropic dilation that scales coordinate gamma by
t^|gamma|.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, DomainError, SizeCapError

ExponentVector = tuple[int, ...]

GAMMA_CARDINALITY_CAP = 10_000

# Coordinates of Q(y) stay exactly representable in float64 below this.
_F64_EXACT_LIMIT = 2**53


@dataclass(frozen=True)
class MultiIndexSet:
    """Nonzero exponent vectors in [0, cap]^k, lexicographically sorted.

    ``weights`` holds the total degree |gamma| of each vector, aligned with
    ``indices``; it is the diagonal of the degree matrix used by anisotropic
    dilations.
    """

    k: int
    degree_cap: int
    indices: tuple[ExponentVector, ...]
    weights: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.indices)

    def index_of(self, gamma: ExponentVector) -> int:
        try:
            return self.indices.index(tuple(gamma))
        except ValueError:
            raise DomainError(f"exponent vector {gamma!r} not in the set") from None

    def __iter__(self):
        return iter(self.indices)


@dataclass(frozen=True)
class DegreeMatrix:
    """Diagonal dilation weights: coordinate gamma scales as t^|gamma|."""

    weights: tuple[int, ...]

    @classmethod
    def from_gamma(cls, gamma: MultiIndexSet) -> "DegreeMatrix":
        return cls(weights=gamma.weights)

    @property
    def trace(self) -> int:
        return sum(self.weights)


def build_gamma(k: int, degree_cap: int, cap: int = GAMMA_CARDINALITY_CAP) -> MultiIndexSet:
    """Enumerate the exponent set for k variables and the given degree cap."""
    if k < 1 or degree_cap < 1:
        raise DomainError(f"need k >= 1 and degree_cap >= 1, got k={k}, cap={degree_cap}")
    d = (degree_cap + 1) ** k - 1
    if d > cap:
        raise SizeCapError(f"exponent set has {d} elements, above the cap {cap}")
    indices = tuple(
        g for g in itertools.product(range(degree_cap + 1), repeat=k) if any(g)
    )
    weights = tuple(sum(g) for g in indices)
    return MultiIndexSet(k=k, degree_cap=degree_cap, indices=indices, weights=weights)


def eval_canonical(y: Sequence[int], gamma: MultiIndexSet) -> tuple[int, ...]:
    """Evaluate the canonical mapping at an integer point, exactly."""
    if len(y) != gamma.k:
        raise DomainError(f"point has {len(y)} coordinates, expected {gamma.k}")
    ys = [int(v) for v in y]
    out = []
    for g in gamma.indices:
        acc = 1
        for yi, gi in zip(ys, g):
            if gi:
                acc *= yi**gi
        out.append(acc)
    return tuple(out)


def canonical_coords_int(points: Iterable[Sequence[int]], gamma: MultiIndexSet) -> list[tuple[int, ...]]:
    """Exact canonical coordinates for a batch of integer points."""
    return [eval_canonical(p, gamma) for p in points]


def canonical_coords_f64(points: np.ndarray, gamma: MultiIndexSet) -> np.ndarray:
    """Canonical coordinates as float64, for phase-sum kernels.

    Exact as long as every coordinate stays below 2^53; callers on larger
    boxes must use the exact integer path instead.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[1] != gamma.k:
        raise DomainError(f"points have {pts.shape[1]} coordinates, expected {gamma.k}")
    cols = []
    for g in gamma.indices:
        col = np.ones(len(pts))
        for j, gj in enumerate(g):
            if gj:
                col = col * pts[:, j] ** gj
        cols.append(col)
    out = np.stack(cols, axis=1)
    if np.any(np.abs(out) >= _F64_EXACT_LIMIT):
        raise SizeCapError("canonical coordinates exceed the exact float64 range")
    return out


@dataclass(frozen=True)
class PolynomialMap:
    """Integer polynomial mapping Z^k -> Z^{d0} with zero constant term.

    ``components[j]`` maps exponent vectors to integer coefficients.
    """

    k: int
    components: tuple[dict[ExponentVector, int], ...]

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("need k >= 1")
        if not self.components:
            raise DomainError("need at least one component")
        for comp in self.components:
            for g, c in comp.items():
                if len(g) != self.k:
                    raise DomainError(f"exponent vector {g!r} has wrong arity")
                if not any(g):
                    raise DomainError("constant terms are not allowed")
                if any(e < 0 for e in g):
                    raise DomainError(f"negative exponent in {g!r}")
                if not isinstance(c, int):
                    raise DomainError("coefficients must be integers")

    @property
    def d0(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        return max(sum(g) for comp in self.components for g in comp) if any(
            comp for comp in self.components
        ) else 1

    def coeff(self, j: int, gamma: ExponentVector) -> int:
        return self.components[j].get(tuple(gamma), 0)

    def __call__(self, y: Sequence[int]) -> tuple[int, ...]:
        ys = [int(v) for v in y]
        out = []
        for comp in self.components:
            acc = 0
            for g, c in comp.items():
                term = c
                for yi, gi in zip(ys, g):
                    if gi:
                        term *= yi**gi
                acc += term
            out.append(acc)
        return tuple(out)

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "components": [
                    {"terms": [{"gamma": list(g), "coeff": c} for g, c in sorted(comp.items())]}
                    for comp in self.components
                ],
            }
        )


def parse_polynomial_map(source) -> PolynomialMap:
    """Parse the JSON polynomial format.

    Accepts a JSON string or an already-decoded dict shaped like
    ``{"k": 1, "components": [{"terms": [{"gamma": [2], "coeff": 1}]}]}``.
    """
    obj = json.loads(source) if isinstance(source, (str, bytes)) else source
    try:
        k = int(obj["k"])
        comps = []
        for comp in obj["components"]:
            terms: dict[ExponentVector, int] = {}
            for term in comp["terms"]:
                g = tuple(int(e) for e in term["gamma"])
                c = int(term["coeff"])
                terms[g] = terms.get(g, 0) + c
            comps.append({g: c for g, c in terms.items() if c != 0})
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed polynomial map: {exc}") from exc
    return PolynomialMap(k=k, components=tuple(comps))


@dataclass(frozen=True)
class LiftedSystem:
    """Factorization data P = L o Q: the exponent set and the integer matrix L."""

    gamma: MultiIndexSet
    linear_map: tuple[tuple[int, ...], ...]  # d0 rows, gamma.d columns

    def __post_init__(self):
        for row in self.linear_map:
            if len(row) != self.gamma.d:
                raise DomainError("linear map width does not match the exponent set")

    @property
    def d0(self) -> int:
        return len(self.linear_map)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Apply L to an integer vector, exactly."""
        if len(v) != self.gamma.d:
            raise DomainError("vector length does not match the exponent set")
        return tuple(sum(c * int(x) for c, x in zip(row, v)) for row in self.linear_map)

    def evaluate(self, y: Sequence[int]) -> tuple[int, ...]:
        """P(y) = L(Q(y))."""
        return self.apply(eval_canonical(y, self.gamma))


def identity_lift(gamma: MultiIndexSet) -> LiftedSystem:
    """The canonical mapping viewed as a lifted system (L = identity)."""
    rows = tuple(
        tuple(1 if i == j else 0 for j in range(gamma.d)) for i in range(gamma.d)
    )
    return LiftedSystem(gamma=gamma, linear_map=rows)


def lift_polynomial_map(
    pmap: PolynomialMap, *, check_points: int = 25, check_radius: int = 6, seed: int = 7
) -> LiftedSystem:
    """Construct L with P = L o Q and verify the identity on random points."""
    gamma = build_gamma(pmap.k, pmap.degree)
    matrix = tuple(
        tuple(comp.get(g, 0) for g in gamma.indices) for comp in pmap.components
    )
    lifted = LiftedSystem(gamma=gamma, linear_map=matrix)
    rng = random.Random(seed)
    for _ in range(check_points):
        y = tuple(rng.randint(-check_radius, check_radius) for _ in range(pmap.k))
        if lifted.evaluate(y) != pmap(y):
            raise ContractError(f"lift verification failed at y={y}")
    return lifted


def as_lifted(map_like) -> LiftedSystem:
    """Normalize a mapping argument to a LiftedSystem.

    Accepts a MultiIndexSet (canonical mapping), a PolynomialMap, or an
    existing LiftedSystem.
    """
    if isinstance(map_like, LiftedSystem):
        return map_like
    if isinstance(map_like, MultiIndexSet):
        return identity_lift(map_like)
    if isinstance(map_like, PolynomialMap):
        return lift_polynomial_map(map_like)
    raise DomainError(f"cannot interpret {type(map_like).__name__} as a polynomial mapping")


def anisotropic_scale(t, degrees: DegreeMatrix | MultiIndexSet, x):
    """Apply the dilation that multiplies coordinate gamma by t^|gamma|.

    Fractions and exact integers pass through exactly; ndarray input returns
    an ndarray.
    """
    weights = degrees.weights
    if not (t > 0):
        raise DomainError(f"dilation parameter must be positive, got {t!r}")
    vals = list(x)
    if len(vals) != len(weights):
        raise DomainError("vector length does not match the degree weights")
    scaled = [t**w * v for w, v in zip(weights, vals)]
    if isinstance(x, np.ndarray):
        return np.asarray(scaled, dtype=float)
    return tuple(scaled)
