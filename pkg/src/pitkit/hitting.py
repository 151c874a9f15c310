"""Hitting sets and the blackbox identity-testing driver.

A HittingSet is a deterministic lazily-enumerated point set with a stated
guarantee:

* "certified": the closed-form construction covers the whole stated class,
  so exhausting the enumeration proves the blackbox is the zero polynomial.
* "corpus": the points come from a map certified for one concrete input
  family (adaptive mode) or from a construction whose hypotheses could not
  be met exactly (e.g. the base field has too few elements); exhausting the
  enumeration proves zeroness for inputs covered by that certificate only.

Exact-mode enumerations are complete but their closed-form sizes are
astronomically large for all but toy parameters; pit() therefore takes a
max_points cutoff and reports "inconclusive" when the stream is cut short.
"""

from __future__ import annotations

import itertools
import math

from .circuits import Depth4Circuit
from .fields import FieldSpec
from .varmaps import (
    KroneckerMap,
    VandermondeMap,
    _c_candidates,
    schedule,
    search_kronecker_map,
    search_vandermonde_map,
)
from .depth4 import search_depth4_map
from .primes import iter_primes


class HittingSet:
    """Deterministic point enumeration with a guarantee label."""

    __slots__ = ("field", "arity", "guarantee", "provenance", "size_bound", "_factory")

    def __init__(self, field, arity, guarantee, provenance, size_bound, factory):
        if guarantee not in ("certified", "corpus"):
            raise ValueError("guarantee must be 'certified' or 'corpus'")
        self.field = field
        self.arity = arity
        self.guarantee = guarantee
        self.provenance = dict(provenance)
        self.size_bound = size_bound
        self._factory = factory

    def points(self):
        """A fresh iterator over the point tuples."""
        return self._factory()


class PitVerdict:
    """Outcome of running a blackbox over a hitting set.

    outcome is "nonzero" (with a witness point and its value), "zero" (the
    enumeration was exhausted without a nonzero value; only as strong as the
    hitting set's guarantee), or "inconclusive" (cut off by max_points).
    """

    __slots__ = ("outcome", "witness", "value", "points_checked", "guarantee", "provenance")

    def __init__(self, outcome, witness, value, points_checked, guarantee, provenance):
        self.outcome = outcome
        self.witness = witness
        self.value = value
        self.points_checked = points_checked
        self.guarantee = guarantee
        self.provenance = provenance

    def to_json_dict(self, field: FieldSpec) -> dict:
        return {
            "outcome": self.outcome,
            "witness": None
            if self.witness is None
            else [field.scalar_to_json(v) for v in self.witness],
            "value": None if self.value is None else field.scalar_to_json(self.value),
            "points_checked": self.points_checked,
            "guarantee": self.guarantee,
            "provenance": self.provenance,
        }


def pit(oracle, hs: HittingSet, max_points=None) -> PitVerdict:
    """Evaluate the oracle over the hitting set until a nonzero value.

    The oracle is any callable taking one point tuple; points are consumed
    in the set's deterministic order.
    """
    field = hs.field
    checked = 0
    for pt in hs.points():
        if max_points is not None and checked >= max_points:
            return PitVerdict(
                "inconclusive", None, None, checked, hs.guarantee, hs.provenance
            )
        v = field.normalize(oracle(pt))
        checked += 1
        if not field.is_zero(v):
            return PitVerdict("nonzero", pt, v, checked, hs.guarantee, hs.provenance)
    return PitVerdict("zero", None, None, checked, hs.guarantee, hs.provenance)


def _grid_values(field: FieldSpec, want: int):
    """First `want` field elements for one grid axis, plus a truncation flag."""
    vals = field.sample_elements(want, start=0)
    return vals, len(vals) < want


def sz_grid(field: FieldSpec, values, r: int, d=None) -> HittingSet:
    """The grid values^r; certified for total degree <= d when the axis has
    more than d distinct values."""
    values = tuple(field.normalize(v) for v in values)
    if len(set(values)) != len(values):
        raise ValueError("grid values must be distinct")
    if r < 1:
        raise ValueError("r must be at least 1")
    if d is not None and len(values) <= d:
        raise ValueError("need at least d+1 grid values")
    certified = d is not None
    return HittingSet(
        field,
        r,
        "certified" if certified else "corpus",
        {
            "construction": "sz-grid",
            "axis_size": len(values),
            "arity": r,
            "degree_bound": d,
        },
        len(values) ** r,
        lambda: itertools.product(values, repeat=r),
    )


def hitting_set_sparse_inputs(
    field: FieldSpec,
    n: int,
    d: int,
    r: int,
    delta: int,
    ell: int,
    mode: str = "adaptive",
    polys=None,
    seed: int = 0,
) -> HittingSet:
    """Hitting set for degree-d compositions of ell-sparse degree-delta
    polynomials with transcendence degree r, via Vandermonde reductions.

    Exact mode streams the full closed-form family (all primes up to the
    schedule bound, the c sample, the grid); certified when the field has
    characteristic 0 or > delta^r and hosts the full grid.  Adaptive mode
    needs the concrete input family and uses its one certified map.
    """
    sched = schedule("sparse-char0", n=n, delta=delta, r=r, d=d, ell=ell)
    ch = field.characteristic
    char_ok = ch == 0 or ch > delta ** r
    if mode == "exact":
        grid, truncated = _grid_values(field, sched.h2_size)
        certified = char_ok and not truncated
        provenance = {
            "construction": "sparse-char0",
            "mode": "exact",
            "schedule": sched.to_json_dict(),
            "char_gate": char_ok,
            "grid_truncated": truncated,
        }

        def factory():
            for p in iter_primes():
                if p > sched.p_max:
                    return
                for c in _c_candidates(field, sched.h1_size):
                    mp = VandermondeMap(field, n, r, sched.D1, sched.D2, p, c)
                    for a in itertools.product(grid, repeat=r + 1):
                        yield mp.point_images(a)

        return HittingSet(
            field,
            n,
            "certified" if certified else "corpus",
            provenance,
            sched.p_max * sched.h1_size * len(grid) ** (r + 1),
            factory,
        )
    if mode == "adaptive":
        if not polys:
            raise ValueError("adaptive mode needs the concrete input family")
        found = search_vandermonde_map(polys, r=r, seed=seed)
        mp = found.map
        grid, truncated = _grid_values(field, d + 1)
        provenance = {
            "construction": "sparse-char0",
            "mode": "adaptive",
            "map": mp.to_json_dict(),
            "image_certificate": found.image_cert.to_json_dict(),
            "grid_truncated": truncated,
        }

        def factory():
            for a in itertools.product(grid, repeat=mp.r + 1):
                yield mp.point_images(a)

        return HittingSet(
            field, n, "corpus", provenance, len(grid) ** (mp.r + 1), factory
        )
    raise ValueError("mode must be 'exact' or 'adaptive'")


def hitting_set_arbitrary_char(
    field: FieldSpec,
    n: int,
    d: int,
    r: int,
    delta: int,
    mode: str = "adaptive",
    polys=None,
    seed: int = 0,
) -> HittingSet:
    """Hitting set for degree-d compositions of degree-delta polynomials of
    transcendence degree r over any characteristic, via Kronecker maps.

    The exact enumeration unions over all r-subsets of kept variables, all
    primes up to the schedule bound, and the c sample; the grid has arity r.
    """
    sched = schedule("any-char", n=n, delta=delta, r=r, d=d)
    if mode == "exact":
        grid, truncated = _grid_values(field, sched.h2_size)
        provenance = {
            "construction": "any-char",
            "mode": "exact",
            "schedule": sched.to_json_dict(),
            "grid_truncated": truncated,
        }
        subsets = list(itertools.combinations(range(1, n + 1), min(r, n)))

        def factory():
            for p in iter_primes():
                if p > sched.p_max:
                    return
                for c in _c_candidates(field, sched.h1_size):
                    for kept in subsets:
                        mp = KroneckerMap(field, n, len(kept), kept, sched.D1, p, c)
                        for a in itertools.product(grid, repeat=len(kept)):
                            yield mp.point_images(a)

        return HittingSet(
            field,
            n,
            "certified" if not truncated else "corpus",
            provenance,
            sched.p_max * sched.h1_size * len(subsets) * len(grid) ** min(r, n),
            factory,
        )
    if mode == "adaptive":
        if not polys:
            raise ValueError("adaptive mode needs the concrete input family")
        found = search_kronecker_map(polys, r=min(r, n), seed=seed)
        mp = found.map
        grid, truncated = _grid_values(field, d + 1)
        provenance = {
            "construction": "any-char",
            "mode": "adaptive",
            "map": mp.to_json_dict(),
            "image_certificate": found.image_cert.to_json_dict(),
            "grid_truncated": truncated,
        }

        def factory():
            for a in itertools.product(grid, repeat=mp.r):
                yield mp.point_images(a)

        return HittingSet(field, n, "corpus", provenance, len(grid) ** mp.r, factory)
    raise ValueError("mode must be 'exact' or 'adaptive'")


def hitting_set_depth4(
    field: FieldSpec,
    n: int,
    delta: int,
    k: int,
    s: int,
    R=None,
    mode: str = "adaptive",
    circuit: Depth4Circuit | None = None,
    seed: int = 0,
    conjecture_R: bool = False,
) -> HittingSet:
    """Hitting set for depth-4 powered products with k rows, up to s factors
    per row, factor degree at most delta.

    The reduction arity is r+1 where r is 1 for k=2, the proven k*s bound
    otherwise, or a speculative smaller bound under conjecture_R (which
    always downgrades the guarantee to "corpus").  Adaptive mode certifies a
    map against the one concrete circuit.
    """
    sched = schedule(
        "depth4", n=n, delta=delta, k=k, s=s, r=R, conjecture_R=conjecture_R
    )
    r = sched.r
    d = delta * s
    ch = field.characteristic
    char_ok = ch == 0 or ch > delta ** r
    if mode == "exact":
        grid, truncated = _grid_values(field, sched.h2_size)
        certified = char_ok and not truncated and not sched.params.get("conjectured")
        provenance = {
            "construction": "depth4",
            "mode": "exact",
            "schedule": sched.to_json_dict(),
            "char_gate": char_ok,
            "grid_truncated": truncated,
        }

        def factory():
            for p in iter_primes():
                if p > sched.p_max:
                    return
                for c in _c_candidates(field, sched.h1_size):
                    mp = VandermondeMap(field, n, r, sched.D1, sched.D2, p, c)
                    for a in itertools.product(grid, repeat=r + 1):
                        yield mp.point_images(a)

        return HittingSet(
            field,
            n,
            "certified" if certified else "corpus",
            provenance,
            sched.p_max * sched.h1_size * len(grid) ** (r + 1),
            factory,
        )
    if mode == "adaptive":
        if circuit is None:
            raise ValueError("adaptive mode needs the concrete circuit")
        found = search_depth4_map(
            circuit, R=R, seed=seed, conjecture_R=conjecture_R
        )
        mp = found.map
        grid, truncated = _grid_values(field, d + 1)
        provenance = {
            "construction": "depth4",
            "mode": "adaptive",
            "map": mp.to_json_dict(),
            "evidence": found.evidence,
            "grid_truncated": truncated,
        }

        def factory():
            for a in itertools.product(grid, repeat=mp.r + 1):
                yield mp.point_images(a)

        return HittingSet(
            field, n, "corpus", provenance, len(grid) ** (mp.r + 1), factory
        )
    raise ValueError("mode must be 'exact' or 'adaptive'")


def bad_prime_census(f, primes):
    """Primes p for which f vanishes identically modulo t^p - 1.

    f must be univariate.  Folding every exponent mod p and summing the
    coefficients per residue class computes f mod (t^p - 1) directly on the
    sparse representation.
    """
    if f.nvars != 1:
        raise ValueError("census is defined for univariate polynomials")
    field = f.field
    bad = []
    for p in primes:
        folded = {}
        for (e,), c in f.terms.items():
            q = e % p
            folded[q] = field.add(folded.get(q, field.zero()), c)
        if all(field.is_zero(v) for v in folded.values()):
            bad.append(p)
    return len(bad), bad


def bad_prime_bound(ell: int, d: int) -> int:
    """Upper bound on the number of bad primes for an ell-sparse degree-d
    univariate: each bad prime divides some exponent difference <= d, and an
    ell-sparse polynomial has fewer than ell distinct differences to cover."""
    if ell < 1 or d < 0:
        raise ValueError("need ell >= 1 and d >= 0")
    if d <= 1:
        return max(0, ell - 1)
    return max(0, int(ell * math.log2(d)) - 1)
