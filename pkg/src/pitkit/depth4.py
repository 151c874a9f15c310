"""Structure of depth-4 powered-product circuits.

A Depth4Circuit is a sum of k products of sparse factors of degree at most
delta.  Everything here revolves around the gcd/simple decomposition: pull
out the largest common divisor of the k products, rewrite what remains over
a pairwise-coprime basis, and measure the circuit by the transcendence
degree of that remainder's factors (its rank).  Reductions to few variables
are certified per candidate, never assumed from the parameter ranges.
"""

from __future__ import annotations

import itertools

from .circuits import DEFAULT_EXPAND_BUDGET, Depth4Circuit
from .independence import jacobian_rank, trdeg
from .polynomials import (
    BudgetExceeded,
    SparsePoly,
    divide_exact,
    divides,
    gcd_poly,
    normalize_monic,
)
from .primes import iter_primes
from .varmaps import SearchExhausted, VandermondeMap, _c_candidates, schedule


class CoprimeBasis:
    """Pairwise-coprime monic generators for the factors of a circuit.

    row_exponents[i][b] is the multiplicity of basis[b] in the product of
    row i; row_scalars[i] is the leftover constant, so row i's product is
    exactly row_scalars[i] * prod(basis[b] ** row_exponents[i][b]).
    """

    __slots__ = ("basis", "row_exponents", "row_scalars")

    def __init__(self, basis, row_exponents, row_scalars):
        self.basis = tuple(basis)
        self.row_exponents = tuple(tuple(e) for e in row_exponents)
        self.row_scalars = tuple(row_scalars)


def _refine_pairwise_coprime(polys):
    """Split the given monic polynomials until pairwise coprime.

    Replaces any pair (a, b) with a common factor g by {g, a/g, b/g}; the
    total degree of the pool strictly drops each round, so this terminates.
    """
    basis = sorted(set(polys), key=lambda f: f.sort_key())
    while True:
        replaced = False
        for ai in range(len(basis)):
            for bi in range(ai + 1, len(basis)):
                a, b = basis[ai], basis[bi]
                g = gcd_poly(a, b)
                if g.is_constant:
                    continue
                pool = set(basis)
                pool.discard(a)
                pool.discard(b)
                pool.add(g)
                qa = divide_exact(a, g)
                if not qa.is_constant:
                    pool.add(normalize_monic(qa))
                qb = divide_exact(b, g)
                if not qb.is_constant:
                    pool.add(normalize_monic(qb))
                basis = sorted(pool, key=lambda f: f.sort_key())
                replaced = True
                break
            if replaced:
                break
        if not replaced:
            return basis


def coprime_basis(C: Depth4Circuit) -> CoprimeBasis:
    field = C.field
    monic_factors = []
    for row in C.rows:
        for f in row:
            if not f.is_constant:
                monic_factors.append(normalize_monic(f))
    basis = _refine_pairwise_coprime(monic_factors)

    row_exponents = []
    row_scalars = []
    for row in C.rows:
        exps = [0] * len(basis)
        scalar = field.one()
        for f in row:
            work = f
            for bi, b in enumerate(basis):
                while divides(b, work):
                    work = divide_exact(work, b)
                    exps[bi] += 1
            if not work.is_constant:
                raise AssertionError("coprime basis failed to exhaust a factor")
            scalar = field.mul(scalar, work.constant_term())
        row_exponents.append(exps)
        row_scalars.append(scalar)
    return CoprimeBasis(basis, row_exponents, row_scalars)


def _min_exponents(cb: CoprimeBasis):
    return [min(row[b] for row in cb.row_exponents) for b in range(len(cb.basis))]


def gcd_part(C: Depth4Circuit) -> SparsePoly:
    """Monic gcd of the k row products."""
    cb = coprime_basis(C)
    mins = _min_exponents(cb)
    g = SparsePoly.one(C.field, C.nvars)
    for b, e in zip(cb.basis, mins):
        if e:
            g = g * b ** e
    return g


def simple_part(C: Depth4Circuit) -> Depth4Circuit:
    """The circuit with the row gcd divided out, re-chunked to degree delta.

    Residual basis powers b^e are emitted as factors b^q with q the largest
    power fitting the degree budget (q * deg(b) <= delta), so the result is
    again a valid circuit with the same delta.  Row scalars are folded into
    the first factor; a fully cancelled row becomes a constant factor.  A
    basis element of degree above delta cannot arise from factors of degree
    at most delta, but if it ever did the output circuit's recorded delta is
    raised to fit rather than producing an invalid circuit.
    """
    field = C.field
    cb = coprime_basis(C)
    mins = _min_exponents(cb)
    delta_out = max([C.delta] + [b.degree() for b in cb.basis])
    rows_out = []
    for exps, scalar in zip(cb.row_exponents, cb.row_scalars):
        factors = []
        for b_idx, e in enumerate(exps):
            rem = e - mins[b_idx]
            if rem <= 0:
                continue
            b = cb.basis[b_idx]
            chunk = max(1, delta_out // b.degree())
            while rem > chunk:
                factors.append(b ** chunk)
                rem -= chunk
            factors.append(b ** rem)
        if factors:
            if not field.is_zero(field.sub(scalar, field.one())):
                factors[0] = factors[0].scale(scalar)
        else:
            factors = [SparsePoly.constant(field, C.nvars, scalar)]
        rows_out.append(factors)
    return Depth4Circuit(field, C.nvars, delta_out, rows_out)


def is_minimal(
    C: Depth4Circuit,
    zero_test: str = "expand",
    budget: int = DEFAULT_EXPAND_BUDGET,
    k_cap: int = 12,
    max_points=None,
    R=None,
) -> bool:
    """True when no proper nonempty subset of the rows sums to zero.

    Checks the 2^k - 2 proper subsets smallest first and stops at the first
    vanishing one.  zero_test "expand" decides each subset by exact
    expansion; "hitting-set" runs the subset through the depth-4 hitting set
    instead (R optionally overriding its rank bound) and raises if that
    enumeration is cut off by max_points.
    """
    if zero_test not in ("expand", "hitting-set"):
        raise ValueError("zero_test must be 'expand' or 'hitting-set'")
    if C.k > k_cap:
        raise ValueError("k=%d exceeds the subset cap %d" % (C.k, k_cap))
    # size-1 subsets are single products of nonzero factors, never zero
    for size in range(2, C.k):
        for I in itertools.combinations(range(C.k), size):
            sub = C.subcircuit(I)
            if zero_test == "expand":
                if sub.expand(budget).is_zero:
                    return False
            else:
                from . import hitting  # deferred, hitting imports this module

                hs = hitting.hitting_set_depth4(
                    C.field, C.nvars, C.delta, sub.k, sub.s, R=R,
                    mode="adaptive", circuit=sub,
                )
                verdict = hitting.pit(sub.oracle(), hs, max_points=max_points)
                if verdict.outcome == "inconclusive":
                    raise BudgetExceeded(
                        "hitting-set minimality check cut off by max_points"
                    )
                if verdict.outcome == "zero":
                    return False
    return True


def rank(C: Depth4Circuit, seed: int = 0) -> int:
    """Transcendence degree of the circuit's factor set Sp(C)."""
    facs = C.sparse_factors()
    cert = trdeg(facs, mode="auto", seed=seed)
    if not cert.exact:
        raise BudgetExceeded("rank computation fell back to an inexact certificate")
    return cert.r


def verify_simple_preservation(
    C: Depth4Circuit, mp: VandermondeMap, budget: int = DEFAULT_EXPAND_BUDGET
) -> bool:
    """Does mapping commute with taking simple parts on this circuit?

    Compares the image of simple_part(C) with simple_part of the image
    circuit, as polynomials up to monic normalization.  The map must satisfy
    D1 >= 2*delta^2 + 1 and D1 >= D2 >= delta + 1, the regime in which
    preservation can hold at all for degree-delta factors.
    """
    delta = C.delta
    if mp.D1 < 2 * delta * delta + 1 or mp.D2 < delta + 1 or mp.D1 < mp.D2:
        raise ValueError("map parameters below the preservation thresholds")
    if mp.n != C.nvars or mp.field != C.field:
        raise ValueError("map does not match the circuit ring")

    def image_circuit(circ):
        rows = [[mp.apply(f) for f in row] for row in circ.rows]
        return Depth4Circuit(mp.field, mp.nvars_out, delta, rows)

    sim = simple_part(C)
    try:
        lhs = image_circuit(sim).expand(budget)
        rhs = simple_part(image_circuit(C)).expand(budget)
    except ValueError:
        # the map killed a factor; preservation is certainly broken
        return False
    return normalize_monic(lhs) == normalize_monic(rhs)


def lift_identity(C: Depth4Circuit, delta_target: int) -> Depth4Circuit:
    """Replace each variable of a depth-3 circuit by a product of fresh ones.

    x_i becomes x_{i,1} * ... * x_{i,delta_target} over n*delta_target
    variables, turning linear factors into degree-delta_target factors.  The
    lift is zero iff C is zero: one direction is substitution, the other
    sets x_{i,1} = x_i and the remaining fresh variables to 1.
    """
    if C.delta != 1:
        raise ValueError("lift_identity expects a depth-3 circuit (delta = 1)")
    t = delta_target
    if t < 1:
        raise ValueError("delta_target must be at least 1")
    if t == 1:
        return C
    field = C.field
    n = C.nvars
    images = []
    for i in range(n):
        exps = [0] * (n * t)
        for u in range(t):
            exps[i * t + u] = 1
        images.append(SparsePoly.monomial(field, n * t, exps, field.one()))
    rows = [[f.substitute(images) for f in row] for row in C.rows]
    return Depth4Circuit(field, n * t, t, rows)


class Depth4MapResult:
    """A certified depth-4 reduction with per-subset evidence."""

    __slots__ = ("map", "r", "evidence", "candidates_tried")

    def __init__(self, mp, r, evidence, candidates_tried):
        self.map = mp
        self.r = r
        self.evidence = list(evidence)
        self.candidates_tried = candidates_tried

    def to_json_dict(self) -> dict:
        return {
            "map": self.map.to_json_dict(),
            "r": self.r,
            "evidence": self.evidence,
            "candidates_tried": self.candidates_tried,
        }


def search_depth4_map(
    C: Depth4Circuit,
    R: int | None = None,
    mode: str = "adaptive",
    seed: int = 0,
    expand_budget: int = DEFAULT_EXPAND_BUDGET,
    conjecture_R: bool = False,
) -> Depth4MapResult:
    """A Vandermonde map certified to respect this circuit's structure.

    A candidate is accepted only if, for every nonempty subset I of the
    rows, it preserves the simple part of the subcircuit C_I and keeps the
    rank of that simple part up to the target min(rank, r).  Candidates are
    tried with p ascending over primes and c ascending; enumeration stops at
    the closed-form p bound.  r defaults to 1 for k = 2 (where it is proven
    sufficient) and k*s otherwise; conjecture_R opts into a smaller
    speculative bound.
    """
    if mode not in ("adaptive", "exact"):
        raise ValueError("mode must be adaptive or exact")
    field = C.field
    n = C.nvars
    delta = C.delta
    sched = schedule(
        "depth4", n=n, delta=delta, k=C.k, s=C.s, r=R, conjecture_R=conjecture_R
    )
    r = sched.r
    D2 = delta + 1
    if mode == "exact":
        D1 = sched.D1
    else:
        D1 = max(2 * delta * delta + 1, delta * r + 1, (n + 1) ** (r + 1), D2)

    # subset data does not depend on the candidate; compute it once
    subsets = []
    for size in range(1, C.k + 1):
        for I in itertools.combinations(range(C.k), size):
            sub = C.subcircuit(I)
            sim = simple_part(sub)
            facs = sim.sparse_factors()
            rho = trdeg(facs, mode="auto", seed=seed)
            if not rho.exact:
                raise BudgetExceeded(
                    "rank of a subcircuit's simple part is not decidable "
                    "within budget"
                )
            subsets.append((I, sub, facs, rho.r))

    tried = 0
    for p in iter_primes():
        if p > sched.p_max:
            break
        if mode == "exact":
            budget = sched.h1_size
        else:
            # keep the per-prime sample small: when a prime's residue pattern
            # is degenerate (p = 2 collapses most exponents) no c works, so
            # move on quickly instead of exhausting a lemma-sized sample
            budget = max(8, 2 * delta * C.k * C.s * r) + p
        for c in _c_candidates(field, budget):
            mp = VandermondeMap(field, n, r, D1, D2, p, c)
            tried += 1
            evidence = _certify_depth4(mp, subsets, r, seed, expand_budget)
            if evidence is not None:
                return Depth4MapResult(mp, r, evidence, tried)
    raise SearchExhausted(
        "no certified depth-4 map after %d candidates (p bound %d)"
        % (tried, sched.p_max)
    )


def _certify_depth4(mp, subsets, r, seed, expand_budget):
    # rank legs first: evaluated rank never exceeds the function-field rank,
    # which never exceeds trdeg, so meeting the target at one point already
    # proves the lower bound, and degenerate (p, c) candidates die on cheap
    # point evaluations before the gcd-heavy preservation pass below
    ch = mp.field.characteristic
    bounds = []
    for I, sub, facs, rho in subsets:
        imgs = [mp.apply(f) for f in facs]
        target = min(rho, r)
        bound = jacobian_rank(imgs, method="randomized", seed=seed, trials=4)
        if bound < target:
            if ch == 0 or ch >= (1 << 20):
                # over a big field a candidate of full image rank passes the
                # evaluated screen almost surely; treat the miss as a reject
                # and let a later candidate win
                return None
            cert = trdeg(imgs, mode="auto", seed=seed, upper_bound=rho)
            bound = cert.r
            if bound < target:
                return None
        bounds.append(bound)
    evidence = []
    for (I, sub, facs, rho), bound in zip(subsets, bounds):
        try:
            if not verify_simple_preservation(sub, mp, expand_budget):
                return None
        except ValueError:
            return None
        evidence.append(
            {
                "I": list(I),
                "rank": rho,
                "image_rank_at_least": bound,
                "simple_part_preserved": True,
            }
        )
    return evidence
