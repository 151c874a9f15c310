"""Variable-count reduction maps that preserve transcendence degree.

Two constructions, both substituting curve points parameterized by a prime
modulus p and a field element c:

* KroneckerMap (kind "phi"): keeps a chosen r-subset of the variables alive
  as z_1..z_r and pins every dropped variable to the constant c^(D^j mod p),
  j being the position among the dropped variables.  Works over any field.
* VandermondeMap (kind "psi"): sends every variable to an affine-linear
  polynomial in z_0..z_r whose coefficients are powers of c with exponents
  reduced mod p.  Needs the characteristic to be zero or larger than
  delta^r, but also preserves the structure of depth-4 circuits, which the
  Kronecker map does not.

The search helpers enumerate candidates in a fixed order (p ascending over
primes, c ascending, variable subsets in lexicographic order) and certify
each candidate by recomputing the transcendence degree of the images, so a
returned map is correct regardless of which lemma motivated the parameter
ranges.  ParamSchedule packages the closed-form parameter sizes used by the
certified enumeration bounds; the integers are astronomically large for all
but toy inputs, which is why the searches default to adaptive mode.
"""

from __future__ import annotations

import itertools

from .fields import FieldError, FieldSpec
from .independence import TrdegCertificate, jacobian_rank, trdeg
from .polynomials import SparsePoly
from .primes import iter_primes


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("ceil_log2 needs a positive integer")
    return (x - 1).bit_length()


class SearchExhausted(RuntimeError):
    """Candidate enumeration hit its bound without certifying a map."""


class ParamSchedule:
    """Closed-form parameter sizes for one reduction family.

    kind is "sparse-char0", "any-char", or "depth4".  h1_size bounds the c
    sample, h2_size the per-axis evaluation grid, p_max the prime range.
    provenance labels these as the exact closed-form values; searches that
    shrink them for practicality label their own results "adaptive".
    """

    __slots__ = ("kind", "r", "D1", "D2", "p_max", "h1_size", "h2_size", "params", "provenance")

    def __init__(self, kind, r, D1, D2, p_max, h1_size, h2_size, params):
        self.kind = kind
        self.r = r
        self.D1 = D1
        self.D2 = D2
        self.p_max = p_max
        self.h1_size = h1_size
        self.h2_size = h2_size
        self.params = dict(params)
        self.provenance = "exact-" + kind

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "r": self.r,
            "D1": self.D1,
            "D2": self.D2,
            "p_max": self.p_max,
            "h1_size": self.h1_size,
            "h2_size": self.h2_size,
            "params": self.params,
            "provenance": self.provenance,
        }

    def __repr__(self):
        return "ParamSchedule(kind=%r, r=%d)" % (self.kind, self.r)


def conjectured_rank_bound(delta: int, k: int, s: int) -> int:
    # speculative small alternative to the proven k*s; opt-in only, results
    # derived from it are never labeled certified
    return max(1, delta * k * ceil_log2(s + 1))


def schedule(
    kind: str,
    *,
    n: int,
    delta: int,
    r: int | None = None,
    d: int | None = None,
    ell: int | None = None,
    k: int | None = None,
    s: int | None = None,
    conjecture_R: bool = False,
) -> ParamSchedule:
    """Parameter sizes for the certified enumeration of each family."""
    if n < 1 or delta < 1:
        raise ValueError("need n >= 1 and delta >= 1")
    if kind == "sparse-char0":
        if r is None or d is None or ell is None:
            raise ValueError("sparse-char0 needs r, d, and ell")
        if r < 1 or d < 0 or ell < 1:
            raise ValueError("bad sparse-char0 sizes")
        D1 = (2 * delta * n) ** (r + 1)
        D2 = 2
        lg = ceil_log2(D1)
        p_max = (2 * n * r * ell) ** (2 * (r + 1)) * lg * lg + 1
        return ParamSchedule(
            kind,
            r,
            D1,
            D2,
            p_max,
            delta * r * p_max,
            d + 1,
            {"n": n, "delta": delta, "r": r, "d": d, "ell": ell},
        )
    if kind == "any-char":
        if r is None or d is None:
            raise ValueError("any-char needs r and d")
        if r < 1 or d < 0:
            raise ValueError("bad any-char sizes")
        D = delta ** (r + 1) + 1
        lg = ceil_log2(D)
        p_max = (n + delta ** r) ** (8 * delta ** (r + 1)) * lg * lg + 1
        return ParamSchedule(
            kind,
            r,
            D,
            None,
            p_max,
            delta ** r * r * p_max,
            d + 1,
            {"n": n, "delta": delta, "r": r, "d": d},
        )
    if kind == "depth4":
        if k is None or s is None:
            raise ValueError("depth4 needs k and s")
        if k < 2 or s < 1:
            raise ValueError("bad depth4 sizes")
        if k == 2:
            rr = 1
        elif r is not None:
            rr = r
        elif conjecture_R:
            rr = conjectured_rank_bound(delta, k, s)
        else:
            rr = k * s
        D1 = (2 * delta * n) ** (2 * rr)
        D2 = delta + 1
        lg = ceil_log2(D1)
        p_max = (
            2 ** (2 * (k + 1))
            * (2 * k * rr * s * n * delta ** 2) ** (8 * delta ** 2 + 4 * delta * rr)
            * lg
            * lg
            + 1
        )
        h1 = 2 ** (k + 2) * k ** 2 * rr * s ** 2 * delta ** 4 * p_max
        return ParamSchedule(
            kind,
            rr,
            D1,
            D2,
            p_max,
            h1,
            delta * s + 1,
            {
                "n": n,
                "delta": delta,
                "k": k,
                "s": s,
                "conjectured": bool(conjecture_R and k != 2 and r is None),
            },
        )
    raise ValueError("unknown schedule kind %r" % (kind,))


class KroneckerMap:
    """x_i -> z_(position in I) for i in I, else the constant c^(D^j mod p)
    where j counts the dropped variable's position (1-based)."""

    __slots__ = ("field", "n", "r", "kept", "D", "p", "c", "_images")

    def __init__(self, field: FieldSpec, n: int, r: int, kept, D: int, p: int, c):
        kept = tuple(sorted(kept))
        if not (1 <= r <= n):
            raise ValueError("need 1 <= r <= n")
        if len(kept) != r or len(set(kept)) != r:
            raise ValueError("kept must be r distinct variable indices")
        if any(i < 1 or i > n for i in kept):
            raise ValueError("kept indices are 1-based in [1, n]")
        if D < 2 or p < 2:
            raise ValueError("need D >= 2 and p >= 2")
        c = field.normalize(c)
        if field.is_zero(c):
            raise ValueError("c must be nonzero")
        self.field = field
        self.n = n
        self.r = r
        self.kept = kept
        self.D = D
        self.p = p
        self.c = c
        self._images = None

    def constants(self):
        """Per-variable substitution constants; None marks a kept variable."""
        field = self.field
        kept_set = set(self.kept)
        out = []
        j = 0
        for i in range(1, self.n + 1):
            if i in kept_set:
                out.append(None)
            else:
                j += 1
                out.append(field.pow(self.c, pow(self.D, j, self.p)))
        return out

    def images(self):
        if self._images is None:
            field = self.field
            pos = {v: t for t, v in enumerate(self.kept)}
            imgs = []
            for i, const in enumerate(self.constants(), start=1):
                if const is None:
                    imgs.append(SparsePoly.variable(field, self.r, pos[i]))
                else:
                    imgs.append(SparsePoly.constant(field, self.r, const))
            self._images = tuple(imgs)
        return self._images

    def apply(self, f: SparsePoly) -> SparsePoly:
        if f.field != self.field or f.nvars != self.n:
            raise ValueError("polynomial ring does not match the map")
        return f.substitute(self.images())

    def point_images(self, a):
        """The x-space point this map sends the z-point a to."""
        if len(a) != self.r:
            raise ValueError("expected a point with %d coordinates" % self.r)
        pos = {v: t for t, v in enumerate(self.kept)}
        out = []
        for i, const in enumerate(self.constants(), start=1):
            out.append(self.field.normalize(a[pos[i]]) if const is None else const)
        return tuple(out)

    def to_json_dict(self) -> dict:
        return {
            "kind": "phi",
            "field": self.field.to_json(),
            "n": self.n,
            "r": self.r,
            "I": list(self.kept),
            "D": self.D,
            "p": self.p,
            "c": self.field.scalar_to_json(self.c),
        }

    def __repr__(self):
        return "KroneckerMap(n=%d, r=%d, I=%s, D=%d, p=%d)" % (
            self.n,
            self.r,
            list(self.kept),
            self.D,
            self.p,
        )


class VandermondeMap:
    """x_i -> c^(D1^i mod p) + c^(D2^i mod p) z_0 + sum_j c^(i (n+1)^j mod p) z_j."""

    __slots__ = ("field", "n", "r", "D1", "D2", "p", "c", "_rows")

    def __init__(self, field: FieldSpec, n: int, r: int, D1: int, D2: int, p: int, c):
        if n < 1 or r < 1:
            raise ValueError("need n >= 1 and r >= 1")
        if D1 < 2 or D2 < 2 or p < 2:
            raise ValueError("need D1, D2, p >= 2")
        c = field.normalize(c)
        if field.is_zero(c):
            raise ValueError("c must be nonzero")
        self.field = field
        self.n = n
        self.r = r
        self.D1 = D1
        self.D2 = D2
        self.p = p
        self.c = c
        self._rows = None

    @property
    def nvars_out(self) -> int:
        return self.r + 1

    def coefficient_rows(self):
        """Row i (1-based variable index): (constant, coef of z_0, ..., z_r)."""
        if self._rows is None:
            field = self.field
            base = self.n + 1
            rows = []
            for i in range(1, self.n + 1):
                row = [field.pow(self.c, pow(self.D1, i, self.p))]
                row.append(field.pow(self.c, pow(self.D2, i, self.p)))
                for j in range(1, self.r + 1):
                    e = (i * pow(base, j, self.p)) % self.p
                    row.append(field.pow(self.c, e))
                rows.append(tuple(row))
            self._rows = tuple(rows)
        return self._rows

    def images(self):
        field = self.field
        w = self.nvars_out
        imgs = []
        for row in self.coefficient_rows():
            terms = {(0,) * w: row[0]}
            for t in range(w):
                exps = tuple(1 if q == t else 0 for q in range(w))
                terms[exps] = row[t + 1]
            imgs.append(SparsePoly(field, w, terms))
        return tuple(imgs)

    def apply(self, f: SparsePoly) -> SparsePoly:
        if f.field != self.field or f.nvars != self.n:
            raise ValueError("polynomial ring does not match the map")
        return f.substitute(self.images())

    def point_images(self, a):
        """The x-space point this map sends the z-point a to."""
        if len(a) != self.nvars_out:
            raise ValueError("expected a point with %d coordinates" % self.nvars_out)
        field = self.field
        a = [field.normalize(v) for v in a]
        out = []
        for row in self.coefficient_rows():
            acc = row[0]
            for t, av in enumerate(a):
                acc = field.add(acc, field.mul(row[t + 1], av))
            out.append(acc)
        return tuple(out)

    def to_json_dict(self) -> dict:
        return {
            "kind": "psi",
            "field": self.field.to_json(),
            "n": self.n,
            "r": self.r,
            "D1": self.D1,
            "D2": self.D2,
            "p": self.p,
            "c": self.field.scalar_to_json(self.c),
        }

    def __repr__(self):
        return "VandermondeMap(n=%d, r=%d, D1=%d, D2=%d, p=%d)" % (
            self.n,
            self.r,
            self.D1,
            self.D2,
            self.p,
        )


def map_from_json_dict(obj) -> "KroneckerMap | VandermondeMap":
    field = FieldSpec.from_json(obj["field"])
    kind = obj.get("kind")
    if kind == "phi":
        return KroneckerMap(
            field,
            obj["n"],
            obj["r"],
            obj["I"],
            obj["D"],
            obj["p"],
            field.scalar_from_json(obj["c"]),
        )
    if kind == "psi":
        return VandermondeMap(
            field,
            obj["n"],
            obj["r"],
            obj["D1"],
            obj["D2"],
            obj["p"],
            field.scalar_from_json(obj["c"]),
        )
    raise ValueError("unknown map kind %r" % (kind,))


class FaithfulResult:
    """A certified reduction: trdeg of the images equals trdeg of the inputs."""

    __slots__ = ("map", "input_cert", "image_cert", "candidates_tried")

    def __init__(self, mp, input_cert, image_cert, candidates_tried):
        self.map = mp
        self.input_cert = input_cert
        self.image_cert = image_cert
        self.candidates_tried = candidates_tried

    def to_json_dict(self) -> dict:
        return {
            "map": self.map.to_json_dict(),
            "input_certificate": self.input_cert.to_json_dict(),
            "image_certificate": self.image_cert.to_json_dict(),
            "candidates_tried": self.candidates_tried,
        }


def _family_sizes(fs):
    delta = max(1, max((f.degree() or 0) for f in fs))
    ell = max(1, max(f.num_terms() for f in fs))
    return delta, ell


def _c_candidates(field: FieldSpec, budget: int):
    # lazy on purpose: exact-mode budgets are far too large to materialize
    if field.kind == "prime":
        budget = min(budget, field.p - 1)
    v = 1
    while v <= budget:
        yield field.from_int(v)
        v += 1


def _certify(fs, mp, r0: int, seed: int):
    imgs = [mp.apply(f) for f in fs]
    ch = imgs[0].field.characteristic
    if ch == 0 or ch >= (1 << 20):
        # Evaluated-rank screen.  A faithful candidate shows rank r0 at a
        # random point with overwhelming probability over a big field, so a
        # candidate that misses r0 on every sampled point is rejected without
        # paying for symbolic elimination; the next candidate takes its turn.
        if jacobian_rank(imgs, method="randomized", seed=seed, trials=4) < r0:
            return None
    cert = trdeg(imgs, mode="auto", seed=seed, upper_bound=r0)
    if cert.exact and cert.r == r0:
        return cert
    return None


def search_kronecker_map(
    fs,
    r: int | None = None,
    mode: str = "adaptive",
    seed: int = 0,
) -> FaithfulResult:
    """Smallest certified Kronecker substitution for the family fs.

    Candidates are tried with p ascending over primes, then c ascending,
    then the kept subset I in lexicographic order; the first candidate whose
    images provably keep the transcendence degree wins.  Exact mode widens
    the per-prime c sample to the full closed-form h1 budget.  Works in any
    characteristic.  Raises SearchExhausted past the closed-form p bound.
    """
    if mode not in ("adaptive", "exact"):
        raise ValueError("mode must be adaptive or exact")
    if not fs:
        raise ValueError("need at least one polynomial")
    field = fs[0].field
    n = fs[0].nvars
    input_cert = trdeg(fs, mode="auto", seed=seed)
    r0 = input_cert.r
    if r is None:
        r = max(1, r0)
    if r < r0:
        raise ValueError("r=%d below the input transcendence degree %d" % (r, r0))
    if r > n:
        raise ValueError("r cannot exceed the number of variables")
    delta, _ = _family_sizes(fs)
    d = max((f.degree() or 0) for f in fs)
    sched = schedule("any-char", n=n, delta=delta, r=r, d=d)
    D = delta ** (r + 1) + 1
    tried = 0
    for p in iter_primes():
        if p > sched.p_max:
            break
        budget = sched.h1_size if mode == "exact" else max(1, delta ** r * r * p)
        for c in _c_candidates(field, budget):
            for kept in itertools.combinations(range(1, n + 1), r):
                mp = KroneckerMap(field, n, r, kept, D, p, c)
                tried += 1
                cert = _certify(fs, mp, r0, seed)
                if cert is not None:
                    return FaithfulResult(mp, input_cert, cert, tried)
    raise SearchExhausted(
        "no certified Kronecker map after %d candidates (p bound %d)"
        % (tried, sched.p_max)
    )


def search_vandermonde_map(
    fs,
    r: int | None = None,
    mode: str = "adaptive",
    seed: int = 0,
) -> FaithfulResult:
    """Certified Vandermonde-style reduction for the family fs.

    Requires characteristic zero or larger than delta^r.  Candidate order is
    p ascending over primes, then c ascending.  Adaptive mode uses the
    smallest D1, D2 the faithfulness argument allows; exact mode uses the
    closed-form schedule values.  Raises SearchExhausted past the p bound.
    """
    if mode not in ("adaptive", "exact"):
        raise ValueError("mode must be adaptive or exact")
    if not fs:
        raise ValueError("need at least one polynomial")
    field = fs[0].field
    n = fs[0].nvars
    input_cert = trdeg(fs, mode="auto", seed=seed)
    r0 = input_cert.r
    if r is None:
        r = max(1, r0)
    if r < r0:
        raise ValueError("r=%d below the input transcendence degree %d" % (r, r0))
    delta, ell = _family_sizes(fs)
    ch = field.characteristic
    if ch != 0 and ch <= delta ** max(1, r0):
        raise FieldError(
            "Vandermonde reduction needs characteristic 0 or > delta^r "
            "(char %d, delta %d, r %d)" % (ch, delta, r0)
        )
    d = max((f.degree() or 0) for f in fs)
    sched = schedule("sparse-char0", n=n, delta=delta, r=r, d=d, ell=ell)
    if mode == "exact":
        D1, D2 = sched.D1, sched.D2
    else:
        D1 = max(delta * r + 1, (n + 1) ** (r + 1))
        D2 = 2
    tried = 0
    for p in iter_primes():
        if p > sched.p_max:
            break
        budget = sched.h1_size if mode == "exact" else max(1, delta * r * p)
        for c in _c_candidates(field, budget):
            mp = VandermondeMap(field, n, r, D1, D2, p, c)
            tried += 1
            cert = _certify(fs, mp, r0, seed)
            if cert is not None:
                return FaithfulResult(mp, input_cert, cert, tried)
    raise SearchExhausted(
        "no certified Vandermonde map after %d candidates (p bound %d)"
        % (tried, sched.p_max)
    )
