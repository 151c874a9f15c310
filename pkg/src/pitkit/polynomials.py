"""Sparse multivariate polynomials with exact coefficients.

A SparsePoly maps exponent vectors (tuples of nonnegative ints, one slot per
variable) to nonzero raw field elements.  The monomial order used everywhere
for leading terms, canonical printing, and normalization is graded
lexicographic: compare total degree first, then the exponent tuple
lexicographically (so x1 beats x2 at equal degree).

The text format accepted and produced here looks like ``3*x1^2*x2 - x3 + 7``.
Variables are x1..xn (1-based), z0..zr (0-based, used for reduced rings), or
the single letter t for univariate images.  Parsing is whitespace-insensitive
and round-trips exactly on canonical output.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .fields import FieldError, FieldSpec


class ExactDivisionError(ArithmeticError):
    """Raised when an exact polynomial division has a remainder."""


class BudgetExceeded(RuntimeError):
    """A size budget was hit; the caller should switch strategy (e.g. PIT)."""


class ParseError(ValueError):
    pass


def gradedlex_key(exps):
    """Sort key: graded-lex, larger key = later monomial."""
    return (sum(exps), exps)


class SparsePoly:
    """Immutable-by-convention sparse polynomial over a FieldSpec."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: FieldSpec, nvars: int, terms):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean = {}
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError("exponent vector length != nvars")
            if any((not isinstance(e, int)) or e < 0 for e in exps):
                raise ValueError("exponents must be nonnegative integers")
            c = field.normalize(c)
            if not field.is_zero(c):
                clean[exps] = c
        self.field = field
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(field, nvars):
        return SparsePoly(field, nvars, {})

    @staticmethod
    def constant(field, nvars, value):
        return SparsePoly(field, nvars, {(0,) * nvars: value})

    @staticmethod
    def one(field, nvars):
        return SparsePoly.constant(field, nvars, 1)

    @staticmethod
    def variable(field, nvars, i):
        if not 0 <= i < nvars:
            raise ValueError("variable index out of range")
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return SparsePoly(field, nvars, {exps: 1})

    @staticmethod
    def monomial(field, nvars, exps, coeff=1):
        return SparsePoly(field, nvars, {tuple(exps): coeff})

    # -- basic queries ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def degree(self):
        """Total degree; None for the zero polynomial (no -inf arithmetic)."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return 0
        return max(e[i] for e in self.terms)

    def sorted_terms(self, reverse=True):
        return sorted(self.terms.items(), key=lambda t: gradedlex_key(t[0]), reverse=reverse)

    def leading_term(self):
        """(exps, coeff) of the graded-lex largest monomial; None if zero."""
        if not self.terms:
            return None
        exps = max(self.terms, key=gradedlex_key)
        return exps, self.terms[exps]

    def leading_coefficient(self):
        lt = self.leading_term()
        return None if lt is None else lt[1]

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.field.zero())

    def variables_present(self):
        seen = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    seen.add(i)
        return sorted(seen)

    def num_terms(self) -> int:
        return len(self.terms)

    # -- equality ---------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self.field, self.nvars, frozenset(self.terms.items()))
            )
        return self._hash

    def sort_key(self):
        """A total-order key for deterministic sorting of polynomial lists."""
        items = self.sorted_terms()
        flat = []
        for exps, c in items:
            if isinstance(c, Fraction):
                flat.append((exps, (c.numerator, c.denominator)))
            else:
                flat.append((exps, (c,)))
        return (self.nvars, tuple(flat))

    def _check_ring(self, other):
        if self.field != other.field:
            raise FieldError("mixed-field operation rejected")
        if self.nvars != other.nvars:
            raise ValueError("operands live in different polynomial rings")

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other):
        self._check_ring(other)
        field = self.field
        out = dict(self.terms)
        for exps, c in other.terms.items():
            acc = field.add(out.get(exps, 0), c) if self.field.kind == "prime" else (
                out.get(exps, Fraction(0)) + c
            )
            if field.is_zero(acc):
                out.pop(exps, None)
            else:
                out[exps] = acc
        return self._raw(field, self.nvars, out)

    def __neg__(self):
        field = self.field
        return self._raw(
            field, self.nvars, {e: field.neg(c) for e, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_ring(other)
        field = self.field
        out = {}
        p = field.p if field.kind == "prime" else None
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if p is not None:
                    acc = (out.get(e, 0) + c1 * c2) % p
                else:
                    acc = out.get(e, Fraction(0)) + c1 * c2
                if acc == 0:
                    out.pop(e, None)
                else:
                    out[e] = acc
        return self._raw(field, self.nvars, out)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = SparsePoly.one(self.field, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def scale(self, c):
        field = self.field
        c = field.normalize(c)
        if field.is_zero(c):
            return SparsePoly.zero(field, self.nvars)
        return self._raw(
            field, self.nvars, {e: field.mul(v, c) for e, v in self.terms.items()}
        )

    @staticmethod
    def _raw(field, nvars, terms):
        # internal: terms already canonical raw values with no zeros
        p = SparsePoly.__new__(SparsePoly)
        p.field = field
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # -- evaluation and substitution -----------------------------------------------

    def eval(self, point):
        """Evaluate at a point of raw elements (or Scalars); returns raw.

        Per-variable powers go through square-and-multiply; repeated
        exponents are cached for the duration of the call.
        """
        if len(point) != self.nvars:
            raise ValueError("point arity != nvars")
        field = self.field
        pt = [field.normalize(v) for v in point]
        cache = {}
        acc = field.zero()
        for exps, c in self.terms.items():
            v = c
            for i, e in enumerate(exps):
                if e:
                    w = cache.get((i, e))
                    if w is None:
                        w = field.pow(pt[i], e)
                        cache[(i, e)] = w
                    v = field.mul(v, w)
            acc = field.add(acc, v)
        return acc

    def derivative(self, i: int):
        """Formal partial derivative in variable i.

        The exponent multiplies into the coefficient through the field, so in
        characteristic p any term with p | e_i drops out.
        """
        if not 0 <= i < self.nvars:
            raise ValueError("variable index out of range")
        field = self.field
        out = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            c2 = field.mul(c, field.from_int(e))
            if field.is_zero(c2):
                continue
            new = exps[:i] + (e - 1,) + exps[i + 1 :]
            # distinct source monomials stay distinct after one decrement
            out[new] = c2
        return self._raw(field, self.nvars, out)

    def substitute(self, images):
        """Ring homomorphism: send variable i to images[i].

        All images must live in one common ring over the same field; the
        result lives there.  Image powers are cached across terms.
        """
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if self.nvars == 0:
            raise ValueError("cannot infer target ring; no variables")
        tf, tn = images[0].field, images[0].nvars
        for g in images:
            if g.field != tf or g.nvars != tn:
                raise ValueError("images live in different rings")
        if tf != self.field:
            raise FieldError("substitution must stay over one field")
        cache = {}

        def img_pow(i, e):
            got = cache.get((i, e))
            if got is None:
                got = images[i] ** e
                cache[(i, e)] = got
            return got

        acc = SparsePoly.zero(tf, tn)
        for exps, c in self.terms.items():
            prod = SparsePoly.constant(tf, tn, c)
            for i, e in enumerate(exps):
                if e:
                    prod = prod * img_pow(i, e)
            acc = acc + prod
        return acc

    def coeff_in(self, v: int, k: int):
        """Coefficient of x_v^k, as a polynomial in the same ring (v-degree 0)."""
        out = {}
        for exps, c in self.terms.items():
            if exps[v] == k:
                out[exps[:v] + (0,) + exps[v + 1 :]] = c
        return self._raw(self.field, self.nvars, out)

    def __repr__(self):
        return "SparsePoly(%s)" % poly_to_text(self)


# -- normalization and division ---------------------------------------------------


def normalize_monic(f: SparsePoly) -> SparsePoly:
    """Scale so the graded-lex leading coefficient is 1 (zero stays zero)."""
    if f.is_zero:
        return f
    return f.scale(f.field.inv(f.leading_coefficient()))


def divide_exact(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Return q with f = q*g, or raise ExactDivisionError.

    Leading-term division under graded-lex: when g | f the leading term of
    the running remainder is always divisible by lt(g), so the loop either
    finishes with remainder zero or proves non-divisibility.
    """
    f._check_ring(g)
    if g.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    field = f.field
    ge, gc = g.leading_term()
    ginv = field.inv(gc)
    q = {}
    r = f
    while not r.is_zero:
        re, rc = r.leading_term()
        diff = tuple(a - b for a, b in zip(re, ge))
        if any(d < 0 for d in diff):
            raise ExactDivisionError("division is not exact")
        qc = field.mul(rc, ginv)
        q[diff] = qc
        r = r - SparsePoly.monomial(field, f.nvars, diff, qc) * g
    return SparsePoly._raw(field, f.nvars, q)


def divides(g: SparsePoly, f: SparsePoly) -> bool:
    try:
        divide_exact(f, g)
        return True
    except ExactDivisionError:
        return False


def _prem(f: SparsePoly, g: SparsePoly, v: int) -> SparsePoly:
    """Pseudo-remainder of f by g with respect to variable v (deg_v g >= 1)."""
    field = f.field
    b = g.degree_in(v)
    lcg = g.coeff_in(v, b)
    while not f.is_zero:
        a = f.degree_in(v)
        if a < b:
            break
        lcf = f.coeff_in(v, a)
        shift = tuple(a - b if j == v else 0 for j in range(f.nvars))
        f = f * lcg - lcf * SparsePoly.monomial(field, f.nvars, shift) * g
    return f


def _content(f: SparsePoly, v: int) -> SparsePoly:
    """gcd of the coefficients of f viewed as a polynomial in x_v."""
    parts = [f.coeff_in(v, k) for k in range(f.degree_in(v) + 1)]
    acc = SparsePoly.zero(f.field, f.nvars)
    for part in parts:
        if not part.is_zero:
            acc = gcd_poly(acc, part)
    return acc


def gcd_poly(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Greatest common divisor, primitive Euclidean recursion on variables.

    The unique representative returned is monic under graded-lex.  Both
    arguments zero is rejected: no gcd exists.
    """
    f._check_ring(g)
    if f.is_zero and g.is_zero:
        raise ValueError("gcd of two zero polynomials is undefined")
    if f.is_zero:
        return normalize_monic(g)
    if g.is_zero:
        return normalize_monic(f)
    v = None
    for i in range(f.nvars):
        if f.degree_in(i) > 0 or g.degree_in(i) > 0:
            v = i
            break
    if v is None:
        # both nonzero constants
        return SparsePoly.one(f.field, f.nvars)
    a, b = f.degree_in(v), g.degree_in(v)
    if a == 0:
        return gcd_poly(f, _content(g, v))
    if b == 0:
        return gcd_poly(_content(f, v), g)
    cf = _content(f, v)
    cg = _content(g, v)
    d = gcd_poly(cf, cg)
    fp = divide_exact(f, cf)
    gp = divide_exact(g, cg)
    while not gp.is_zero:
        r = _prem(fp, gp, v)
        fp = gp
        gp = r if r.is_zero else divide_exact(r, _content(r, v))
    return normalize_monic(d * divide_exact(fp, _content(fp, v)))


# -- resultants ----------------------------------------------------------------------


def resultant(f: SparsePoly, g: SparsePoly, v: int) -> SparsePoly:
    """Resultant of f and g with respect to variable v.

    Sylvester matrix over the remaining variables, determinant by
    fraction-free Bareiss elimination (all interior divisions exact).
    """
    f._check_ring(g)
    a, b = f.degree_in(v), g.degree_in(v)
    if a == 0 or b == 0:
        raise ValueError("resultant needs positive degree in the variable on both sides")
    n = a + b
    field, nvars = f.field, f.nvars
    zero = SparsePoly.zero(field, nvars)
    fc = [f.coeff_in(v, a - i) for i in range(a + 1)]  # descending in v
    gc = [g.coeff_in(v, b - i) for i in range(b + 1)]
    M = []
    for i in range(b):
        row = [zero] * n
        row[i : i + a + 1] = fc
        M.append(row)
    for i in range(a):
        row = [zero] * n
        row[i : i + b + 1] = gc
        M.append(row)
    return _bareiss_det(M)


def _bareiss_det(M) -> SparsePoly:
    """Determinant of a square SparsePoly matrix, fraction-free."""
    n = len(M)
    field = M[0][0].field
    nvars = M[0][0].nvars
    M = [row[:] for row in M]
    sign = 1
    prev = SparsePoly.one(field, nvars)
    for k in range(n - 1):
        # pivot: lowest-degree nonzero entry in column k at or below row k
        piv, best = None, None
        for i in range(k, n):
            if not M[i][k].is_zero:
                d = M[i][k].degree()
                if best is None or d < best:
                    piv, best = i, d
        if piv is None:
            return SparsePoly.zero(field, nvars)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = divide_exact(M[k][k] * M[i][j] - M[i][k] * M[k][j], prev)
            M[i][k] = SparsePoly.zero(field, nvars)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


# -- Kronecker substitution --------------------------------------------------------


def kronecker(f: SparsePoly, D: int, allow_high_degree=False) -> SparsePoly:
    """Substitute x_i -> t^(D^i) (1-based i), producing a univariate poly in t.

    For deg(f) < D distinct monomials land on distinct powers of t (base-D
    digits), so no coefficients merge.  The exponent tower is plain integer
    arithmetic on exponents; nothing is ever expanded as a dense polynomial.
    """
    if D < 2:
        raise ValueError("Kronecker base D must be >= 2")
    if not allow_high_degree:
        d = f.degree()
        if d is not None and d >= D:
            raise ValueError(
                "degree %d not below Kronecker base %d (injectivity lost); "
                "pass allow_high_degree=True to override" % (d, D)
            )
    weights = [D ** (i + 1) for i in range(f.nvars)]
    out = {}
    field = f.field
    for exps, c in f.terms.items():
        e = sum(w * k for w, k in zip(weights, exps))
        if e in out:
            acc = field.add(out[e], c)
            if field.is_zero(acc):
                del out[e]
            else:
                out[e] = acc
        else:
            out[e] = c
    return SparsePoly._raw(field, 1, {(e,): c for e, c in out.items()})


# -- text format --------------------------------------------------------------------

_TOKEN_RE = re.compile(r"(\d+)|([a-z]\d*)|(\^)|(\*)|(\+)|(-)|(/)|(\S)")


def _tokenize(text: str):
    out = []
    for m in _TOKEN_RE.finditer(text):
        if m.group(8):
            raise ParseError("unexpected character %r" % m.group(8))
        out.append(m.group(0))
    return out


def _var_name(style: str, i: int) -> str:
    if style == "x":
        return "x%d" % (i + 1)
    if style == "z":
        return "z%d" % i
    if style == "t":
        return "t"
    raise ValueError("unknown variable style %r" % style)


def _var_index(style: str, name: str, nvars: int) -> int:
    if style == "t":
        if name != "t" or nvars != 1:
            raise ParseError("expected variable t")
        return 0
    head, tail = name[0], name[1:]
    if head != style or not tail:
        raise ParseError("unknown variable %r for style %r" % (name, style))
    k = int(tail)
    idx = k - 1 if style == "x" else k
    if style == "x" and (tail[0] == "0"):
        raise ParseError("x-variables are 1-based: %r" % name)
    if not 0 <= idx < nvars:
        raise ParseError("variable %r out of range for nvars=%d" % (name, nvars))
    return idx


def poly_from_text(text: str, field: FieldSpec, nvars: int, style: str = "x") -> SparsePoly:
    """Parse the canonical text format into a SparsePoly.

    Grammar: sign? term (('+'|'-') term)*, term = factor ('*' factor)*,
    factor = integer ('/' integer)? | variable ('^' integer)?.  Integer
    coefficients are reduced into the field; num/den fractions are accepted
    so canonical rational output round-trips.
    """
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial text")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        t = peek()
        pos += 1
        return t

    acc = SparsePoly.zero(field, nvars)

    def parse_factor():
        t = take()
        if t is None:
            raise ParseError("unexpected end of input")
        if t.isdigit():
            num = int(t)
            if peek() == "/":
                take()
                den = take()
                if den is None or not den.isdigit():
                    raise ParseError("bad fraction denominator")
                if field.kind == "prime":
                    val = field.div(field.from_int(num), field.from_int(int(den)))
                else:
                    val = Fraction(num, int(den))
                return ("coeff", val)
            return ("coeff", field.from_int(num))
        if t[0].isalpha():
            idx = _var_index(style, t, nvars)
            e = 1
            if peek() == "^":
                take()
                exp = take()
                if exp is None or not exp.isdigit():
                    raise ParseError("bad exponent")
                e = int(exp)
            return ("var", idx, e)
        raise ParseError("unexpected token %r" % t)

    def parse_term():
        coeff = field.one()
        exps = [0] * nvars
        while True:
            f = parse_factor()
            if f[0] == "coeff":
                coeff = field.mul(coeff, f[1])
            else:
                exps[f[1]] += f[2]
            if peek() == "*":
                take()
                continue
            break
        return tuple(exps), coeff

    sign = 1
    if peek() in ("+", "-"):
        sign = -1 if take() == "-" else 1
    while True:
        exps, coeff = parse_term()
        if sign < 0:
            coeff = field.neg(coeff)
        acc = acc + SparsePoly.monomial(field, nvars, exps, coeff)
        nxt = peek()
        if nxt is None:
            break
        if nxt not in ("+", "-"):
            raise ParseError("expected '+' or '-', got %r" % nxt)
        sign = -1 if take() == "-" else 1
    return acc


def _coeff_text(field: FieldSpec, c) -> str:
    if field.kind == "prime":
        return str(c)
    c = field.normalize(c)
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


def poly_to_text(f: SparsePoly, style: str = "x") -> str:
    """Canonical text: terms descending graded-lex, e.g. ``3*x1^2*x2 - x3 + 7``."""
    if f.is_zero:
        return "0"
    field = f.field
    parts = []
    for exps, c in f.sorted_terms():
        ctext = _coeff_text(field, c)
        negative = ctext.startswith("-")
        if negative:
            ctext = ctext[1:]
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(_var_name(style, i))
            elif e > 1:
                factors.append("%s^%d" % (_var_name(style, i), e))
        if not factors:
            body = ctext
        elif ctext == "1":
            body = "*".join(factors)
        else:
            body = ctext + "*" + "*".join(factors)
        parts.append(("-" if negative else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += (" - " if sign == "-" else " + ") + body
    return out
