"""Exact scalar arithmetic: prime fields F_p and arbitrary-precision rationals.

Raw field elements are plain Python values: canonical residues in [0, p) for a
prime field, `fractions.Fraction` in lowest terms for the rationals.  A
FieldSpec bundles arithmetic on raw values; Scalar is a thin typed wrapper for
the public surface.  Mixed-field operations are rejected everywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .primes import is_prime

# Mersenne prime 2^61 - 1; the default "62-bit class" working field.
DEFAULT_PRIME = (1 << 61) - 1


class FieldError(ValueError):
    pass


class FieldSpec:
    """A prime field F_p or the rational field Q."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p=None):
        if kind == "prime":
            if not isinstance(p, int) or p < 2:
                raise FieldError("prime field needs an integer modulus >= 2")
            if not is_prime(p):
                raise FieldError("%d is not prime" % p)
        elif kind == "rational":
            if p is not None:
                raise FieldError("rational field takes no modulus")
        else:
            raise FieldError("unknown field kind %r" % (kind,))
        self.kind = kind
        self.p = p

    # -- identity ----------------------------------------------------------

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "prime" else 0

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        if self.kind == "prime":
            return "FieldSpec(prime, p=%d)" % self.p
        return "FieldSpec(rational)"

    # -- raw-value arithmetic ----------------------------------------------

    def zero(self):
        return 0 if self.kind == "prime" else Fraction(0)

    def one(self):
        return 1 if self.kind == "prime" else Fraction(1)

    def from_int(self, a: int):
        if self.kind == "prime":
            return a % self.p
        return Fraction(a)

    def normalize(self, v):
        """Coerce an int, Fraction, or Scalar into a raw element."""
        if isinstance(v, Scalar):
            if v.field != self:
                raise FieldError("mixed-field operation rejected")
            return v.value
        if self.kind == "prime":
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    # exact rational into F_p: num * den^-1
                    return v.numerator * pow(v.denominator, -1, self.p) % self.p
                v = v.numerator
            if not isinstance(v, int):
                raise FieldError("prime-field element must be an integer")
            return v % self.p
        if isinstance(v, bool):
            raise FieldError("bool is not a field element")
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, Fraction):
            return v
        raise FieldError("rational element must be int or Fraction")

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "prime" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "prime" else a - b

    def neg(self, a):
        return (-a) % self.p if self.kind == "prime" else -a

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "prime" else a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "prime":
            return pow(a, -1, self.p)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        """a**e by square-and-multiply (builtin pow); e may be negative."""
        if self.kind == "prime":
            if e < 0:
                a = self.inv(a)
                e = -e
            return pow(a, e, self.p)
        if e < 0:
            a = self.inv(a)
            e = -e
        return a ** e

    # -- element enumeration -------------------------------------------------

    def sample_elements(self, count: int, start: int = 0):
        """The first `count` distinct elements start, start+1, ...

        Over F_p at most p (resp. p - start) values exist; the list is
        truncated to what the field can host.  Deterministic.
        """
        if self.kind == "prime":
            hi = min(start + count, self.p)
            return [v for v in range(start, hi)]
        return [Fraction(v) for v in range(start, start + count)]

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "prime":
            return {"kind": "prime", "p": self.p}
        return {"kind": "rational"}

    @staticmethod
    def from_json(obj) -> "FieldSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise FieldError("bad field object: %r" % (obj,))
        if obj["kind"] == "prime":
            return FieldSpec("prime", obj.get("p"))
        if obj["kind"] == "rational":
            return FieldSpec("rational")
        raise FieldError("unknown field kind %r" % (obj["kind"],))

    def scalar_to_json(self, v):
        """Raw element -> JSON value (int, or "num/den" string for rationals)."""
        if self.kind == "prime":
            return v
        v = self.normalize(v)
        if v.denominator == 1:
            return str(v.numerator)
        return "%d/%d" % (v.numerator, v.denominator)

    def scalar_from_json(self, obj):
        if self.kind == "prime":
            if not isinstance(obj, int):
                raise FieldError("prime-field scalar must be a JSON integer")
            return obj % self.p
        if isinstance(obj, int):
            return Fraction(obj)
        if isinstance(obj, str):
            return Fraction(obj)
        raise FieldError("rational scalar must be int or 'num/den' string")


def prime_field(p: int) -> FieldSpec:
    return FieldSpec("prime", p)


def rational_field() -> FieldSpec:
    return FieldSpec("rational")


class Scalar:
    """A field element tagged with its FieldSpec."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        self.field = field
        self.value = field.normalize(value)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError("mixed-field operation rejected")
            return other.value
        return self.field.normalize(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._coerce(other)))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._coerce(other)))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._coerce(other)))

    def __pow__(self, e):
        return Scalar(self.field, self.field.pow(self.value, e))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.normalize(other)
        except FieldError:
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return "Scalar(%r, %s)" % (self.field, self.value)
