"""Exact scalar arithmetic over the rationals or a prime field GF(p).

Rational scalars are :class:`fractions.Fraction` values (arbitrary precision,
normalized sign and gcd).  Prime-field scalars are plain ints in ``[0, p)``.
All arithmetic goes through a :class:`Field` so matrix code stays agnostic.
No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

from .errors import ValidationError

Scalar = Union[int, Fraction]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field GF(p)."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValidationError(f"field modulus {self.p} is not prime", path="field.p")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.p is None else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.p is None else 1

    def coerce(self, x: Any) -> Scalar:
        """Normalize ``x`` into this field's canonical scalar representation."""
        if self.p is None:
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            raise ValidationError(f"cannot coerce {x!r} into the rationals")
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValidationError(f"cannot coerce non-integer {x} into GF({self.p})")
            x = x.numerator
        if not isinstance(x, int):
            raise ValidationError(f"cannot coerce {x!r} into GF({self.p})")
        return x % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.p is None else (-a) % self.p

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("division by zero field element")
        if self.p is None:
            return Fraction(1) / a
        return pow(a, -1, self.p)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    # --- serialization -----------------------------------------------------

    def parse_entry(self, v: Any, where: str = "entry") -> Scalar:
        """Parse a JSON matrix entry: an int, or ``"a/b"`` over the rationals."""
        if isinstance(v, bool):
            raise ValidationError(f"{where}: boolean is not a scalar", path=where)
        if isinstance(v, int):
            return self.coerce(v)
        if self.p is None and isinstance(v, str):
            parts = v.split("/")
            try:
                if len(parts) == 1:
                    return Fraction(int(parts[0]))
                if len(parts) == 2:
                    return Fraction(int(parts[0]), int(parts[1]))
            except (ValueError, ZeroDivisionError):
                pass
            raise ValidationError(f"{where}: bad rational literal {v!r}", path=where)
        raise ValidationError(f"{where}: bad scalar {v!r}", path=where)

    def entry_to_json(self, a: Scalar) -> Any:
        if self.p is not None:
            return int(a)
        if a.denominator == 1:
            return int(a)
        return f"{a.numerator}/{a.denominator}"

    def describe(self) -> dict:
        if self.p is None:
            return {"kind": "rational"}
        return {"kind": "prime", "p": self.p}

    @classmethod
    def from_json(cls, obj: Any) -> "Field":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ValidationError("field descriptor must be an object with 'kind'", path="field")
        kind = obj["kind"]
        if kind == "rational":
            return cls()
        if kind == "prime":
            p = obj.get("p")
            if not isinstance(p, int):
                raise ValidationError("prime field needs integer 'p'", path="field.p")
            return cls(p)
        raise ValidationError(f"unknown field kind {kind!r}", path="field.kind")


RATIONALS = Field()


def GF(p: int) -> Field:
    return Field(p)
