"""Small numeric and seeding helpers shared across the package.

All distance arithmetic in this package is exact.  Rational quantities are
`fractions.Fraction`; hot loops run on plain integers obtained by rescaling
every weight by a single per-build denominator (see `weights.py`).
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from math import gcd


def as_fraction(x) -> Fraction:
    """Convert user input to an exact Fraction.

    Floats are interpreted through their shortest decimal repr, so 0.3 means
    3/10 (not the binary float closest to it).  Strings accept both decimal
    ("0.3") and ratio ("3/10") forms.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _pow2_le(k: int, num: int, den: int) -> bool:
    """2**k <= num/den, exactly."""
    if k >= 0:
        return (den << k) <= num
    return den <= (num << -k)


def floor_log2(x: Fraction) -> int:
    """Exact floor(log2(x)) for a positive rational."""
    if x <= 0:
        raise ValueError("floor_log2 requires a positive value")
    num, den = x.numerator, x.denominator
    k = num.bit_length() - den.bit_length()  # within 1 of the answer
    while not _pow2_le(k, num, den):
        k -= 1
    while _pow2_le(k + 1, num, den):
        k += 1
    return k


def smallest_pow2_exceeding(x: Fraction) -> int:
    """Smallest integer k with 2**k > x, for a positive rational x."""
    k = floor_log2(x) + 1
    while Fraction(2) ** k <= x:  # guard against boundary slips
        k += 1
    return k


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def child_seed(*parts) -> int:
    """Derive a 64-bit seed from a parent seed and labels.

    Stable across runs and platforms; used to give every scale and phase its
    own independent RNG stream while keeping whole builds reproducible from
    one root seed.
    """
    material = "/".join(str(p) for p in parts).encode("ascii")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")
