"""Integer fixed-point arithmetic on a 10^4 scale.

All scores and fee rates in this package are unsigned integers scaled by
PHI = 10000, giving two decimal places of percentage precision
(8376 <=> 83.76%). Division always truncates so results are
bit-reproducible across platforms; nothing in the scoring path touches
floating point.
"""

from __future__ import annotations

PHI = 10_000

# Operands are modelled as 128-bit unsigned quantities; intermediate
# products may use the full 256-bit double width. Exceeding either is a
# hard error, never a silent wrap or saturation.
MONEY_MAX = 2**128 - 1
_PRODUCT_MAX = 2**256 - 1


def mul_div(a: int, b: int, d: int) -> int:
    """floor(a * b / d) for unsigned operands.

    Shared kernel for every PHI-scaled computation.
    """
    if d <= 0:
        raise ZeroDivisionError("mul_div divisor must be positive")
    if a < 0 or b < 0:
        raise ValueError("mul_div operands must be non-negative")
    product = a * b
    if product > _PRODUCT_MAX:
        raise OverflowError("mul_div product exceeds 256-bit capacity")
    return product // d


def div_trunc(n: int, d: int) -> int:
    """Signed division truncating toward zero (contract-style semantics)."""
    if d == 0:
        raise ZeroDivisionError("division by zero")
    q = abs(n) // abs(d)
    return q if (n < 0) == (d < 0) else -q


def clamp_fp(x: int) -> int:
    """Clamp a (possibly signed) intermediate into the [0, PHI] range."""
    if x < 0:
        return 0
    if x > PHI:
        return PHI
    return x


def checked_add(a: int, b: int) -> int:
    """Add two money amounts, erroring on 128-bit overflow."""
    if a < 0 or b < 0:
        raise ValueError("money amounts must be non-negative")
    total = a + b
    if total > MONEY_MAX:
        raise OverflowError("money addition exceeds 128-bit capacity")
    return total
