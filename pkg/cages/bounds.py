"""Moore-type lower bounds and closed-form cage orders and counts"""

import logging
from fractions import Fraction

from pydantic import BaseModel, Field

from cages.errors import ParameterError, VerificationError

logger = logging.getLogger(__name__)


class BoundsReport(BaseModel):
    """All known bounds for one (k;g,d) triple"""

    k: int = Field(description="Degree")
    g: int = Field(description="Girth")
    d: int = Field(description="Diameter")
    moore_kg: int = Field(description="Moore bound M(k,g)")
    m_prime: int = Field(description="Diameter-aware bound M'(k;g,d)")
    m_double_prime: int | None = Field(
        default=None, description="Bipartite-style bound M''(k;g,d), even g with d <= g only"
    )
    combined: int = Field(description="Best lower bound M(k;g,d)")
    exact_order: int | None = Field(default=None, description="n(k;g,d) when a closed form applies")
    exact_count: int | None = Field(default=None, description="Number of cages when a closed form applies")


def _geometric(k: int, top: int) -> int:
    return sum((k - 1) ** i for i in range(top + 1))


def moore(k: int, g: int) -> int:
    """Moore bound M(k,g); zero for g <= 0"""
    if k < 2:
        raise ParameterError(f"Moore bound needs k >= 2, got {k}")
    if g <= 0:
        return 0
    t, odd = divmod(g, 2)
    if odd:
        return 1 + k * _geometric(k, t - 1)
    return 2 * _geometric(k, t - 1)


def moore_split(k: int, g: int) -> tuple[int, int]:
    """
    Split M(k,g) for odd g into the even-layer and odd-layer sizes of the Moore tree.

    Returns:
        (M0, M1) with M0 + M1 == moore(k, g)
    """
    if g % 2 == 0 or g < 1:
        raise ParameterError(f"moore_split needs odd g >= 1, got {g}")
    t = g // 2
    m0 = 1 + k * sum((k - 1) ** (2 * i + 1) for i in range((t - 2) // 2 + 1))
    m1 = k * sum((k - 1) ** (2 * i) for i in range((t - 1) // 2 + 1))
    return m0, m1


def _check_triple(k: int, g: int, d: int) -> int:
    if k < 3 or g < 3:
        raise ParameterError(f"Need k >= 3 and g >= 3, got k={k} g={g}")
    t = g // 2
    if d < t:
        raise ParameterError(f"Diameter {d} below floor(g/2) = {t}")
    return t


def lower_bound_m_prime(k: int, g: int, d: int) -> int:
    t = _check_triple(k, g, d)
    if d <= 2 * t:
        return moore(k, g) + moore(k, 2 * d - 2 * t - 1)
    r, s = divmod(d - 2 * t - 1, g)
    return (r + 2) * moore(k, g) + moore(k, s)


def lower_bound_m_double_prime(k: int, g: int, d: int) -> int:
    t = _check_triple(k, g, d)
    if g % 2:
        raise ParameterError(f"M'' is defined for even girth only, got g={g}")
    if d > g:
        raise ParameterError(f"M'' needs d <= g, got d={d} g={g}")
    inner = 2 * d - 2 * t - 1
    if inner <= 0:
        return moore(k, g)
    return moore(k, g) + 2 * max(moore_split(k, inner))


def lower_bound(k: int, g: int, d: int) -> int:
    """The best lower bound M(k;g,d) on the order of a (k;g,d)-graph"""
    if g % 2 == 0 and g // 2 <= d <= g:
        return lower_bound_m_double_prime(k, g, d)
    return lower_bound_m_prime(k, g, d)


def exact_order_3_4(d: int) -> int:
    if d < 2:
        raise ParameterError(f"n(3;4,d) needs d >= 2, got {d}")
    if d < 5:
        return {2: 6, 3: 8, 4: 12}[d]
    bridges, j = divmod(d - 5, 4)
    return 14 + 2 * j + 6 * bridges


def exact_count_3_4(d: int) -> int:
    if d < 9:
        raise ParameterError(f"Cage count for (3;4,d) known for d >= 9, got {d}")
    return {
        1: 1,
        2: 4,
        3: 17 + d // 8,
        0: 27 + d + (d - 4) // 8,
    }[d % 4]


def exact_order_3_5(d: int) -> int:
    if d < 2:
        raise ParameterError(f"n(3;5,d) needs d >= 2, got {d}")
    if d <= 4:
        return 2 * d + 6
    return 2 * d + 10 if d % 5 in (0, 1) else 2 * d + 8


def exact_count_3_5(d: int) -> int:
    if d < 6:
        raise ParameterError(f"Cage count for (3;5,d) known for d >= 6, got {d}")
    residue = d % 5
    if residue == 1:
        return d - d // 10
    if residue in (2, 3, 4):
        return {2: 1, 3: 4, 4: 10}[residue]
    base = Fraction(128) if d % 10 == 0 else Fraction(277, 2)
    count = base + Fraction(113, 10) * d
    if count.denominator != 1:
        raise VerificationError(f"Non-integral cage count {count} for d={d}")
    return int(count)


def exact_order_k_3_3(k: int) -> int:
    if k < 3:
        raise ParameterError(f"n(k;3,3) needs k >= 3, got {k}")
    return 2 * (k + 1)


def _exact_values(k: int, g: int, d: int) -> tuple[int | None, int | None]:
    if k == 3 and g == 4:
        return exact_order_3_4(d), exact_count_3_4(d) if d >= 9 else None
    if k == 3 and g == 5:
        return exact_order_3_5(d), exact_count_3_5(d) if d >= 6 else None
    if g == 3 and d == 3:
        return exact_order_k_3_3(k), None
    return None, None


def bounds_report(k: int, g: int, d: int) -> BoundsReport:
    """Collect every bound and closed-form value known for (k;g,d)"""
    m_prime = lower_bound_m_prime(k, g, d)
    m_double_prime = None
    if g % 2 == 0 and d <= g:
        m_double_prime = lower_bound_m_double_prime(k, g, d)
    exact_order, exact_count = _exact_values(k, g, d)
    report = BoundsReport(
        k=k,
        g=g,
        d=d,
        moore_kg=moore(k, g),
        m_prime=m_prime,
        m_double_prime=m_double_prime,
        combined=lower_bound(k, g, d),
        exact_order=exact_order,
        exact_count=exact_count,
    )
    logger.debug(f"Bounds for ({k};{g},{d}): {report.model_dump()}")
    return report
