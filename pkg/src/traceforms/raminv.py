"""Ramification invariants of a prime in a number field.

Everything here is computed from splitting data {(e_i, f_i)} alone: the
first and second ramification factors, the nonresidue count used by the
parity criterion, the tame diagonal block form, and the tame local model
of the integral trace at odd primes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import TamenessError
from .numberfield import NumberFieldData, SplittingData, splitting_data
from .padic import check_odd_prime, least_nonresidue, legendre_symbol, square_class
from .quadform import DiagonalForm, model_form


def first_ramification_factor(split: SplittingData) -> int:
    """prod e_i^{f_i} * u_p^{f_p - g_p}; equals 1 exactly on trivial data."""
    u = least_nonresidue(split.p)
    out = 1
    for e, f in split.pairs:
        out *= e**f
    return out * u ** (split.f_sum - split.g)


def infinity_factor(s: int) -> int:
    """Both ramification factors at the real place equal 2^s."""
    return 2**s


def second_ramification_factor(split: SplittingData, n: int) -> Fraction:
    """The signed product with exponents e_i - f_i; an exact rational unit
    at p (negative exponents are kept as exact fractions)."""
    u = least_nonresidue(split.p)
    sign = -1 if sum(((e - 1) // 2) * f for e, f in split.pairs) % 2 else 1
    out = Fraction(sign)
    for e, f in split.pairs:
        out *= Fraction(e) ** (e - f)
    exponent = n - split.f_sum - split.e_sum + split.g
    assert exponent >= 0
    return out * u**exponent


def nonresidue_odd_count(split: SplittingData) -> int:
    """#{i : f_i odd and (e_i/p) = -1}; tame odd p only."""
    p = check_odd_prime(split.p)
    if not split.tame:
        raise TamenessError(f"{p} is wildly ramified; count undefined")
    return sum(
        1
        for e, f in split.pairs
        if f % 2 == 1 and legendre_symbol(e, p) == -1
    )


def tame_diagonal_form(split: SplittingData) -> DiagonalForm:
    """The diagonal form attached to a tame splitting at odd p.

    Block i contributes f_i entries: e_i repeated, then e_i*(-1)^{f_i-1}
    and e_i*(-u_p)^{f_i-1}; an f_i = 1 block degenerates to <e_i>.  Total
    dimension f_p, determinant in the square class of the first factor.
    """
    p = check_odd_prime(split.p)
    if not split.tame:
        raise TamenessError(f"{p} is wildly ramified; block form undefined")
    u = least_nonresidue(p)
    entries = []
    for e, f in split.pairs:
        if f == 1:
            entries.append(e)
        else:
            entries.extend([e] * (f - 2))
            entries.append(e * (-1) ** (f - 1))
            entries.append(e * (-u) ** (f - 1))
    form = DiagonalForm(tuple(entries), spot=p)
    det = Fraction(1)
    for x in form.entries:
        det *= x
    assert len(form.entries) == split.f_sum
    assert square_class(det, p) == square_class(first_ramification_factor(split), p)
    return form


@dataclass(frozen=True)
class RamificationFactors:
    """Bundle of the invariants of one prime in one field."""

    spot: int
    first: int | Fraction
    second: Fraction
    nonresidue_count: int | None
    g: int
    e_sum: int
    f_sum: int
    degree: int


def ramification_factors(split: SplittingData, n: int) -> RamificationFactors:
    count = None
    if split.p != 2 and split.tame:
        count = nonresidue_odd_count(split)
    return RamificationFactors(
        spot=split.p,
        first=first_ramification_factor(split),
        second=second_ramification_factor(split, n),
        nonresidue_count=count,
        g=split.g,
        e_sum=split.e_sum,
        f_sum=split.f_sum,
        degree=n,
    )


def infinity_factors(sig: tuple[int, int], n: int) -> RamificationFactors:
    r, s = sig
    val = infinity_factor(s)
    return RamificationFactors(
        spot=-1,
        first=val,
        second=Fraction(val),
        nonresidue_count=None,
        g=r + s,
        e_sum=r + 2 * s,
        f_sum=r + s,
        degree=n,
    )


def trace_model_from_splitting(split: SplittingData, n: int, disc: int) -> DiagonalForm:
    """Model of the local integral trace at a tame odd p.

    Unimodular part <1,...,1,alpha> with alpha the first ramification
    factor; scaled part p*<1,...,1,b> where the unit b is normalized so the
    model determinant lies in the square class of the field discriminant at
    p (the class the actual local trace is forced to carry).  The second
    ramification factor's displayed closed form does not always land in
    that class, so it is not used here.
    """
    p = check_odd_prime(split.p)
    if not split.tame:
        raise TamenessError(f"{p} is wildly ramified; tame model undefined")
    alpha = first_ramification_factor(split)
    if split.f_sum == n:
        return model_form(n, n, alpha, None, p)
    ratio = Fraction(disc) / (Fraction(alpha) * Fraction(p) ** (n - split.f_sum))
    scaled_unit = square_class(ratio, p).rep
    return model_form(split.f_sum, n, alpha, scaled_unit, p)


def local_trace_model(fld: NumberFieldData, p: int) -> DiagonalForm:
    """Asserted Z_p-isometry class of the integral trace at a tame odd p."""
    return trace_model_from_splitting(splitting_data(fld, p), fld.n, fld.disc)
