"""Number fields: maximal orders, splitting data, and integral trace forms.

Fields are presented by a monic irreducible integer polynomial, with an
optional integral basis and optional per-prime splitting data for primes
dividing the index (where native factorization mod p is not valid).  The
maximal order is computed by Dedekind p-maximality tests plus the standard
radical/multiplier enlargement loop at every prime whose square divides the
polynomial discriminant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .errors import (
    BadBasisError,
    ConsistencyError,
    LimitError,
    NotAFieldError,
    UnsupportedSplittingError,
)
from .linalg import fp_left_kernel, hnf, mat_inverse, mat_mul
from .padic import factorize, is_prime
from .polys import (
    discriminant,
    factor_mod_p,
    is_irreducible_int,
    pdeg,
    pmul,
    pnormalize,
    sturm_real_roots,
)
from .quadform import GramMatrix

DEGREE_CAP = 12
DISC_CAP = 10**18


@dataclass(frozen=True)
class FieldRecord:
    """Raw ingestion record: polynomial plus optional extras."""

    label: str
    poly: tuple
    basis: tuple | None = None
    splitting: dict | None = None
    galois: bool | None = None


@dataclass(frozen=True)
class SplittingData:
    """Splitting of a finite prime: the multiset {(e_i, f_i)}."""

    p: int
    pairs: tuple  # sorted tuple of (e, f)

    @property
    def g(self) -> int:
        return len(self.pairs)

    @property
    def e_sum(self) -> int:
        return sum(e for e, _ in self.pairs)

    @property
    def f_sum(self) -> int:
        return sum(f for _, f in self.pairs)

    @property
    def degree(self) -> int:
        return sum(e * f for e, f in self.pairs)

    @property
    def tame(self) -> bool:
        return all(e % self.p != 0 for e, _ in self.pairs)

    @property
    def ramified(self) -> bool:
        return any(e > 1 for e, _ in self.pairs)


def make_splitting(p: int, pairs, n: int | None = None) -> SplittingData:
    pairs = tuple(sorted((int(e), int(f)) for e, f in pairs))
    if not pairs or any(e < 1 or f < 1 for e, f in pairs):
        raise ConsistencyError(f"invalid splitting pairs at {p}: {pairs}")
    sd = SplittingData(p=p, pairs=pairs)
    if n is not None and sd.degree != n:
        raise ConsistencyError(
            f"splitting at {p} has sum e_i*f_i = {sd.degree}, expected {n}"
        )
    return sd


@dataclass(frozen=True)
class NumberFieldData:
    """Validated field: degree, polynomial, integral basis, disc, signature."""

    label: str
    n: int
    poly: tuple
    basis: tuple  # rows of Fractions over the power basis
    disc: int
    sig: tuple  # (r, s)
    poly_disc: int
    index: int
    supplied_splitting: dict = field(default_factory=dict)
    galois: bool | None = None


# ---------------------------------------------------------------------------
# order arithmetic


def _reduction_vectors(poly, count):
    """Coordinates of x^k mod poly for k < count (monic integer poly)."""
    n = pdeg(poly)
    red = [[1 if c == k else 0 for c in range(n)] for k in range(n)]
    for k in range(n, count):
        prev = red[k - 1]
        shifted = [0] + list(prev)
        lead = shifted[n]
        red.append([shifted[c] - lead * poly[c] for c in range(n)])
    return red


def _mult_table(basis, poly):
    """Integer coordinates of b_i * b_j in the basis; raises if not a ring."""
    n = len(basis)
    red = _reduction_vectors(poly, 2 * n - 1)
    inv = mat_inverse(basis)
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            prod = pmul(list(basis[i]), list(basis[j]))
            prod += [Fraction(0)] * (2 * n - 1 - len(prod))
            vec = [
                sum(prod[k] * red[k][c] for k in range(2 * n - 1)) for c in range(n)
            ]
            coords = [
                sum(vec[c] * inv[c][t] for c in range(n)) for t in range(n)
            ]
            if any(x.denominator != 1 for x in coords):
                raise BadBasisError("basis is not closed under multiplication")
            coords = [int(x) for x in coords]
            table[i][j] = table[j][i] = coords
    return table


def _frobenius_kernel(table, p, n):
    """Basis of the nilradical of the order mod p, via the p-power map."""

    def mul(x, y):
        out = [0] * n
        for i in range(n):
            if x[i]:
                for j in range(n):
                    if y[j]:
                        tij = table[i][j]
                        xy = x[i] * y[j]
                        for c in range(n):
                            out[c] = (out[c] + xy * tij[c]) % p
        return out

    def power(x, e):
        result = None
        base = x
        while e:
            if e & 1:
                result = base if result is None else mul(result, base)
            base = mul(base, base)
            e >>= 1
        return result

    frob = []
    for i in range(n):
        e_i = [1 if c == i else 0 for c in range(n)]
        frob.append(power(e_i, p))
    # iterate the p-power map until p^j >= n
    m = [row[:] for row in frob]
    pj = p
    while pj < n:
        m = [[sum(m[i][k] * frob[k][c] for k in range(n)) % p for c in range(n)]
             for i in range(n)]
        pj *= p
    return fp_left_kernel(m, p)


def _enlarge_at(basis, poly, p):
    """One radical/multiplier step at p; returns (new basis, index gain
    exponent k with [O' : O] = p^k)."""
    n = len(basis)
    table = _mult_table(basis, poly)
    rad = _frobenius_kernel(table, p, n)
    ideal_rows = [list(v) for v in rad] + [
        [p if c == i else 0 for c in range(n)] for i in range(n)
    ]
    h = hnf(ideal_rows)
    assert len(h) == n
    hinv = mat_inverse(h)
    stacked = []
    for i in range(n):
        row = []
        for k in range(n):
            # coords of b_i * gamma_k in the order basis
            prod = [0] * n
            for c in range(n):
                if h[k][c]:
                    tic = table[i][c]
                    for t in range(n):
                        prod[t] += h[k][c] * tic[t]
            # convert to ideal coordinates; integrality certifies I_p is an ideal
            for t in range(n):
                val = sum(Fraction(prod[c]) * hinv[c][t] for c in range(n))
                assert val.denominator == 1
                row.append(int(val))
        stacked.append(row)
    kernel = fp_left_kernel(stacked, p)
    if not kernel:
        return basis, 0
    new_rows = [list(v) for v in kernel] + [
        [p if c == i else 0 for c in range(n)] for i in range(n)
    ]
    hu = hnf(new_rows)
    new_basis = []
    for row in hu:
        coords = [
            sum(Fraction(row[c], p) * basis[c][t] for c in range(n)) for t in range(n)
        ]
        new_basis.append(coords)
    return new_basis, len(kernel)


def _dedekind_step(poly, p):
    """Dedekind's criterion with enlargement data.

    Returns (maximal?, ustar, gain): when not maximal, the order
    Z[theta] + (ustar(theta)/p) Z[theta] has index p^gain over Z[theta].
    """
    fac = factor_mod_p(poly, p)
    gbar = [1]
    for g, _ in fac:
        gbar = pnormalize([c % p for c in pmul(gbar, g)])
    hbar = [1]
    for g, mult in fac:
        for _ in range(mult - 1):
            hbar = pnormalize([c % p for c in pmul(hbar, g)])
    gh = pmul(gbar, hbar)
    diff = [
        ((gh[i] if i < len(gh) else 0) - (poly[i] if i < len(poly) else 0))
        for i in range(max(len(gh), len(poly)))
    ]
    assert all(c % p == 0 for c in diff)
    fbar = pnormalize([(c // p) % p for c in diff])
    from .polys import mp_divmod, mp_gcd, mp_normalize

    z = mp_gcd(fbar, mp_gcd(gbar, hbar, p), p)
    if pdeg(z) <= 0:
        return True, None, 0
    ustar = mp_divmod(mp_normalize(poly, p), z, p)[0]
    return False, ustar, pdeg(z)


def dedekind_p_maximal(poly, p) -> bool:
    """Dedekind's criterion: is Z[theta] maximal at p?"""
    return _dedekind_step(poly, p)[0]


def _fraction_hnf(rows):
    """HNF of a lattice given by Fraction rows; returns Fraction rows."""
    lcm = 1
    for row in rows:
        for x in row:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    h = hnf([[int(x * lcm) for x in row] for row in rows])
    return [[Fraction(x, lcm) for x in row] for row in h]


def maximal_order(poly, pdisc_factors=None, dedekind_cache=None):
    """Integral basis (rows over the power basis) of the maximal order.

    Dedekind's criterion at p depends only on the polynomial (enlargements
    at other primes never change the p-local order), so it gates the work
    at every prime and supplies the first enlargement directly; the
    radical/multiplier loop finishes the rare deeper-index cases and stops
    once the index gain reaches its cap v_p(poly disc) // 2.
    """
    n = pdeg(poly)
    if pdisc_factors is None:
        pdisc_factors = factorize(discriminant(poly))
    basis = [[Fraction(1 if c == k else 0) for c in range(n)] for k in range(n)]
    red = None
    for p, e in pdisc_factors.items():
        if e < 2:
            continue
        if dedekind_cache is not None:
            key = (p, tuple(c % p**2 for c in poly))
            step = dedekind_cache.get(key)
            if step is None:
                step = _dedekind_step(poly, p)
                dedekind_cache[key] = step
        else:
            step = _dedekind_step(poly, p)
        maximal, ustar, gained = step
        if maximal:
            continue
        # first enlargement from the criterion: add (ustar(theta)/p)*Z[theta]
        if red is None:
            red = _reduction_vectors(poly, 2 * n - 1)
        rows = [list(r) for r in basis]
        for j in range(n):
            shifted = [0] * j + list(ustar)
            coords = [
                sum(shifted[k] * red[k][c] for k in range(len(shifted)))
                for c in range(n)
            ]
            rows.append([Fraction(x, p) for x in coords])
        basis = _fraction_hnf(rows)
        cap = e // 2
        for _ in range(cap + 1):
            if gained >= cap:
                break
            basis, k = _enlarge_at(basis, poly, p)
            if k == 0:
                break
            gained += k
        else:
            raise LimitError(f"maximal order iteration cap exceeded at {p}")
    return basis


def signature_of_field(poly) -> tuple[int, int]:
    """(real embeddings, complex-conjugate pairs) via Sturm counting."""
    n = pdeg(poly)
    r = sturm_real_roots(poly)
    return r, (n - r) // 2


def poly_discriminant(poly) -> int:
    """Discriminant of a monic squarefree integer polynomial."""
    return discriminant(poly)


def field_from_record(rec: FieldRecord, max_degree: int = DEGREE_CAP,
                      max_disc: int = DISC_CAP) -> NumberFieldData:
    poly = pnormalize(list(rec.poly))
    n = pdeg(poly)
    if n < 2:
        raise NotAFieldError(f"degree must be at least 2, got {n}")
    if n > max_degree:
        raise LimitError(f"degree {n} exceeds the cap {max_degree}")
    if poly[-1] != 1:
        raise NotAFieldError("defining polynomial must be monic")
    if poly[0] == 0:
        raise NotAFieldError("defining polynomial has constant term 0")
    if any(not isinstance(c, int) for c in poly):
        raise NotAFieldError("defining polynomial must have integer coefficients")
    if not is_irreducible_int(poly):
        raise NotAFieldError("defining polynomial is reducible over Q")
    pdisc = discriminant(poly)
    if abs(pdisc) > max_disc:
        raise LimitError(f"|poly disc| = {abs(pdisc)} exceeds the cap {max_disc}")
    if rec.basis is not None:
        basis = [[Fraction(x) for x in row] for row in rec.basis]
        if len(basis) != n or any(len(row) != n for row in basis):
            raise BadBasisError(f"basis must be {n}x{n}")
        _validate_order(basis, poly)
    else:
        basis = maximal_order(poly)
    from .linalg import det as _det

    d = _det(basis)
    if d == 0:
        raise BadBasisError("basis is singular")
    disc_fr = Fraction(pdisc) * d * d
    if disc_fr.denominator != 1:
        raise BadBasisError("basis does not define an order over Z[theta]")
    disc = int(disc_fr)
    index_sq = Fraction(pdisc, disc)
    index = isqrt(int(index_sq))
    if index * index != index_sq:
        raise ConsistencyError("poly disc / disc is not a perfect square")
    r, s = signature_of_field(poly)
    if (-1) ** s != (1 if disc > 0 else -1):
        raise ConsistencyError("discriminant sign does not match the signature")
    supplied = {}
    if rec.splitting:
        for p, pairs in rec.splitting.items():
            p = int(p)
            if not is_prime(p):
                raise ConsistencyError(f"splitting key {p} is not prime")
            supplied[p] = make_splitting(p, pairs, n)
    return NumberFieldData(
        label=rec.label,
        n=n,
        poly=tuple(poly),
        basis=tuple(tuple(row) for row in basis),
        disc=disc,
        sig=(r, s),
        poly_disc=pdisc,
        index=index,
        supplied_splitting=supplied,
        galois=rec.galois,
    )


def _validate_order(basis, poly):
    """Supplied basis must contain 1, be a ring, and be maximal."""
    n = len(basis)
    from .linalg import det as _det

    if _det(basis) == 0:
        raise BadBasisError("basis is singular")
    inv = mat_inverse(basis)
    one = [sum(Fraction(int(c == 0)) * inv[c][t] for c in range(n)) for t in range(n)]
    if any(x.denominator != 1 for x in one):
        raise BadBasisError("basis does not contain 1")
    _mult_table(basis, poly)  # raises BadBasisError if not a ring
    pdisc = discriminant(poly)
    d = _det(basis)
    order_disc = Fraction(pdisc) * d * d
    if order_disc.denominator != 1:
        raise BadBasisError("basis is not an order")
    for p, e in factorize(int(order_disc)).items():
        if e < 2:
            continue
        _, enlarged = _enlarge_at(basis, poly, p)
        if enlarged:
            raise BadBasisError(f"supplied basis is not maximal at {p}")


def power_sums(poly, count):
    """Newton power sums p_k = sum of roots^k for k < count (monic poly)."""
    n = pdeg(poly)
    sums = [n]
    for k in range(1, count):
        acc = 0
        for i in range(1, k):
            if 0 <= n - i < n:
                acc += poly[n - i] * sums[k - i]
        coeff = poly[n - k] if 0 <= n - k < n else 0
        sums.append(-k * coeff - acc)
    return sums


def trace_gram(fld: NumberFieldData) -> GramMatrix:
    """Gram matrix Tr(b_i b_j) of the integral trace form, exactly."""
    n = fld.n
    sums = power_sums(list(fld.poly), 2 * n - 1)
    basis = fld.basis
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            val = Fraction(0)
            for k in range(n):
                if basis[i][k]:
                    for l in range(n):
                        if basis[j][l]:
                            val += basis[i][k] * basis[j][l] * sums[k + l]
            if val.denominator != 1:
                raise BadBasisError("trace pairing is not integral on this basis")
            row.append(int(val))
        entries.append(row)
    gram = GramMatrix(entries)
    if gram.det != fld.disc:
        raise ConsistencyError("det(trace gram) != disc")
    return gram


def splitting_data(fld: NumberFieldData, p: int) -> SplittingData:
    """Splitting of p: native factorization mod p when p does not divide
    the index, otherwise supplied data from the record."""
    if not is_prime(p):
        raise ConsistencyError(f"{p} is not prime")
    if fld.index % p != 0:
        fac = factor_mod_p(list(fld.poly), p)
        pairs = [(mult, pdeg(g)) for g, mult in fac]
        native = make_splitting(p, pairs, fld.n)
        supplied = fld.supplied_splitting.get(p)
        if supplied is not None and supplied != native:
            raise ConsistencyError(
                f"supplied splitting at {p} contradicts native factorization"
            )
        return native
    supplied = fld.supplied_splitting.get(p)
    if supplied is None:
        raise UnsupportedSplittingError(p)
    if supplied.tame:
        v = 0
        d = fld.disc
        while d % p == 0:
            v += 1
            d //= p
        if v != fld.n - supplied.f_sum:
            raise ConsistencyError(
                f"supplied tame splitting at {p} violates v_p(disc) = n - f_p"
            )
    return supplied


def ramification_profile(fld: NumberFieldData):
    """Splitting at every ramified prime, plus the global tameness flag.

    Returns (profile dict p -> SplittingData, tame: bool).  For tame
    primes the discriminant valuation formula v_p(disc) = n - f_p is
    verified and a ConsistencyError raised on mismatch.
    """
    profile = {}
    tame = True
    for p in factorize(fld.disc):
        sd = splitting_data(fld, p)
        if not sd.ramified:
            raise ConsistencyError(f"{p} divides disc but splitting is unramified")
        if sd.tame:
            v = 0
            d = fld.disc
            while d % p == 0:
                v += 1
                d //= p
            if v != fld.n - sd.f_sum:
                raise ConsistencyError(
                    f"tame discriminant formula fails at {p}: "
                    f"v_p(disc)={v}, n-f_p={fld.n - sd.f_sum}"
                )
        else:
            tame = False
        profile[p] = sd
    return profile, tame


def is_fundamental_discriminant(d: int) -> bool:
    """True iff d is the discriminant of a quadratic field."""
    if d in (0, 1):
        return False

    def squarefree(m):
        m = abs(m)
        return all(e == 1 for e in factorize(m).values()) if m > 1 else m == 1

    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False
