"""Exact univariate polynomial arithmetic.

Polynomials are coefficient lists with the constant term first, so
``[b, a, 1]`` is x^2 + a x + b.  Integer polynomials stay integer; anything
that needs division goes through ``fractions.Fraction``.  Includes Sturm
real-root counting, factorization mod p, and Zassenhaus factorization over
the integers (monic case), which is all the field machinery needs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, isqrt

from .errors import RepeatedRootError
from .padic import is_prime


def pnormalize(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def pdeg(f) -> int:
    return len(f) - 1


def padd(f, g):
    n = max(len(f), len(g))
    return pnormalize([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                       for i in range(n)])


def psub(f, g):
    n = max(len(f), len(g))
    return pnormalize([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)
                       for i in range(n)])


def pmul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return pnormalize(out)


def pscale(f, c):
    if c == 0:
        return []
    return [a * c for a in f]


def peval(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def pderiv(f):
    return pnormalize([i * c for i, c in enumerate(f)][1:])


def pdivmod(f, g):
    """Quotient and remainder over the rationals (exact)."""
    g = pnormalize(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in f]
    r = pnormalize(r)
    q = [Fraction(0)] * max(0, len(r) - len(g) + 1)
    lead = Fraction(g[-1])
    while r and len(r) >= len(g):
        c = r[-1] / lead
        d = len(r) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            r[i + d] -= c * b
        r = pnormalize(r)
    return pnormalize(q), r


def pgcd_q(f, g):
    """Monic gcd over the rationals."""
    a, b = [Fraction(c) for c in pnormalize(f)], [Fraction(c) for c in pnormalize(g)]
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def is_squarefree_q(f) -> bool:
    return pdeg(pgcd_q(f, pderiv(f))) <= 0


def sylvester_matrix(f, g):
    m, n = pdeg(f), pdeg(g)
    size = m + n
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - n - 1 - i))
    return rows


def resultant(f, g) -> int:
    """Resultant of two integer polynomials (via Sylvester + Bareiss)."""
    from .linalg import det_int

    f, g = pnormalize(f), pnormalize(g)
    if not f or not g:
        return 0
    if pdeg(f) == 0:
        return f[0] ** pdeg(g)
    if pdeg(g) == 0:
        return g[0] ** pdeg(f)
    return det_int(sylvester_matrix(f, g))


def discriminant(f) -> int:
    """Discriminant of a monic integer polynomial of degree >= 2."""
    n = pdeg(f)
    if n < 2:
        raise ValueError("degree must be at least 2")
    res = resultant(f, pderiv(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    if res == 0:
        raise RepeatedRootError("polynomial has a repeated root")
    return sign * res


def _sign_variations(values) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_real_roots(f) -> int:
    """Number of distinct real roots of a squarefree rational polynomial."""
    f = [Fraction(c) for c in pnormalize(f)]
    if pdeg(f) <= 0:
        return 0
    chain = [f, [Fraction(c) for c in pderiv(f)]]
    while pdeg(chain[-1]) > 0:
        rem = pdivmod(chain[-2], chain[-1])[1]
        if not rem:
            raise RepeatedRootError("Sturm chain requires a squarefree polynomial")
        chain.append([-c for c in rem])
    # signs at -infinity and +infinity from leading terms
    at_minus = [p[-1] * (-1) ** pdeg(p) for p in chain]
    at_plus = [p[-1] for p in chain]
    return _sign_variations(at_minus) - _sign_variations(at_plus)


# ---------------------------------------------------------------------------
# arithmetic mod p


def mp_normalize(f, p):
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def mp_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return mp_normalize(out, p)


def mp_divmod(f, g, p):
    g = mp_normalize(g, p)
    if not g:
        raise ZeroDivisionError
    r = mp_normalize(f, p)
    q = [0] * max(0, len(r) - len(g) + 1)
    inv = pow(g[-1], -1, p)
    while r and len(r) >= len(g):
        c = r[-1] * inv % p
        d = len(r) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            r[i + d] = (r[i + d] - c * b) % p
        while r and r[-1] == 0:
            r.pop()
    return mp_normalize(q, p), r


def mp_gcd(f, g, p):
    a, b = mp_normalize(f, p), mp_normalize(g, p)
    while b:
        a, b = b, mp_divmod(a, b, p)[1]
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def mp_pow_mod(base, e: int, modpoly, p):
    result = [1]
    base = mp_divmod(base, modpoly, p)[1]
    while e:
        if e & 1:
            result = mp_divmod(mp_mul(result, base, p), modpoly, p)[1]
        base = mp_divmod(mp_mul(base, base, p), modpoly, p)[1]
        e >>= 1
    return result


def _mp_pth_root(f, p):
    # f is a polynomial in x^p over F_p; its p-th root maps x^{pi} -> x^i
    return [f[i] for i in range(0, len(f), p)]


def mp_squarefree_decomposition(f, p):
    """f monic mod p -> list of (monic squarefree factor, multiplicity)."""
    out = []

    def recurse(f, mult):
        f = mp_normalize(f, p)
        if pdeg(f) <= 0:
            return
        df = mp_normalize(pderiv(f), p)
        if not df:
            recurse(_mp_pth_root(f, p), mult * p)
            return
        c = mp_gcd(f, df, p)
        w = mp_divmod(f, c, p)[0]
        i = 1
        while pdeg(w) > 0:
            y = mp_gcd(w, c, p)
            z = mp_divmod(w, y, p)[0]
            if pdeg(z) > 0:
                out.append((z, mult * i))
            w = y
            c = mp_divmod(c, y, p)[0]
            i += 1
        if pdeg(c) > 0:
            recurse(_mp_pth_root(c, p), mult * p)

    recurse(f, 1)
    return out


def _mp_distinct_degree(f, p):
    """f squarefree monic -> list of (product of degree-d irreducibles, d)."""
    out = []
    fstar = f
    x = [0, 1]
    w = x
    d = 0
    while pdeg(fstar) >= 2 * (d + 1):
        d += 1
        w = mp_pow_mod(w, p, fstar, p)
        g = mp_gcd(psub(w, x), fstar, p)
        if pdeg(g) > 0:
            out.append((g, d))
            fstar = mp_divmod(fstar, g, p)[0]
            w = mp_divmod(w, fstar, p)[1]
    if pdeg(fstar) > 0:
        out.append((fstar, pdeg(fstar)))
    return out


def _int_to_poly(k: int, p: int):
    digits = []
    while k:
        digits.append(k % p)
        k //= p
    return digits


def _mp_equal_degree(f, d, p):
    """Split a product of degree-d irreducibles into its factors.

    Cantor-Zassenhaus with a deterministic sequence of try elements, so
    results are reproducible run to run.
    """
    n = pdeg(f)
    if n == d:
        return [f]
    factors = [f]
    counter = p  # start at polynomials of degree >= 1
    while any(pdeg(g) > d for g in factors):
        a = mp_normalize(_int_to_poly(counter, p), p)
        counter += 1
        if pdeg(a) < 1:
            continue
        if p == 2:
            t = a
            acc = a
            for _ in range(d - 1):
                acc = mp_pow_mod(acc, 2, f, 2)
                t = padd(t, acc)
            t = mp_normalize(t, 2)
        else:
            t = psub(mp_pow_mod(a, (p**d - 1) // 2, f, p), [1])
            t = mp_normalize(t, p)
        new = []
        for g in factors:
            if pdeg(g) == d:
                new.append(g)
                continue
            h = mp_gcd(t, g, p)
            if 0 < pdeg(h) < pdeg(g):
                new.append(h)
                new.append(mp_divmod(g, h, p)[0])
            else:
                new.append(g)
        factors = new
    return factors


def factor_mod_p(f, p):
    """Full factorization of a monic polynomial mod p.

    Returns a list of (monic irreducible, multiplicity), deterministically
    ordered by (degree, coefficient tuple).
    """
    f = mp_normalize(f, p)
    out = []
    for sqf, mult in mp_squarefree_decomposition(f, p):
        for prod, d in _mp_distinct_degree(sqf, p):
            for irr in _mp_equal_degree(prod, d, p):
                out.append((irr, mult))
    out.sort(key=lambda t: (pdeg(t[0]), t[0]))
    return out


# ---------------------------------------------------------------------------
# factorization over the integers (monic case)


def _hensel_lift_pair(f, g, h, p, e):
    """Lift f = g*h (mod p) to mod p^e; all monic, g,h coprime mod p."""
    # Bezout: u*g + v*h = 1 mod p
    a, b = g, h
    u0, v0, u1, v1 = [1], [], [], [1]
    while b:
        q, r = mp_divmod(a, b, p)
        a, b = b, r
        u0, u1 = u1, mp_normalize(psub(u0, pmul(q, u1)), p)
        v0, v1 = v1, mp_normalize(psub(v0, pmul(q, v1)), p)
    inv = pow(a[0], -1, p)
    u = mp_normalize(pscale(u0, inv), p)
    v = mp_normalize(pscale(v0, inv), p)
    big_g, big_h = list(g), list(h)
    pk = p
    while pk < p**e:
        diff = psub(f, pmul(big_g, big_h))
        delta = mp_normalize([c // pk for c in diff] if diff else [], p)
        if delta:
            bcorr = mp_divmod(mp_mul(v, delta, p), g, p)[1]
            acorr = mp_divmod(psub(delta, mp_mul(bcorr, h, p)), g, p)[0]
            big_g = padd(big_g, pscale(bcorr, pk))
            big_h = padd(big_h, pscale(acorr, pk))
        pk *= p
    modulus = pk
    return (
        [c % modulus for c in big_g],
        [c % modulus for c in big_h],
        modulus,
    )


def _hensel_lift_list(f, factors, p, e):
    """Lift a list of monic factors of f mod p to factors mod p^e."""
    if len(factors) == 1:
        modulus = p**e
        return [[c % modulus for c in f]]
    mid = len(factors) // 2
    g = [1]
    for fac in factors[:mid]:
        g = mp_mul(g, fac, p)
    h = [1]
    for fac in factors[mid:]:
        h = mp_mul(h, fac, p)
    big_g, big_h, _ = _hensel_lift_pair(f, g, h, p, e)
    return _hensel_lift_list(big_g, factors[:mid], p, e) + _hensel_lift_list(
        big_h, factors[mid:], p, e
    )


def _center(c, modulus):
    c %= modulus
    return c - modulus if c > modulus // 2 else c


def _factor_squarefree_monic_int(f):
    """Irreducible monic integer factors of a squarefree monic polynomial."""
    n = pdeg(f)
    if n <= 1:
        return [f]
    # pick a prime with squarefree reduction and few modular factors
    best = None
    tried = 0
    p = 2
    while tried < 5:
        p += 1
        while not is_prime(p):
            p += 1
        fp = mp_normalize(f, p)
        if pdeg(fp) != n:
            continue
        if pdeg(mp_gcd(fp, pderiv(fp), p)) != 0:
            continue
        tried += 1
        fac = factor_mod_p(fp, p)
        if best is None or len(fac) < len(best[1]):
            best = (p, fac)
        if len(fac) == 1:
            break
    p, modular = best
    if len(modular) == 1:
        return [f]
    # Mignotte-style bound on coefficients of monic factors
    norm = isqrt(sum(c * c for c in f)) + 1
    bound = 2**n * norm
    e = 1
    while p**e < 2 * bound + 1:
        e += 1
    lifted = _hensel_lift_list(f, [g for g, _ in modular], p, e)
    modulus = p**e

    remaining = list(range(len(lifted)))
    current = f
    found = []
    size = 1
    while 2 * size <= len(remaining):
        hit = False
        for combo in itertools.combinations(remaining, size):
            prod = [1]
            for idx in combo:
                prod = [c % modulus for c in pmul(prod, lifted[idx])]
            candidate = [_center(c, modulus) for c in prod]
            if candidate[0] == 0 or current[0] % candidate[0] != 0:
                continue
            q, r = pdivmod(current, candidate)
            if r:
                continue
            found.append([int(c) for c in candidate])
            current = [int(c) for c in q]
            remaining = [i for i in remaining if i not in combo]
            hit = True
            break
        if not hit:
            size += 1
    found.append(current)
    found.sort(key=lambda g: (pdeg(g), g))
    return found


def factor_monic_int(f):
    """Factor a monic integer polynomial into monic irreducibles over Z.

    Returns a sorted list of (factor, multiplicity).
    """
    f = pnormalize(f)
    if pdeg(f) < 1:
        return []
    assert f[-1] == 1, "factor_monic_int requires a monic polynomial"
    out: dict[tuple, int] = {}
    # strip powers of x
    k = 0
    while f[0] == 0:
        f = f[1:]
        k += 1
    if k:
        out[(0, 1)] = k
    current = f
    while pdeg(current) > 0:
        sqfree_gcd = pgcd_q(current, pderiv(current))
        part = pdivmod(current, sqfree_gcd)[0]
        part = [int(c) for c in part]
        for irr in _factor_squarefree_monic_int(part):
            key = tuple(irr)
            mult = 0
            while True:
                q, r = pdivmod(current, irr)
                if r:
                    break
                current = [int(c) for c in q]
                mult += 1
            out[key] = out.get(key, 0) + mult
    return sorted(([list(g), m] for g, m in out.items()), key=lambda t: (pdeg(t[0]), t[0]))


def is_irreducible_int(f) -> bool:
    """Irreducibility over Q of a monic integer polynomial."""
    f = pnormalize(f)
    if pdeg(f) < 1:
        return False
    if pdeg(f) == 1:
        return True
    if f[0] == 0:
        return False
    if not is_squarefree_q(f):
        return False
    return len(_factor_squarefree_monic_int(f)) == 1


def resultant_in_t(f, g, shift: int = 1):
    """Res_x(f(x), g(t - shift*x)) as an integer polynomial in t.

    Used by the field isomorphism test.  Computed by evaluation at enough
    integer points followed by exact interpolation.
    """
    deg = pdeg(f) * pdeg(g)
    points = []
    values = []
    for t in range(deg + 1):
        # g(t - shift*x) as a polynomial in x
        gt = []
        for i, c in enumerate(g):
            # c * (t - shift*x)^i
            term = [c]
            for _ in range(i):
                term = psub(pscale(term, t), [0] + pscale(term, shift))
            gt = padd(gt, term)
        points.append(t)
        values.append(resultant(f, gt))
    # Newton interpolation
    coeffs = [Fraction(v) for v in values]
    for j in range(1, deg + 1):
        for i in range(deg, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (points[i] - points[i - j])
    poly = []
    for i in reversed(range(deg + 1)):
        poly = padd(pmul(poly, [-points[i], 1]), [coeffs[i]])
    return [int(c) for c in poly]
