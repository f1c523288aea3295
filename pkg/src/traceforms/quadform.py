"""Integral and local quadratic form machinery.

This module is the independent oracle of the package: genus symbols are
computed directly from Gram matrices (exact diagonalization over Z_p for odd
p, canonical 2-adic Jordan symbols at 2), so that the number-theoretic
criteria elsewhere can be cross-validated against it.

Conventions fixed project-wide:
  * Hasse-Witt invariant is the pairwise product prod_{i<j} (a_i, a_j)_p.
  * The 2-adic symbol per scale is (scale, dim, sign, type, oddity) with
    sign +1 iff the block determinant is +-1 mod 8, type I when the block
    represents an odd number (has an odd diagonal entry), oddity the trace
    of an odd diagonalization mod 8.  Symbols are normalized by oddity
    fusion within compartments and sign walking along trains, so equality
    of normalized symbols is equivalence over Z_2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import (
    FormRangeError,
    HypothesisError,
    LimitError,
    SingularFormError,
    ZeroArgumentError,
)
from .linalg import det_int
from .padic import (
    Rational,
    SquareClass,
    check_odd_prime,
    check_spot,
    factorize,
    hilbert_symbol,
    least_nonresidue,
    square_class,
    val_unit,
)


class GramMatrix:
    """Symmetric nondegenerate integer matrix."""

    __slots__ = ("entries", "n", "_det")

    def __init__(self, entries):
        rows = [tuple(int(x) for x in row) for row in entries]
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise SingularFormError("Gram matrix must be square and nonempty")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise SingularFormError("Gram matrix must be symmetric")
        self.entries = tuple(rows)
        self.n = n
        self._det = None

    @property
    def det(self) -> int:
        if self._det is None:
            self._det = det_int(self.entries)
            if self._det == 0:
                raise SingularFormError("Gram matrix is singular")
        return self._det

    def __eq__(self, other):
        return isinstance(other, GramMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"GramMatrix({[list(r) for r in self.entries]})"


@dataclass(frozen=True)
class DiagonalForm:
    """Diagonal quadratic form <a_1, ..., a_n> with exact rational entries."""

    entries: tuple
    spot: int | None = None

    def __post_init__(self):
        ents = tuple(Fraction(e) for e in self.entries)
        if not ents:
            raise ZeroArgumentError("diagonal form needs at least one entry")
        if any(e == 0 for e in ents):
            raise ZeroArgumentError("diagonal form entries must be nonzero")
        if self.spot is not None and self.spot != -1:
            for e in ents:
                if val_unit(e, self.spot)[0] < 0:
                    raise ZeroArgumentError(
                        f"entry {e} is not a {self.spot}-adic integer"
                    )
        object.__setattr__(self, "entries", ents)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def gram(self) -> GramMatrix:
        """Integer Gram matrix obtained by clearing denominators by squares.

        Only valid for comparisons local at `spot` (denominators are units
        there), which is how model forms are materialized for the oracle.
        """
        ints = [e * e.denominator**2 for e in self.entries]
        n = len(ints)
        return GramMatrix(
            [[int(ints[i]) if i == j else 0 for j in range(n)] for i in range(n)]
        )


@dataclass(frozen=True)
class JordanBlock:
    """One p^scale-scaled unimodular constituent of a local decomposition."""

    scale: int
    dim: int
    det_class: SquareClass
    parity: str | None = None  # "I" / "II", p = 2 only
    oddity: int | None = None  # trace mod 8, p = 2 only


def _to_fraction_matrix(gram: GramMatrix):
    return [[Fraction(x) for x in row] for row in gram.entries]


def _sym_eliminate(a, active, i, pivot):
    """Clear row/column i against the pivot entry a[i][i] (congruence)."""
    for k in active:
        if k == i or a[k][i] == 0:
            continue
        factor = a[k][i] / pivot
        for c in active:
            a[k][c] -= factor * a[i][c]
        a[k][i] = Fraction(0)
    for k in active:
        if k != i:
            a[i][k] = Fraction(0)


def rational_diagonal(gram: GramMatrix) -> list[Fraction]:
    """Diagonalize over Q by symmetric elimination; returns the diagonal."""
    a = _to_fraction_matrix(gram)
    active = list(range(gram.n))
    out = []
    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is None:
            pair = next(
                ((k, l) for k in active for l in active if k < l and a[k][l] != 0),
                None,
            )
            if pair is None:
                raise SingularFormError("Gram matrix is singular")
            k, l = pair
            for c in active:
                a[k][c] += a[l][c]
            for r in active:
                a[r][k] += a[r][l]
            i = k
        _sym_eliminate(a, active, i, a[i][i])
        out.append(a[i][i])
        active.remove(i)
    return out


def signature(gram: GramMatrix) -> tuple[int, int]:
    """Exact (positive, negative) inertia counts."""
    diag = rational_diagonal(gram)
    pos = sum(1 for d in diag if d > 0)
    return pos, len(diag) - pos


def hasse_witt(form: DiagonalForm, p: int) -> int:
    """Hasse-Witt invariant prod_{i<j} (a_i, a_j)_p of a diagonal form."""
    check_spot(p)
    out = 1
    ents = form.entries
    for i in range(len(ents)):
        for j in range(i + 1, len(ents)):
            out *= hilbert_symbol(ents[i], ents[j], p)
    return out


def hasse_witt_gram(gram: GramMatrix, p: int) -> int:
    return hasse_witt(DiagonalForm(tuple(rational_diagonal(gram))), p)


def diagonalize_local(gram: GramMatrix, p: int) -> DiagonalForm:
    """Diagonal form Z_p-equivalent to the Gram matrix, p odd.

    All congruence transformations have p-unit denominators, so the output
    class is exact; each entry is canonicalized to p^k or p^k*u_p.
    """
    check_odd_prime(p)
    gram.det  # raises on singular input
    a = _to_fraction_matrix(gram)
    active = list(range(gram.n))
    diag = []
    while active:
        vals = {}
        best = None
        for k in active:
            for l in active:
                if a[k][l] != 0:
                    v = val_unit(a[k][l], p)[0]
                    vals[(k, l)] = v
                    if best is None or v < best:
                        best = v
        i = next((k for k in active if vals.get((k, k)) == best), None)
        if i is None:
            k, l = next(pos for pos, v in sorted(vals.items()) if v == best and pos[0] != pos[1])
            for c in active:
                a[k][c] += a[l][c]
            for r in active:
                a[r][k] += a[r][l]
            i = k
        _sym_eliminate(a, active, i, a[i][i])
        diag.append(a[i][i])
        active.remove(i)
    canonical = []
    for d in diag:
        v, u = val_unit(d, p)
        canonical.append(p**v * square_class(u, p).rep)
    canonical.sort(key=lambda e: (val_unit(e, p)[0], e))
    return DiagonalForm(tuple(canonical), spot=p)


def jordan_blocks_odd(gram: GramMatrix, p: int) -> list[JordanBlock]:
    """Jordan constituents at an odd p: per-scale dimension and det class."""
    form = diagonalize_local(gram, p)
    by_scale: dict[int, list] = {}
    for e in form.entries:
        v, u = val_unit(e, p)
        by_scale.setdefault(v, []).append(u)
    out = []
    for scale in sorted(by_scale):
        units = by_scale[scale]
        prod = Fraction(1)
        for u in units:
            prod *= u
        out.append(
            JordanBlock(scale=scale, dim=len(units), det_class=square_class(prod, p))
        )
    return out


# ---------------------------------------------------------------------------
# 2-adic machinery


def _val2(x: Fraction) -> int:
    return val_unit(x, 2)[0]


def _split_two_adic(a, active):
    """Split a symmetric 2-integral matrix into 1x1 and even 2x2 components.

    Returns a list of (scale, unit) and (scale, (e00, e01, e11)) items where
    the 2x2 payload is the unimodular even block (odd off-diagonal).
    """
    comps = []
    active = list(active)
    while active:
        best = None
        for k in active:
            for l in active:
                if a[k][l] != 0:
                    v = _val2(a[k][l])
                    if best is None or v < best:
                        best = v
        diag_idx = next(
            (k for k in active if a[k][k] != 0 and _val2(a[k][k]) == best), None
        )
        if diag_idx is not None:
            i = diag_idx
            _sym_eliminate(a, active, i, a[i][i])
            comps.append((best, a[i][i] / 2**best))
            active.remove(i)
            continue
        i, j = next(
            (k, l)
            for k in active
            for l in active
            if k < l and a[k][l] != 0 and _val2(a[k][l]) == best
        )
        # split off the even 2x2 block on (i, j)
        m00, m01, m11 = a[i][i], a[i][j], a[j][j]
        det = m00 * m11 - m01 * m01
        others = [k for k in active if k not in (i, j)]
        for k in others:
            ci, cj = a[k][i], a[k][j]
            if ci == 0 and cj == 0:
                continue
            # coefficients of rows i, j cancelling row k's (i, j) entries
            x = (ci * m11 - cj * m01) / det
            y = (cj * m00 - ci * m01) / det
            for c in active:
                a[k][c] -= x * a[i][c] + y * a[j][c]
        for k in others:
            a[i][k] = a[k][i] = Fraction(0)
            a[j][k] = a[k][j] = Fraction(0)
        scale = best
        two_k = 2**scale
        comps.append((scale, (m00 / two_k, m01 / two_k, m11 / two_k)))
        active.remove(i)
        active.remove(j)
    return comps


def _absorb_even_block(u: Fraction, block):
    """<u> + even 2x2 over Z_2 -> three odd units (u odd).

    Constructive: couple the odd entry into the block, then pivot in an
    order that is guaranteed to keep odd pivots available.
    """
    e00, e01, e11 = block
    t = e00 + u  # odd
    m11 = u * e00 / t
    m13 = -u * e01 / t  # odd
    m33 = e11 - e01 * e01 / t  # odd
    third = m11 - m13 * m13 / m33  # odd
    return [t, m33, third]


def _unit8(x: Fraction) -> int:
    num = x.numerator % 8
    den = x.denominator % 8
    return num * pow(den, -1, 8) % 8


def two_adic_symbol(gram: GramMatrix):
    """Raw 2-adic symbol: sorted list of [scale, dim, sign, type, oddity]."""
    gram.det
    a = _to_fraction_matrix(gram)
    comps = _split_two_adic(a, range(gram.n))
    by_scale: dict[int, dict] = {}
    for scale, payload in comps:
        slot = by_scale.setdefault(scale, {"odd": [], "even": []})
        if isinstance(payload, tuple):
            slot["even"].append(payload)
        else:
            slot["odd"].append(payload)
    symbol = []
    for scale in sorted(by_scale):
        odd = by_scale[scale]["odd"]
        even = by_scale[scale]["even"]
        while odd and even:
            u = odd.pop()
            odd.extend(_absorb_even_block(u, even.pop()))
        if even:
            dim = 2 * len(even)
            det = Fraction(1)
            for e00, e01, e11 in even:
                det *= e00 * e11 - e01 * e01
            sign = 1 if _unit8(det) in (1, 7) else -1
            symbol.append([scale, dim, sign, 0, 0])
        else:
            det = Fraction(1)
            oddity = 0
            for u in odd:
                det *= u
                oddity += _unit8(u)
            sign = 1 if _unit8(det) in (1, 7) else -1
            symbol.append([scale, len(odd), sign, 1, oddity % 8])
    return symbol


def _compartments(symbol):
    comps = []
    cur = []
    for idx, q in enumerate(symbol):
        if q[3] == 1:
            if cur and symbol[cur[-1]][0] + 1 == q[0]:
                cur.append(idx)
            else:
                if cur:
                    comps.append(cur)
                cur = [idx]
        else:
            if cur:
                comps.append(cur)
            cur = []
    if cur:
        comps.append(cur)
    return comps


def _trains(symbol):
    trains = []
    cur = [0]
    for idx in range(1, len(symbol)):
        prev, q = symbol[idx - 1], symbol[idx]
        gap = q[0] - prev[0]
        linked = (gap == 1 and (prev[3] == 1 or q[3] == 1)) or (
            gap == 2 and prev[3] == 1 and q[3] == 1
        )
        if linked:
            cur.append(idx)
        else:
            trains.append(cur)
            cur = [idx]
    trains.append(cur)
    return trains


def canonical_two_adic_symbol(gram: GramMatrix):
    """Canonical 2-adic symbol: equality decides Z_2-equivalence.

    Oddity fusion concentrates each compartment's oddity on its leader;
    sign walking moves minus signs to the front of each train, adding 4 to
    the oddity of every compartment touching either end of each step.
    """
    symbol = two_adic_symbol(gram)
    comps = _compartments(symbol)
    for comp in comps:
        total = sum(symbol[i][4] for i in comp) % 8
        for i in comp:
            symbol[i][4] = 0
        symbol[comp[0]][4] = total
    for train in _trains(symbol):
        for pos in range(len(train) - 1, 0, -1):
            idx = train[pos]
            if symbol[idx][2] == -1:
                symbol[idx][2] = 1
                prev = train[pos - 1]
                symbol[prev][2] = -symbol[prev][2]
                for comp in comps:
                    if idx in comp or prev in comp:
                        symbol[comp[0]][4] = (symbol[comp[0]][4] + 4) % 8
    return [tuple(q) for q in symbol]


def _det8_from(sign: int, dim: int, oddity: int) -> int:
    det4 = (1 - dim + oddity) % 4
    if sign == 1:
        return 1 if det4 == 1 else 7
    return 5 if det4 == 1 else 3


def jordan_two_adic(gram: GramMatrix) -> list[JordanBlock]:
    """Canonicalized 2-adic Jordan data (scales, dims, det mod 8, type, oddity)."""
    out = []
    for scale, dim, sign, parity, oddity in canonical_two_adic_symbol(gram):
        det8 = _det8_from(sign, dim, oddity)
        out.append(
            JordanBlock(
                scale=scale,
                dim=dim,
                det_class=SquareClass(2, det8),
                parity="I" if parity == 1 else "II",
                oddity=oddity,
            )
        )
    return out


# ---------------------------------------------------------------------------
# genus symbols


@dataclass(frozen=True)
class GenusSymbol:
    """Signature plus canonical local data at every prime dividing 2*det."""

    dim: int
    det: int
    signature: tuple[int, int]
    locals: tuple  # sorted tuple of (p, local symbol tuple)

    def as_dict(self):
        return {
            "dim": self.dim,
            "det": self.det,
            "signature": list(self.signature),
            "locals": {
                str(p): [list(entry) for entry in sym] for p, sym in self.locals
            },
        }


def local_symbol_odd(gram: GramMatrix, p: int):
    """(scale, dim, eps) per Jordan scale at odd p; eps is the det Legendre sign."""
    blocks = jordan_blocks_odd(gram, p)
    out = []
    for b in blocks:
        eps = 1 if b.det_class.rep == 1 else -1
        out.append((b.scale, b.dim, eps))
    return tuple(out)


def genus_symbol(gram: GramMatrix) -> GenusSymbol:
    """Complete genus invariant: equal symbols iff equivalent over R and
    every Z_p."""
    d = gram.det
    sig = signature(gram)
    locs = [(2, tuple(canonical_two_adic_symbol(gram)))]
    for p in factorize(d):
        if p != 2:
            locs.append((p, local_symbol_odd(gram, p)))
    locs.sort()
    return GenusSymbol(dim=gram.n, det=d, signature=sig, locals=tuple(locs))


def genus_equal(g1: GramMatrix, g2: GramMatrix) -> bool:
    if g1.n != g2.n or g1.det != g2.det:
        return False
    if signature(g1) != signature(g2):
        return False
    return genus_symbol(g1) == genus_symbol(g2)


# ---------------------------------------------------------------------------
# model forms (tame local trace shapes)


def model_form(f: int, n: int, alpha: Rational, beta: Rational, p: int) -> DiagonalForm:
    """<1,...,1,alpha> + p * <1,...,1,beta> with f unimodular entries.

    When f = n the scaled part is empty and beta is ignored.
    """
    check_odd_prime(p)
    if not 0 < f <= n:
        raise FormRangeError(f"need 0 < f <= n, got f={f}, n={n}")
    alpha = Fraction(alpha)
    if val_unit(alpha, p)[0] != 0:
        raise FormRangeError(f"alpha={alpha} is not a unit at {p}")
    entries = [Fraction(1)] * (f - 1) + [alpha]
    if f < n:
        beta = Fraction(beta)
        if val_unit(beta, p)[0] != 0:
            raise FormRangeError(f"beta={beta} is not a unit at {p}")
        entries += [Fraction(p)] * (n - f - 1) + [p * beta]
    return DiagonalForm(tuple(entries), spot=p)


def model_equivalent(m1, m2, p: int) -> bool:
    """Equivalence of two model forms (f, n, alpha, beta) at a common odd p.

    Requires equal shape and the det hypothesis alpha1*beta1 = alpha2*beta2
    mod squares; then equivalence reduces to equality of (alpha_i, p)_p.
    """
    check_odd_prime(p)
    f1, n1, a1, b1 = m1
    f2, n2, a2, b2 = m2
    if f1 != f2 or n1 != n2:
        raise HypothesisError("model forms must share f and n")
    if f1 < n1:
        prod1, prod2 = Fraction(a1) * Fraction(b1), Fraction(a2) * Fraction(b2)
    else:
        prod1, prod2 = Fraction(a1), Fraction(a2)
    if square_class(prod1, p) != square_class(prod2, p):
        raise HypothesisError(
            "determinant hypothesis fails: alpha*beta classes differ at p"
        )
    return hilbert_symbol(a1, p, p) == hilbert_symbol(a2, p, p)


def diagonal_local_symbol_odd(form: DiagonalForm, p: int):
    """Per-scale (scale, dim, eps) of a diagonal form at odd p."""
    by_scale: dict[int, Fraction] = {}
    dims: dict[int, int] = {}
    for e in form.entries:
        v, u = val_unit(e, p)
        by_scale[v] = by_scale.get(v, Fraction(1)) * u
        dims[v] = dims.get(v, 0) + 1
    return tuple(
        (v, dims[v], 1 if square_class(by_scale[v], p).rep == 1 else -1)
        for v in sorted(dims)
    )


def qp_equivalent(f1: DiagonalForm, f2: DiagonalForm, p: int) -> bool:
    """Equivalence over Q_p (p = -1 meaning R): dim, det class, Hasse."""
    check_spot(p)
    if f1.dim != f2.dim:
        return False
    d1 = Fraction(1)
    for e in f1.entries:
        d1 *= e
    d2 = Fraction(1)
    for e in f2.entries:
        d2 *= e
    if p == -1:
        neg1 = sum(1 for e in f1.entries if e < 0)
        neg2 = sum(1 for e in f2.entries if e < 0)
        return neg1 == neg2
    v1, u1 = val_unit(d1, p)
    v2, u2 = val_unit(d2, p)
    if (v1 - v2) % 2 != 0 or square_class(u1, p) != square_class(u2, p):
        return False
    return hasse_witt(f1, p) == hasse_witt(f2, p)


# ---------------------------------------------------------------------------
# isometry witnesses


def reduce_gram(gram: GramMatrix):
    """Greedy size reduction by integer congruences.

    Returns (reduced GramMatrix, U) with U^T * gram * U = reduced and
    det(U) = +-1.  Works for indefinite forms; it only ever accepts moves
    that shrink the sum of squared entries, so it terminates.
    """
    n = gram.n
    a = [list(r) for r in gram.entries]
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    current = sum(x * x for row in a for x in row)
    improved = True
    while improved:
        improved = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                candidates = {-1, 1, -2, 2}
                if a[j][j] != 0:
                    candidates.add(-round(a[i][j] / a[j][j]))
                for t in sorted(candidates):
                    if t == 0:
                        continue
                    b = [row[:] for row in a]
                    for c in range(n):
                        b[i][c] += t * b[j][c]
                    for r in range(n):
                        b[r][i] += t * b[r][j]
                    score = sum(x * x for row in b for x in row)
                    if score < current:
                        a = b
                        current = score
                        for c in range(n):
                            u[i][c] += t * u[j][c]
                        improved = True
                        break
    # rows of u hold the change of basis; columns are what congruence needs
    return GramMatrix(a), [list(col) for col in zip(*u)]


def _meet_in_the_middle(g1: GramMatrix, g2: GramMatrix, budget: int):
    """Witness via a common small congruence image of both forms, or None.

    Both forms walk cheapest-first through elementary congruence moves,
    strictly alternating sides, and stop at the first state reached from
    both walks, which composes to a witness.  `budget` caps the states
    expanded per side.  States and transforms are kept as flat tuples: this
    loop dominates the hard-pair search cost.
    """
    from heapq import heappop, heappush

    from .linalg import mat_inverse, mat_mul

    n = g1.n
    moves = [
        (i, j, t)
        for i in range(n)
        for j in range(n)
        if i != j
        for t in (-1, 1)
    ]
    ident = tuple(int(i == j) for i in range(n) for j in range(n))

    def flat(g):
        return tuple(x for row in g.entries for x in row)

    startA, startB = flat(g1), flat(g2)
    seenA = {startA: ident}
    seenB = {startB: ident}
    heapA = [(sum(x * x for x in startA), startA)]
    heapB = [(sum(x * x for x in startB), startB)]
    collision = startA if startA in seenB else None
    pops = 0
    rng_n = range(n)
    while collision is None and pops < budget and (heapA or heapB):
        pops += 1
        for seen, heap, other in ((seenA, heapA, seenB), (seenB, heapB, seenA)):
            if collision is not None or not heap:
                continue
            _, state = heappop(heap)
            u = seen[state]
            for i, j, t in moves:
                new = list(state)
                jn = j * n
                base = i * n
                for c in rng_n:
                    new[base + c] += t * state[jn + c]
                for r in rng_n:
                    new[r * n + i] += t * new[r * n + j]
                key = tuple(new)
                if key in seen:
                    continue
                nu = list(u)
                for r in rng_n:
                    nu[r * n + i] += t * nu[r * n + j]
                seen[key] = tuple(nu)
                heappush(heap, (sum(x * x for x in key), key))
                if key in other:
                    collision = key
                    break
    if collision is None:
        return None
    u1 = [list(seenA[collision][r * n : r * n + n]) for r in rng_n]
    u2 = [list(seenB[collision][r * n : r * n + n]) for r in rng_n]
    u2_inv = [[int(x) for x in row] for row in mat_inverse(u2)]
    return mat_mul(u1, u2_inv)


def isometry_witness_search(g1: GramMatrix, g2: GramMatrix, bound: int):
    """Search for U with U^T G1 U = G2 and det(U) = +-1.

    Strategy: size-reduce both forms, run a column DFS with entries in
    [-bound, bound] in reduced coordinates (the last column is solved
    exactly from the linear constraints plus the quadratic one), and fall
    back to a meet-in-the-middle walk through small congruence images with
    budget proportional to the bound.  Every returned witness is mapped
    back to the original bases and re-verified exactly; None never
    certifies non-isometry.
    """
    if g1.n != g2.n:
        raise HypothesisError("witness search needs equal dimensions")
    if bound < 1:
        raise FormRangeError("bound must be positive")
    n = g1.n
    if (2 * bound + 1) ** n > 5_000_000:
        raise LimitError("witness search space too large")
    if g1.det != g2.det:
        return None
    from .linalg import mat_inverse, mat_mul

    red1, u1 = reduce_gram(g1)
    red2, u2 = reduce_gram(g2)
    inner = _witness_search_raw(red1, red2, bound)
    if inner is not None:
        u2_inv = [[int(x) for x in row] for row in mat_inverse(u2)]
        u = mat_mul(mat_mul(u1, inner), u2_inv)
    else:
        u = _meet_in_the_middle(red1, red2, 2000 * bound)
        if u is None:
            return None
        u2_inv = [[int(x) for x in row] for row in mat_inverse(u2)]
        u = mat_mul(mat_mul(u1, u), u2_inv)
    check = [
        [
            sum(
                u[k][i] * g1.entries[k][l] * u[l][j]
                for k in range(n)
                for l in range(n)
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    assert check == [list(r) for r in g2.entries]
    assert abs(det_int(u)) == 1
    return u


def _solve_last_column(a, cols, targets, last_target, n):
    """Solve c^T a c_i = targets[i] plus the quadratic q(c) = last_target.

    The linear constraints leave a one-parameter rational line; the
    quadratic picks out at most two rational points, checked for
    integrality.  Returns an integer column or None.
    """
    rows = [[Fraction(x) for x in av] for _, av in cols]
    # rational kernel vector of the (n-1) x n system
    kernel = None
    mat = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    w = [Fraction(0)] * n
    w[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        w[pc] = -mat[i][fc]
    scale = 1
    for x in w:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    w = [int(x * scale) for x in w]
    g = 0
    for x in w:
        g = gcd(g, x)
    w = [x // g for x in w]
    # particular solution with the kernel direction pinned to zero
    aug = rows + [[Fraction(x) for x in w]]
    rhs = [Fraction(t) for t in targets] + [Fraction(0)]
    m = [row[:] + [rhs[i]] for i, row in enumerate(aug)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return None
        m[c], m[pivot] = m[pivot], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    x0 = [m[i][n] for i in range(n)]
    # q(x0 + t w) = q0 + 2 t b + t^2 qw
    def bilinear(u, v):
        return sum(u[i] * a[i][j] * v[j] for i in range(n) for j in range(n))

    q0 = bilinear(x0, x0)
    b = bilinear(x0, w)
    qw = bilinear(w, w)
    roots = []
    if qw == 0:
        if b != 0:
            roots.append((Fraction(last_target) - q0) / (2 * b))
        elif q0 == last_target:
            roots.append(Fraction(0))
    else:
        disc = b * b - qw * (q0 - last_target)
        if disc >= 0:
            num, den = disc.numerator, disc.denominator
            rn, rd = isqrt(num), isqrt(den)
            if rn * rn == num and rd * rd == den:
                sq = Fraction(rn, rd)
                roots.extend({(-b + sq) / qw, (-b - sq) / qw})
    for t in roots:
        candidate = [x0[i] + t * w[i] for i in range(n)]
        if all(x.denominator == 1 for x in candidate):
            return [int(x) for x in candidate]
    return None


def pairwise_witnesses(grams, bound: int):
    """Witnesses for every pair in a family of forms expected isometric.

    Returns {(i, j): U or None} for i < j.  Found witnesses are composed
    transitively (and inverted) before any direct search runs, so a
    spanning tree of direct hits covers the whole family; every returned
    matrix is re-verified exactly.
    """
    from collections import deque

    from .linalg import mat_inverse, mat_mul

    k = len(grams)
    known: dict = {}

    def verified(i, j, u):
        n = grams[i].n
        a, b = grams[i].entries, grams[j].entries
        check = [
            [
                sum(u[r][x] * a[r][s] * u[s][y] for r in range(n) for s in range(n))
                for y in range(n)
            ]
            for x in range(n)
        ]
        return check == [list(row) for row in b]

    def compose(i, j):
        prev = {i: None}
        queue = deque([i])
        while queue and j not in prev:
            x = queue.popleft()
            for (a, b), u in known.items():
                for src, dst in ((a, b), (b, a)):
                    if src == x and dst not in prev:
                        prev[dst] = (x, (a, b))
                        queue.append(dst)
        if j not in prev:
            return None
        path = []
        node = j
        while prev[node] is not None:
            x, edge = prev[node]
            path.append((x, node, edge))
            node = x
        path.reverse()
        n = grams[i].n
        u = [[int(r == c) for c in range(n)] for r in range(n)]
        for x, y, edge in path:
            w = known[edge]
            if (x, y) != edge:
                w = [[int(v) for v in row] for row in mat_inverse(w)]
            u = mat_mul(u, w)
        if verified(i, j, u) and abs(det_int(u)) == 1:
            return u
        return None

    out = {}
    for i in range(k):
        for j in range(i + 1, k):
            u = compose(i, j)
            if u is None:
                for b in (2, bound):
                    u = isometry_witness_search(grams[i], grams[j], b)
                    if u is not None:
                        break
            if u is not None:
                known[(i, j)] = u
            out[(i, j)] = u
    return out


def _witness_search_raw(g1: GramMatrix, g2: GramMatrix, bound: int):
    """Box-search the first n-1 columns, solve the last one exactly, over
    every column ordering of the target form."""
    n = g1.n
    a = g1.entries
    targets = {g2.entries[j][j] for j in range(n)}
    by_value: dict[int, list] = {t: [] for t in targets}
    rng = range(-bound, bound + 1)
    for v in itertools.product(rng, repeat=n):
        av = tuple(sum(a[i][k] * v[k] for k in range(n)) for i in range(n))
        q = sum(av[i] * v[i] for i in range(n))
        if q in by_value:
            by_value[q].append((v, av))

    for perm in itertools.permutations(range(n)):
        h = [[g2.entries[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
        cols: list = [None] * n

        def extend(j: int) -> bool:
            if j == n - 1:
                solved = _solve_last_column(
                    a, cols[: n - 1], [h[i][n - 1] for i in range(n - 1)],
                    h[n - 1][n - 1], n,
                )
                if solved is None:
                    return False
                av = tuple(
                    sum(a[i][k] * solved[k] for k in range(n)) for i in range(n)
                )
                cols[j] = (tuple(solved), av)
                return True
            for v, av in by_value[h[j][j]]:
                ok = True
                for i in range(j):
                    if sum(av[k] * cols[i][0][k] for k in range(n)) != h[i][j]:
                        ok = False
                        break
                if ok:
                    cols[j] = (v, av)
                    if extend(j + 1):
                        return True
            cols[j] = None
            return False

        if n == 1:
            hit = next((v for v, _ in by_value[h[0][0]]), None)
            if hit is None:
                continue
            cols[0] = (hit, None)
        elif not extend(0):
            continue
        u = [[0] * n for _ in range(n)]
        for spot, col in enumerate(cols):
            for i in range(n):
                u[i][perm[spot]] = col[0][i]
        check = [
            [
                sum(u[k][i] * a[k][l] * u[l][j] for k in range(n) for l in range(n))
                for j in range(n)
            ]
            for i in range(n)
        ]
        if check != [list(r) for r in g2.entries]:
            continue
        if abs(det_int(u)) != 1:
            continue
        return u
    return None
