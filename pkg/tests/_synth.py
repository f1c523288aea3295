"""Shared test helpers: synthetic tame splitting configurations.

A synthetic field is a FieldInvariants built directly from splitting data;
its discriminant is defined by the tame product formula, so the decision
procedures see exactly the data a real tame field would present.
"""

from functools import lru_cache

from traceforms.decide import FieldInvariants
from traceforms.numberfield import make_splitting

ODD_POOL = [3, 5, 7, 11, 13, 17, 19, 23]


def random_tame_splitting(rng, p, n, force_ramified=False):
    while True:
        pairs = []
        remaining = n
        while remaining > 0:
            e = rng.randint(1, remaining)
            if e % p == 0:
                continue
            f = rng.randint(1, remaining // e)
            pairs.append((e, f))
            remaining -= e * f
        if force_ramified and all(e == 1 for e, _ in pairs):
            continue
        return make_splitting(p, pairs, n)


@lru_cache(maxsize=None)
def _pair_multisets(n, max_e):
    """All multisets of (e, f) pairs with sum e*f = n, e <= max_e."""
    results = set()

    def recurse(remaining, minimum_pair, acc):
        if remaining == 0:
            results.add(tuple(sorted(acc)))
            return
        for e in range(1, min(max_e, remaining) + 1):
            for f in range(1, remaining // e + 1):
                pair = (e, f)
                if pair < minimum_pair:
                    continue
                recurse(remaining - e * f, pair, acc + [pair])

    recurse(n, (1, 1), [])
    return sorted(results)


def tame_splittings(n, p, ramified_only=True, f_sum=None):
    """All tame splitting shapes of degree n at p, optionally constrained."""
    out = []
    for pairs in _pair_multisets(n, n):
        if any(e % p == 0 for e, _ in pairs):
            continue
        if ramified_only and all(e == 1 for e, _ in pairs):
            continue
        if f_sum is not None and sum(f for _, f in pairs) != f_sum:
            continue
        out.append(make_splitting(p, pairs, n))
    return out


def tame_disc(n, s, profile):
    d = (-1) ** s
    for p, sd in profile.items():
        d *= p ** (n - sd.f_sum)
    return d


def synth_field(rng, n, s=None, primes=None, galois=None):
    """Random synthetic tame field of degree n: ramified tame splittings at
    a few odd primes, discriminant from the tame product formula."""
    if s is None:
        s = rng.randint(0, n // 2)
    if primes is None:
        primes = rng.sample(ODD_POOL, rng.randint(1, 3))
    profile = {}
    for p in sorted(primes):
        profile[p] = random_tame_splitting(rng, p, n, force_ramified=True)
    return FieldInvariants(
        n=n,
        disc=tame_disc(n, s, profile),
        sig=(n - 2 * s, s),
        profile=profile,
        tame=True,
        galois=galois,
    )


def sibling_field(rng, base: FieldInvariants, keep_residue_sums=True):
    """A synthetic field over the same primes; optionally with the same
    f_p everywhere (hence the same discriminant and signature)."""
    profile = {}
    for p, sd in base.profile.items():
        options = tame_splittings(
            base.n, p, ramified_only=True,
            f_sum=sd.f_sum if keep_residue_sums else None,
        )
        profile[p] = rng.choice(options) if options else sd
    s = base.sig[1] if keep_residue_sums else rng.randint(0, base.n // 2)
    return FieldInvariants(
        n=base.n,
        disc=tame_disc(base.n, s, profile),
        sig=(base.n - 2 * s, s),
        profile=profile,
        tame=True,
        galois=base.galois,
    )
