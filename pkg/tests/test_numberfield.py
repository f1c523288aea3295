import random
from fractions import Fraction

import pytest

from traceforms.errors import (
    BadBasisError,
    ConsistencyError,
    NotAFieldError,
    UnsupportedSplittingError,
)
from traceforms.linalg import mat_mul, transpose
from traceforms.numberfield import (
    FieldRecord,
    dedekind_p_maximal,
    field_from_record,
    is_fundamental_discriminant,
    power_sums,
    ramification_profile,
    signature_of_field,
    splitting_data,
    trace_gram,
)
from traceforms.quadform import GramMatrix, genus_equal, signature


def make_field(label, poly, **kw):
    return field_from_record(FieldRecord(label=label, poly=tuple(poly), **kw))


def test_power_sums_spec_example():
    assert power_sums([-1, -1, 0, 1], 5) == [3, 0, 2, 3, 2]


def test_field_x3_x_1():
    fld = make_field("c23", [-1, -1, 0, 1])
    assert fld.disc == -23
    assert fld.sig == (1, 1)
    assert fld.index == 1
    assert [list(r) for r in fld.basis] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    gram = trace_gram(fld)
    assert [list(r) for r in gram.entries] == [[3, 0, 2], [0, 2, 3], [2, 3, 2]]
    assert gram.det == -23
    assert signature(gram) == (2, 1)


def test_field_x2_5_half_integer_basis():
    fld = make_field("q5", [-5, 0, 1])
    assert fld.disc == 5
    assert fld.index == 2
    # spec example with the classical basis {1, (1+theta)/2}
    rec = FieldRecord(
        label="q5b",
        poly=(-5, 0, 1),
        basis=((1, 0), (Fraction(1, 2), Fraction(1, 2))),
    )
    fld2 = field_from_record(rec)
    gram = trace_gram(fld2)
    assert [list(r) for r in gram.entries] == [[2, 1], [1, 3]]
    assert gram.det == 5
    assert genus_equal(gram, trace_gram(fld))


def test_field_x4_plus_1():
    fld = make_field("z8", [1, 0, 0, 0, 1])
    assert fld.disc == 256
    assert fld.sig == (0, 2)
    assert fld.index == 1
    assert trace_gram(fld).det == 256


def test_dedekind_example_index_two():
    # x^3 + x^2 - 2x + 8: poly disc -2012 = -4*503, field disc -503, index 2
    fld = make_field("ded", [8, -2, 1, 1])
    assert fld.poly_disc == -2012
    assert fld.disc == -503
    assert fld.index == 2
    assert trace_gram(fld).det == -503


def test_dedekind_criterion_direct():
    assert dedekind_p_maximal([1, 0, 0, 0, 1], 2)  # Z[zeta_8] is 2-maximal
    assert not dedekind_p_maximal([8, -2, 1, 1], 2)  # essential divisor 2
    assert not dedekind_p_maximal([-5, 0, 1], 2)


def test_signature_of_field():
    assert signature_of_field([-1, -1, 0, 1]) == (1, 1)
    assert signature_of_field([1, -3, 0, 1]) == (3, 0)
    assert signature_of_field([1, 0, 0, 0, 1]) == (0, 2)


def test_splitting_examples():
    fld = make_field("c23", [-1, -1, 0, 1])
    s23 = splitting_data(fld, 23)
    assert s23.pairs == ((1, 1), (2, 1))
    assert s23.tame
    s7 = splitting_data(fld, 7)
    assert s7.pairs == ((1, 1), (1, 2))
    assert not s7.ramified
    q5 = make_field("q5", [-5, 0, 1])
    s5 = splitting_data(q5, 5)
    assert s5.pairs == ((2, 1),)
    assert s5.tame


def test_splitting_needs_supplied_at_index_prime():
    fld = make_field("ded", [8, -2, 1, 1])
    with pytest.raises(UnsupportedSplittingError):
        splitting_data(fld, 2)
    fld2 = make_field(
        "ded2", [8, -2, 1, 1], splitting={2: [[1, 1], [1, 1], [1, 1]]}
    )
    s2 = splitting_data(fld2, 2)
    assert s2.pairs == ((1, 1), (1, 1), (1, 1))
    assert s2.g == 3 and not s2.ramified


def test_supplied_splitting_validation():
    with pytest.raises(ConsistencyError):
        make_field("bad", [8, -2, 1, 1], splitting={2: [[2, 1]]})  # sum ef != 3
    # native splitting contradicts supplied data at a non-index prime
    fld = make_field("c23", [-1, -1, 0, 1], splitting={7: [[1, 1], [1, 1], [1, 1]]})
    with pytest.raises(ConsistencyError):
        splitting_data(fld, 7)


def test_ramification_profiles():
    fld = make_field("c23", [-1, -1, 0, 1])
    profile, tame = ramification_profile(fld)
    assert set(profile) == {23}
    assert tame
    wild = make_field("c81", [1, -3, 0, 1])
    profile2, tame2 = ramification_profile(wild)
    assert set(profile2) == {3}
    assert profile2[3].pairs == ((3, 1),)
    assert not tame2
    q5 = make_field("q5", [-5, 0, 1])
    profile3, tame3 = ramification_profile(q5)
    assert set(profile3) == {5} and tame3


def test_tame_disc_valuation_formula():
    # v_p(disc) = n - f_p at every tame ramified prime
    for poly in ([-1, -1, 0, 1], [-5, 0, 1], [8, -2, 1, 1], [1, -1, 0, 0, 1]):
        fld = make_field("t", poly)
        profile, _ = ramification_profile(fld)
        for p, sd in profile.items():
            if sd.tame:
                v = 0
                d = abs(fld.disc)
                while d % p == 0:
                    v += 1
                    d //= p
                assert v == fld.n - sd.f_sum


def test_field_validation_errors():
    with pytest.raises(NotAFieldError):
        make_field("red", [6, 0, -5, 0, 1])  # (x^2-2)(x^2-3)
    with pytest.raises(NotAFieldError):
        make_field("nonmonic", [1, 0, 2])
    with pytest.raises(NotAFieldError):
        make_field("zeroconst", [0, 1, 1])
    with pytest.raises(BadBasisError):
        field_from_record(
            FieldRecord(label="b", poly=(1, 0, 1), basis=((1, 0, 0), (0, 1, 0)))
        )
    with pytest.raises(BadBasisError):
        # identity basis is not maximal for x^2 - 5
        field_from_record(
            FieldRecord(label="b2", poly=(-5, 0, 1), basis=((1, 0), (0, 1)))
        )


def test_local_cubic_gram_identity():
    # Gram of the trace form of x^3 + 3a x + b in basis {1, theta, theta^2+2a}
    for a, b in [(-1, 1), (0, 3), (1, 1), (2, -5), (-3, 7)]:
        poly = [b, 3 * a, 0, 1]
        sums = power_sums(poly, 5)
        basis = [[1, 0, 0], [0, 1, 0], [2 * a, 0, 1]]
        gram = [
            [
                sum(
                    basis[i][k] * basis[j][l] * sums[k + l]
                    for k in range(3)
                    for l in range(3)
                )
                for j in range(3)
            ]
            for i in range(3)
        ]
        assert gram == [
            [3, 0, 0],
            [0, -6 * a, -3 * b],
            [0, -3 * b, 6 * a * a],
        ]


def test_trace_gram_basis_covariance():
    rng = random.Random(61)
    fld = make_field("c23", [-1, -1, 0, 1])
    g = trace_gram(fld)
    for _ in range(10):
        u = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for _ in range(4):
            i, j = rng.sample(range(3), 2)
            c = rng.choice([-1, 1, 2])
            for col in range(3):
                u[i][col] += c * u[j][col]
        new_basis = mat_mul(u, [list(r) for r in fld.basis])
        rec = FieldRecord(
            label="c23u", poly=(-1, -1, 0, 1), basis=tuple(tuple(r) for r in new_basis)
        )
        fld2 = field_from_record(rec)
        g2 = trace_gram(fld2)
        assert genus_equal(g, g2)
        assert g2.det == g.det


def test_is_fundamental_discriminant():
    assert is_fundamental_discriminant(-23)
    assert is_fundamental_discriminant(12)
    assert not is_fundamental_discriminant(45)
    assert not is_fundamental_discriminant(1)
    assert is_fundamental_discriminant(5)
    assert is_fundamental_discriminant(-4)
    assert is_fundamental_discriminant(8)
    assert is_fundamental_discriminant(-8)
    assert not is_fundamental_discriminant(9)
    assert not is_fundamental_discriminant(-9)
    assert not is_fundamental_discriminant(0)
