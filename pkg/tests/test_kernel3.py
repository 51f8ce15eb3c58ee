import itertools

import pytest

from semitop.kernel3 import (
    ALL, BinaryConn, TruthValue, UnaryConn, apply_binary, apply_unary, fold_and, fold_or,
    is_valid, leq, neg,
)

F, B, T = TruthValue.F, TruthValue.B, TruthValue.T
PAIRS = list(itertools.product(ALL, ALL))

# reference tables, rows = left operand, columns = right operand
REFERENCE = {
    BinaryConn.AND: {T: (T, B, F), B: (B, B, F), F: (F, F, F)},
    BinaryConn.OR: {T: (T, T, T), B: (T, B, B), F: (T, B, F)},
    BinaryConn.WEAK_IMP: {T: (T, B, F), B: (T, B, B), F: (T, T, T)},
    BinaryConn.STRONG_IMP: {T: (T, F, F), B: (T, B, B), F: (T, T, T)},
    BinaryConn.IFF: {T: (T, F, F), B: (F, T, F), F: (F, F, T)},
    BinaryConn.XOR: {T: (F, B, T), B: (B, B, B), F: (T, B, F)},
}
UNARY_REFERENCE = {
    UnaryConn.NEG: {T: F, B: B, F: T},
    UnaryConn.MOD_T: {T: T, B: F, F: F},
    UnaryConn.MOD_B: {T: F, B: T, F: F},
    UnaryConn.MOD_F: {T: F, B: F, F: T},
    UnaryConn.MOD_TB: {T: T, B: T, F: F},
    UnaryConn.MOD_TF: {T: T, B: F, F: T},
}


def conn(c):
    return lambda a, b: apply_binary(c, a, b)


AND, OR = conn(BinaryConn.AND), conn(BinaryConn.OR)
WIMP, SIMP = conn(BinaryConn.WEAK_IMP), conn(BinaryConn.STRONG_IMP)
IFF, XOR = conn(BinaryConn.IFF), conn(BinaryConn.XOR)


def mod(c):
    return lambda a: apply_unary(c, a)


MOD_T, MOD_B, MOD_TB, MOD_TF = (mod(UnaryConn.MOD_T), mod(UnaryConn.MOD_B),
                                mod(UnaryConn.MOD_TB), mod(UnaryConn.MOD_TF))


class TestTables:
    @pytest.mark.parametrize("c", list(BinaryConn))
    def test_binary_table(self, c):
        for a in ALL:
            for b, expected in zip(ALL, REFERENCE[c][a]):
                assert apply_binary(c, a, b) is expected, (c, a, b)

    @pytest.mark.parametrize("c", list(UnaryConn))
    def test_unary_table(self, c):
        for a in ALL:
            assert apply_unary(c, a) is UNARY_REFERENCE[c][a]

    @pytest.mark.parametrize("c,a,b,expected", [
        (BinaryConn.AND, T, B, B),
        (BinaryConn.WEAK_IMP, F, B, T),
        (BinaryConn.STRONG_IMP, T, B, F),
        (BinaryConn.XOR, B, T, B),
    ])
    def test_examples(self, c, a, b, expected):
        assert apply_binary(c, a, b) is expected

    def test_unary_examples(self):
        assert neg(B) is B
        assert MOD_T(B) is F
        assert MOD_TF(F) is T

    def test_and_or_are_meet_join(self):
        for a, b in PAIRS:
            assert AND(a, b) == min(a, b)
            assert OR(a, b) == max(a, b)

    def test_idempotent_meet(self):
        for a in ALL:
            assert AND(a, a) is a


class TestOrder:
    def test_three_inhabitants(self):
        assert len(TruthValue) == 3
        assert F < B < T

    def test_leq(self):
        assert leq(F, B)
        assert not leq(T, B)
        for a in ALL:
            assert leq(a, a)

    def test_validity(self):
        assert is_valid(T) and is_valid(B) and not is_valid(F)

    def test_folds(self):
        assert fold_and([T, B, T]) is B
        assert fold_or([F, F]) is F
        assert fold_and([]) is T
        assert fold_or([]) is F

    def test_text(self):
        assert [str(x) for x in (T, B, F)] == ["T", "B", "F"]
        assert TruthValue.parse("B") is B
        with pytest.raises(ValueError):
            TruthValue.parse("X")


class TestLaws:
    def test_weak_modus_ponens(self):
        for a, b in PAIRS:
            assert is_valid(WIMP(a, b)) == (a is not T or is_valid(b))

    def test_strong_modus_ponens(self):
        for a, b in PAIRS:
            assert is_valid(SIMP(a, b)) == (a is not T or b is T)

    def test_validity_of_and_or(self):
        for a, b in PAIRS:
            assert is_valid(OR(a, b)) == (is_valid(a) or is_valid(b))
            assert is_valid(AND(a, b)) == (is_valid(a) and is_valid(b))

    def test_excluded_middle(self):
        for a in ALL:
            assert is_valid(OR(a, neg(a)))

    def test_paraconsistency(self):
        for a in ALL:
            assert is_valid(AND(a, neg(a))) == (a is B) == is_valid(MOD_B(a))

    def test_implications_from_or(self):
        for a, b in PAIRS:
            assert WIMP(a, b) is OR(neg(a), b)
            assert SIMP(a, b) is WIMP(a, MOD_T(b))

    def test_antitone_negation(self):
        for a, b in PAIRS:
            assert leq(a, b) == leq(neg(b), neg(a))

    def test_modal_compositions(self):
        for a in ALL:
            assert MOD_TB(MOD_T(a)) is MOD_T(a)
            assert MOD_T(MOD_B(a)) is MOD_B(a)
            assert MOD_T(MOD_TB(a)) is MOD_TB(a)

    def test_mod_t_after_mod_tb_differs_from_mod_t_at_b(self):
        assert [a for a in ALL if MOD_T(MOD_TB(a)) is not MOD_T(a)] == [B]

    def test_de_morgan_for_modalities(self):
        for a in ALL:
            assert neg(MOD_T(neg(a))) is MOD_TB(a)
            assert neg(MOD_TB(neg(a))) is MOD_T(a)

    def test_modalities_distribute(self):
        for a, b in PAIRS:
            for m in (MOD_T, MOD_TB):
                assert m(AND(a, b)) is AND(m(a), m(b))
                assert m(OR(a, b)) is OR(m(a), m(b))

    def test_xor_from_and_or(self):
        for a, b in PAIRS:
            assert XOR(a, b) is OR(AND(a, neg(b)), AND(neg(a), b))

    def test_iff_is_agreement(self):
        for a, b in PAIRS:
            agree = OR(OR(AND(MOD_T(a), MOD_T(b)), AND(MOD_B(a), MOD_B(b))),
                       AND(MOD_T(neg(a)), MOD_T(neg(b))))
            assert IFF(a, b) is agree
            assert IFF(a, b) is (T if a is b else F)

    def test_strong_contrapositive_preserves_validity(self):
        for a, b in PAIRS:
            assert is_valid(SIMP(a, b)) == is_valid(SIMP(MOD_TB(neg(b)), MOD_TB(neg(a))))

    def test_strong_contrapositive_values(self):
        # as truth values the two sides part ways only when the antecedent is B
        differ = [(a, b) for a, b in PAIRS if SIMP(a, b) is not SIMP(MOD_TB(neg(b)), MOD_TB(neg(a)))]
        assert differ == [(B, B), (B, F)]
