"""The three-element truth-value lattice F < B < T and its connectives.

``B`` is the middle value: read it as *both* or *byzantine*.  A value is
*valid* when it is ``T`` or ``B``.
"""
from __future__ import annotations

import enum
from typing import Iterable


class TruthValue(enum.IntEnum):
    F = 0
    B = 1
    T = 2

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, text: str) -> "TruthValue":
        try:
            return cls[text]
        except KeyError:
            raise ValueError(f"not a truth value: {text!r} (expected T, B or F)") from None


F, B, T = TruthValue.F, TruthValue.B, TruthValue.T
ALL = (T, B, F)


class BinaryConn(enum.Enum):
    AND = "and"
    OR = "or"
    WEAK_IMP = "weak_imp"
    STRONG_IMP = "strong_imp"
    IFF = "iff"
    XOR = "xor"


class UnaryConn(enum.Enum):
    NEG = "neg"
    MOD_T = "mod_t"
    MOD_B = "mod_b"
    MOD_F = "mod_f"
    MOD_TB = "mod_tb"
    MOD_TF = "mod_tf"


def _table(rows: str) -> dict[tuple[TruthValue, TruthValue], TruthValue]:
    # rows indexed by left operand T, B, F; columns by right operand T, B, F
    out = {}
    for a, row in zip(ALL, rows.split("/")):
        for b, cell in zip(ALL, row.split()):
            out[a, b] = TruthValue[cell]
    return out


_BINARY = {
    BinaryConn.AND: _table("T B F / B B F / F F F"),
    BinaryConn.OR: _table("T T T / T B B / T B F"),
    BinaryConn.WEAK_IMP: _table("T B F / T B B / T T T"),
    BinaryConn.STRONG_IMP: _table("T F F / T B B / T T T"),
    BinaryConn.IFF: _table("T F F / F T F / F F T"),
    BinaryConn.XOR: _table("F B T / B B B / T B F"),
}

# columns give the image of T, B, F
_UNARY = {
    UnaryConn.NEG: (F, B, T),
    UnaryConn.MOD_T: (T, F, F),
    UnaryConn.MOD_B: (F, T, F),
    UnaryConn.MOD_F: (F, F, T),
    UnaryConn.MOD_TB: (T, T, F),
    UnaryConn.MOD_TF: (T, F, T),
}
_UNARY_MAP = {conn: dict(zip(ALL, col)) for conn, col in _UNARY.items()}


def apply_binary(conn: BinaryConn, a: TruthValue, b: TruthValue) -> TruthValue:
    return _BINARY[conn][a, b]


def apply_unary(conn: UnaryConn, a: TruthValue) -> TruthValue:
    return _UNARY_MAP[conn][a]


def leq(a: TruthValue, b: TruthValue) -> bool:
    return a <= b


def is_valid(a: TruthValue) -> bool:
    return a != F


def fold_and(xs: Iterable[TruthValue]) -> TruthValue:
    return min(xs, default=T)


def fold_or(xs: Iterable[TruthValue]) -> TruthValue:
    return max(xs, default=F)


def neg(a: TruthValue) -> TruthValue:
    return _UNARY_MAP[UnaryConn.NEG][a]


def from_bool(flag: bool) -> TruthValue:
    return T if flag else F
