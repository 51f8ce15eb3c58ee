"""Finite semitopologies given by a basis of open sets.

Open sets are the unions of basis members.  The spatial modalities only
ever need the basis: a join of meets over a union of basis sets never
exceeds the best meet over a single member, and every nonempty open set
contains a nonempty basis member.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .kernel3 import TruthValue, fold_and, fold_or


class SpatialModality(enum.Enum):
    EVERYWHERE = "E"
    SOMEWHERE = "S"
    QUORUM = "Q"
    CONTRAQUORUM = "C"


def natural_key(name: str) -> tuple:
    """Sort key that orders ``p2`` before ``p10``."""
    return tuple(int(part) if part.isdigit() else part for part in re.split(r"(\d+)", name))


@dataclass(frozen=True)
class Semitopology:
    points: tuple[str, ...]
    basis: tuple[frozenset[str], ...]
    # nonempty basis members, plus the whole space when no union of the basis yields it
    opens: tuple[frozenset[str], ...] = field(init=False, repr=False, compare=False)
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __init__(self, points: Iterable[str], basis: Iterable[Iterable[str]]):
        pts = tuple(sorted(set(points), key=natural_key))
        if not pts:
            raise ValueError("a semitopology needs at least one point")
        index = {p: i for i, p in enumerate(pts)}
        members = set()
        for open_set in basis:
            open_set = frozenset(open_set)
            unknown = open_set - index.keys()
            if unknown:
                raise ValueError(f"basis set mentions unknown points: {sorted(unknown)}")
            members.add(open_set)

        def order(s: frozenset[str]) -> tuple:
            return (len(s), sorted(index[p] for p in s))

        ordered = tuple(sorted(members, key=order))
        opens = [s for s in ordered if s]
        whole = frozenset(pts)
        if frozenset().union(*opens) != whole:
            opens.append(whole)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "basis", ordered)
        object.__setattr__(self, "opens", tuple(opens))
        object.__setattr__(self, "index", index)

    def __repr__(self) -> str:
        basis = ", ".join("{" + ",".join(sorted(s, key=natural_key)) + "}" for s in self.basis)
        return f"Semitopology(points={list(self.points)}, basis=[{basis}])"

    def __len__(self) -> int:
        return len(self.points)


def from_threshold(n: int, q: int, prefix: str = "p") -> Semitopology:
    """``n`` points whose quorums are the sets of at least ``q`` points."""
    if n < 1:
        raise ValueError(f"need at least one point, got n={n}")
    if not 1 <= q <= n:
        raise ValueError(f"quorum size must satisfy 1 <= q <= n, got q={q}, n={n}")
    points = [f"{prefix}{i}" for i in range(n)]
    return Semitopology(points, itertools.combinations(points, q))


def nonempty_basis_opens(s: Semitopology) -> list[frozenset[str]]:
    return [b for b in s.basis if b]


def is_open(s: Semitopology, subset: Iterable[str]) -> bool:
    subset = frozenset(subset)
    unknown = subset - s.index.keys()
    if unknown:
        raise ValueError(f"not a subset of the points: {sorted(unknown)}")
    covered = frozenset().union(*(o for o in s.opens if o <= subset))
    return covered == subset


def _values(s: Semitopology, f: Mapping[str, TruthValue]) -> list[TruthValue]:
    try:
        return [f[p] for p in s.points]
    except KeyError as exc:
        raise ValueError(f"point predicate is undefined at {exc.args[0]}") from None


def eval_modality(s: Semitopology, m: SpatialModality, f: Mapping[str, TruthValue]) -> TruthValue:
    return eval_modality_vec(s, m, _values(s, f))


def eval_modality_vec(s: Semitopology, m: SpatialModality, vec: Sequence[TruthValue]) -> TruthValue:
    """As :func:`eval_modality`, with the predicate given in point order."""
    if m is SpatialModality.EVERYWHERE:
        return fold_and(vec)
    if m is SpatialModality.SOMEWHERE:
        return fold_or(vec)
    idx = s.index
    if m is SpatialModality.QUORUM:
        return fold_or(fold_and(vec[idx[p]] for p in o) for o in s.opens)
    return fold_and(fold_or(vec[idx[p]] for p in o) for o in s.opens)


def is_n_twined(s: Semitopology, n: int) -> bool:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return bool(s.points)
    for group in itertools.combinations_with_replacement(s.opens, n):
        if not frozenset.intersection(*group):
            return False
    return True
