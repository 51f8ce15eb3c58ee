import itertools

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from semitop.kernel3 import TruthValue
from semitop.semantics import Model
from semitop.semitopo import Semitopology, from_threshold
from semitop.syntax import (
    And, Bot, Contraquorum, Correct, Eq, Everywhere, Exists, ExistsAffine, ExistsUnique,
    Forall, Iff, Incorrect, ModB, ModF, ModT, ModTB, ModTF, Neg, Or, Pred, Quorum,
    Somewhere, StrongImp, Val, Var, WeakImp, Xor, free_vars,
)

settings.register_profile("default", deadline=None, max_examples=150)
settings.load_profile("default")

F, B, T = TruthValue.F, TruthValue.B, TruthValue.T
TV = st.sampled_from([F, B, T])

VARS = ("a", "b", "v'")
VALUES = ("v0", "v1", "v2")
PREDS = ("P", "R")

UNARY = (Neg, ModT, ModB, ModF, ModTB, ModTF, Quorum, Contraquorum, Everywhere, Somewhere)
BINARY = (And, Or, Xor, WeakImp, StrongImp, Iff)
QUANT = (Exists, ExistsAffine, ExistsUnique, Forall)

terms = st.one_of(st.sampled_from(VARS).map(Var), st.sampled_from(VALUES).map(Val))

leaves = st.one_of(
    st.just(Bot()),
    st.builds(Pred, st.sampled_from(PREDS), terms),
    st.builds(Eq, terms, terms),
    st.builds(lambda cls, preds: cls(tuple(preds)), st.sampled_from((Correct, Incorrect)),
              st.lists(st.sampled_from(PREDS), min_size=1, max_size=2)),
)


def _extend(children):
    return st.one_of(
        st.builds(lambda cls, x: cls(x), st.sampled_from(UNARY), children),
        st.builds(lambda cls, x, y: cls(x, y), st.sampled_from(BINARY), children, children),
        st.builds(lambda cls, v, x: cls(v, x), st.sampled_from(QUANT), st.sampled_from(VARS), children),
    )


formulas = st.recursive(leaves, _extend, max_leaves=12)


@st.composite
def closed_formulas(draw):
    phi = draw(formulas)
    for var in sorted(free_vars(phi)):
        phi = draw(st.sampled_from(QUANT))(var, phi)
    return phi


@st.composite
def spaces(draw, max_points=4):
    n = draw(st.integers(1, max_points))
    points = [f"p{i}" for i in range(n)]
    if draw(st.booleans()):
        return from_threshold(n, draw(st.integers(1, n)))
    basis = draw(st.lists(st.sets(st.sampled_from(points)), max_size=4))
    return Semitopology(points, basis)


@st.composite
def models(draw, preds=PREDS, values=VALUES, max_points=4):
    space = draw(spaces(max_points))
    interp = {
        pred: {p: {v: draw(TV) for v in values} for p in space.points}
        for pred in preds
    }
    return Model(values, space, interp)


@st.composite
def point_predicates(draw, space):
    return {p: draw(TV) for p in space.points}


def all_maps(keys):
    """Every map from ``keys`` to truth values, as dicts."""
    for combo in itertools.product((F, B, T), repeat=len(keys)):
        yield dict(zip(keys, combo))


@pytest.fixture
def t43():
    return from_threshold(4, 3)


def weakened_ready_fixture():
    """Honest run where every point readies and delivers both values."""
    entries = {
        "broadcast": {"p0": {"u": T}},
        "echo": {p: {"u": T} for p in ("p0", "p1", "p2", "p3")},
        "ready": {p: {"u": T, "w": T} for p in ("p0", "p1", "p2", "p3")},
        "deliver": {p: {"u": T, "w": T} for p in ("p0", "p1", "p2", "p3")},
    }
    return Model.from_partial(("u", "w"), from_threshold(4, 3),
                              ("broadcast", "echo", "ready", "deliver"), entries)


def vote_model(votes, observes, space=None):
    """Voting model from per-point strings over ``TBF``."""
    space = space or from_threshold(len(votes), 3)
    table = {"vote": votes, "observe": observes}
    return Model.build(("u",), space, ("vote", "observe"),
                       lambda pred, p, v: TruthValue.parse(table[pred][space.index[p]]))


ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, parts = results[number]
        ok = all(passed for passed, _, _ in parts)
        elapsed = sum(t for _, t, _ in parts)
        notes = "; ".join(note for passed, _, note in parts if not passed and note)
        line = f"criterion {number:2d}  {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f}s)"
        terminalreporter.write_line(line + (f"  [{notes}]" if notes else ""))
