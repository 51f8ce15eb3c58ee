"""Checking models against theories, exhaustive enumeration, and counterexample search."""
from __future__ import annotations

import functools
import itertools
import os
import random
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .formats import dumps_json, model_digest
from .kernel3 import TruthValue
from .semantics import Model, closure_bindings, denote_vector
from .semitopo import Semitopology, from_threshold, is_n_twined
from .syntax import predicates as formula_predicates
from .theories import AxiomSchema, Polarity, PropertySchema, SchemaKind, Theory

F, B, T = TruthValue.F, TruthValue.B, TruthValue.T

DEFAULT_CAP = 10 ** 7
STRUCTURAL_TWINING = {"3twined": 3}


class ProfileError(ValueError):
    """The model does not fit the theory's predicates or value set."""


class CapExceeded(ValueError):
    def __init__(self, required: int, allowed: int):
        self.required = required
        self.allowed = allowed
        super().__init__(f"model space has {required} interpretations, above the cap of {allowed}"
                         " (raise it with SEMITOP_CAP)")


def default_cap() -> int:
    text = os.environ.get("SEMITOP_CAP")
    if text is None:
        return DEFAULT_CAP
    try:
        cap = int(text)
    except ValueError:
        raise ValueError(f"SEMITOP_CAP must be an integer, got {text!r}") from None
    if cap < 1:
        raise ValueError("SEMITOP_CAP must be positive")
    return cap


@dataclass(frozen=True)
class InstanceResult:
    formula: str
    bindings: tuple[tuple[str, str], ...]
    values: tuple[tuple[str, TruthValue], ...]
    valid: bool

    def to_dict(self) -> dict:
        return {
            "formula": self.formula,
            "bindings": dict(self.bindings),
            "values": {p: str(v) for p, v in self.values},
            "valid": self.valid,
        }


@dataclass(frozen=True)
class Verdict:
    name: str
    kind: str  # axiom, property, lemma
    polarity: Polarity
    instances: tuple[InstanceResult, ...]
    passed: bool

    def failing_instances(self) -> list[InstanceResult]:
        want = self.polarity is Polarity.VALID
        return [i for i in self.instances if i.valid != want]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "polarity": self.polarity.value,
            "passed": self.passed,
            "instances": [i.to_dict() for i in self.instances],
        }


@dataclass(frozen=True)
class Report:
    model_digest: str
    theory: str | None
    axioms: tuple[Verdict, ...] = ()
    properties: tuple[Verdict, ...] = ()
    lemmas: tuple[Verdict, ...] = ()
    structural: tuple[tuple[str, bool], ...] = ()

    @property
    def overall(self) -> bool:
        return all(ok for _, ok in self.structural) and all(
            v.passed for v in (*self.axioms, *self.properties, *self.lemmas))

    def failures(self) -> list[str]:
        out = [name for name, ok in self.structural if not ok]
        out += [v.name for v in (*self.axioms, *self.properties, *self.lemmas) if not v.passed]
        return out

    def verdict(self, name: str) -> Verdict:
        for v in (*self.axioms, *self.properties, *self.lemmas):
            if v.name == name:
                return v
        raise KeyError(name)

    def summary(self) -> dict:
        def count(vs):
            return {"passed": sum(v.passed for v in vs), "failed": sum(not v.passed for v in vs)}
        return {
            "axioms": count(self.axioms),
            "properties": count(self.properties),
            "lemmas": count(self.lemmas),
            "structural": {"passed": sum(ok for _, ok in self.structural),
                           "failed": sum(not ok for _, ok in self.structural)},
        }

    def to_dict(self) -> dict:
        return {
            "model": self.model_digest,
            "theory": self.theory,
            "structural": dict(self.structural),
            "axioms": [v.to_dict() for v in self.axioms],
            "properties": [v.to_dict() for v in self.properties],
            "lemmas": [v.to_dict() for v in self.lemmas],
            "summary": self.summary(),
            "overall": self.overall,
        }

    def to_json(self) -> str:
        return dumps_json(self.to_dict())

    def to_text(self) -> str:
        lines = []
        for name, ok in self.structural:
            lines.append(f"{'PASS' if ok else 'FAIL'}  structural {name}")
        for v in (*self.axioms, *self.properties, *self.lemmas):
            lines.append(f"{'PASS' if v.passed else 'FAIL'}  {v.kind} {v.name}")
            for inst in v.failing_instances()[:3]:
                shown = " ".join(f"{p}={tv}" for p, tv in inst.values)
                lines.append(f"        {inst.formula}  [{shown}]")
        lines.append("overall: " + ("pass" if self.overall else "FAIL"))
        return "\n".join(lines) + "\n"


@functools.lru_cache(maxsize=256)
def _twined(space: Semitopology, n: int) -> bool:
    return is_n_twined(space, n)


def structural_holds(space: Semitopology, rule: str) -> bool:
    try:
        n = STRUCTURAL_TWINING[rule]
    except KeyError:
        raise ValueError(f"unknown structural rule {rule!r}") from None
    return _twined(space, n)


def check_profile(m: Model, t: Theory) -> None:
    missing = set(t.predicates) - m.predicates
    if missing:
        raise ProfileError(f"model lacks predicates of {t.name}: {sorted(missing)}")
    problem = t.profile.mismatch(m.values)
    if problem:
        raise ProfileError(f"value set does not fit {t.name}: {problem}")


def _check_schema_fits(m: Model, schema: PropertySchema | AxiomSchema) -> None:
    missing = formula_predicates(schema.formula) - m.predicates
    if missing:
        raise ProfileError(f"{schema.name} uses predicates the model lacks: {sorted(missing)}")


def _verdict(m: Model, name: str, kind: str, formula, domains, polarity: Polarity) -> Verdict:
    records = []
    for bindings, inst in closure_bindings(m, formula, dict(domains)):
        vec = denote_vector(m, inst)
        records.append(InstanceResult(
            formula=str(inst),
            bindings=tuple(sorted(bindings.items())),
            values=tuple(zip(m.space.points, vec)),
            valid=F not in vec,
        ))
    if polarity is Polarity.VALID:
        passed = all(r.valid for r in records)
    else:
        passed = not any(r.valid for r in records)
    return Verdict(name, kind, polarity, tuple(records), passed)


def check_model(m: Model, t: Theory | None, props: Sequence[PropertySchema] = (),
                lemmas: Sequence[PropertySchema] = (), include_axioms: bool = True) -> Report:
    axioms: list[Verdict] = []
    structural: list[tuple[str, bool]] = []
    if t is not None:
        check_profile(m, t)
        if include_axioms:
            for ax in t.axioms:
                if ax.kind is SchemaKind.STRUCTURAL:
                    structural.append((ax.name, structural_holds(m.space, ax.name)))
                else:
                    axioms.append(_verdict(m, ax.name, "axiom", ax.formula, ax.domains, Polarity.VALID))
    for p in (*props, *lemmas):
        _check_schema_fits(m, p)
    return Report(
        model_digest=model_digest(m),
        theory=t.name if t is not None else None,
        axioms=tuple(axioms),
        properties=tuple(_verdict(m, p.name, "property", p.formula, p.domains, p.polarity) for p in props),
        lemmas=tuple(_verdict(m, p.name, "lemma", p.formula, p.domains, p.polarity) for p in lemmas),
        structural=tuple(structural),
    )


def check_theory(m: Model, t: Theory) -> Report:
    return check_model(m, t)


def check_properties(m: Model, props: Sequence[PropertySchema], t: Theory | None = None) -> Report:
    if t is not None:
        check_profile(m, t)
    return check_model(m, t, props, include_axioms=False)


# fast boolean checks used by enumeration and search

def _schema_ok(m: Model, formula, domains, polarity: Polarity) -> bool:
    for _, inst in closure_bindings(m, formula, dict(domains)):
        valid = F not in denote_vector(m, inst)
        if valid != (polarity is Polarity.VALID):
            return False
    return True


def is_model_of(m: Model, t: Theory) -> bool:
    """Every axiom valid and every structural rule satisfied, with early exit."""
    for ax in t.axioms:
        if ax.kind is SchemaKind.STRUCTURAL:
            if not structural_holds(m.space, ax.name):
                return False
        elif not _schema_ok(m, ax.formula, ax.domains, Polarity.VALID):
            return False
    return True


def violated_properties(m: Model, props: Sequence[PropertySchema]) -> list[str]:
    return [p.name for p in props if not _schema_ok(m, p.formula, p.domains, p.polarity)]


# enumeration

def model_space_size(space: Semitopology, values: Sequence[str], preds: Sequence[str]) -> int:
    return 3 ** (len(space.points) * len(values) * len(preds))


def enumerate_models(space: Semitopology, values: Sequence[str], preds: Sequence[str],
                     filter: Theory | None = None, cap: int | None = None) -> Iterator[Model]:
    """All interpretations in lexicographic order (F < B < T, slots ordered by
    predicate, then point, then value); with ``filter``, only models of it."""
    cap = default_cap() if cap is None else cap
    size = model_space_size(space, values, preds)
    if size > cap:
        raise CapExceeded(size, cap)
    values = tuple(values)
    if filter is not None:
        missing = set(filter.predicates) - set(preds)
        if missing:
            raise ProfileError(f"enumeration lacks predicates of {filter.name}: {sorted(missing)}")
        if any(not structural_holds(space, rule) for rule in filter.structural):
            return
    slots = [(pred, p, v) for pred in preds for p in space.points for v in values]
    for combo in itertools.product((F, B, T), repeat=len(slots)):
        interp: dict = {pred: {p: {} for p in space.points} for pred in preds}
        for (pred, p, v), tv in zip(slots, combo):
            interp[pred][p][v] = tv
        m = Model(values, space, interp)
        if filter is None or is_model_of(m, filter):
            yield m


@dataclass(frozen=True)
class Entailment:
    passed: bool
    models_enumerated: int
    theory_models: int
    countermodel: Model | None = None
    violated: tuple[str, ...] = ()

    @property
    def vacuous(self) -> bool:
        return self.theory_models == 0


def verify_entailment(space: Semitopology, values: Sequence[str], t: Theory,
                      props: Sequence[PropertySchema], cap: int | None = None) -> Entailment:
    """Does every model of ``t`` over this space and value set satisfy ``props``?"""
    enumerated = 0
    models = 0
    for m in enumerate_models(space, values, t.predicates, cap=cap):
        enumerated += 1
        if not is_model_of(m, t):
            continue
        models += 1
        bad = violated_properties(m, props)
        if bad:
            return Entailment(False, enumerated, models, m, tuple(bad))
    return Entailment(True, enumerated, models)


# counterexample search

SEARCH_MODES = ("exhaustive", "random", "guided")

Generator = Callable[[random.Random], Model]


@dataclass(frozen=True)
class SearchConfig:
    mode: str = "guided"
    seed: int = 0
    budget: int = 10_000
    cap: int | None = None
    n: int = 4
    quorum: int = 3
    values: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.mode not in SEARCH_MODES:
            raise ValueError(f"unknown search mode {self.mode!r}; expected one of {', '.join(SEARCH_MODES)}")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if not -2 ** 63 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class SearchResult:
    model: Model | None
    violated: tuple[str, ...]
    candidates: int
    theory_models: int

    @property
    def found(self) -> bool:
        return self.model is not None


def _search_values(t: Theory, cfg: SearchConfig) -> tuple[str, ...]:
    if cfg.values is not None:
        return tuple(cfg.values)
    if t.profile.fixed is not None:
        return t.profile.fixed
    return ("u", "w")


def _random_model(rng: random.Random, space: Semitopology, values, preds) -> Model:
    return Model.build(values, space, preds, lambda *_: rng.choice((F, B, T)))


def search_counterexample(t: Theory, props: Sequence[PropertySchema], cfg: SearchConfig,
                          generators: Sequence[Generator] | None = None) -> SearchResult:
    """Look for a model of ``t`` violating one of ``props``.

    Only candidates that pass :func:`is_model_of` count as theory models; the
    budget bounds the number of candidates examined.
    """
    values = _search_values(t, cfg)
    problem = t.profile.mismatch(values)
    if problem:
        raise ProfileError(problem)
    space = from_threshold(cfg.n, cfg.quorum)
    rng = random.Random(cfg.seed)

    if cfg.mode == "exhaustive":
        stream: Iterator[Model] = enumerate_models(space, values, t.predicates, cap=cfg.cap)
    elif cfg.mode == "random":
        stream = (_random_model(rng, space, values, t.predicates) for _ in itertools.count())
    else:
        if generators is None:
            from .simulator import guided_generators
            generators = guided_generators(t, cfg.n, cfg.quorum, values)
        if generators:
            stream = (rng.choice(generators)(rng) for _ in itertools.count())
        else:
            stream = (_random_model(rng, space, values, t.predicates) for _ in itertools.count())

    candidates = 0
    models = 0
    for m in itertools.islice(stream, cfg.budget):
        candidates += 1
        if not is_model_of(m, t):
            continue
        models += 1
        bad = violated_properties(m, props)
        if bad:
            return SearchResult(m, tuple(bad), candidates, models)
    return SearchResult(None, (), candidates, models)
