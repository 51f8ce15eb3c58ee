"""Axiom systems for voting, Bracha Broadcast and Crusader Agreement.

Each theory is a list of named schemas.  A schema may have free variables;
it stands for its universal closure over the per-variable domains (the whole
value set unless restricted).  The 3-twined requirement cannot be written as
a single formula and is carried as a structural schema checked on the space.

Theories round-trip through a line-oriented text format::

    @theory ThyCA
    @predicates input, echo1, echo2, output
    @values 0, half, 1
    @structural 3twined
    CaInput : : (input('0) (+) input('1)) & !input('half)
    @property CaAgree : v={0,1} v'={0,1} : ([S] output(v) & [S] output(v')) => v == v'
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .grammar import parse, to_text
from .syntax import Formula, free_vars, predicates, value_ids


class SchemaKind(enum.Enum):
    FORMULA = "formula"
    STRUCTURAL = "structural"


class Polarity(enum.Enum):
    VALID = "must-be-valid"
    INVALID = "must-be-invalid"


STRUCTURAL_RULES = ("3twined",)

Domains = tuple[tuple[str, tuple[str, ...]], ...]


def _freeze_domains(domains: Mapping[str, Sequence[str]] | Domains | None) -> Domains:
    if not domains:
        return ()
    items = domains.items() if isinstance(domains, Mapping) else domains
    return tuple(sorted((var, tuple(vals)) for var, vals in items))


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    formula: Formula | None
    domains: Domains = ()
    kind: SchemaKind = SchemaKind.FORMULA

    def __post_init__(self):
        object.__setattr__(self, "domains", _freeze_domains(self.domains))
        if (self.kind is SchemaKind.STRUCTURAL) != (self.formula is None):
            raise ValueError(f"{self.name}: structural schemas carry no formula, formula schemas need one")
        if self.kind is SchemaKind.STRUCTURAL and self.name not in STRUCTURAL_RULES:
            raise ValueError(f"unknown structural rule {self.name!r}")

    @property
    def domain_map(self) -> dict[str, tuple[str, ...]]:
        return dict(self.domains)


@dataclass(frozen=True)
class PropertySchema:
    name: str
    formula: Formula
    domains: Domains = ()
    polarity: Polarity = Polarity.VALID

    def __post_init__(self):
        object.__setattr__(self, "domains", _freeze_domains(self.domains))

    @property
    def domain_map(self) -> dict[str, tuple[str, ...]]:
        return dict(self.domains)


@dataclass(frozen=True)
class ValueProfile:
    """Required value set: exactly ``fixed`` (in any order) when given, else any nonempty set."""

    fixed: tuple[str, ...] | None = None

    def mismatch(self, values: Sequence[str]) -> str | None:
        if not values:
            return "the value set is empty"
        if self.fixed is not None and sorted(values) != sorted(self.fixed):
            return f"expected values {list(self.fixed)}, got {list(values)}"
        return None

    def __str__(self) -> str:
        return "any" if self.fixed is None else ", ".join(self.fixed)


@dataclass(frozen=True)
class Theory:
    name: str
    axioms: tuple[AxiomSchema, ...]
    predicates: tuple[str, ...]
    profile: ValueProfile = field(default_factory=ValueProfile)

    def __post_init__(self):
        names = [a.name for a in self.axioms]
        dup = sorted({n for n in names if names.count(n) > 1})
        if dup:
            raise ValueError(f"duplicate axiom names in {self.name}: {dup}")
        for ax in self.formula_axioms:
            extra = predicates(ax.formula) - set(self.predicates)
            if extra:
                raise ValueError(f"{ax.name} uses undeclared predicates {sorted(extra)}")

    @property
    def formula_axioms(self) -> tuple[AxiomSchema, ...]:
        return tuple(a for a in self.axioms if a.kind is SchemaKind.FORMULA)

    @property
    def structural(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axioms if a.kind is SchemaKind.STRUCTURAL)

    def axiom(self, name: str) -> AxiomSchema:
        for a in self.axioms:
            if a.name == name:
                return a
        raise KeyError(f"{self.name} has no axiom {name!r}")


def replace_axiom(t: Theory, name: str, formula: Formula | str) -> Theory:
    if isinstance(formula, str):
        formula = parse(formula)
    old = t.axiom(name)
    if old.kind is SchemaKind.STRUCTURAL:
        raise ValueError(f"cannot replace structural rule {name} by a formula")
    axioms = tuple(replace(a, formula=formula) if a.name == name else a for a in t.axioms)
    return replace(t, axioms=axioms)


def without_axiom(t: Theory, name: str) -> Theory:
    t.axiom(name)
    return replace(t, axioms=tuple(a for a in t.axioms if a.name != name))


# name, domains, formula text
_Row = tuple[str, str, str]

_VOTE_AXIOMS: list[_Row] = [
    ("Observe?", "", "observe('u) -> [Q] vote('u)"),
    ("ObserveNeg?", "", "!observe('u) -> [Q] !vote('u)"),
    ("Observe!", "", "[Q] vote('u) => observe('u)"),
    ("ObserveNeg!", "", "[Q] !vote('u) => !observe('u)"),
    ("Correct", "", "[Q] %TF vote('u)"),
]
_VOTE_PROPERTIES: list[_Row] = [
    ("Agreement", "", "[S] %T observe('u) & [S] %T !observe('u)"),
]
_VOTE_LEMMAS: list[_Row] = [
    ("ObserveSomewhere", "", "[S] observe('u) -> [Q] vote('u)"),
    ("ObserveEverywhere", "", "[Q] vote('u) => [E] observe('u)"),
    ("ObserveNegSomewhere", "", "[S] !observe('u) -> [Q] !vote('u)"),
    ("ObserveNegEverywhere", "", "[Q] !vote('u) => [E] !observe('u)"),
]

_BB_AXIOMS: list[_Row] = [
    ("BrDeliver?", "", "deliver(a) -> [Q] ready(a)"),
    ("BrReady?", "", "ready(a) -> [Q] echo(a)"),
    ("BrEcho?", "", "echo(a) -> [S] broadcast(a)"),
    ("BrEcho01", "", "exists01 a. echo(a)"),
    ("BrBroadcast1", "", "exists1 a. [S] broadcast(a)"),
    ("BrDeliver!", "", "[Q] ready(a) -> deliver(a)"),
    ("BrReady!", "", "[Q] echo(a) -> ready(a)"),
    ("BrEcho!", "", "[S] broadcast(a) -> exists b. echo(b)"),
    ("BrReady!!", "", "[C] ready(a) -> ready(a)"),
    ("BrCorrect", "", "[Q] correct{ready} & [Q] correct{echo}"),
    ("BrCorrect'", "", "(correct{ready} | incorrect{ready}) & (correct{echo} | incorrect{echo})"),
    ("BrCorrect''", "", "[E] correct{broadcast} | [E] incorrect{broadcast}"),
]
_BB_PROPERTIES: list[_Row] = [
    ("BrValidity", "", "[S] broadcast(a) -> [E] deliver(a)"),
    ("BrNoDup", "", "exists01 a. deliver(a)"),
    ("BrIntegrity", "", "deliver(a) -> [S] broadcast(a)"),
    ("BrConsistency", "", "exists01 a. [S] deliver(a)"),
    ("BrTotality", "", "[S] deliver(a) -> [E] deliver(a)"),
]
_BB_LEMMAS: list[_Row] = [
    ("SenderCases", "", "([E] correct{broadcast} & exists1 a. %T [S] broadcast(a)) | [E] incorrect{broadcast}"),
    ("BroadcastEcho", "", "[S] broadcast(a) -> echo(a)"),
    ("BroadcastEchoEverywhere", "", "[S] broadcast(a) -> [E] echo(a)"),
    ("EchoQuorumReady", "", "[Q] echo(a) -> [E] ready(a)"),
    ("ReadyQuorumDeliver", "", "[Q] ready(a) -> [E] deliver(a)"),
    ("EchoEverywhereQuorum", "", "%TB [E] echo(a) => [Q] echo(a)"),
    ("ReadyEverywhereQuorum", "", "%TB [E] ready(a) => [Q] ready(a)"),
    ("ReadyQuorumContraquorum", "", "%TB [Q] ready(a) => [C] ready(a)"),
    ("EchoQuorumsMeet", "", "%TB ([Q] echo(a) & [Q] echo(b)) => [S] (echo(a) & echo(b))"),
    ("ReadyQuorumsMeet", "", "%TB ([Q] ready(a) & [Q] ready(b)) => [S] (ready(a) & ready(b))"),
]

_BINARY = "{0,1}"
_CA_AXIOMS: list[_Row] = [
    ("CaEcho1?", "", "echo1(a) => [S] input(a)"),
    ("CaEcho2?", "", "echo2(a) -> [Q] echo1(a)"),
    ("CaOutput?", "", "(output('0) -> [Q] echo2('0)) & (output('1) -> [Q] echo2('1))"),
    ("CaOutput'?", "", "output('half) -> ([Q] echo1('0) & [Q] echo1('1))"),
    ("CaCorrect", "", "[Q] (correct{input} & correct{echo1} & correct{echo2} & correct{output})"),
    ("CaCorrect'", "", "(correct{input} | incorrect{input}) & (correct{echo1} | incorrect{echo1})"
                       " & (correct{echo2} | incorrect{echo2}) & (correct{output} | incorrect{output})"),
    ("CaInput", "", "(input('0) (+) input('1)) & !input('half)"),
    ("CaEcho2_01", "", "exists01 a. echo2(a)"),
    ("CaEcho1!", "", "(input(a) | [C] echo1(a)) -> echo1(a)"),
    ("CaEcho2!", "", "(exists a. [Q] echo1(a)) -> exists a. echo2(a)"),
    ("CaOutput!", "", "[Q] echo2(a) -> output(a)"),
    ("CaOutput'!", "", "([Q] echo1('0) & [Q] echo1('1)) -> output('half)"),
]
_CA_PROPERTIES: list[_Row] = [
    ("CaAgree", f"v={_BINARY} v'={_BINARY}", "([S] output(v) & [S] output(v')) => v == v'"),
    ("CaValid1", f"v={_BINARY}", "(%TB [E] input(v) & output(v')) => v == v'"),
    ("CaValid2", f"v={_BINARY}", "[S] output(v) => [S] input(v)"),
    ("CaLive", "", "[E] exists a. output(a)"),
]
_CA_LEMMAS: list[_Row] = [
    ("InputComplement", "", "(%TB input('0) <-> %TB !input('1)) & (%TB input('1) <-> %TB !input('0))"),
    ("InputFunctional", "", "(input(a) & input(b)) => a == b"),
    ("InputEverywhereSomewhere", "", "(%TB [E] input(a) & [S] input(b)) => a == b"),
    ("Echo1QuorumContraquorum", "", "%TB [Q] echo1(a) => [C] echo1(a)"),
    ("Echo1ContraquorumEverywhere", "", "[C] echo1(a) -> [E] echo1(a)"),
    ("Echo1EverywhereQuorum", "", "%TB [E] echo1(a) => [Q] echo1(a)"),
    ("Echo2Quorum", "", "echo2(a) => [Q] echo1(a)"),
    ("InputContraquorum", "", "%T [C] (input('0) & correct{echo1}) | %T [C] (input('1) & correct{echo1})"),
    ("Echo1Contraquorum", "", "%T [C] echo1('0) | %T [C] echo1('1)"),
    ("Echo1Quorum", "", "%T [Q] echo1('0) | %T [Q] echo1('1)"),
    ("Echo2Everywhere", "", "[E] (echo2('0) | echo2('1))"),
    ("Echo2Quorum01", "", "%T [Q] (echo2('0) | echo2('1))"),
    ("InputBinary", "", "input(a) => (a == '0 | a == '1)"),
    ("Echo1Binary", "", "echo1(a) => (a == '0 | a == '1)"),
    ("Echo2Binary", "", "echo2(a) => (a == '0 | a == '1)"),
    ("Echo2NotHalf", "", "echo2('half) => bot"),
]

_DOMAIN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*'*)=\{([^}]*)\}")


def parse_domains(text: str) -> Domains:
    """``v={0,1} v'={0,half,1}`` -> domains; empty text means no restriction."""
    text = text.strip()
    out = []
    pos = 0
    for m in _DOMAIN.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"malformed domain list {text!r}")
        values = tuple(v.strip() for v in m.group(2).split(",") if v.strip())
        if not values:
            raise ValueError(f"empty domain for {m.group(1)}")
        out.append((m.group(1), values))
        pos = m.end()
    if text[pos:].strip():
        raise ValueError(f"malformed domain list {text!r}")
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        raise ValueError(f"variable given two domains in {text!r}")
    return _freeze_domains(out)


def format_domains(domains: Domains) -> str:
    return " ".join(f"{var}={{{','.join(vals)}}}" for var, vals in domains)


def _check_domains(name: str, formula: Formula, domains: Domains) -> None:
    unused = {v for v, _ in domains} - free_vars(formula)
    if unused:
        raise ValueError(f"{name}: domain given for variables not free in the formula: {sorted(unused)}")


def _axioms(rows: list[_Row]) -> tuple[AxiomSchema, ...]:
    return tuple(AxiomSchema(n, parse(f), parse_domains(d)) for n, d, f in rows)


def _props(rows: list[_Row], polarity: Polarity = Polarity.VALID) -> tuple[PropertySchema, ...]:
    return tuple(PropertySchema(n, parse(f), parse_domains(d), polarity) for n, d, f in rows)


_THREE_TWINED = AxiomSchema("3twined", None, kind=SchemaKind.STRUCTURAL)

CRUSADER_VALUES = ("0", "half", "1")
VOTE_VALUES = ("u",)

THEORY_NAMES = ("ThyVote", "ThyBB", "ThyCA")
ALIASES = {"vote": "ThyVote", "bracha": "ThyBB", "crusader": "ThyCA"}


def canonical_name(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in THEORY_NAMES:
        raise KeyError(f"unknown theory {name!r}; expected one of {', '.join(THEORY_NAMES + tuple(ALIASES))}")
    return name


def theory(name: str) -> Theory:
    name = canonical_name(name)
    if name == "ThyVote":
        return Theory(name, _axioms(_VOTE_AXIOMS) + (_THREE_TWINED,), ("vote", "observe"),
                      ValueProfile(VOTE_VALUES))
    if name == "ThyBB":
        return Theory(name, _axioms(_BB_AXIOMS) + (_THREE_TWINED,),
                      ("broadcast", "echo", "ready", "deliver"), ValueProfile())
    return Theory(name, _axioms(_CA_AXIOMS) + (_THREE_TWINED,),
                  ("input", "echo1", "echo2", "output"), ValueProfile(CRUSADER_VALUES))


def properties(name: str) -> list[PropertySchema]:
    name = canonical_name(name)
    if name == "ThyVote":
        return list(_props(_VOTE_PROPERTIES, Polarity.INVALID))
    return list(_props(_BB_PROPERTIES if name == "ThyBB" else _CA_PROPERTIES))


def derived_lemmas(name: str) -> list[PropertySchema]:
    name = canonical_name(name)
    rows = {"ThyVote": _VOTE_LEMMAS, "ThyBB": _BB_LEMMAS, "ThyCA": _CA_LEMMAS}[name]
    return list(_props(rows))


def weakened_bracha() -> Theory:
    """ThyBB with BrReady? relaxed so a contraquorum of ready also justifies ready."""
    return replace_axiom(theory("ThyBB"), "BrReady?", "ready(a) -> ([Q] echo(a) | [C] ready(a))")


# text format

@dataclass(frozen=True)
class TheoryFile:
    theory: Theory
    properties: tuple[PropertySchema, ...] = ()
    lemmas: tuple[PropertySchema, ...] = ()


def _schema_line(name: str, domains: Domains, formula: Formula) -> str:
    return f"{name} : {format_domains(domains)} : {to_text(formula)}".replace(" :  : ", " : : ")


def dump_theory(t: Theory, props: Sequence[PropertySchema] = (),
                lemmas: Sequence[PropertySchema] = ()) -> str:
    lines = [f"@theory {t.name}", f"@predicates {', '.join(t.predicates)}", f"@values {t.profile}"]
    for ax in t.axioms:
        if ax.kind is SchemaKind.STRUCTURAL:
            lines.append(f"@structural {ax.name}")
        else:
            lines.append(_schema_line(ax.name, ax.domains, ax.formula))
    for p in props:
        tag = "@property" if p.polarity is Polarity.VALID else "@invalid-property"
        lines.append(f"{tag} {_schema_line(p.name, p.domains, p.formula)}")
    for p in lemmas:
        lines.append(f"@lemma {_schema_line(p.name, p.domains, p.formula)}")
    return "\n".join(lines) + "\n"


def _split_schema(body: str, lineno: int) -> tuple[str, Domains, Formula]:
    parts = body.split(":", 2)
    if len(parts) != 3:
        raise ValueError(f"line {lineno}: expected NAME : DOMAINS : FORMULA")
    name = parts[0].strip()
    if not name:
        raise ValueError(f"line {lineno}: missing schema name")
    try:
        domains = parse_domains(parts[1])
        formula = parse(parts[2])
        _check_domains(name, formula, domains)
    except ValueError as exc:
        raise ValueError(f"line {lineno}: {exc}") from None
    return name, domains, formula


def load_theory(text: str) -> TheoryFile:
    name = None
    preds: tuple[str, ...] | None = None
    profile = ValueProfile()
    axioms: list[AxiomSchema] = []
    props: list[PropertySchema] = []
    lemmas: list[PropertySchema] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@"):
            directive, _, rest = line.partition(" ")
            rest = rest.strip()
            if directive == "@theory":
                name = rest
            elif directive == "@predicates":
                preds = tuple(p.strip() for p in rest.split(",") if p.strip())
            elif directive == "@values":
                profile = ValueProfile(None if rest == "any" else
                                       tuple(v.strip() for v in rest.split(",") if v.strip()))
            elif directive == "@structural":
                axioms.append(AxiomSchema(rest, None, kind=SchemaKind.STRUCTURAL))
            elif directive in ("@property", "@invalid-property", "@lemma"):
                n, d, f = _split_schema(rest, lineno)
                polarity = Polarity.INVALID if directive == "@invalid-property" else Polarity.VALID
                (lemmas if directive == "@lemma" else props).append(PropertySchema(n, f, d, polarity))
            else:
                raise ValueError(f"line {lineno}: unknown directive {directive}")
            continue
        n, d, f = _split_schema(line, lineno)
        axioms.append(AxiomSchema(n, f, d))
    if name is None:
        raise ValueError("missing @theory line")
    if preds is None:
        found: set[str] = set()
        for ax in axioms:
            if ax.formula is not None:
                found |= predicates(ax.formula)
        preds = tuple(sorted(found))
    if profile.fixed is not None:
        for sch in [*axioms, *props, *lemmas]:
            if sch.formula is None:
                continue
            unknown = value_ids(sch.formula) - set(profile.fixed)
            unknown |= {v for _, vals in sch.domains for v in vals} - set(profile.fixed)
            if unknown:
                raise ValueError(f"{sch.name} mentions values outside the profile: {sorted(unknown)}")
    return TheoryFile(Theory(name, tuple(axioms), preds, profile), tuple(props), tuple(lemmas))


def resolve_theory(source: str) -> TheoryFile:
    """A builtin theory name or alias, or a path to a theory file."""
    try:
        name = canonical_name(source)
    except KeyError:
        with open(source, encoding="utf-8") as fh:
            return load_theory(fh.read())
    return TheoryFile(theory(name), tuple(properties(name)), tuple(derived_lemmas(name)))
