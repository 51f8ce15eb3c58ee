"""Deterministic synchronous runs of the three protocols, and their extraction into models.

Rounds are numbered from 1.  Messages sent in round ``r`` arrive at the start
of round ``r + 1``; every message goes to every participant, the sender
included.  Honest state only grows, so a run stops at the first round after
which no message is in flight (or at ``max_rounds``).

Byzantine participants act by strategy.  Whatever they do, extraction maps
their protocol predicates to ``B`` at every value; the one exception is the
voting ``observe``, which records what the participant actually saw because
observations are never reported to anyone.
"""
from __future__ import annotations

import random
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

from .kernel3 import TruthValue
from .semantics import Model
from .semitopo import from_threshold

F, B, T = TruthValue.F, TruthValue.B, TruthValue.T

PROTOCOLS = ("vote", "bracha", "crusader")
STRATEGIES = ("conform", "equivocate", "silent", "random")
THEORY_OF = {"vote": "ThyVote", "bracha": "ThyBB", "crusader": "ThyCA"}

VOTE_VALUES = ("u",)
CRUSADER_VALUES = ("0", "half", "1")
BRACHA_VALUES = ("u", "w")

PREDICATES = {
    "vote": ("vote", "observe"),
    "bracha": ("broadcast", "echo", "ready", "deliver"),
    "crusader": ("input", "echo1", "echo2", "output"),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    protocol: str
    n: int = 4
    quorum: int = 3
    contraquorum: int = 2
    byzantine: tuple[str, ...] = ()
    strategy: str = "conform"
    seed: int = 0
    values: tuple[str, ...] | None = None
    sender: str = "p0"
    value: str | None = None
    votes: tuple[bool, ...] | None = None
    inputs: tuple[str, ...] | None = None
    echo2_tiebreak: str = "low"
    single_output: bool = False
    max_rounds: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "byzantine", tuple(sorted(set(self.byzantine), key=self.points_order)))
        for name in ("values", "votes", "inputs"):
            if getattr(self, name) is not None:
                object.__setattr__(self, name, tuple(getattr(self, name)))
        self._validate()

    @classmethod
    def classic(cls, protocol: str, f: int = 1, **kw) -> "RunConfig":
        """The n = 3f+1, quorum 2f+1, contraquorum f+1 profile."""
        if f < 0:
            raise ConfigError("f must be nonnegative")
        return cls(protocol, n=3 * f + 1, quorum=2 * f + 1, contraquorum=f + 1, **kw)

    @staticmethod
    def points_order(name: str):
        return (len(name), name)

    @property
    def points(self) -> tuple[str, ...]:
        return tuple(f"p{i}" for i in range(self.n))

    @property
    def value_set(self) -> tuple[str, ...]:
        if self.protocol == "vote":
            return VOTE_VALUES
        if self.protocol == "crusader":
            return CRUSADER_VALUES
        return self.values if self.values is not None else BRACHA_VALUES

    @property
    def sender_value(self) -> str:
        return self.value if self.value is not None else self.value_set[0]

    @property
    def round_limit(self) -> int:
        return self.max_rounds if self.max_rounds is not None else self.n + 2

    @property
    def honest(self) -> tuple[str, ...]:
        return tuple(p for p in self.points if p not in self.byzantine)

    def vote_of(self, p: str) -> bool:
        return True if self.votes is None else self.votes[int(p[1:])]

    def input_of(self, p: str) -> str:
        return "0" if self.inputs is None else self.inputs[int(p[1:])]

    def _validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}; expected one of {', '.join(PROTOCOLS)}")
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if not 1 <= self.quorum <= self.n:
            raise ConfigError(f"quorum size must lie in 1..{self.n}")
        if not 1 <= self.contraquorum <= self.n:
            raise ConfigError(f"contraquorum size must lie in 1..{self.n}")
        unknown = set(self.byzantine) - set(self.points)
        if unknown:
            raise ConfigError(f"byzantine participants not among the points: {sorted(unknown)}")
        if len(self.byzantine) > self.n - self.quorum:
            raise ConfigError(f"{len(self.byzantine)} byzantine participants leave no honest quorum"
                              f" (at most n - quorum = {self.n - self.quorum} allowed)")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}; expected one of {', '.join(STRATEGIES)}")
        if self.echo2_tiebreak not in ("low", "high"):
            raise ConfigError("echo2 tie-break must be 'low' or 'high'")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ConfigError("max_rounds must be positive")
        if self.values is not None:
            if self.protocol != "bracha":
                raise ConfigError(f"the {self.protocol} protocol has a fixed value set")
            if not self.values or len(set(self.values)) != len(self.values):
                raise ConfigError("values must be nonempty and distinct")
        if self.protocol == "bracha":
            if self.sender not in self.points:
                raise ConfigError(f"sender {self.sender} is not a participant")
            if self.sender_value not in self.value_set:
                raise ConfigError(f"sender value {self.sender_value!r} is not in {list(self.value_set)}")
        if self.votes is not None and len(self.votes) != self.n:
            raise ConfigError(f"expected {self.n} votes, got {len(self.votes)}")
        if self.inputs is not None:
            if len(self.inputs) != self.n:
                raise ConfigError(f"expected {self.n} inputs, got {len(self.inputs)}")
            bad = [v for v in self.inputs if v not in ("0", "1")]
            if bad:
                raise ConfigError(f"crusader inputs must be 0 or 1, got {bad}")

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol, "n": self.n, "quorum": self.quorum,
            "contraquorum": self.contraquorum, "byzantine": list(self.byzantine),
            "strategy": self.strategy, "seed": self.seed, "values": list(self.value_set),
            "sender": self.sender if self.protocol == "bracha" else None,
            "value": self.sender_value if self.protocol == "bracha" else None,
            "votes": [self.vote_of(p) for p in self.points] if self.protocol == "vote" else None,
            "inputs": [self.input_of(p) for p in self.points] if self.protocol == "crusader" else None,
            "echo2_tiebreak": self.echo2_tiebreak, "single_output": self.single_output,
            "max_rounds": self.round_limit,
        }


class Message(NamedTuple):
    round: int
    sender: str
    recipient: str
    tag: str
    value: str


class Event(NamedTuple):
    round: int
    tag: str
    value: str


@dataclass
class Trace:
    config: RunConfig
    rounds: list[list[Message]] = field(default_factory=list)
    events: dict[str, list[Event]] = field(default_factory=dict)
    hit_round_limit: bool = False

    def performed(self, p: str, tag: str) -> set[str]:
        return {e.value for e in self.events.get(p, ()) if e.tag == tag}

    def outputs(self, p: str) -> set[str]:
        tag = {"vote": "observe", "bracha": "deliver", "crusader": "output"}[self.config.protocol]
        return self.performed(p, tag)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "rounds": [[{"from": m.sender, "to": m.recipient, "tag": m.tag, "value": m.value} for m in msgs]
                       for msgs in self.rounds],
            "events": {p: [{"round": e.round, "tag": e.tag, "value": e.value} for e in evs]
                       for p, evs in self.events.items()},
            "hit_round_limit": self.hit_round_limit,
        }


class _Node:
    """Honest protocol logic for one participant."""

    def __init__(self, name: str, cfg: RunConfig):
        self.name = name
        self.cfg = cfg
        self.seen: dict[tuple[str, str], set[str]] = defaultdict(set)
        self.done: set[tuple[str, str]] = set()
        self.events: list[Event] = []

    def receive(self, m: Message) -> None:
        self.seen[m.tag, m.value].add(m.sender)

    def count(self, tag: str, value: str) -> int:
        return len(self.seen.get((tag, value), ()))

    def emit(self, r: int, tag: str, value: str, out: list[tuple[str, str]], send: bool = True) -> None:
        self.done.add((tag, value))
        self.events.append(Event(r, tag, value))
        if send:
            out.append((tag, value))

    def step(self, r: int) -> list[tuple[str, str]]:
        out: list[tuple[str, str]] = []
        getattr(self, "_" + self.cfg.protocol)(r, out)
        return out

    def _vote(self, r: int, out) -> None:
        if r == 1:
            self.emit(r, "vote", "T" if self.cfg.vote_of(self.name) else "F", out)
        elif r == 2:
            self.events.append(Event(r, "observe", self.observation()))

    def observation(self) -> str:
        q = self.cfg.quorum
        yes, no = self.count("vote", "T") >= q, self.count("vote", "F") >= q
        if yes and not no:
            return "T"
        if no and not yes:
            return "F"
        return "none"

    def _bracha(self, r: int, out) -> None:
        cfg = self.cfg
        if r == 1 and self.name == cfg.sender:
            self.emit(r, "broadcast", cfg.sender_value, out)
        if not any(tag == "echo" for tag, _ in self.done):
            got = [v for v in cfg.value_set if cfg.sender in self.seen.get(("broadcast", v), ())]
            if got:
                # a sender reaches each recipient at most once, so this is its first message
                self.emit(r, "echo", got[0], out)
        for v in cfg.value_set:
            if ("ready", v) not in self.done and (
                    self.count("echo", v) >= cfg.quorum or self.count("ready", v) >= cfg.contraquorum):
                self.emit(r, "ready", v, out)
        for v in cfg.value_set:
            if ("deliver", v) not in self.done and self.count("ready", v) >= cfg.quorum:
                self.emit(r, "deliver", v, out, send=False)

    def _crusader(self, r: int, out) -> None:
        cfg = self.cfg
        own = cfg.input_of(self.name)
        other = "1" if own == "0" else "0"
        if r == 1:
            self.events.append(Event(r, "input", own))
            self.emit(r, "echo1", own, out)
        if ("echo1", other) not in self.done and self.count("echo1", other) >= cfg.contraquorum:
            self.emit(r, "echo1", other, out)
        if not any(tag == "echo2" for tag, _ in self.done):
            ready = [w for w in ("0", "1") if self.count("echo1", w) >= cfg.quorum]
            if ready:
                w = ready[-1] if cfg.echo2_tiebreak == "high" else ready[0]
                self.emit(r, "echo2", w, out)
        outputs = [u for u in ("0", "1")
                   if self.count("echo2", u) >= cfg.quorum and self.count("echo1", u) >= cfg.quorum]
        if self.count("echo1", "0") >= cfg.quorum and self.count("echo1", "1") >= cfg.quorum:
            outputs.append("half")
        for u in outputs:
            if cfg.single_output and any(tag == "output" for tag, _ in self.done):
                break
            if ("output", u) not in self.done:
                self.emit(r, "output", u, out, send=False)


# rounds in which byzantine participants inject each message kind
_BYZANTINE_PLAN = {
    "vote": {1: ("vote", ("T", "F"))},
    "bracha": {1: ("broadcast", None), 2: ("echo", None), 3: ("ready", None)},
    "crusader": {1: ("echo1", ("0", "1")), 2: ("echo1", ("1", "0")), 3: ("echo2", ("0", "1"))},
}


def _byzantine_messages(cfg: RunConfig, p: str, r: int) -> list[Message]:
    plan = _BYZANTINE_PLAN[cfg.protocol].get(r)
    if plan is None or cfg.strategy == "silent":
        return []
    tag, pair = plan
    if tag == "broadcast" and p != cfg.sender:
        return []  # the sender cannot be impersonated
    options = pair if pair is not None else cfg.value_set
    recipients = cfg.points
    out = []
    if cfg.strategy == "equivocate":
        first, second = options[0], options[1 % len(options)]
        for i, q in enumerate(recipients):
            out.append(Message(r, p, q, tag, first if i < len(recipients) // 2 else second))
    else:
        choices = tuple(options) + (None,)
        if cfg.protocol == "crusader":
            choices = CRUSADER_VALUES + (None,)
        for q in recipients:
            rng = random.Random(f"{cfg.seed}:{r}:{p}:{q}:{tag}")
            v = rng.choice(choices)
            if v is not None:
                out.append(Message(r, p, q, tag, v))
    return out


def run(cfg: RunConfig) -> Trace:
    nodes = {p: _Node(p, cfg) for p in cfg.points}
    scripted = set(cfg.byzantine) if cfg.strategy != "conform" else set()
    trace = Trace(cfg)
    last_plan = max(_BYZANTINE_PLAN[cfg.protocol])
    inflight: list[Message] = []
    for r in range(1, cfg.round_limit + 1):
        for m in inflight:
            nodes[m.recipient].receive(m)
        sent: list[Message] = []
        for p in cfg.points:
            if p in scripted:
                sent += _byzantine_messages(cfg, p, r)
                # a scripted participant still keeps its own observations
                if cfg.protocol == "vote" and r == 2:
                    nodes[p].events.append(Event(r, "observe", nodes[p].observation()))
                continue
            for tag, value in nodes[p].step(r):
                sent += [Message(r, p, q, tag, value) for q in cfg.points]
        trace.rounds.append(sent)
        inflight = sent
        if not sent and r >= last_plan:
            break
    else:
        if inflight:
            trace.hit_round_limit = True
            warnings.warn(f"{cfg.protocol} run stopped at the round limit {cfg.round_limit}"
                          " with messages still in flight", RuntimeWarning, stacklevel=2)
    trace.events = {p: list(nodes[p].events) for p in cfg.points}
    return trace


def extract_model(tr: Trace, cfg: RunConfig | None = None, values: Sequence[str] | None = None) -> Model:
    cfg = tr.config if cfg is None else cfg
    if cfg != tr.config:
        raise ValueError("trace was produced by a different configuration")
    values = tuple(cfg.value_set if values is None else values)
    if values != cfg.value_set:
        raise ValueError(f"values {list(values)} do not match the run's value set {list(cfg.value_set)}")
    space = from_threshold(cfg.n, cfg.quorum)
    byz = set(cfg.byzantine)

    def lookup(pred: str, p: str, v: str) -> TruthValue:
        if cfg.protocol == "vote" and pred == "observe":
            seen = tr.performed(p, "observe")
            return {"T": T, "F": F}.get(next(iter(seen), "none"), B)
        if cfg.protocol == "bracha" and pred == "broadcast":
            if cfg.sender in byz:
                return B
            return T if p == cfg.sender and v == cfg.sender_value else F
        if p in byz:
            return B
        if pred == "vote":
            return T if cfg.vote_of(p) else F
        return T if v in tr.performed(p, pred) else F

    return Model.build(values, space, PREDICATES[cfg.protocol], lookup)


def run_and_check(cfg: RunConfig, theory_name: str | None = None, with_properties: bool = True,
                  with_lemmas: bool = True):
    from .checker import check_model
    from .theories import derived_lemmas, properties, theory

    name = theory_name or THEORY_OF[cfg.protocol]
    if THEORY_OF[cfg.protocol] != name:
        raise ValueError(f"{cfg.protocol} runs are checked against {THEORY_OF[cfg.protocol]}, not {name}")
    m = extract_model(run(cfg), cfg)
    return check_model(m, theory(name), properties(name) if with_properties else (),
                       derived_lemmas(name) if with_lemmas else ())


def random_config(protocol: str, rng: random.Random, n: int = 4, quorum: int = 3,
                  values: Sequence[str] | None = None) -> RunConfig:
    """A random run configuration with an admissible byzantine set."""
    points = [f"p{i}" for i in range(n)]
    nbyz = rng.randint(0, n - quorum)
    kw: dict = dict(
        n=n, quorum=quorum, contraquorum=n - quorum + 1,
        byzantine=tuple(rng.sample(points, nbyz)), strategy=rng.choice(STRATEGIES),
        seed=rng.getrandbits(32),
    )
    if protocol == "vote":
        kw["votes"] = tuple(rng.random() < 0.5 for _ in points)
    elif protocol == "bracha":
        vals = tuple(values) if values is not None else BRACHA_VALUES
        kw.update(values=vals, sender=rng.choice(points), value=rng.choice(vals))
    else:
        kw.update(inputs=tuple(rng.choice("01") for _ in points),
                  echo2_tiebreak=rng.choice(("low", "high")))
    return RunConfig(protocol, **kw)


def _protocol_for(predicates: Sequence[str]) -> str | None:
    for proto, preds in PREDICATES.items():
        if set(preds) == set(predicates):
            return proto
    return None


def guided_generators(t, n: int, quorum: int, values: Sequence[str]) -> list[Callable[[random.Random], Model]]:
    """Model generators for guided search: simulator runs plus column mutations.

    A mutation sets one (predicate, value) column to ``T`` or ``F`` at every
    honest point, or flips a single honest cell; byzantine points stay ``B``.
    """
    proto = _protocol_for(t.predicates)
    if proto is None:
        return []
    if proto != "bracha" and tuple(values) != RunConfig(proto, n=n, quorum=quorum).value_set:
        return []

    def generate(rng: random.Random) -> Model:
        cfg = random_config(proto, rng, n, quorum, values if proto == "bracha" else None)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            m = extract_model(run(cfg), cfg)
        honest = [p for p in cfg.points if p not in cfg.byzantine]
        updates: dict[tuple[str, str, str], TruthValue] = {}
        for _ in range(rng.randint(0, 3)):
            pred = rng.choice(PREDICATES[proto])
            v = rng.choice(cfg.value_set)
            tv = rng.choice((T, F))
            if rng.random() < 0.5:
                for p in honest:
                    updates[pred, p, v] = tv
            else:
                updates[pred, rng.choice(honest), v] = tv
        return m.with_entries(updates) if updates else m

    return [generate]


def bracha_grid(runs: int = 500, f: int = 1) -> list[RunConfig]:
    """The loop-closure sweep: adversary x sender x value-set size, cycled over seeds."""
    n = 3 * f + 1
    combos = [(strategy, byz_sender, nvals)
              for strategy in STRATEGIES for byz_sender in (False, True) for nvals in (2, 3)]
    out = []
    for i in range(runs):
        strategy, byz_sender, nvals = combos[i % len(combos)]
        rng = random.Random(i)
        values = ("u", "w", "x")[:nvals]
        sender = f"p{rng.randrange(n)}"
        others = [p for p in (f"p{j}" for j in range(n)) if p != sender]
        byz = (sender,) if byz_sender else tuple(rng.sample(others, f))
        out.append(RunConfig.classic("bracha", f, byzantine=byz, strategy=strategy, seed=i,
                                     values=values, sender=sender, value=rng.choice(values)))
    return out


def crusader_grid(f: int = 1) -> list[RunConfig]:
    out = []
    for inputs in ("0000", "1111", "0001", "0011", "0101"):
        for byz in ((), ("p3",)):
            for strategy in (STRATEGIES if byz else ("conform",)):
                for tiebreak in ("low", "high"):
                    for seed in range(3 if strategy == "random" else 1):
                        out.append(RunConfig.classic("crusader", f, inputs=tuple(inputs), byzantine=byz,
                                                     strategy=strategy, seed=seed, echo2_tiebreak=tiebreak))
    return out
