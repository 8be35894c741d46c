"""Core model for dynamic network connectivity games.

A network is an undirected graph whose nodes carry a label, an active flag,
and a strong flag. Two players alternate half-moves, Destructor first:
Destructor deletes one weak (active, non-strong) node or skips; Constructor
applies one rule from the game's rule set (relabel, move strongness, create
a node) or skips. Constructor's objective is connectivity of the active
subgraph, either kept forever (safety) or reached once (reachability).

Networks and moves are immutable values; every operation returns fresh data.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

BLANK = "_"

DESTRUCTOR = "destructor"
CONSTRUCTOR = "constructor"

SAFETY = "safety"
REACHABILITY = "reachability"


class IllegalMove(ValueError):
    """Raised when a half-move fails a legality check."""


def edge_key(u: str, v: str) -> tuple[str, str]:
    """Normalize an undirected edge to a sorted pair."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Network:
    """An immutable network state.

    ``labeling`` is stored as a plain dict for ergonomics but must never be
    mutated; all operations in this module copy it. ``fresh`` seeds the
    deterministic counter used to mint identifiers for created nodes and is
    excluded from equality (it is play bookkeeping, not graph structure).
    """

    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]
    active: frozenset[str]
    strong: frozenset[str]
    labeling: dict[str, str]
    fresh: int = field(default=0, compare=False)

    @property
    def weak(self) -> frozenset[str]:
        return self.active - self.strong

    @property
    def deleted(self) -> frozenset[str]:
        return self.vertices - self.active

    def label(self, v: str) -> str:
        return self.labeling[v]

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def neighbors(self, v: str) -> set[str]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}


def make_network(
    vertices=(),
    edges=(),
    active=(),
    strong=(),
    labeling=None,
    fresh: int = 0,
) -> Network:
    """Build a network, normalizing edge order and defaulting labels to blank."""
    vs = frozenset(vertices)
    labels = {v: BLANK for v in vs}
    labels.update(dict(labeling or {}))
    return Network(
        vertices=vs,
        edges=frozenset(edge_key(u, v) for u, v in edges),
        active=frozenset(active),
        strong=frozenset(strong),
        labeling=labels,
        fresh=fresh,
    )


# --- Rules ------------------------------------------------------------------


@dataclass(frozen=True)
class RelabelRule:
    """One or more relabel steps applied in order within a single turn.

    Each step (a, b, c, d) rewrites the labels of an adjacent active pair
    (u, v) from (a, b) to (c, d).
    """

    steps: tuple[tuple[str, str, str, str], ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("relabel rule needs at least one step")


@dataclass(frozen=True)
class MoveRule:
    """Shift strongness from a strong ``source``-labeled node to an adjacent
    non-strong ``target``-labeled node, reactivating it if deleted."""

    source: str
    target: str


@dataclass(frozen=True)
class CreateRule:
    """Create a fresh node connected to n distinct strong nodes whose labels
    match ``required``; their labels are rewritten to ``rewritten``."""

    required: tuple[str, ...]
    rewritten: tuple[str, ...]
    label: str
    strong: bool = False

    def __post_init__(self):
        if len(self.required) < 1:
            raise ValueError("create rule needs arity >= 1")
        if len(self.required) != len(self.rewritten):
            raise ValueError("create rule label lists must have equal length")


Rule = RelabelRule | MoveRule | CreateRule


# --- Moves ------------------------------------------------------------------


@dataclass(frozen=True)
class Delete:
    vertex: str

    @property
    def actor(self) -> str:
        return DESTRUCTOR


@dataclass(frozen=True)
class Skip:
    actor: str


@dataclass(frozen=True)
class Apply:
    """Constructor applies rule ``rule_index`` under a concrete binding.

    Binding shapes: MoveRule -> (source, target); RelabelRule -> one (u, v)
    pair per step; CreateRule -> one bound node per required-label position.
    """

    rule_index: int
    binding: tuple

    @property
    def actor(self) -> str:
        return CONSTRUCTOR


HalfMove = Delete | Skip | Apply


def _binding_vertices(move: Apply) -> tuple[str, ...]:
    flat: list[str] = []
    for part in move.binding:
        if isinstance(part, tuple):
            flat.extend(part)
        else:
            flat.append(part)
    return tuple(flat)


def move_sort_key(move: HalfMove) -> tuple:
    """Canonical move order: concrete moves before Skip, then by vertices and
    rule index. Used everywhere a deterministic tie-break is needed."""
    if isinstance(move, Delete):
        return (0, "", (move.vertex,))
    if isinstance(move, Apply):
        return (1, move.rule_index, _binding_vertices(move))
    return (2, "", ())


def describe_move(move: HalfMove) -> str:
    if isinstance(move, Delete):
        return f"delete {move.vertex}"
    if isinstance(move, Skip):
        return "skip"
    parts = ",".join(
        "-".join(p) if isinstance(p, tuple) else p for p in move.binding
    )
    return f"rule {move.rule_index} @ {parts}"


# --- Games ------------------------------------------------------------------


@dataclass(frozen=True)
class Game:
    initial: Network
    rules: tuple[Rule, ...]
    objective: str
    alphabet: frozenset[str]


@dataclass(frozen=True)
class GameClass:
    has_weak_create: bool
    has_strong_create: bool
    has_move: bool
    has_relabel: bool
    is_unlabeled: bool
    is_non_expanding: bool


def classify(game: Game) -> GameClass:
    """Compute the game-variant flags used for solver dispatch."""
    has_weak = any(isinstance(r, CreateRule) and not r.strong for r in game.rules)
    has_strong = any(isinstance(r, CreateRule) and r.strong for r in game.rules)
    has_move = any(isinstance(r, MoveRule) for r in game.rules)
    has_relabel = any(isinstance(r, RelabelRule) for r in game.rules)
    all_blank = all(l == BLANK for l in game.initial.labeling.values())
    unlabeled = all_blank and set(game.rules) == {MoveRule(BLANK, BLANK)}
    return GameClass(
        has_weak_create=has_weak,
        has_strong_create=has_strong,
        has_move=has_move,
        has_relabel=has_relabel,
        is_unlabeled=unlabeled,
        is_non_expanding=not (has_weak or has_strong),
    )


def objective_precondition_errors(game: Game) -> list[str]:
    """Safety games must start connected, reachability games disconnected."""
    connected = is_connected(game.initial)
    if game.objective == SAFETY and not connected:
        return ["safety game must start connected"]
    if game.objective == REACHABILITY and connected:
        return ["reachability game must start disconnected"]
    return []


# --- Operations ---------------------------------------------------------------


def validate(net: Network) -> list[str]:
    """Return every violated network invariant; an empty list means ok."""
    issues = []
    if not net.strong <= net.active:
        issues.append("strong ⊄ active")
    if not net.active <= net.vertices:
        issues.append("active ⊄ vertices")
    for u, v in sorted(net.edges):
        if u == v:
            issues.append(f"self-loop at {u}")
        if u not in net.vertices or v not in net.vertices:
            issues.append(f"edge ({u},{v}) endpoint not a vertex")
    missing = sorted(net.vertices - net.labeling.keys())
    if missing:
        issues.append(f"labeling not total: {','.join(missing)}")
    extra = sorted(net.labeling.keys() - net.vertices)
    if extra:
        issues.append(f"labeling of unknown vertices: {','.join(extra)}")
    return issues


def is_connected(net: Network) -> bool:
    """True iff the subgraph induced by the active vertices is connected.

    Networks with at most one active vertex count as connected.
    """
    act = net.active
    if len(act) <= 1:
        return True
    adj = net.adjacency()
    start = min(act)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w in act and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(act)


def level(net: Network, next_actor: str) -> int:
    """Weak-node count, minus one when Constructor moves next (clamped at 0)."""
    weak = len(net.weak)
    if next_actor == CONSTRUCTOR:
        return max(0, weak - 1)
    return weak


def enumerate_destructor_moves(net: Network) -> list[HalfMove]:
    """All deletions of weak nodes, in vertex order, followed by Skip."""
    moves: list[HalfMove] = [Delete(v) for v in sorted(net.weak)]
    moves.append(Skip(DESTRUCTOR))
    return moves


def enumerate_constructor_moves(net: Network, rules) -> list[HalfMove]:
    """All legal rule instantiations in canonical order, followed by Skip.

    Create bindings that differ only by permuting equal-labeled positions
    yield identical successors; only the canonically first representative of
    each successor is kept.
    """
    moves: list[HalfMove] = []
    adj = net.adjacency()
    for index, rule in enumerate(rules):
        if isinstance(rule, MoveRule):
            moves.extend(_move_bindings(net, adj, index, rule))
        elif isinstance(rule, RelabelRule):
            moves.extend(_relabel_bindings(net, adj, index, rule))
        else:
            moves.extend(_create_bindings(net, index, rule))
    moves.append(Skip(CONSTRUCTOR))
    return moves


def _move_bindings(net, adj, index, rule):
    out = []
    for u in sorted(net.strong):
        if net.labeling[u] != rule.source:
            continue
        for v in sorted(adj[u]):
            if v not in net.strong and net.labeling[v] == rule.target:
                out.append(Apply(index, (u, v)))
    return out


def _relabel_bindings(net, adj, index, rule):
    # Each step matches against the labeling as rewritten by earlier steps
    # of the same turn; depth-first over steps in canonical pair order.
    out = []

    def extend(step_idx: int, labeling: dict[str, str], chosen: tuple):
        if step_idx == len(rule.steps):
            out.append(Apply(index, chosen))
            return
        a, b, c, d = rule.steps[step_idx]
        for u in sorted(net.active):
            if labeling[u] != a:
                continue
            for v in sorted(adj[u]):
                if v in net.active and labeling[v] == b:
                    updated = dict(labeling)
                    updated[u] = c
                    updated[v] = d
                    extend(step_idx + 1, updated, chosen + ((u, v),))

    extend(0, dict(net.labeling), ())
    return out


def _create_bindings(net, index, rule):
    candidates = [
        [u for u in sorted(net.strong) if net.labeling[u] == lab]
        for lab in rule.required
    ]
    out = []
    seen_successors = set()
    for combo in itertools.product(*candidates):
        if len(set(combo)) != len(combo):
            continue
        rewrite = tuple(sorted(zip(combo, rule.rewritten)))
        signature = (frozenset(combo), rewrite)
        if signature in seen_successors:
            continue
        seen_successors.add(signature)
        out.append(Apply(index, combo))
    return out


def _fresh_vertex(net: Network) -> tuple[str, int]:
    counter = net.fresh
    while f"n{counter + 1}" in net.vertices:
        counter += 1
    return f"n{counter + 1}", counter + 1


def apply_move(net: Network, move: HalfMove, rules=()) -> Network:
    """Apply one half-move, returning a fresh network.

    Raises IllegalMove with a reason when the move is not legal on ``net``.
    ``rules`` is consulted for Apply moves only.
    """
    if isinstance(move, Skip):
        return net
    if isinstance(move, Delete):
        v = move.vertex
        if v not in net.active:
            raise IllegalMove(f"delete target {v} is not active")
        if v in net.strong:
            raise IllegalMove(f"delete target {v} is strong")
        return Network(net.vertices, net.edges, net.active - {v}, net.strong,
                       net.labeling, net.fresh)
    if not isinstance(move, Apply):
        raise IllegalMove(f"unknown move {move!r}")
    if not 0 <= move.rule_index < len(rules):
        raise IllegalMove(f"rule index {move.rule_index} out of range")
    rule = rules[move.rule_index]
    if isinstance(rule, MoveRule):
        return _apply_move_rule(net, rule, move.binding)
    if isinstance(rule, RelabelRule):
        return _apply_relabel_rule(net, rule, move.binding)
    return _apply_create_rule(net, rule, move.binding)


def _require_adjacent(net, u, v):
    if edge_key(u, v) not in net.edges:
        raise IllegalMove(f"{u} and {v} are not adjacent")


def _apply_move_rule(net, rule, binding):
    if len(binding) != 2:
        raise IllegalMove("move binding must be a (source, target) pair")
    u, v = binding
    if u not in net.strong:
        raise IllegalMove(f"move source {u} is not strong")
    if v in net.strong:
        raise IllegalMove(f"move target {v} is strong")
    if v not in net.vertices:
        raise IllegalMove(f"move target {v} is not a vertex")
    _require_adjacent(net, u, v)
    if net.labeling[u] != rule.source or net.labeling[v] != rule.target:
        raise IllegalMove("move binding labels do not match the rule")
    return Network(net.vertices, net.edges, net.active | {v},
                   (net.strong - {u}) | {v}, net.labeling, net.fresh)


def _apply_relabel_rule(net, rule, binding):
    if len(binding) != len(rule.steps):
        raise IllegalMove("relabel binding must supply one pair per step")
    labeling = dict(net.labeling)
    for (a, b, c, d), pair in zip(rule.steps, binding):
        u, v = pair
        if u not in net.active or v not in net.active:
            raise IllegalMove(f"relabel pair ({u},{v}) must be active")
        _require_adjacent(net, u, v)
        if labeling[u] != a or labeling[v] != b:
            raise IllegalMove(f"relabel step labels do not match at ({u},{v})")
        labeling[u] = c
        labeling[v] = d
    return Network(net.vertices, net.edges, net.active, net.strong,
                   labeling, net.fresh)


def _apply_create_rule(net, rule, binding):
    if len(binding) != len(rule.required):
        raise IllegalMove("create binding must bind every required position")
    if len(set(binding)) != len(binding):
        raise IllegalMove("create binding must use distinct nodes")
    for u, lab in zip(binding, rule.required):
        if u not in net.strong:
            raise IllegalMove(f"create binding node {u} is not strong")
        if net.labeling[u] != lab:
            raise IllegalMove(f"create binding label mismatch at {u}")
    new, fresh = _fresh_vertex(net)
    labeling = dict(net.labeling)
    labeling[new] = rule.label
    for u, lab in zip(binding, rule.rewritten):
        labeling[u] = lab
    edges = net.edges | {edge_key(new, u) for u in binding}
    strong = net.strong | {new} if rule.strong else net.strong
    return Network(net.vertices | {new}, edges, net.active | {new},
                   strong, labeling, fresh)


def apply_turn(net: Network, move: HalfMove, expected_actor: str, rules=()) -> Network:
    """apply_move plus a whose-turn check, for play and verification loops."""
    if move.actor != expected_actor:
        raise IllegalMove(f"wrong actor: expected {expected_actor}")
    return apply_move(net, move, rules)


def summarize_network(net: Network) -> str:
    """One-line human-readable rendering (strong '*', deleted '~')."""
    parts = []
    for v in sorted(net.vertices):
        mark = "*" if v in net.strong else ("~" if v not in net.active else "")
        parts.append(f"{v}{mark}:{net.labeling[v]}")
    edges = " ".join(f"{u}-{v}" for u, v in sorted(net.edges))
    return "; ".join((" ".join(parts), edges))
