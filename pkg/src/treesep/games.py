"""Parity games on finite graphs, round-based arenas, and strategy machines."""

from __future__ import annotations

import itertools
import sys
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from .words import WordAutomaton, _sccs

EVEN = 0
ODD = 1

_STUCK = "__stuck__"


@dataclass(eq=False)
class ParityGame:
    """Max-parity game; vertex ids are 0..n-1, every vertex has a successor."""

    owner: List[int]
    priority: List[int]
    succ: List[List[int]]
    payload: Optional[List[object]] = None

    def __post_init__(self):
        n = len(self.owner)
        if not (len(self.priority) == len(self.succ) == n):
            raise ValueError("owner, priority and succ must have equal length")
        for v in range(n):
            if self.owner[v] not in (EVEN, ODD):
                raise ValueError("vertex %d has owner %r" % (v, self.owner[v]))
            if self.priority[v] < 0:
                raise ValueError("vertex %d has negative priority" % v)
            if not self.succ[v]:
                raise ValueError("vertex %d has no successors" % v)
            for w in self.succ[v]:
                if not 0 <= w < n:
                    raise ValueError("vertex %d has dangling edge to %r" % (v, w))

    def __len__(self):
        return len(self.owner)


@dataclass(eq=False)
class ParitySolution:
    """Winning regions plus one positional strategy per player on its region."""

    win: List[int]                      # winner per vertex, EVEN or ODD
    strategy: List[Optional[int]]       # successor when owner[v] == win[v]

    def region(self, player: int) -> Set[int]:
        return {v for v, w in enumerate(self.win) if w == player}


def solve_parity(game: ParityGame) -> ParitySolution:
    """Zielonka's recursive algorithm with positional strategy extraction."""
    box: List = []

    def run():
        sys.setrecursionlimit(1_000_000)
        box.append(_zielonka_full(game))

    if len(game) < 2000:
        run()
    else:
        # deep recursions need a roomier stack than the main thread offers
        old = threading.stack_size(256 * 1024 * 1024)
        try:
            t = threading.Thread(target=run)
            t.start()
            t.join()
        finally:
            threading.stack_size(old)
    return box[0]


def _zielonka_full(game: ParityGame) -> ParitySolution:
    n = len(game)
    pred: List[List[int]] = [[] for _ in range(n)]
    for v in range(n):
        for w in dict.fromkeys(game.succ[v]):
            pred[w].append(v)
    succ = [list(dict.fromkeys(game.succ[v])) for v in range(n)]
    owner = game.owner
    priority = game.priority

    def attractor(base: Set[int], player: int, alive: Set[int]):
        attr = set(base)
        pulls: Dict[int, int] = {}
        counts: Dict[int, int] = {}
        stack = list(base)
        while stack:
            u = stack.pop()
            for v in pred[u]:
                if v not in alive or v in attr:
                    continue
                if owner[v] == player:
                    attr.add(v)
                    pulls[v] = u
                    stack.append(v)
                else:
                    if v not in counts:
                        counts[v] = sum(1 for w in succ[v] if w in alive)
                    counts[v] -= 1
                    if counts[v] == 0:
                        attr.add(v)
                        stack.append(v)
        return attr, pulls

    def rec(alive: Set[int]):
        if not alive:
            return set(), set(), {}, {}
        p = max(priority[v] for v in alive)
        player = p % 2
        base = {v for v in alive if priority[v] == p}
        attr, pulls = attractor(base, player, alive)
        w0, w1, s0, s1 = rec(alive - attr)
        opp_region = w1 if player == EVEN else w0
        if not opp_region:
            strat = dict(s0 if player == EVEN else s1)
            strat.update(pulls)
            for v in base:
                if owner[v] == player and v not in strat:
                    strat[v] = next(w for w in succ[v] if w in alive)
            if player == EVEN:
                return set(alive), set(), strat, {}
            return set(), set(alive), {}, strat
        opp = 1 - player
        battr, bpulls = attractor(opp_region, opp, alive)
        w0b, w1b, s0b, s1b = rec(alive - battr)
        opp_strat = dict(s1 if opp == ODD else s0)
        opp_strat.update(bpulls)
        opp_strat.update(s1b if opp == ODD else s0b)
        my_strat = dict(s0b if opp == ODD else s1b)
        if opp == ODD:
            return w0b, w1b | battr, my_strat, opp_strat
        return w0b | battr, w1b, opp_strat, my_strat

    w0, w1, s0, s1 = rec(set(range(n)))
    win = [EVEN if v in w0 else ODD for v in range(n)]
    strategy: List[Optional[int]] = [None] * n
    for v in range(n):
        if owner[v] == win[v]:
            chosen = (s0 if win[v] == EVEN else s1).get(v)
            if chosen is None:
                # staying anywhere inside the region preserves the win
                region = w0 if win[v] == EVEN else w1
                chosen = next(w for w in succ[v] if w in region)
            strategy[v] = chosen
    return ParitySolution(win, strategy)


def brute_force_solve_parity(game: ParityGame) -> ParitySolution:
    """Strategy enumeration oracle; refuses games with more than 12 vertices."""
    n = len(game)
    if n > 12:
        raise ValueError("brute force solver is limited to 12 vertices")
    win_even = _brute_region(game, EVEN)
    win_odd = _brute_region(game, ODD)
    if win_even & win_odd or (win_even | win_odd) != set(range(n)):
        raise AssertionError("brute force regions are not a partition")
    win = [EVEN if v in win_even else ODD for v in range(n)]
    strategy: List[Optional[int]] = [None] * n
    for player, region in ((EVEN, win_even), (ODD, win_odd)):
        strat = _brute_strategy(game, player, region)
        for v in region:
            if game.owner[v] == player:
                strategy[v] = strat[v]
    return ParitySolution(win, strategy)


def _brute_region(game: ParityGame, player: int) -> Set[int]:
    n = len(game)
    mine = [v for v in range(n) if game.owner[v] == player]
    total = 1
    for v in mine:
        total *= len(game.succ[v])
        if total > 1 << 16:
            raise ValueError("brute force strategy space too large")
    good: Set[int] = set()
    for choice in itertools.product(*[game.succ[v] for v in mine]):
        fixed = dict(zip(mine, choice))
        good |= _strategy_wins(game, player, fixed)
    return good


def _strategy_wins(game: ParityGame, player: int, fixed: Dict[int, int]) -> Set[int]:
    n = len(game)
    succ = {v: [fixed[v]] if v in fixed else list(game.succ[v]) for v in range(n)}
    # vertices from which the opponent can force a cycle with a bad maximum
    bad_values = sorted({game.priority[v] for v in range(n)
                         if game.priority[v] % 2 != player % 2})
    bad_seeds: Set[int] = set()
    nodes = set(range(n))
    for c in bad_values:
        allowed = {v for v in nodes if game.priority[v] <= c}
        core = {v for v in allowed if game.priority[v] == c}
        for comp in _sccs(allowed, succ):
            if not (comp & core):
                continue
            has_edge = any(w in comp for u in comp for w in succ[u] if w in allowed)
            if len(comp) > 1 or has_edge:
                bad_seeds |= comp
    # backward closure in the restricted graph
    pred: Dict[int, Set[int]] = {v: set() for v in range(n)}
    for v in range(n):
        for w in succ[v]:
            pred[w].add(v)
    bad = set(bad_seeds)
    frontier = list(bad_seeds)
    while frontier:
        u = frontier.pop()
        for v in pred[u]:
            if v not in bad:
                bad.add(v)
                frontier.append(v)
    return nodes - bad


def _brute_strategy(game: ParityGame, player: int, region: Set[int]) -> Dict[int, int]:
    mine = [v for v in region if game.owner[v] == player]
    if not mine:
        return {}
    for choice in itertools.product(*[game.succ[v] for v in mine]):
        fixed = dict(zip(mine, choice))
        if any(fixed[v] not in region for v in mine):
            continue
        if region <= _strategy_wins(game, player, fixed):
            return fixed
    raise AssertionError("no uniform positional strategy found on brute region")


# ---------------------------------------------------------------------------
# round-based arenas


@dataclass(frozen=True, eq=True)
class Decision:
    player: int
    name: str


@dataclass(eq=False)
class Arena:
    """Game skeleton: positions plus a fixed per-round decision schedule.

    `moves(position, chosen)` lists the legal values for decision number
    len(chosen) given the values chosen so far this round; an empty list makes
    the scheduled player lose immediately. `update(position, outcome)` maps a
    completed round to the next position.
    """

    initial: object
    decisions: Tuple[Decision, ...]
    moves: Callable[[object, tuple], Sequence]
    update: Callable[[object, tuple], object]


@dataclass(eq=False)
class GraphGame:
    """Explicit unravelling of an arena into a labelled game graph."""

    vertices: List[tuple]               # ("pos", position, chosen) or (_STUCK, player)
    owner: List[int]
    succ: List[List[Tuple[int, Optional[tuple]]]]   # (target, round outcome or None)
    initial: int
    index: Dict[tuple, int]

    def is_round_start(self, v: int) -> bool:
        vert = self.vertices[v]
        return vert[0] == "pos" and vert[2] == ()

    def position(self, v: int):
        vert = self.vertices[v]
        if vert[0] != "pos":
            raise ValueError("stuck vertex has no position")
        return vert[1]


def arena_to_graph_game(arena: Arena) -> GraphGame:
    """Breadth-first exploration; stuck players lose via a dedicated sink."""
    rounds = len(arena.decisions)
    vertices: List[tuple] = []
    owner: List[int] = []
    succ: List[List[Tuple[int, Optional[tuple]]]] = []
    index: Dict[tuple, int] = {}

    def intern(vert: tuple, own: int) -> int:
        if vert in index:
            return index[vert]
        index[vert] = len(vertices)
        vertices.append(vert)
        owner.append(own)
        succ.append([])
        return index[vert]

    def stuck_sink(player: int) -> int:
        v = intern((_STUCK, player), player)
        if not succ[v]:
            succ[v].append((v, None))
        return v

    def owner_of(position, chosen) -> int:
        if len(chosen) < rounds:
            return arena.decisions[len(chosen)].player
        return EVEN  # completed round, single forced edge

    start = ("pos", arena.initial, ())
    init_id = intern(start, owner_of(arena.initial, ()))
    frontier = [init_id]
    done = {init_id}
    cursor = 0
    while cursor < len(frontier):
        v = frontier[cursor]
        cursor += 1
        vert = vertices[v]
        if vert[0] == _STUCK:
            continue
        _, position, chosen = vert
        if len(chosen) == rounds:
            nxt = arena.update(position, chosen)
            tgt = intern(("pos", nxt, ()), owner_of(nxt, ()))
            succ[v].append((tgt, chosen))
            if tgt not in done:
                done.add(tgt)
                frontier.append(tgt)
            continue
        options = list(arena.moves(position, chosen))
        if not options:
            sink = stuck_sink(arena.decisions[len(chosen)].player)
            succ[v].append((sink, None))
            continue
        for opt in options:
            ext = chosen + (opt,)
            tgt = intern(("pos", position, ext), owner_of(position, ext))
            succ[v].append((tgt, None))
            if tgt not in done:
                done.add(tgt)
                frontier.append(tgt)
    return GraphGame(vertices, owner, succ, init_id, index)


@dataclass(eq=False)
class ProductGame:
    """Graph game crossed with a deterministic condition automaton."""

    game: ParityGame
    graph: GraphGame
    condition: WordAutomaton
    condition_owner: int
    project: Callable[[tuple], object]
    initial: int
    pairs: List[tuple]                  # (graph vertex, condition state) per product vertex
    index: Dict[tuple, int]


def product_with_condition(graph: GraphGame, condition: WordAutomaton,
                           condition_owner: int,
                           project: Callable[[tuple], object]) -> ProductGame:
    """Parity game whose even player stands for the condition owner.

    The condition automaton reads one projected outcome per completed round;
    vertices between rounds carry a neutral minimal priority.
    """
    if not condition.is_deterministic() or not condition.is_complete():
        raise ValueError("condition automaton must be deterministic and complete")
    neutral = min(condition.priority[q] for q in condition.states)
    step: Dict[tuple, object] = {}
    for q in condition.states:
        for a in condition.alphabet:
            step[(q, a)] = condition.targets(q, a)[0]

    pairs: List[tuple] = []
    owner: List[int] = []
    priority: List[int] = []
    succ: List[List[int]] = []
    index: Dict[tuple, int] = {}

    def intern(gv: int, m) -> int:
        key = (gv, m)
        if key in index:
            return index[key]
        index[key] = len(pairs)
        pairs.append(key)
        owner.append(EVEN if graph.owner[gv] == condition_owner else ODD)
        vert = graph.vertices[gv]
        if vert[0] == _STUCK:
            priority.append(ODD if vert[1] == condition_owner else EVEN)
        elif graph.is_round_start(gv):
            priority.append(condition.priority[m])
        else:
            priority.append(neutral)
        succ.append([])
        return index[key]

    init = intern(graph.initial, condition.initial)
    frontier = [init]
    seen = {init}
    cursor = 0
    while cursor < len(frontier):
        v = frontier[cursor]
        cursor += 1
        gv, m = pairs[v]
        for (tgt, outcome) in graph.succ[gv]:
            m2 = m if outcome is None else step[(m, project(outcome))]
            t = intern(tgt, m2)
            succ[v].append(t)
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    # stuck sinks must keep their fixed verdict regardless of the condition:
    # they already do, their priority encodes the scheduled player's loss.
    game = ParityGame(owner, priority, succ, payload=list(pairs))
    return ProductGame(game, graph, condition, condition_owner, project,
                       init, pairs, index)


@dataclass(eq=False)
class StrategyMachine:
    """Finite-memory winning strategy read off a solved product game.

    Memory states are condition automaton states; decisions are looked up in
    the positional strategy of the product game. `side` is the machine's
    parity-game side: EVEN when its player owns the condition, ODD otherwise.
    """

    player: int
    side: int
    arena: Arena
    condition: WordAutomaton
    product: ProductGame
    solution: ParitySolution
    initial_memory: object
    memory: Tuple[object, ...] = ()

    def decide(self, position, memory, chosen: tuple):
        """Value this machine picks for decision number len(chosen)."""
        gv = self.product.graph.index.get(("pos", position, chosen))
        if gv is None:
            raise ValueError("position/prefix pair outside the explored arena")
        v = self.product.index.get((gv, memory))
        if v is None:
            raise ValueError("memory state unreachable at this vertex")
        if self.product.game.owner[v] != self.side or self.solution.win[v] != self.side:
            raise ValueError("strategy machine queried off its winning region")
        tgt = self.solution.strategy[v]
        tgt_gv, _ = self.product.pairs[tgt]
        vert = self.product.graph.vertices[tgt_gv]
        if vert[0] == _STUCK:
            raise ValueError("winning strategy moved into a losing sink")
        return vert[2][-1]

    def advance(self, position, memory, outcome: tuple):
        """Next (position, memory) after a completed round."""
        m2 = self.condition.step(memory, self.product.project(outcome))
        return self.arena.update(position, outcome), m2


def extract_strategy_machine(product: ProductGame, solution: ParitySolution,
                             arena: Arena, player: int) -> StrategyMachine:
    """Winning strategy machine for one arena player; raises if that player
    loses from the initial position.

    The player plays the product's even side when it owns the condition and
    the odd side otherwise; either side's positional strategy folds into the
    same machine shape.
    """
    side = EVEN if player == product.condition_owner else ODD
    if solution.win[product.initial] != side:
        raise ValueError("player loses from the initial position")
    machine = StrategyMachine(player, side, arena, product.condition, product,
                              solution, product.condition.initial)
    # closure over reachable (graph vertex, memory) pairs under the strategy,
    # also a trap check: play must stay inside the winning region
    reachable_memories = set()
    frontier = [product.initial]
    seen = {product.initial}
    while frontier:
        v = frontier.pop()
        if solution.win[v] != side:
            raise AssertionError("strategy closure escaped the winning region")
        gv, m = product.pairs[v]
        vert = product.graph.vertices[gv]
        if vert[0] == "pos":
            reachable_memories.add(m)
        if product.game.owner[v] == side:
            nxts = [solution.strategy[v]]
        else:
            nxts = product.game.succ[v]
        for t in nxts:
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    order = {q: i for i, q in enumerate(product.condition.states)}
    machine.memory = tuple(sorted(reachable_memories, key=lambda q: order[q]))
    return machine


# ---------------------------------------------------------------------------
# pgsolver interchange


def parity_game_to_pgsolver(game: ParityGame, names: Optional[Sequence[str]] = None) -> str:
    lines = ["parity %d;" % (len(game) - 1)]
    for v in range(len(game)):
        succ = ",".join(str(w) for w in game.succ[v])
        label = ""
        if names is not None:
            label = ' "%s"' % names[v]
        lines.append("%d %d %d %s%s;" % (v, game.priority[v], game.owner[v], succ, label))
    return "\n".join(lines) + "\n"


def parity_game_from_pgsolver(text: str) -> ParityGame:
    rows: Dict[int, tuple] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("parity"):
            continue
        if line.endswith(";"):
            line = line[:-1]
        name = None
        if '"' in line:
            line, _, rest = line.partition('"')
            name = rest.rstrip('"').strip('"')
        parts = line.split()
        if len(parts) != 4:
            raise ValueError("malformed pgsolver row: %r" % raw)
        v, pri, own = int(parts[0]), int(parts[1]), int(parts[2])
        succ = [int(x) for x in parts[3].split(",") if x]
        rows[v] = (pri, own, succ, name)
    if not rows:
        raise ValueError("pgsolver text contains no vertices")
    n = max(rows) + 1
    if set(rows) != set(range(n)):
        raise ValueError("pgsolver vertex ids must be contiguous from 0")
    owner = [rows[v][1] for v in range(n)]
    priority = [rows[v][0] for v in range(n)]
    succ = [rows[v][2] for v in range(n)]
    payload = [rows[v][3] for v in range(n)]
    return ParityGame(owner, priority, succ, payload=payload)
