"""Automata over infinite words: conversions, determinization, lasso membership.

All acceptance is max-parity on state priorities. Buchi automata are the
special case with priorities inside {1, 2} (2 = accepting).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple


@dataclass(eq=False)
class WordAutomaton:
    """Nondeterministic parity automaton over omega-words."""

    alphabet: tuple
    states: tuple
    initial: object
    priority: Dict[object, int]
    transitions: frozenset  # of (state, letter, state)

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        self.states = tuple(self.states)
        self.transitions = frozenset(self.transitions)
        index: Dict[tuple, list] = {}
        for t in self.transitions:
            index.setdefault((t[0], t[1]), []).append(t[2])
        self._index = {k: tuple(sorted(v, key=repr)) for k, v in index.items()}

    def targets(self, state, letter) -> tuple:
        return self._index.get((state, letter), ())

    def is_deterministic(self) -> bool:
        return all(len(v) <= 1 for v in self._index.values())

    def is_complete(self) -> bool:
        return all(len(self.targets(q, a)) >= 1 for q in self.states for a in self.alphabet)

    def step(self, state, letter):
        """Unique successor; raises unless deterministic at this slot."""
        ts = self.targets(state, letter)
        if len(ts) != 1:
            raise ValueError("no unique transition from %r on %r" % (state, letter))
        return ts[0]

    def priorities_used(self) -> Tuple[int, ...]:
        return tuple(sorted({self.priority[q] for q in self.states}))


@dataclass(frozen=True, eq=True)
class Lasso:
    """Ultimately periodic word prefix . loop^omega; loop must be nonempty."""

    prefix: tuple
    loop: tuple


def check_word_automaton(w: WordAutomaton) -> List[str]:
    problems: List[str] = []
    if not w.alphabet:
        problems.append("alphabet is empty")
    if not w.states:
        problems.append("state set is empty")
    states = set(w.states)
    if w.initial not in states:
        problems.append("initial state %r is not declared" % (w.initial,))
    letters = set(w.alphabet)
    for q in w.states:
        p = w.priority.get(q)
        if not isinstance(p, int) or p < 0:
            problems.append("state %r has illegal priority %r" % (q, p))
    for (q, a, q2) in sorted(w.transitions, key=repr):
        if q not in states or q2 not in states:
            problems.append("transition (%r, %r, %r) references undeclared state" % (q, a, q2))
        if a not in letters:
            problems.append("transition letter %r undeclared" % (a,))
    return problems


# ---------------------------------------------------------------------------
# lasso membership


def _cycle_scc_accepts(node_priority, succ, reachable) -> bool:
    """True iff some cycle within `reachable` has even maximal priority."""
    evens = sorted({p for n, p in node_priority.items() if n in reachable and p % 2 == 0})
    for c in evens:
        allowed = {n for n in reachable if node_priority[n] <= c}
        core = {n for n in allowed if node_priority[n] == c}
        if not core:
            continue
        for comp in _sccs(allowed, succ):
            if not (comp & core):
                continue
            has_edge = any(v in comp for u in comp for v in succ.get(u, ()) if v in allowed)
            if len(comp) > 1 or has_edge:
                return True
    return False


def _sccs(nodes: Set, succ) -> List[Set]:
    """Tarjan, iterative; succ targets outside `nodes` are ignored."""
    index = {}
    low = {}
    onstack = {}
    stack: List = []
    result: List[Set] = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter([v for v in succ.get(root, ()) if v in nodes]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        onstack[root] = True
        while work:
            node, it = work[-1]
            advanced = False
            for v in it:
                if v not in index:
                    index[v] = low[v] = counter[0]
                    counter[0] += 1
                    stack.append(v)
                    onstack[v] = True
                    work.append((v, iter([w for w in succ.get(v, ()) if w in nodes])))
                    advanced = True
                    break
                elif onstack.get(v):
                    low[node] = min(low[node], index[v])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = set()
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp.add(w)
                    if w == node:
                        break
                result.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return result


def lasso_member(w: WordAutomaton, lasso: Lasso) -> bool:
    """Whether prefix . loop^omega lies in the automaton's language."""
    if not lasso.loop:
        raise ValueError("lasso loop must be nonempty")
    u, v = tuple(lasso.prefix), tuple(lasso.loop)
    if w.is_deterministic():
        return _lasso_member_det(w, u, v)
    # positions of the lasso word: prefix indices then loop indices, wrapping
    m, k = len(u), len(v)
    letters = list(u) + list(v)
    def nxt(i):
        return i + 1 if i + 1 < m + k else m
    start = (0, w.initial) if letters else None
    if start is None:
        raise ValueError("lasso is empty")
    nodes = set()
    succ: Dict[tuple, set] = {}
    frontier = [start]
    nodes.add(start)
    while frontier:
        i, q = frontier.pop()
        for q2 in w.targets(q, letters[i]):
            tgt = (nxt(i), q2)
            succ.setdefault((i, q), set()).add(tgt)
            if tgt not in nodes:
                nodes.add(tgt)
                frontier.append(tgt)
    node_priority = {(i, q): w.priority[q] for (i, q) in nodes}
    return _cycle_scc_accepts(node_priority, succ, nodes)


def _lasso_member_det(w: WordAutomaton, u: tuple, v: tuple) -> bool:
    q = w.initial
    for a in u:
        ts = w.targets(q, a)
        if not ts:
            return False
        q = ts[0]
    seen = {}
    trace = []
    pos = 0
    while (pos, q) not in seen:
        seen[(pos, q)] = len(trace)
        trace.append(q)
        ts = w.targets(q, v[pos])
        if not ts:
            return False
        q = ts[0]
        pos = (pos + 1) % len(v)
    first = seen[(pos, q)]
    cycle = trace[first:]
    return max(w.priority[s] for s in cycle) % 2 == 0


def all_lassos(alphabet: Sequence, max_prefix: int, max_loop: int) -> List[Lasso]:
    """Every lasso with |prefix| <= max_prefix and 1 <= |loop| <= max_loop."""
    import itertools
    out = []
    for lu in range(max_prefix + 1):
        for u in itertools.product(alphabet, repeat=lu):
            for lv in range(1, max_loop + 1):
                for v in itertools.product(alphabet, repeat=lv):
                    out.append(Lasso(u, v))
    return out


# ---------------------------------------------------------------------------
# conversions


def npa_to_nba(npa: WordAutomaton) -> WordAutomaton:
    """Buchi automaton for the same language.

    Phase one simulates the input; at any transition the automaton may fix an
    even priority c, after which priorities above c kill the run and visits to
    priority exactly c are the accepting moments.
    """
    evens = [c for c in npa.priorities_used() if c % 2 == 0]
    states = []
    transitions = set()
    priority = {}
    for q in npa.states:
        states.append(("s", q))
        priority[("s", q)] = 1
    for q in npa.states:
        for c in evens:
            if npa.priority[q] <= c:
                st = ("j", q, c)
                states.append(st)
                priority[st] = 2 if npa.priority[q] == c else 1
    have = set(states)
    for (q, a, q2) in npa.transitions:
        transitions.add((("s", q), a, ("s", q2)))
        for c in evens:
            if npa.priority[q2] <= c:
                transitions.add((("s", q), a, ("j", q2, c)))
                if ("j", q, c) in have:
                    transitions.add((("j", q, c), a, ("j", q2, c)))
    nba = WordAutomaton(npa.alphabet, tuple(states), ("s", npa.initial), priority,
                        frozenset(transitions))
    return trim_nba(nba)


def trim_nba(nba: WordAutomaton) -> WordAutomaton:
    """Restrict to states that can occur in some accepting run."""
    reach = {nba.initial}
    frontier = [nba.initial]
    while frontier:
        q = frontier.pop()
        for a in nba.alphabet:
            for q2 in nba.targets(q, a):
                if q2 not in reach:
                    reach.add(q2)
                    frontier.append(q2)
    succ = {q: set() for q in reach}
    for (q, a, q2) in nba.transitions:
        if q in reach and q2 in reach:
            succ[q].add(q2)
    useful_accepting = set()
    for comp in _sccs(reach, succ):
        has_edge = any(v in comp for u in comp for v in succ.get(u, ()))
        if (len(comp) > 1 or has_edge) and any(nba.priority[q] % 2 == 0 for q in comp):
            useful_accepting |= {q for q in comp if nba.priority[q] % 2 == 0}
    pred: Dict[object, set] = {q: set() for q in reach}
    for q in reach:
        for q2 in succ[q]:
            pred[q2].add(q)
    keep = set(useful_accepting)
    frontier = list(useful_accepting)
    while frontier:
        q = frontier.pop()
        for p in pred[q]:
            if p not in keep:
                keep.add(p)
                frontier.append(p)
    keep.add(nba.initial)
    states = tuple(q for q in nba.states if q in keep)
    transitions = frozenset(t for t in nba.transitions if t[0] in keep and t[2] in keep)
    priority = {q: nba.priority[q] for q in states}
    return WordAutomaton(nba.alphabet, states, nba.initial, priority, transitions)


def compress_priorities(w: WordAutomaton) -> WordAutomaton:
    """Collapse priority gaps; order and parity preserved, language unchanged."""
    used = w.priorities_used()
    mapping = {}
    current = used[0] % 2
    prev = None
    for val in used:
        if prev is not None and val % 2 != prev % 2:
            current += 1
        mapping[val] = current
        prev = val
    priority = {q: mapping[w.priority[q]] for q in w.states}
    return WordAutomaton(w.alphabet, w.states, w.initial, priority, w.transitions)


# ---------------------------------------------------------------------------
# determinization (compact Safra trees, nodes ordered by age)

_SINK = ("sink",)


class _SafraStepper:
    """Successor computation on compact Safra trees for one Buchi automaton.

    Tree encoding: node = (name, label frozenset, children tuple), children
    listed oldest first; names grow with age and are compacted to 1..k after
    every step. Each step reports a min-parity event value in 1 .. 2n+1.
    """

    def __init__(self, nba: WordAutomaton):
        self.accepting = frozenset(q for q in nba.states if nba.priority[q] % 2 == 0)
        delta: Dict[tuple, set] = {}
        for (q, a, q2) in nba.transitions:
            delta.setdefault((q, a), set()).add(q2)
        self.delta = {k: frozenset(v) for k, v in delta.items()}
        self.n = max(1, len(nba.states))
        self.neutral = 2 * self.n + 1
        self.initial_tree = (1, frozenset([nba.initial]), ())
        self._memo: Dict[tuple, tuple] = {}

    def step(self, tree, letter):
        key = (tree, letter)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = self._step(tree, letter)
        self._memo[key] = result
        return result

    def _step(self, tree, letter):
        label: Dict[int, set] = {}
        children: Dict[int, list] = {}
        parent: Dict[int, Optional[int]] = {}
        order: List[int] = []

        def load(node, par):
            nm, lb, chs = node
            label[nm] = set(lb)
            children[nm] = []
            parent[nm] = par
            order.append(nm)
            for c in chs:
                children[nm].append(c[0])
                load(c, nm)

        root = tree[0]
        load(tree, None)
        fresh = max(order) + 1

        # sprout a youngest child per node holding accepting states
        for nm in sorted(order):
            core = label[nm] & self.accepting
            if core:
                label[fresh] = set(core)
                children[fresh] = []
                parent[fresh] = nm
                children[nm].append(fresh)
                order.append(fresh)
                fresh += 1

        # powerset update of every label
        for nm in order:
            nxt = set()
            for q in label[nm]:
                nxt |= self.delta.get((q, letter), frozenset())
            label[nm] = nxt

        # horizontal: younger siblings give up states claimed by older ones
        def prune(nm, bad):
            label[nm] -= bad
            for c in children[nm]:
                prune(c, bad)

        def horizontal(nm):
            seen: set = set()
            for c in list(children[nm]):
                prune(c, seen)
                seen |= label[c]
                horizontal(c)

        horizontal(root)

        # remove emptied nodes bottom-up (red events)
        red = self.neutral
        removed: set = set()

        def sweep(nm):
            nonlocal red
            for c in list(children[nm]):
                sweep(c)
            if not label[nm]:
                red = min(red, 2 * nm - 1)
                removed.add(nm)
                if parent[nm] is not None:
                    children[parent[nm]].remove(nm)

        sweep(root)
        if root in removed:
            return (_SINK, 1 if red == self.neutral else red)

        # vertical merges (green events): drop descendants of saturated nodes
        green = self.neutral

        def drop_descendants(nm):
            for c in children[nm]:
                drop_descendants(c)
                removed.add(c)
            children[nm] = []

        def vertical(nm):
            nonlocal green
            kids = children[nm]
            if kids:
                union = set()
                for c in kids:
                    union |= label[c]
                if union == label[nm]:
                    green = min(green, 2 * nm)
                    drop_descendants(nm)
                    return
            for c in list(kids):
                vertical(c)

        vertical(root)

        # compact names to 1..k preserving age order
        survivors = sorted(nm for nm in order if nm not in removed)
        rename = {nm: i + 1 for i, nm in enumerate(survivors)}

        def freeze(nm):
            kids = tuple(freeze(c) for c in children[nm])
            return (rename[nm], frozenset(label[nm]), kids)

        new_tree = freeze(root)
        event = min(green, red, self.neutral)
        return (new_tree, event)


def _cycle_states(states, letters, succ) -> set:
    """States lying on some cycle of a deterministic transition graph."""
    adj = {q: {succ[(q, x)] for x in letters} for q in states}
    index: Dict[str, int] = {}
    low: Dict[str, int] = {}
    on: set = set()
    stack: List[str] = []
    recurrent: set = set()
    counter = 0
    for root in states:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        work = [(root, iter(sorted(adj[root])))]
        while work:
            v, edges = work[-1]
            pushed = False
            for w in edges:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(sorted(adj[w]))))
                    pushed = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    component.append(w)
                    if w == v:
                        break
                if len(component) > 1 or v in adj[v]:
                    recurrent.update(component)
    return recurrent


def _refine(states, letters, succ, priority) -> Dict[str, int]:
    """Coarsest priority-respecting bisimulation of a deterministic automaton."""
    block = {q: priority[q] for q in states}
    n_blocks = len(set(block.values()))
    while True:
        fresh: Dict[tuple, int] = {}
        refined = {}
        for q in states:
            sig = (block[q],) + tuple(block[succ[(q, x)]] for x in letters)
            if sig not in fresh:
                fresh[sig] = len(fresh)
            refined[q] = fresh[sig]
        block = refined
        if len(fresh) == n_blocks:
            return block
        n_blocks = len(fresh)


def _reduce_dpa(dpa: WordAutomaton) -> WordAutomaton:
    """Quotient a deterministic complete automaton by priority-respecting
    bisimilarity. A state on no cycle occurs at most once in any run, so its
    priority cannot matter; such states adopt the priority of a state whose
    successors land in the same blocks, which unlocks merges. Adoption can
    cascade along chains, hence the iteration."""
    letters = tuple(dpa.alphabet)
    succ = {(q, x): t for (q, x, t) in dpa.transitions}
    order = {q: i for i, q in enumerate(dpa.states)}

    recurrent = _cycle_states(dpa.states, letters, succ)
    priority = dict(dpa.priority)
    for _ in range(len(dpa.states) + 1):
        block = _refine(dpa.states, letters, succ, priority)
        rows: Dict[tuple, List[str]] = {}
        for q in dpa.states:
            rows.setdefault(tuple(block[succ[(q, x)]] for x in letters), []).append(q)
        changed = False
        for members in rows.values():
            donors = [q for q in members if q in recurrent]
            donor = min(donors or members, key=order.get)
            for q in members:
                if q not in recurrent and priority[q] != priority[donor]:
                    priority[q] = priority[donor]
                    changed = True
        if not changed:
            break
    block = _refine(dpa.states, letters, succ, priority)

    representative = {}
    for q in dpa.states:
        representative.setdefault(block[q], q)
    names: Dict[int, str] = {}
    visit: List[int] = []

    def intern(b: int) -> str:
        if b not in names:
            names[b] = "d%d" % len(visit)
            visit.append(b)
        return names[b]

    intern(block[dpa.initial])
    transitions = set()
    new_priority = {}
    i = 0
    while i < len(visit):
        b = visit[i]
        i += 1
        q = representative[b]
        new_priority[names[b]] = priority[q]
        for x in letters:
            transitions.add((names[b], x, intern(block[succ[(q, x)]])))
    return WordAutomaton(dpa.alphabet, tuple(names[b] for b in visit),
                         names[block[dpa.initial]], new_priority,
                         frozenset(transitions))


def nba_to_dpa(nba: WordAutomaton) -> WordAutomaton:
    """Deterministic parity automaton for a Buchi automaton's language."""
    if any(p not in (1, 2) for p in nba.priorities_used()):
        raise ValueError("nba_to_dpa expects Buchi input with priorities in {1, 2}")
    stepper = _SafraStepper(nba)
    n = stepper.n
    top_value = 2 * n + 2  # even offset turning min-parity events into max-parity
    initial = (stepper.initial_tree, 1)
    sink = (_SINK, 1)
    states: Dict[tuple, str] = {}
    order: List[tuple] = []

    def intern(st):
        if st not in states:
            states[st] = "d%d" % len(order)
            order.append(st)
        return states[st]

    intern(initial)
    transitions = set()
    i = 0
    while i < len(order):
        st = order[i]
        i += 1
        tree, _ = st
        for a in nba.alphabet:
            if tree == _SINK:
                tgt = sink
            else:
                new_tree, event = stepper.step(tree, a)
                if new_tree == _SINK:
                    tgt = sink
                else:
                    tgt = (new_tree, top_value - event)
            transitions.add((states[st], a, intern(tgt)))
    priority = {states[st]: st[1] for st in order}
    names = tuple(states[st] for st in order)
    dpa = WordAutomaton(nba.alphabet, names, states[initial], priority, frozenset(transitions))
    return compress_priorities(_reduce_dpa(dpa))


def npa_to_dpa(npa: WordAutomaton) -> WordAutomaton:
    """Determinize a parity automaton via the Buchi stage."""
    if all(p in (1, 2) for p in npa.priorities_used()):
        return nba_to_dpa(npa)
    return nba_to_dpa(npa_to_nba(npa))


def dpa_complement(dpa: WordAutomaton) -> WordAutomaton:
    """Complement a deterministic complete parity automaton by shifting priorities."""
    if not dpa.is_deterministic() or not dpa.is_complete():
        raise ValueError("dpa_complement requires a deterministic complete automaton")
    priority = {q: dpa.priority[q] + 1 for q in dpa.states}
    return WordAutomaton(dpa.alphabet, dpa.states, dpa.initial, priority, dpa.transitions)


def _reachable_product(d1: WordAutomaton, d2: WordAutomaton):
    init = (d1.initial, d2.initial)
    seen = {init}
    frontier = [init]
    edges = {}
    while frontier:
        s1, s2 = frontier.pop()
        for a in d1.alphabet:
            tgt = (d1.step(s1, a), d2.step(s2, a))
            edges[((s1, s2), a)] = tgt
            if tgt not in seen:
                seen.add(tgt)
                frontier.append(tgt)
    return init, seen, edges


def conjunction_dpa(d1: WordAutomaton, d2: WordAutomaton) -> WordAutomaton:
    """Deterministic automaton for the intersection of two DPA languages.

    Runs the synchronous product, guesses an even priority cap per component,
    and checks both caps recur (a two-set Buchi flag), then determinizes the
    resulting Buchi automaton.
    """
    if tuple(d1.alphabet) != tuple(d2.alphabet):
        raise ValueError("conjunction requires matching alphabets")
    for d in (d1, d2):
        if not d.is_deterministic() or not d.is_complete():
            raise ValueError("conjunction_dpa requires deterministic complete operands")
    init, seen, edges = _reachable_product(d1, d2)
    evens1 = sorted({d1.priority[s1] for (s1, _) in seen if d1.priority[s1] % 2 == 0})
    evens2 = sorted({d2.priority[s2] for (_, s2) in seen if d2.priority[s2] % 2 == 0})
    states: List = []
    priority = {}
    transitions = set()
    for pair in seen:
        st = ("p", pair)
        states.append(st)
        priority[st] = 1
    jump_states = set()

    def jump_targets(pair):
        out = []
        s1, s2 = pair
        for e1 in evens1:
            if d1.priority[s1] > e1:
                continue
            for e2 in evens2:
                if d2.priority[s2] > e2:
                    continue
                out.append((pair, e1, e2))
        return out

    for pair in seen:
        s1, s2 = pair
        for a in d1.alphabet:
            tgt = edges[(pair, a)]
            transitions.add((("p", pair), a, ("p", tgt)))
            for (tp, e1, e2) in jump_targets(tgt):
                flag = _flag_step(0, d1.priority[tp[0]] == e1, d2.priority[tp[1]] == e2)
                st = ("q", tp, e1, e2, flag)
                jump_states.add(st)
                transitions.add((("p", pair), a, st))
    frontier = list(jump_states)
    while frontier:
        st = frontier.pop()
        _, pair, e1, e2, flag = st
        for a in d1.alphabet:
            tgt = edges[(pair, a)]
            if d1.priority[tgt[0]] > e1 or d2.priority[tgt[1]] > e2:
                continue
            nf = _flag_step(0 if flag == 2 else flag,
                            d1.priority[tgt[0]] == e1, d2.priority[tgt[1]] == e2)
            nst = ("q", tgt, e1, e2, nf)
            if nst not in jump_states:
                jump_states.add(nst)
                frontier.append(nst)
            transitions.add((st, a, nst))
    for st in jump_states:
        states.append(st)
        priority[st] = 2 if st[4] == 2 else 1
    nba = trim_nba(WordAutomaton(d1.alphabet, tuple(states), ("p", init), priority,
                                 frozenset(transitions)))
    return nba_to_dpa(nba)


def _flag_step(flag: int, hit1: bool, hit2: bool) -> int:
    if flag == 0:
        if hit1 and hit2:
            return 2
        return 1 if hit1 else 0
    return 2 if hit2 else 1


# ---------------------------------------------------------------------------
# emptiness and witnesses for nondeterministic parity word automata


def npa_empty(npa: WordAutomaton) -> Tuple[bool, Optional[Lasso]]:
    """Emptiness check; returns a witness lasso when nonempty."""
    reach = {npa.initial}
    frontier = [npa.initial]
    parent: Dict[object, tuple] = {}
    succ: Dict[object, set] = {}
    while frontier:
        q = frontier.pop()
        for a in npa.alphabet:
            for q2 in npa.targets(q, a):
                succ.setdefault(q, set()).add(q2)
                if q2 not in reach:
                    reach.add(q2)
                    parent[q2] = (q, a)
                    frontier.append(q2)
    evens = sorted({npa.priority[q] for q in reach if npa.priority[q] % 2 == 0})
    for c in evens:
        allowed = {q for q in reach if npa.priority[q] <= c}
        core = {q for q in allowed if npa.priority[q] == c}
        for comp in _sccs(allowed, succ):
            anchor = sorted(comp & core, key=repr)
            if not anchor:
                continue
            has_edge = any(v in comp for u in comp for v in succ.get(u, ()) if v in allowed)
            if len(comp) == 1 and not has_edge:
                continue
            lasso = _build_lasso(npa, parent, comp, anchor[0])
            return (False, lasso)
    return (True, None)


def _build_lasso(npa: WordAutomaton, parent, comp: set, anchor) -> Lasso:
    prefix_rev = []
    q = anchor
    while q != npa.initial:
        p, a = parent[q]
        prefix_rev.append(a)
        q = p
    prefix = tuple(reversed(prefix_rev))
    # cycle through the component from anchor back to anchor
    frontier = [(anchor, ())]
    seen = {anchor}
    loop = None
    while frontier:
        q, word = frontier.pop(0)
        for a in npa.alphabet:
            for q2 in npa.targets(q, a):
                if q2 not in comp:
                    continue
                if q2 == anchor:
                    loop = word + (a,)
                    frontier = []
                    break
                if q2 not in seen:
                    seen.add(q2)
                    frontier.append((q2, word + (a,)))
            if loop:
                break
        if loop:
            break
    assert loop, "component had no cycle through the anchor"
    return Lasso(prefix, loop)


def priority_tracker(pair_alphabet: Sequence[tuple], component: int,
                     values: Sequence[int]) -> WordAutomaton:
    """Deterministic automaton accepting pair streams whose chosen component
    satisfies max-parity.

    States are the possible priority values of that component; reading a pair
    moves to the component's value, whose own priority it carries.
    """
    vals = tuple(sorted(set(values)))
    if not vals:
        raise ValueError("tracker needs at least one priority value")
    for pair in pair_alphabet:
        if pair[component] not in vals:
            raise ValueError("pair %r leaves the tracked value set" % (pair,))
    states = vals
    priority = {v: v for v in vals}
    transitions = frozenset((s, pair, pair[component])
                            for s in states for pair in pair_alphabet)
    return WordAutomaton(tuple(pair_alphabet), states, vals[0], priority, transitions)


def buchi_product(n1: WordAutomaton, n2: WordAutomaton) -> WordAutomaton:
    """Buchi automaton for the intersection of two Buchi languages."""
    if tuple(n1.alphabet) != tuple(n2.alphabet):
        raise ValueError("product requires matching alphabets")
    for n in (n1, n2):
        if any(p not in (1, 2) for p in n.priorities_used()):
            raise ValueError("buchi_product expects priorities in {1, 2}")
    states = []
    priority = {}
    transitions = set()
    init = (n1.initial, n2.initial, 1)
    frontier = [init]
    seen = {init}
    while frontier:
        st = frontier.pop()
        s1, s2, flag = st
        states.append(st)
        acc1 = n1.priority[s1] == 2
        acc2 = n2.priority[s2] == 2
        # phase 1 waits for the first component, phase 2 for the second;
        # completing a full cycle of both marks an accepting moment
        priority[st] = 2 if flag == 1 and acc1 else 1
        nf = (2 if acc1 else 1) if flag == 1 else (1 if acc2 else 2)
        for a in n1.alphabet:
            for t1 in n1.targets(s1, a):
                for t2 in n2.targets(s2, a):
                    tgt = (t1, t2, nf)
                    transitions.add((st, a, tgt))
                    if tgt not in seen:
                        seen.add(tgt)
                        frontier.append(tgt)
    return WordAutomaton(n1.alphabet, tuple(states), init, priority, frozenset(transitions))


def word_intersection_empty(a1: WordAutomaton, a2: WordAutomaton) -> Tuple[bool, Optional[Lasso]]:
    """Emptiness of L(a1) & L(a2) for parity word automata, with witness."""
    n1 = a1 if all(p in (1, 2) for p in a1.priorities_used()) else npa_to_nba(a1)
    n2 = a2 if all(p in (1, 2) for p in a2.priorities_used()) else npa_to_nba(a2)
    return npa_empty(buchi_product(n1, n2))
