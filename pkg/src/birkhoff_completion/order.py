"""Finite posets and lattices.

Elements are addressed two ways: by label (any hashable) in the public API,
and by index into ``labels`` internally.  The order is a dense boolean matrix
with ``leq[i, j]`` true iff element ``i`` is below element ``j``.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "OrderError",
    "NotALatticeError",
    "Poset",
    "Lattice",
    "SetFamilyLattice",
    "ForbiddenSublattice",
    "make_poset",
    "as_lattice",
    "join_irreducibles",
    "meet_irreducibles",
    "order_ideals",
    "order_filters",
    "dual",
    "is_distributive_law",
    "find_forbidden_sublattice",
    "forbidden_sublattices",
    "is_isomorphic",
]


class OrderError(ValueError):
    """Raised when a relation is not a partial order."""


class NotALatticeError(ValueError):
    """Raised when a poset lacks some binary meet or join."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Poset:
    """Immutable finite partial order over unique labels."""

    def __init__(self, labels: Sequence[Hashable], leq: np.ndarray, *, check: bool = True):
        labels = tuple(labels)
        leq = np.array(leq, dtype=bool)
        n = len(labels)
        if leq.shape != (n, n):
            raise OrderError(f"order matrix has shape {leq.shape}, expected {(n, n)}")
        index = {x: i for i, x in enumerate(labels)}
        if len(index) != n:
            dup = next(x for x, c in Counter(labels).items() if c > 1)
            raise OrderError(f"duplicate element label {dup!r}")
        if check:
            _check_partial_order(labels, leq)
        self.labels = labels
        self.leq = _frozen(leq)
        self.index = index

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, x) -> bool:
        return x in self.index

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={len(self)})"

    def le(self, x, y) -> bool:
        return bool(self.leq[self.index[x], self.index[y]])

    @cached_property
    def covers(self) -> np.ndarray:
        """``covers[i, j]`` iff ``j`` covers ``i``."""
        lt = self.leq & ~np.eye(len(self), dtype=bool)
        lti = lt.astype(np.int64)
        return _frozen(lt & ~((lti @ lti) > 0))

    @cached_property
    def cover_pairs(self) -> list[tuple[int, int]]:
        lo, hi = np.nonzero(self.covers)
        return list(zip(lo.tolist(), hi.tolist()))

    @cached_property
    def n_lower_covers(self) -> np.ndarray:
        return _frozen(self.covers.sum(axis=0))

    @cached_property
    def n_upper_covers(self) -> np.ndarray:
        return _frozen(self.covers.sum(axis=1))

    def down(self, x) -> frozenset:
        """Principal ideal of ``x`` as a label set."""
        col = self.leq[:, self.index[x]]
        return frozenset(self.labels[i] for i in np.flatnonzero(col))

    def up(self, x) -> frozenset:
        row = self.leq[self.index[x]]
        return frozenset(self.labels[i] for i in np.flatnonzero(row))

    def subposet(self, elements: Iterable[Hashable]) -> "Poset":
        """Induced suborder, keeping the original element order."""
        wanted = set(elements)
        idx = [i for i, x in enumerate(self.labels) if x in wanted]
        return Poset([self.labels[i] for i in idx], self.leq[np.ix_(idx, idx)], check=False)

    def is_down_set(self, subset: Iterable[Hashable]) -> bool:
        mask = np.zeros(len(self), dtype=bool)
        mask[[self.index[x] for x in subset]] = True
        # any element below a member must itself be a member
        return not np.any(self.leq[:, mask].any(axis=1) & ~mask)

    def is_up_set(self, subset: Iterable[Hashable]) -> bool:
        mask = np.zeros(len(self), dtype=bool)
        mask[[self.index[x] for x in subset]] = True
        return not np.any(self.leq[mask].any(axis=0) & ~mask)


def _check_partial_order(labels, leq: np.ndarray) -> None:
    n = len(labels)
    if n and not leq.diagonal().all():
        i = int(np.flatnonzero(~leq.diagonal())[0])
        raise OrderError(f"relation is not reflexive at {labels[i]!r}")
    both = leq & leq.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise OrderError(f"antisymmetry violated: cycle {labels[i]!r} <= {labels[j]!r} <= {labels[i]!r}")
    li = leq.astype(np.int64)
    if ((li @ li > 0) & ~leq).any():
        raise OrderError("relation is not transitive")


def _find_cycle(labels, adj: np.ndarray) -> list:
    """A directed cycle among distinct elements of ``adj`` (diagonal ignored)."""
    n = len(labels)
    adj = adj & ~np.eye(n, dtype=bool)
    color = [0] * n
    parent = [-1] * n
    for start in range(n):
        if color[start]:
            continue
        stack = [(start, iter(np.flatnonzero(adj[start]).tolist()))]
        color[start] = 1
        while stack:
            v, it = stack[-1]
            for w in it:
                if color[w] == 0:
                    color[w], parent[w] = 1, v
                    stack.append((w, iter(np.flatnonzero(adj[w]).tolist())))
                    break
                if color[w] == 1:
                    cycle = [w]
                    u = v
                    while u != w:
                        cycle.append(u)
                        u = parent[u]
                    return [labels[i] for i in reversed(cycle)]
            else:
                color[v] = 2
                stack.pop()
    return []


def make_poset(labels: Iterable[Hashable], pairs: Iterable[tuple[Hashable, Hashable]] = ()) -> Poset:
    """Poset whose order is the reflexive-transitive closure of ``pairs``.

    Raises OrderError naming a cycle if the closure is not antisymmetric.
    """
    labels = tuple(labels)
    index = {x: i for i, x in enumerate(labels)}
    if len(index) != len(labels):
        dup = next(x for x, c in Counter(labels).items() if c > 1)
        raise OrderError(f"duplicate element label {dup!r}")
    n = len(labels)
    adj = np.eye(n, dtype=bool)
    for a, b in pairs:
        try:
            adj[index[a], index[b]] = True
        except KeyError as exc:
            raise OrderError(f"pair ({a!r}, {b!r}) uses an undeclared label") from exc
    closure = adj.copy()
    for k in range(n):
        closure |= closure[:, [k]] & closure[[k], :]
    if (closure & closure.T & ~np.eye(n, dtype=bool)).any():
        cycle = _find_cycle(labels, adj)
        raise OrderError("antisymmetry violated: cycle " + " <= ".join(map(repr, cycle + cycle[:1])))
    return Poset(labels, closure, check=False)


class Lattice(Poset):
    """A poset with precomputed meet and join tables (indices)."""

    def __init__(self, labels, leq, meet_table, join_table, *, check: bool = False):
        super().__init__(labels, leq, check=check)
        if not self.labels:
            raise NotALatticeError("the empty poset is not a lattice")
        self.meet_table = _frozen(np.asarray(meet_table, dtype=np.intp))
        self.join_table = _frozen(np.asarray(join_table, dtype=np.intp))
        down_counts = self.leq.sum(axis=0)
        self.bottom = int(np.argmin(down_counts))
        self.top = int(np.argmax(down_counts))

    def meet(self, x, y):
        return self.labels[self.meet_table[self.index[x], self.index[y]]]

    def join(self, x, y):
        return self.labels[self.join_table[self.index[x], self.index[y]]]

    def meet_all(self, xs: Iterable[Hashable]):
        """Meet of a label collection; the top for an empty one."""
        r = self.top
        for x in xs:
            r = self.meet_table[r, self.index[x]]
        return self.labels[r]

    def join_all(self, xs: Iterable[Hashable]):
        r = self.bottom
        for x in xs:
            r = self.join_table[r, self.index[x]]
        return self.labels[r]

    @property
    def top_label(self):
        return self.labels[self.top]

    @property
    def bottom_label(self):
        return self.labels[self.bottom]


class SetFamilyLattice(Lattice):
    """A ring of subsets of a base poset, ordered by inclusion or reverse inclusion.

    Labels are the member frozensets themselves.
    """

    def __init__(self, base: Poset, members: Sequence[frozenset], direction: str = "subset"):
        if direction not in ("subset", "superset"):
            raise ValueError("direction must be 'subset' or 'superset'")
        members = [frozenset(m) for m in members]
        bit = {x: 1 << i for i, x in enumerate(base.labels)}
        masks = [sum(bit[x] for x in m) for m in members]
        n = len(members)
        pos = {m: i for i, m in enumerate(masks)}
        sub = np.array([[(a & ~b) == 0 for b in masks] for a in masks], dtype=bool).reshape(n, n)
        meet = np.empty((n, n), dtype=np.intp)
        join = np.empty((n, n), dtype=np.intp)
        try:
            for i, a in enumerate(masks):
                meet[i] = [pos[a & b] for b in masks]
                join[i] = [pos[a | b] for b in masks]
        except KeyError as exc:
            raise NotALatticeError("set family is not closed under union and intersection") from exc
        if direction == "superset":
            sub, meet, join = sub.T, join, meet
        super().__init__(members, sub, meet, join)
        self.base = base
        self.direction = direction


def _lattice_tables(leq: np.ndarray, labels) -> tuple[np.ndarray, np.ndarray]:
    n = leq.shape[0]
    down_count = leq.sum(axis=0)
    up_count = leq.sum(axis=1)
    meet = np.empty((n, n), dtype=np.intp)
    join = np.empty((n, n), dtype=np.intp)
    for i in range(n):
        # common lower bounds of i and every j, one column per j
        lb = leq[:, [i]] & leq
        cand = lb & (down_count[:, None] == lb.sum(axis=0)[None, :])
        ok = cand.any(axis=0)
        if not ok.all():
            j = int(np.flatnonzero(~ok)[0])
            raise NotALatticeError(
                f"elements {labels[i]!r} and {labels[j]!r} have no unique meet",
                (labels[i], labels[j]),
            )
        meet[i] = cand.argmax(axis=0)
        ub = leq[[i], :] & leq
        cand = ub & (up_count[None, :] == ub.sum(axis=1)[:, None])
        ok = cand.any(axis=1)
        if not ok.all():
            j = int(np.flatnonzero(~ok)[0])
            raise NotALatticeError(
                f"elements {labels[i]!r} and {labels[j]!r} have no unique join",
                (labels[i], labels[j]),
            )
        join[i] = cand.argmax(axis=1)
    return meet, join


def as_lattice(p: Poset) -> Lattice:
    """Promote a poset to a lattice, or raise NotALatticeError naming a bad pair."""
    if isinstance(p, Lattice):
        return p
    if len(p) == 0:
        raise NotALatticeError("the empty poset is not a lattice")
    meet, join = _lattice_tables(p.leq, p.labels)
    return Lattice(p.labels, p.leq, meet, join)


def join_irreducibles(L: Lattice) -> list:
    """Elements with exactly one lower cover (the bottom is never included)."""
    return [L.labels[i] for i in np.flatnonzero(L.n_lower_covers == 1)]


def meet_irreducibles(L: Lattice) -> list:
    """Elements with exactly one upper cover (the top is never included)."""
    return [L.labels[i] for i in np.flatnonzero(L.n_upper_covers == 1)]


def _ideal_masks(p: Poset) -> list[int]:
    n = len(p)
    below = [sum(1 << int(k) for k in np.flatnonzero(p.leq[:, i])) for i in range(n)]
    seen = {0}
    queue = deque([0])
    while queue:
        mask = queue.popleft()
        for i in range(n):
            bit = 1 << i
            if mask & bit:
                continue
            if (below[i] & ~bit & ~mask) == 0:
                nxt = mask | bit
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return sorted(seen, key=lambda m: (bin(m).count("1"), _lectic_key(m, n)))


def _lectic_key(mask: int, n: int) -> int:
    # element 0 is the most significant position
    return int(format(mask, f"0{n}b")[::-1], 2) if n else 0


def order_ideals(p: Poset) -> SetFamilyLattice:
    """All down-closed subsets of ``p`` ordered by inclusion."""
    members = [
        frozenset(p.labels[i] for i in range(len(p)) if m >> i & 1) for m in _ideal_masks(p)
    ]
    return SetFamilyLattice(p, members, "subset")


def order_filters(p: Poset) -> SetFamilyLattice:
    """All up-closed subsets of ``p`` ordered by reverse inclusion (the empty set is the top)."""
    full = frozenset(p.labels)
    members = [full - ideal for ideal in order_ideals(p).labels]
    return SetFamilyLattice(p, members, "superset")


def dual(L: Lattice) -> Lattice:
    return Lattice(L.labels, L.leq.T.copy(), L.join_table.copy(), L.meet_table.copy())


def is_distributive_law(L: Lattice) -> bool:
    """True iff x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z) for every triple."""
    meet, join = L.meet_table, L.join_table
    for x in range(len(L)):
        mx = meet[x]
        if not np.array_equal(mx[join], join[mx[:, None], mx[None, :]]):
            return False
    return True


@dataclass(frozen=True)
class ForbiddenSublattice:
    """Five elements of a lattice forming a sublattice isomorphic to M3 or N5.

    ``middle`` holds the three elements strictly between ``bottom`` and ``top``;
    for N5 they are ``(a, c, b)`` with ``a < c`` and ``b`` incomparable to both.
    """

    kind: str
    bottom: Hashable
    middle: tuple
    top: Hashable

    @property
    def elements(self) -> frozenset:
        return frozenset((self.bottom, self.top, *self.middle))


def _n5_candidates(L: Lattice) -> Iterator[tuple[int, int, int]]:
    leq, meet, join = L.leq, L.meet_table, L.join_table
    incomparable = ~(leq | leq.T)
    lt = leq & ~np.eye(len(L), dtype=bool)
    for a, c in zip(*np.nonzero(lt)):
        mask = (
            incomparable[a] & incomparable[c]
            & (join[a] == join[c]) & (meet[a] == meet[c])
        )
        for b in np.flatnonzero(mask):
            yield int(a), int(c), int(b)


def _m3_candidates(L: Lattice) -> Iterator[tuple[int, int, int]]:
    leq, meet, join = L.leq, L.meet_table, L.join_table
    incomparable = ~(leq | leq.T)
    n = len(L)
    for x in range(n):
        for y in np.flatnonzero(incomparable[x, x + 1:]) + x + 1:
            j, m = join[x, y], meet[x, y]
            mask = incomparable[x] & incomparable[y] & (join[x] == j) & (join[y] == j) \
                & (meet[x] == m) & (meet[y] == m)
            mask[: y + 1] = False
            for z in np.flatnonzero(mask):
                yield x, int(y), int(z)


def forbidden_sublattices(L: Lattice, kind: str | None = None) -> list[ForbiddenSublattice]:
    """Every distinct M3/N5 sublattice of ``L``, N5 first, each ordered by sorted index tuple."""
    found: dict[frozenset, ForbiddenSublattice] = {}
    lab = L.labels
    kinds = ("N5", "M3") if kind is None else (kind,)
    for k in kinds:
        gen = _n5_candidates(L) if k == "N5" else _m3_candidates(L)
        batch = {}
        for a, c, b in gen:
            bot, top = int(L.meet_table[a, b]), int(L.join_table[a, b])
            key = frozenset((bot, a, c, b, top))
            if key not in batch and key not in found:
                batch[key] = ForbiddenSublattice(k, lab[bot], (lab[a], lab[c], lab[b]), lab[top])
        for key in sorted(batch, key=lambda s: sorted(s)):
            found[key] = batch[key]
    return list(found.values())


def find_forbidden_sublattice(L: Lattice) -> ForbiddenSublattice | None:
    """First N5 (else M3) sublattice under element index order, or None if ``L`` is distributive."""
    for kind in ("N5", "M3"):
        best = None
        gen = _n5_candidates(L) if kind == "N5" else _m3_candidates(L)
        for a, c, b in gen:
            bot, top = int(L.meet_table[a, b]), int(L.join_table[a, b])
            key = sorted((bot, a, c, b, top))
            if best is None or key < best[0]:
                best = (key, (bot, a, c, b, top))
        if best is not None:
            bot, a, c, b, top = best[1]
            lab = L.labels
            return ForbiddenSublattice(kind, lab[bot], (lab[a], lab[c], lab[b]), lab[top])
    return None


# -- isomorphism -------------------------------------------------------------


def _refined_colors(posets: Sequence[Poset]) -> list[list[int]]:
    """Joint color refinement over several posets so colors are comparable."""
    colors = []
    for p in posets:
        down = p.leq.sum(axis=0)
        up = p.leq.sum(axis=1)
        colors.append([
            (int(down[i]), int(up[i]), int(p.n_lower_covers[i]), int(p.n_upper_covers[i]))
            for i in range(len(p))
        ])
    palette: dict = {}
    colors = [[palette.setdefault(c, len(palette)) for c in cs] for cs in colors]
    n_classes = len(palette)
    lowers = [[np.flatnonzero(p.covers[:, i]).tolist() for i in range(len(p))] for p in posets]
    uppers = [[np.flatnonzero(p.covers[i]).tolist() for i in range(len(p))] for p in posets]
    while True:
        palette = {}
        new = []
        for cs, lo, hi in zip(colors, lowers, uppers):
            sig = [
                (cs[i], tuple(sorted(cs[k] for k in lo[i])), tuple(sorted(cs[k] for k in hi[i])))
                for i in range(len(cs))
            ]
            new.append([palette.setdefault(s, len(palette)) for s in sig])
        colors = new
        if len(palette) == n_classes:
            return colors
        n_classes = len(palette)


def is_isomorphic(P: Poset, Q: Poset) -> dict | None:
    """An order isomorphism P → Q as a label map, or None.

    For lattices an order isomorphism is automatically a lattice isomorphism.
    """
    n = len(P)
    if n != len(Q):
        return None
    if n == 0:
        return {}
    if sorted(P.leq.sum(axis=0).tolist()) != sorted(Q.leq.sum(axis=0).tolist()):
        return None
    cp, cq = _refined_colors([P, Q])
    if Counter(cp) != Counter(cq):
        return None
    by_color: dict[int, list[int]] = {}
    for j, c in enumerate(cq):
        by_color.setdefault(c, []).append(j)
    # rare colors first, then neighbours of already ordered elements
    order: list[int] = []
    remaining = set(range(n))
    while remaining:
        placed = np.zeros(n, dtype=bool)
        placed[order] = True
        def rank(i):
            return (len(by_color[cp[i]]), -int((P.covers[i] | P.covers[:, i])[placed].sum()), i)
        nxt = min(remaining, key=rank)
        order.append(nxt)
        remaining.discard(nxt)
    pl, ql = P.leq, Q.leq
    image = [-1] * n
    used = [False] * n

    candidates = [by_color[cp[i]] for i in order]
    pos = [0] * n
    k = 0
    while 0 <= k < n:
        i = order[k]
        done = order[:k]
        tgt = [image[u] for u in done]
        cands = candidates[k]
        if image[i] >= 0:
            used[image[i]] = False
            image[i] = -1
        while pos[k] < len(cands):
            j = cands[pos[k]]
            pos[k] += 1
            if used[j]:
                continue
            if done and not (
                np.array_equal(pl[i, done], ql[j, tgt]) and np.array_equal(pl[done, i], ql[tgt, j])
            ):
                continue
            image[i], used[j] = j, True
            break
        if image[i] >= 0:
            k += 1
        else:
            pos[k] = 0
            k -= 1
    if k < 0:
        return None
    return {P.labels[i]: Q.labels[image[i]] for i in range(n)}
