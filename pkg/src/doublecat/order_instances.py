"""Finite posets, finite frames (distributive lattices) and finite spaces.

These are the carriers for the three order-flavoured instances:

* Pos -- posets, monotone maps, order ideals (upward closed relations);
* Loc -- finite frames, frame homomorphisms read backwards, maps preserving
  finite meets (including the empty meet, so tops are preserved);
* Top -- finite spaces, continuous maps, finite-intersection-preserving maps
  between open-set lattices.

Everything is index-based: objects carry an element tuple and boolean
matrices over element positions, so the exhaustive sweeps stay cheap.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core import (ConditionFails, LawViolation, SizeBoundExceeded, Tag,
                   register_instance)

Matrix = tuple


def _freeze(rows):
    return tuple(tuple(bool(v) for v in row) for row in rows)


def _names(n, prefix=""):
    return tuple(f"{prefix}{i}" for i in range(n))


# ---------------------------------------------------------------------------
# posets


@dataclass(frozen=True)
class FinPoset:
    elements: tuple
    leq: Matrix

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise LawViolation("poset: duplicate element names", self.elements)
        if len(self.leq) != n or any(len(row) != n for row in self.leq):
            raise LawViolation("poset: matrix shape", (n, self.leq))
        for i in range(n):
            if not self.leq[i][i]:
                raise LawViolation("poset: reflexivity", self.elements[i])
        for i in range(n):
            for j in range(n):
                if i != j and self.leq[i][j] and self.leq[j][i]:
                    raise LawViolation("poset: antisymmetry", (self.elements[i], self.elements[j]))
                if self.leq[i][j]:
                    for k in range(n):
                        if self.leq[j][k] and not self.leq[i][k]:
                            raise LawViolation(
                                "poset: transitivity",
                                (self.elements[i], self.elements[j], self.elements[k]))

    @property
    def n(self):
        return len(self.elements)

    def le(self, i, j):
        return self.leq[i][j]

    def index(self, name):
        return self.elements.index(name)

    def maximal(self):
        return [i for i in range(self.n)
                if all(not self.leq[i][j] for j in range(self.n) if j != i)]

    def topo_order(self):
        """Element indices sorted so that smaller elements come first."""
        return sorted(range(self.n), key=lambda i: (sum(self.leq[j][i] for j in range(self.n)), i))


def poset(elements, pairs=()):
    """Poset from named elements and non-reflexive <= pairs (no closure taken)."""
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    rows = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        rows[idx[a]][idx[b]] = True
    return FinPoset(tuple(elements), _freeze(rows))


def poset_closure(elements, pairs):
    """Poset from generating pairs, taking the reflexive-transitive closure."""
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    rows = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        rows[idx[a]][idx[b]] = True
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if rows[i][j]:
                    for k in range(n):
                        if rows[j][k] and not rows[i][k]:
                            rows[i][k] = True
                            changed = True
    return FinPoset(tuple(elements), _freeze(rows))


def chain(n, names=None):
    names = tuple(names) if names else _names(n)
    return FinPoset(names, _freeze([[i <= j for j in range(n)] for i in range(n)]))


def antichain(n, names=None):
    names = tuple(names) if names else _names(n)
    return FinPoset(names, _freeze([[i == j for j in range(n)] for i in range(n)]))


def vee():
    """Two maximal elements over one bottom: l >= m <= r."""
    return poset(("m", "l", "r"), [("m", "l"), ("m", "r")])


def wedge():
    """Two minimal elements under one top: l <= m >= r."""
    return poset(("l", "r", "m"), [("l", "m"), ("r", "m")])


EMPTY_POSET = FinPoset((), ())


def monotone(src, tgt, mapping):
    for i in range(src.n):
        for j in range(src.n):
            if src.leq[i][j] and not tgt.leq[mapping[i]][mapping[j]]:
                return False
    return True


@dataclass(frozen=True)
class MonotoneMap:
    src: FinPoset
    tgt: FinPoset
    mapping: tuple

    def __post_init__(self):
        if len(self.mapping) != self.src.n:
            raise LawViolation("monotone map: arity", self.mapping)
        if any(not (0 <= v < self.tgt.n) for v in self.mapping):
            raise LawViolation("monotone map: target index out of range", self.mapping)
        if not monotone(self.src, self.tgt, self.mapping):
            raise LawViolation("monotone map: order not preserved", self.mapping)

    def __call__(self, i):
        return self.mapping[i]


def compose_mapping(f, g):
    """Index tuple of g∘f."""
    return tuple(g[v] for v in f)


@dataclass(frozen=True)
class OrderIdeal:
    """Relation rel ⊆ src x tgt that is down-closed in src and up-closed in tgt."""

    src: FinPoset
    tgt: FinPoset
    rel: Matrix

    def __post_init__(self):
        if len(self.rel) != self.src.n or any(len(r) != self.tgt.n for r in self.rel):
            raise LawViolation("ideal: matrix shape", self.rel)
        for x in range(self.src.n):
            for y in range(self.tgt.n):
                if not self.rel[x][y]:
                    continue
                for a in range(self.src.n):
                    if not self.src.leq[a][x]:
                        continue
                    for b in range(self.tgt.n):
                        if self.tgt.leq[y][b] and not self.rel[a][b]:
                            raise LawViolation(
                                "ideal: not closed",
                                ((self.src.elements[a], self.tgt.elements[b]),
                                 "forced by",
                                 (self.src.elements[x], self.tgt.elements[y])))

    def holds(self, i, j):
        return self.rel[i][j]

    def pairs(self):
        return [(i, j) for i in range(self.src.n) for j in range(self.tgt.n) if self.rel[i][j]]


def ideal_validate(src, tgt, pairs_or_matrix) -> OrderIdeal:
    """Validated order ideal from explicit pairs (by name or index) or a matrix."""
    if pairs_or_matrix and isinstance(pairs_or_matrix[0], (tuple, list)) \
            and len(pairs_or_matrix[0]) == tgt.n and all(
                isinstance(v, bool) for v in pairs_or_matrix[0]) and len(pairs_or_matrix) == src.n:
        return OrderIdeal(src, tgt, _freeze(pairs_or_matrix))
    rows = [[False] * tgt.n for _ in range(src.n)]
    for a, b in pairs_or_matrix:
        i = a if isinstance(a, int) else src.index(a)
        j = b if isinstance(b, int) else tgt.index(b)
        rows[i][j] = True
    return OrderIdeal(src, tgt, _freeze(rows))


def ideal_from_pairs_closed(src, tgt, pairs):
    """Smallest order ideal containing the given (index) pairs."""
    rows = [[False] * tgt.n for _ in range(src.n)]
    for x, y in pairs:
        for a in range(src.n):
            if src.leq[a][x]:
                for b in range(tgt.n):
                    if tgt.leq[y][b]:
                        rows[a][b] = True
    return OrderIdeal(src, tgt, _freeze(rows))


def identity_ideal(x: FinPoset) -> OrderIdeal:
    return OrderIdeal(x, x, x.leq)


def compose_ideals(m: OrderIdeal, n: OrderIdeal) -> OrderIdeal:
    """Relation composite n•m."""
    if m.tgt != n.src:
        raise LawViolation("ideal composition: boundary mismatch", (m.tgt, n.src))
    mid = m.tgt.n
    rows = [[any(m.rel[i][k] and n.rel[k][j] for k in range(mid))
             for j in range(n.tgt.n)] for i in range(m.src.n)]
    return OrderIdeal(m.src, n.tgt, _freeze(rows))


def enumerate_monotone_maps(src, tgt, allowed=None):
    """All monotone maps src -> tgt, optionally restricted to per-element
    candidate lists, by backtracking along a linear extension of src."""
    if tgt.n == 0:
        return [()] if src.n == 0 else []
    order = src.topo_order()
    cand = [tuple(range(tgt.n)) if allowed is None else tuple(allowed[i]) for i in range(src.n)]
    out = []
    assign = [None] * src.n

    def place(pos):
        if pos == len(order):
            out.append(tuple(assign))
            return
        i = order[pos]
        for v in cand[i]:
            ok = True
            for q in range(pos):
                j = order[q]
                if src.leq[j][i] and not tgt.leq[assign[j]][v]:
                    ok = False
                    break
                if src.leq[i][j] and not tgt.leq[v][assign[j]]:
                    ok = False
                    break
            if ok:
                assign[i] = v
                place(pos + 1)
        assign[i] = None

    place(0)
    return out


def enumerate_ideals(src, tgt):
    """All order ideals src -|-> tgt (exhaustive; keep the posets small)."""
    cells = [(i, j) for i in range(src.n) for j in range(tgt.n)]
    out = []
    for bits in itertools.product((False, True), repeat=len(cells)):
        rows = [[False] * tgt.n for _ in range(src.n)]
        for (i, j), b in zip(cells, bits):
            rows[i][j] = b
        try:
            out.append(OrderIdeal(src, tgt, _freeze(rows)))
        except LawViolation:
            pass
    return out


def enumerate_posets(n):
    """All labeled posets on n elements (elements named 0..n-1)."""
    names = _names(n)
    if n == 0:
        return [EMPTY_POSET]
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in itertools.product((False, True), repeat=len(cells)):
        rows = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), b in zip(cells, bits):
            rows[i][j] = b
        try:
            out.append(FinPoset(names, _freeze(rows)))
        except LawViolation:
            pass
    return out


def find_poset_iso(a: FinPoset, b: FinPoset):
    """An order isomorphism a -> b as an index tuple, or None."""
    if a.n != b.n:
        return None

    def profile(p, i):
        return (sum(p.leq[j][i] for j in range(p.n)), sum(p.leq[i][j] for j in range(p.n)))

    if sorted(profile(a, i) for i in range(a.n)) != sorted(profile(b, i) for i in range(b.n)):
        return None
    used = [False] * b.n
    assign = [None] * a.n

    def place(i):
        if i == a.n:
            return True
        for v in range(b.n):
            if used[v] or profile(a, i) != profile(b, v):
                continue
            ok = True
            for j in range(i):
                if a.leq[i][j] != b.leq[v][assign[j]] or a.leq[j][i] != b.leq[assign[j]][v]:
                    ok = False
                    break
            if ok:
                used[v] = True
                assign[i] = v
                if place(i + 1):
                    return True
                used[v] = False
                assign[i] = None
        return False

    return tuple(assign) if place(0) else None


def poset_canonical_key(p: FinPoset):
    """Smallest matrix encoding over all relabelings (for iso-class dedup)."""
    best = None
    for perm in itertools.permutations(range(p.n)):
        enc = tuple(p.leq[perm[i]][perm[j]] for i in range(p.n) for j in range(p.n))
        if best is None or enc < best:
            best = enc
    return (p.n, best)


def downsets(p: FinPoset):
    """All down-closed subsets as frozensets, in canonical order."""
    out = []
    for bits in itertools.product((False, True), repeat=p.n):
        s = frozenset(i for i in range(p.n) if bits[i])
        if all(p.leq[a][x] <= (a in s) for x in s for a in range(p.n)):
            out.append(s)
    return sorted(out, key=lambda s: (len(s), tuple(sorted(s))))


# ---------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class FinFrame:
    """Finite bounded distributive lattice with precomputed operation tables."""

    elements: tuple
    leq: Matrix
    meet: tuple
    join: tuple
    top: int
    bottom: int

    def __post_init__(self):
        FinPoset(self.elements, self.leq)  # poset laws
        n = len(self.elements)
        if n == 0:
            raise LawViolation("frame: empty", ())
        for x in range(n):
            for y in range(n):
                m, j = self.meet[x][y], self.join[x][y]
                if not (self.leq[m][x] and self.leq[m][y]):
                    raise LawViolation("frame: meet not a lower bound", (x, y))
                if not (self.leq[x][j] and self.leq[y][j]):
                    raise LawViolation("frame: join not an upper bound", (x, y))
                for z in range(n):
                    if self.leq[z][x] and self.leq[z][y] and not self.leq[z][m]:
                        raise LawViolation("frame: meet not greatest", (x, y, z))
                    if self.leq[x][z] and self.leq[y][z] and not self.leq[j][z]:
                        raise LawViolation("frame: join not least", (x, y, z))
        if any(not self.leq[x][self.top] for x in range(n)):
            raise LawViolation("frame: top", self.top)
        if any(not self.leq[self.bottom][x] for x in range(n)):
            raise LawViolation("frame: bottom", self.bottom)
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    lhs = self.meet[x][self.join[y][z]]
                    rhs = self.join[self.meet[x][y]][self.meet[x][z]]
                    if lhs != rhs:
                        raise LawViolation(
                            "frame: distributivity",
                            (self.elements[x], self.elements[y], self.elements[z]))

    @property
    def n(self):
        return len(self.elements)

    def le(self, x, y):
        return self.leq[x][y]

    def meet_all(self, xs):
        acc = self.top
        for x in xs:
            acc = self.meet[acc][x]
        return acc

    def join_all(self, xs):
        acc = self.bottom
        for x in xs:
            acc = self.join[acc][x]
        return acc

    def imp(self, a, b):
        """Heyting implication: largest c with c∧a <= b."""
        return self.join_all([c for c in range(self.n) if self.leq[self.meet[c][a]][b]])

    def meet_irreducibles(self):
        return [x for x in range(self.n)
                if x != self.top and self.meet_all([y for y in range(self.n)
                                                    if y != x and self.leq[x][y]]) != x]

    def join_irreducibles(self):
        return [x for x in range(self.n)
                if x != self.bottom and self.join_all([y for y in range(self.n)
                                                       if y != x and self.leq[y][x]]) != x]

    def index(self, name):
        return self.elements.index(name)


def frame_validate(elements, leq) -> FinFrame:
    """Build a frame from a poset matrix, computing meet/join tables.

    Fails with the first violated lattice/distributivity law."""
    leq = _freeze(leq)
    p = FinPoset(tuple(elements), leq)
    n = p.n
    if n == 0:
        raise LawViolation("frame: empty", ())
    meet_rows, join_rows = [], []
    for x in range(n):
        mrow, jrow = [], []
        for y in range(n):
            lows = [z for z in range(n) if leq[z][x] and leq[z][y]]
            glb = [z for z in lows if all(leq[w][z] for w in lows)]
            if len(glb) != 1:
                raise LawViolation("frame: binary meet missing",
                                   (elements[x], elements[y]))
            mrow.append(glb[0])
            highs = [z for z in range(n) if leq[x][z] and leq[y][z]]
            lub = [z for z in highs if all(leq[z][w] for w in highs)]
            if len(lub) != 1:
                raise LawViolation("frame: binary join missing",
                                   (elements[x], elements[y]))
            jrow.append(lub[0])
        meet_rows.append(tuple(mrow))
        join_rows.append(tuple(jrow))
    tops = [x for x in range(n) if all(leq[y][x] for y in range(n))]
    bots = [x for x in range(n) if all(leq[x][y] for y in range(n))]
    if len(tops) != 1:
        raise LawViolation("frame: top missing", ())
    if len(bots) != 1:
        raise LawViolation("frame: bottom missing", ())
    return FinFrame(tuple(elements), leq, tuple(meet_rows), tuple(join_rows),
                    tops[0], bots[0])


def chain_frame(n, names=None):
    names = tuple(names) if names else _names(n)
    return frame_validate(names, [[i <= j for j in range(n)] for i in range(n)])


ONE_FRAME = chain_frame(1, ("*",))
TWO_FRAME = chain_frame(2, ("bot", "top"))


def downset_frame(p: FinPoset) -> FinFrame:
    """The lattice of down-closed subsets of a poset, ordered by inclusion."""
    ds = downsets(p)
    names = tuple("{" + ",".join(p.elements[i] for i in sorted(s)) + "}" for s in ds)
    leq = [[a <= b for b in ds] for a in ds]
    return frame_validate(names, leq)


@dataclass(frozen=True)
class MeetMap:
    """Map between frames preserving the top and binary meets."""

    src: FinFrame
    tgt: FinFrame
    mapping: tuple

    def __post_init__(self):
        if len(self.mapping) != self.src.n:
            raise LawViolation("meet map: arity", self.mapping)
        if self.mapping[self.src.top] != self.tgt.top:
            raise LawViolation("meet map: top not preserved", self.mapping)
        for x in range(self.src.n):
            for y in range(self.src.n):
                if self.mapping[self.src.meet[x][y]] != \
                        self.tgt.meet[self.mapping[x]][self.mapping[y]]:
                    raise LawViolation(
                        "meet map: binary meet not preserved",
                        (self.src.elements[x], self.src.elements[y]))

    def __call__(self, x):
        return self.mapping[x]


def identity_meet_map(a: FinFrame) -> MeetMap:
    return MeetMap(a, a, tuple(range(a.n)))


def compose_meet_maps(m: MeetMap, n: MeetMap) -> MeetMap:
    if m.tgt != n.src:
        raise LawViolation("meet map composition: boundary mismatch", ())
    return MeetMap(m.src, n.tgt, compose_mapping(m.mapping, n.mapping))


def _frame_hom_laws(a, b, mapping):
    if mapping[a.top] != b.top or mapping[a.bottom] != b.bottom:
        return False
    for x in range(a.n):
        for y in range(a.n):
            if mapping[a.meet[x][y]] != b.meet[mapping[x]][mapping[y]]:
                return False
            if mapping[a.join[x][y]] != b.join[mapping[x]][mapping[y]]:
                return False
    return True


@dataclass(frozen=True)
class LocaleMap:
    """Morphism of locales src -> tgt, stored by its inverse image, a frame
    homomorphism tgt -> src.  The direct image is derived at construction."""

    src: FinFrame
    tgt: FinFrame
    inverse_image: tuple

    def __post_init__(self):
        if len(self.inverse_image) != self.tgt.n:
            raise LawViolation("locale map: arity", self.inverse_image)
        if not _frame_hom_laws(self.tgt, self.src, self.inverse_image):
            raise LawViolation("locale map: inverse image is not a frame hom",
                               self.inverse_image)

    def inv(self, y):
        return self.inverse_image[y]

    @property
    def direct(self):
        return _direct_image_mapping(self)


@lru_cache(maxsize=None)
def _direct_image_mapping(f: LocaleMap):
    src, tgt = f.src, f.tgt
    return tuple(
        tgt.join_all([y for y in range(tgt.n) if src.leq[f.inverse_image[y]][x]])
        for x in range(src.n))


def direct_image(f: LocaleMap) -> MeetMap:
    """Right adjoint of the inverse image: f_*(x) = join of {y | f^*(y) <= x}."""
    return MeetMap(f.src, f.tgt, _direct_image_mapping(f))


def identity_locale_map(a: FinFrame) -> LocaleMap:
    return LocaleMap(a, a, tuple(range(a.n)))


def compose_locale_maps(f: LocaleMap, g: LocaleMap) -> LocaleMap:
    """g∘f as locale maps; inverse images compose the other way."""
    if f.tgt != g.src:
        raise LawViolation("locale map composition: boundary mismatch", ())
    return LocaleMap(f.src, g.tgt, compose_mapping(g.inverse_image, f.inverse_image))


def loc_cell_holds(f: LocaleMap, m: MeetMap, n: MeetMap, f2: LocaleMap):
    """Cell condition for m -> n over (f, f2): pointwise f2^*(n(y)) <= m(f^*(y))."""
    if m.src != f.src or n.src != f.tgt or m.tgt != f2.src or n.tgt != f2.tgt:
        raise LawViolation("cell: boundary mismatch", ())
    for y in range(n.src.n):
        lhs = f2.inverse_image[n.mapping[y]]
        rhs = m.mapping[f.inverse_image[y]]
        if not m.tgt.leq[lhs][rhs]:
            return False
    return True


def loc_cell_witness_index(f, m, n, f2):
    """First y violating the cell condition (for error reporting), or None."""
    for y in range(n.src.n):
        if not m.tgt.leq[f2.inverse_image[n.mapping[y]]][m.mapping[f.inverse_image[y]]]:
            return y
    return None


def enumerate_meet_maps(a: FinFrame, b: FinFrame):
    """All finite-meet-preserving maps a -> b, via values on meet-irreducibles."""
    mi = a.meet_irreducibles()
    above = [[m for m in mi if a.leq[x][m]] for x in range(a.n)]
    seen = set()
    out = []
    for assign in _monotone_assignments(a, b, mi):
        mapping = tuple(b.meet_all([assign[m] for m in above[x]]) for x in range(a.n))
        if mapping in seen:
            continue
        seen.add(mapping)
        try:
            out.append(MeetMap(a, b, mapping))
        except LawViolation:
            pass
    return out


def enumerate_frame_homs(a: FinFrame, b: FinFrame):
    """All frame homomorphisms a -> b, via values on join-irreducibles."""
    ji = a.join_irreducibles()
    below = [[j for j in ji if a.leq[j][x]] for x in range(a.n)]
    seen = set()
    out = []
    for assign in _monotone_assignments(a, b, ji):
        mapping = tuple(b.join_all([assign[j] for j in below[x]]) for x in range(a.n))
        if mapping in seen:
            continue
        seen.add(mapping)
        if _frame_hom_laws(a, b, mapping):
            out.append(mapping)
    return out


def _monotone_assignments(a, b, gens):
    """Assignments gens -> b monotone for a's order restricted to gens."""
    if not gens:
        yield {}
        return
    assign = {}

    def place(pos):
        if pos == len(gens):
            yield dict(assign)
            return
        g = gens[pos]
        for v in range(b.n):
            ok = True
            for h in gens[:pos]:
                if a.leq[g][h] and not b.leq[v][assign[h]]:
                    ok = False
                    break
                if a.leq[h][g] and not b.leq[assign[h]][v]:
                    ok = False
                    break
            if ok:
                assign[g] = v
                yield from place(pos + 1)
        assign.pop(g, None)

    yield from place(0)


def enumerate_locale_maps(a: FinFrame, b: FinFrame):
    return [LocaleMap(a, b, h) for h in enumerate_frame_homs(b, a)]


def find_frame_iso(a: FinFrame, b: FinFrame):
    """A frame isomorphism a -> b as an index tuple, or None."""
    m = find_poset_iso(FinPoset(a.elements, a.leq), FinPoset(b.elements, b.leq))
    return m


# ---------------------------------------------------------------------------
# spaces


def _canon_opens(opens):
    return tuple(sorted(set(opens), key=lambda s: (len(s), tuple(sorted(s)))))


@dataclass(frozen=True)
class FinSpace:
    points: tuple
    opens: tuple  # frozensets of point indices, canonically ordered

    def __post_init__(self):
        n = len(self.points)
        if len(set(self.points)) != n:
            raise LawViolation("space: duplicate point names", self.points)
        full = frozenset(range(n))
        osets = set(self.opens)
        if self.opens != _canon_opens(self.opens):
            raise LawViolation("space: opens not canonical", self.opens)
        if frozenset() not in osets:
            raise LawViolation("space: empty set not open", ())
        if full not in osets:
            raise LawViolation("space: full set not open", ())
        for u in osets:
            if not u <= full:
                raise LawViolation("space: open not a subset", u)
            for v in osets:
                if u | v not in osets:
                    raise LawViolation("space: union not open", (u, v))
                if u & v not in osets:
                    raise LawViolation("space: intersection not open", (u, v))

    @property
    def n(self):
        return len(self.points)

    def index(self, name):
        return self.points.index(name)

    def is_open(self, s):
        return frozenset(s) in set(self.opens)

    def interior(self, s):
        # opens are closed under union, so the union of all opens inside s is open
        s = frozenset(s)
        acc = frozenset()
        for u in self.opens:
            if u <= s:
                acc |= u
        return acc

    def open_index(self, s):
        return self.opens.index(frozenset(s))


def space_validate(points, opens) -> FinSpace:
    """Validated finite space from point names and opens given by name lists."""
    idx = {p: i for i, p in enumerate(points)}
    fam = []
    for u in opens:
        fam.append(frozenset(idx[p] if not isinstance(p, int) else p for p in u))
    return FinSpace(tuple(points), _canon_opens(fam))


def space_from_opens(points, opens):
    return FinSpace(tuple(points), _canon_opens([frozenset(u) for u in opens]))


EMPTY_SPACE = FinSpace((), (frozenset(),))


def point_space(name="*"):
    return FinSpace((name,), (frozenset(), frozenset({0})))


def sierpinski():
    """Two points with {0} the only proper open."""
    return FinSpace(("0", "1"), _canon_opens([frozenset(), frozenset({0}), frozenset({0, 1})]))


def discrete_space(names):
    names = tuple(names)
    n = len(names)
    opens = [frozenset(s) for r in range(n + 1) for s in itertools.combinations(range(n), r)]
    return FinSpace(names, _canon_opens(opens))


def alexandrov(p: FinPoset) -> FinSpace:
    """The space on a poset whose opens are the down-closed subsets."""
    return FinSpace(p.elements, _canon_opens(downsets(p)))


def specialization(x: FinSpace) -> FinPoset:
    """i <= j iff every open containing j contains i (down-set convention)."""
    rows = [[all(i in u for u in x.opens if j in u) for j in range(x.n)] for i in range(x.n)]
    return FinPoset(x.points, _freeze(rows))


@dataclass(frozen=True)
class ContinuousMap:
    src: FinSpace
    tgt: FinSpace
    mapping: tuple

    def __post_init__(self):
        if len(self.mapping) != self.src.n:
            raise LawViolation("continuous map: arity", self.mapping)
        for v in self.tgt.opens:
            pre = frozenset(i for i in range(self.src.n) if self.mapping[i] in v)
            if not self.src.is_open(pre):
                raise LawViolation("continuous map: preimage not open",
                                   (sorted(v), sorted(pre)))

    def __call__(self, i):
        return self.mapping[i]

    def preimage(self, v):
        return frozenset(i for i in range(self.src.n) if self.mapping[i] in v)


@lru_cache(maxsize=None)
def open_lattice(x: FinSpace) -> FinFrame:
    """The frame of opens of a space, ordered by inclusion."""
    names = tuple("{" + ",".join(x.points[i] for i in sorted(u)) + "}" for u in x.opens)
    leq = [[a <= b for b in x.opens] for a in x.opens]
    return frame_validate(names, leq)


def to_locale_map(f: ContinuousMap) -> LocaleMap:
    """The inverse-image frame hom of a continuous map, as a locale map."""
    ox, oy = open_lattice(f.src), open_lattice(f.tgt)
    inv = tuple(f.src.open_index(f.preimage(v)) for v in f.tgt.opens)
    return LocaleMap(ox, oy, inv)


def enumerate_topologies(n):
    """All topologies on n labeled points."""
    full = frozenset(range(n))
    others = [frozenset(s) for r in range(1, n) for s in itertools.combinations(range(n), r)]
    names = _names(n)
    out = []
    for bits in itertools.product((False, True), repeat=len(others)):
        fam = [frozenset(), full] + [u for u, b in zip(others, bits) if b]
        try:
            out.append(FinSpace(names, _canon_opens(fam)))
        except LawViolation:
            pass
    return out


def enumerate_continuous_maps(src, tgt, allowed=None):
    if tgt.n == 0:
        return [ContinuousMap(src, tgt, ())] if src.n == 0 else []
    cand = [tuple(range(tgt.n)) if allowed is None else tuple(allowed[i])
            for i in range(src.n)]
    out = []
    for mapping in itertools.product(*cand):
        try:
            out.append(ContinuousMap(src, tgt, mapping))
        except LawViolation:
            pass
    return out


def find_homeomorphism(a: FinSpace, b: FinSpace):
    """A homeomorphism a -> b as an index tuple, or None."""
    if a.n != b.n or len(a.opens) != len(b.opens):
        return None
    if sorted(len(u) for u in a.opens) != sorted(len(u) for u in b.opens):
        return None
    for perm in itertools.permutations(range(b.n)):
        imgs = set(frozenset(perm[i] for i in u) for u in a.opens)
        if imgs == set(b.opens):
            return perm
    return None


def subspace(x: FinSpace, subset) -> tuple:
    """Subspace on a subset of point indices; returns (space, index list)."""
    idxs = sorted(subset)
    names = tuple(x.points[i] for i in idxs)
    back = {p: k for k, p in enumerate(idxs)}
    opens = _canon_opens([frozenset(back[i] for i in (u & frozenset(idxs))) for u in x.opens])
    return FinSpace(names, opens), idxs


def induced_subposet(p: FinPoset, subset) -> tuple:
    idxs = sorted(subset)
    names = tuple(p.elements[i] for i in idxs)
    leq = [[p.leq[i][j] for j in idxs] for i in idxs]
    return FinPoset(names, _freeze(leq)), idxs


# ---------------------------------------------------------------------------
# random generators (seeded sweeps)


def random_poset(rng, n):
    names = _names(n)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                pairs.append((names[i], names[j]))
    return poset_closure(names, pairs)


def random_monotone(rng, src, tgt):
    maps = enumerate_monotone_maps(src, tgt)
    if not maps:
        return None
    return MonotoneMap(src, tgt, rng.choice(maps))


def random_ideal(rng, src, tgt):
    pairs = [(i, j) for i in range(src.n) for j in range(tgt.n) if rng.random() < 0.4]
    return ideal_from_pairs_closed(src, tgt, pairs)


def random_space(rng, n):
    full = frozenset(range(n))
    fam = {frozenset(), full}
    for _ in range(n):
        s = frozenset(i for i in range(n) if rng.random() < 0.5)
        fam.add(s)
    # close under unions and intersections
    changed = True
    while changed:
        changed = False
        for u in list(fam):
            for v in list(fam):
                for w in (u | v, u & v):
                    if w not in fam:
                        fam.add(w)
                        changed = True
    return FinSpace(_names(n), _canon_opens(fam))


def random_frame(rng, n):
    """Down-set lattice of a random poset: always distributive."""
    return downset_frame(random_poset(rng, n))


def random_meet_map(rng, a, b):
    maps = enumerate_meet_maps(a, b)
    return rng.choice(maps) if maps else None


def random_locale_map(rng, a, b):
    maps = enumerate_locale_maps(a, b)
    return rng.choice(maps) if maps else None


def random_continuous(rng, src, tgt):
    maps = enumerate_continuous_maps(src, tgt)
    return rng.choice(maps) if maps else None


# ---------------------------------------------------------------------------
# instance adapters


class _OrderInstanceBase:
    """Shared behaviour of the three propositional-cell instances."""

    def validate_cell(self, f, m, n, f2, msrc, mtgt, nsrc, ntgt, witness):
        if witness is not None:
            raise LawViolation("cells carry no witness in this instance", witness)
        w = self.cell_condition_witness(f, m, n, f2)
        if w is not None:
            raise ConditionFails(w)
        return None

    def cell_witnesses(self, f, m, n, f2):
        return [None] if self.cell_condition_witness(f, m, n, f2) is None else []

    def id_cell_on_hmor_witness(self, src, tgt, f):
        return None

    def id_cell_on_vmor_witness(self, m):
        return None

    def cell_h_compose(self, c1, c2):
        return None

    def cell_v_compose(self, c1, c2):
        return None

    def special_cell_is_canonical_identity(self, cell, v):
        # cells are propositions: once the composite cell exists it is the
        # canonical one, and composition with identity verticals is strict
        return True

    def check_vertical_adjunction(self, f, comp, conj, report):
        fstar, fup = comp.fstar, conj.fupperstar
        unit_ok = self.cell_condition_witness(
            self.h_id(f.src.payload),
            self.v_id(f.src.payload),
            self.v_compose(fstar.payload, fup.payload),
            self.h_id(f.src.payload)) is None
        counit_ok = self.cell_condition_witness(
            self.h_id(f.tgt.payload),
            self.v_compose(fup.payload, fstar.payload),
            self.v_id(f.tgt.payload),
            self.h_id(f.tgt.payload)) is None
        if not unit_ok:
            report.fail("adjunction: unit cell missing", f)
        if not counit_ok:
            report.fail("adjunction: counit cell missing", f)
        report.tick()


class PosInstance(_OrderInstanceBase):
    tag = Tag.POS

    def validate_obj(self, x):
        if not isinstance(x, FinPoset):
            raise LawViolation("expected a FinPoset", x)
        return x

    def obj_size(self, x):
        return x.n

    def validate_hmor(self, src, tgt, f):
        if not isinstance(f, MonotoneMap) or f.src != src or f.tgt != tgt:
            raise LawViolation("expected a MonotoneMap with matching ends", f)
        return f

    def validate_vmor(self, src, tgt, m):
        if not isinstance(m, OrderIdeal) or m.src != src or m.tgt != tgt:
            raise LawViolation("expected an OrderIdeal with matching ends", m)
        return m

    def h_id(self, x):
        return MonotoneMap(x, x, tuple(range(x.n)))

    def h_compose(self, f, g):
        return MonotoneMap(f.src, g.tgt, compose_mapping(f.mapping, g.mapping))

    def v_id(self, x):
        return identity_ideal(x)

    def v_compose(self, m, n):
        return compose_ideals(m, n)

    def cell_condition_witness(self, f, m, n, f2):
        for x in range(m.src.n):
            for y in range(m.tgt.n):
                if m.rel[x][y] and not n.rel[f.mapping[x]][f2.mapping[y]]:
                    return (m.src.elements[x], m.tgt.elements[y])
        return None

    def companion(self, src, tgt, f):
        rows = [[tgt.leq[f.mapping[x]][y] for y in range(tgt.n)] for x in range(src.n)]
        return OrderIdeal(src, tgt, _freeze(rows)), None, None

    def conjoint(self, src, tgt, f):
        rows = [[tgt.leq[y][f.mapping[x]] for x in range(src.n)] for y in range(tgt.n)]
        return OrderIdeal(tgt, src, _freeze(rows)), None, None

    def zero_obj(self):
        return EMPTY_POSET

    def terminal_obj(self):
        return chain(1, ("*",))

    def h_from_zero(self, x):
        return MonotoneMap(EMPTY_POSET, x, ())

    def h_to_terminal(self, x):
        return MonotoneMap(x, self.terminal_obj(), tuple(0 for _ in range(x.n)))

    def v_from_zero(self, x):
        return OrderIdeal(EMPTY_POSET, x, ())

    def v_to_zero(self, x):
        return OrderIdeal(x, EMPTY_POSET, tuple(() for _ in range(x.n)))

    def enumerate_objects(self, max_size):
        out = []
        for n in range(max_size + 1):
            out.extend(enumerate_posets(n))
        return out

    def enumerate_hmors(self, src, tgt):
        return [MonotoneMap(src, tgt, m) for m in enumerate_monotone_maps(src, tgt)]

    def enumerate_vmors(self, src, tgt, bound=None):
        if bound is not None and src.n * tgt.n > bound:
            raise SizeBoundExceeded((src.n, tgt.n))
        return enumerate_ideals(src, tgt)

    def random_object(self, rng, size):
        return random_poset(rng, size)

    def random_hmor(self, rng, src, tgt):
        return random_monotone(rng, src, tgt)

    def random_vmor(self, rng, src, tgt):
        return random_ideal(rng, src, tgt)

    def is_identity(self, f):
        return f.src == f.tgt and f.mapping == tuple(range(f.src.n))

    def hmor_invertible(self, f):
        if f.src.n != f.tgt.n or len(set(f.mapping)) != f.src.n:
            return None
        inv = [0] * f.src.n
        for i, v in enumerate(f.mapping):
            inv[v] = i
        try:
            return MonotoneMap(f.tgt, f.src, tuple(inv))
        except LawViolation:
            return None

    def find_obj_iso(self, a, b):
        m = find_poset_iso(a, b)
        return None if m is None else MonotoneMap(a, b, m)


class LocInstance(_OrderInstanceBase):
    tag = Tag.LOC

    def validate_obj(self, x):
        if not isinstance(x, FinFrame):
            raise LawViolation("expected a FinFrame", x)
        return x

    def obj_size(self, x):
        return x.n

    def validate_hmor(self, src, tgt, f):
        if not isinstance(f, LocaleMap) or f.src != src or f.tgt != tgt:
            raise LawViolation("expected a LocaleMap with matching ends", f)
        return f

    def validate_vmor(self, src, tgt, m):
        if not isinstance(m, MeetMap) or m.src != src or m.tgt != tgt:
            raise LawViolation("expected a MeetMap with matching ends", m)
        return m

    def h_id(self, x):
        return identity_locale_map(x)

    def h_compose(self, f, g):
        return compose_locale_maps(f, g)

    def v_id(self, x):
        return identity_meet_map(x)

    def v_compose(self, m, n):
        return compose_meet_maps(m, n)

    def cell_condition_witness(self, f, m, n, f2):
        y = loc_cell_witness_index(f, m, n, f2)
        return None if y is None else n.src.elements[y]

    def companion(self, src, tgt, f):
        return direct_image(f), None, None

    def conjoint(self, src, tgt, f):
        return MeetMap(tgt, src, f.inverse_image), None, None

    def zero_obj(self):
        return ONE_FRAME

    def terminal_obj(self):
        return TWO_FRAME

    def h_from_zero(self, x):
        return LocaleMap(ONE_FRAME, x, tuple(0 for _ in range(x.n)))

    def h_to_terminal(self, x):
        inv = (x.bottom, x.top)
        return LocaleMap(x, TWO_FRAME, inv)

    def v_from_zero(self, x):
        return MeetMap(ONE_FRAME, x, (x.top,))

    def v_to_zero(self, x):
        return MeetMap(x, ONE_FRAME, tuple(0 for _ in range(x.n)))

    def enumerate_objects(self, max_size):
        seen = set()
        out = []
        for n in range(max_size + 1):
            for p in enumerate_posets(n):
                try:
                    fr = frame_validate(p.elements, p.leq)
                except LawViolation:
                    continue
                key = (fr.elements, fr.leq)
                if key not in seen:
                    seen.add(key)
                    out.append(fr)
        return out

    def enumerate_hmors(self, src, tgt):
        return enumerate_locale_maps(src, tgt)

    def enumerate_vmors(self, src, tgt, bound=None):
        return enumerate_meet_maps(src, tgt)

    def random_object(self, rng, size):
        return random_frame(rng, max(size - 1, 0)) if size > 1 else ONE_FRAME

    def random_hmor(self, rng, src, tgt):
        return random_locale_map(rng, src, tgt)

    def random_vmor(self, rng, src, tgt):
        return random_meet_map(rng, src, tgt)

    def is_identity(self, f):
        return f.src == f.tgt and f.inverse_image == tuple(range(f.src.n))

    def hmor_invertible(self, f):
        if f.src.n != f.tgt.n or len(set(f.inverse_image)) != f.tgt.n:
            return None
        inv = [0] * f.tgt.n
        for y, x in enumerate(f.inverse_image):
            inv[x] = y
        try:
            return LocaleMap(f.tgt, f.src, tuple(inv))
        except LawViolation:
            return None

    def find_obj_iso(self, a, b):
        m = find_frame_iso(a, b)
        if m is None:
            return None
        inv = [0] * a.n
        for i, v in enumerate(m):
            inv[v] = i
        return LocaleMap(a, b, tuple(inv))


class TopInstance(_OrderInstanceBase):
    tag = Tag.TOP

    def validate_obj(self, x):
        if not isinstance(x, FinSpace):
            raise LawViolation("expected a FinSpace", x)
        return x

    def obj_size(self, x):
        return x.n

    def validate_hmor(self, src, tgt, f):
        if not isinstance(f, ContinuousMap) or f.src != src or f.tgt != tgt:
            raise LawViolation("expected a ContinuousMap with matching ends", f)
        return f

    def validate_vmor(self, src, tgt, m):
        if not isinstance(m, MeetMap) or m.src != open_lattice(src) or m.tgt != open_lattice(tgt):
            raise LawViolation("expected a MeetMap between the open lattices", m)
        return m

    def h_id(self, x):
        return ContinuousMap(x, x, tuple(range(x.n)))

    def h_compose(self, f, g):
        return ContinuousMap(f.src, g.tgt, compose_mapping(f.mapping, g.mapping))

    def v_id(self, x):
        return identity_meet_map(open_lattice(x))

    def v_compose(self, m, n):
        return compose_meet_maps(m, n)

    def cell_condition_witness(self, f, m, n, f2):
        # a Top cell is precisely a Loc cell between the open lattices
        y = loc_cell_witness_index(to_locale_map(f), m, n, to_locale_map(f2))
        return None if y is None else n.src.elements[y]

    def companion(self, src, tgt, f):
        return direct_image(to_locale_map(f)), None, None

    def conjoint(self, src, tgt, f):
        lm = to_locale_map(f)
        return MeetMap(lm.tgt, lm.src, lm.inverse_image), None, None

    def zero_obj(self):
        return EMPTY_SPACE

    def terminal_obj(self):
        return point_space()

    def h_from_zero(self, x):
        return ContinuousMap(EMPTY_SPACE, x, ())

    def h_to_terminal(self, x):
        return ContinuousMap(x, point_space(), tuple(0 for _ in range(x.n)))

    def v_from_zero(self, x):
        ol = open_lattice(x)
        return MeetMap(open_lattice(EMPTY_SPACE), ol, (ol.top,))

    def v_to_zero(self, x):
        ol = open_lattice(x)
        return MeetMap(ol, open_lattice(EMPTY_SPACE), tuple(0 for _ in range(ol.n)))

    def enumerate_objects(self, max_size):
        out = []
        for n in range(max_size + 1):
            out.extend(enumerate_topologies(n))
        return out

    def enumerate_hmors(self, src, tgt):
        return enumerate_continuous_maps(src, tgt)

    def enumerate_vmors(self, src, tgt, bound=None):
        return enumerate_meet_maps(open_lattice(src), open_lattice(tgt))

    def random_object(self, rng, size):
        return random_space(rng, size)

    def random_hmor(self, rng, src, tgt):
        return random_continuous(rng, src, tgt)

    def random_vmor(self, rng, src, tgt):
        return random_meet_map(rng, open_lattice(src), open_lattice(tgt))

    def is_identity(self, f):
        return f.src == f.tgt and f.mapping == tuple(range(f.src.n))

    def hmor_invertible(self, f):
        if f.src.n != f.tgt.n or len(set(f.mapping)) != f.src.n:
            return None
        inv = [0] * f.src.n
        for i, v in enumerate(f.mapping):
            inv[v] = i
        try:
            return ContinuousMap(f.tgt, f.src, tuple(inv))
        except LawViolation:
            return None

    def find_obj_iso(self, a, b):
        m = find_homeomorphism(a, b)
        return None if m is None else ContinuousMap(a, b, m)


register_instance(Tag.POS, PosInstance())
register_instance(Tag.LOC, LocInstance())
register_instance(Tag.TOP, TopInstance())
