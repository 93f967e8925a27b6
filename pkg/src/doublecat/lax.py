"""Normal lax diagrams over a finite index, their transformations and slices.

A lax functor assigns a carrier object to each index element and a vertical
morphism to each strict pair (poset index) or non-identity morphism
(category index, Cat instance only).  Identity verticals are implicit, which
bakes in normality; comparison data exists only for the Cat instance, where
it is stored as a pairing on coend classes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import cat_instance as ci
from . import core
from .core import (Cell, HMor, LawReport, LawViolation, Obj, Tag, VMor,
                   compose_vertical, identity_h, identity_v, instance,
                   make_cell, make_hmor, make_vmor, make_obj)
from .order_instances import FinPoset


@dataclass(frozen=True)
class LaxFunctor:
    tag: Tag
    base: object                 # FinPoset, or FinCat for the Cat instance
    carriers: tuple              # Obj per base element / object
    verticals: tuple             # ((i, j), VMor) pairs / (mor index, VMor)
    comparisons: tuple = ()      # Cat only: (key, pairing tuple on coend classes)

    @property
    def base_is_poset(self):
        return isinstance(self.base, FinPoset)

    def carrier(self, b) -> Obj:
        return self.carriers[b]

    def vertical(self, i, j=None) -> VMor:
        """Vertical for a strict base pair i<j, or for a base morphism index."""
        if self.base_is_poset:
            if i == j:
                return identity_v(self.carriers[i])
            for key, v in self.verticals:
                if key == (i, j):
                    return v
            raise KeyError((i, j))
        beta = i
        if beta in self.base.identity:
            b = self.base.dom[beta]
            return identity_v(self.carriers[b])
        for key, v in self.verticals:
            if key == beta:
                return v
        raise KeyError(beta)

    def comparison(self, key):
        for k, pairing in self.comparisons:
            if k == key:
                return pairing
        raise KeyError(key)

    def strict_pairs(self):
        if not self.base_is_poset:
            raise LawViolation("strict_pairs needs a poset base", self.base)
        b = self.base
        return [(i, j) for i in range(b.n) for j in range(b.n) if i != j and b.leq[i][j]]

    def chains3(self):
        b = self.base
        return [(i, j, k) for (i, j) in self.strict_pairs() for k in range(b.n)
                if j != k and k != i and b.leq[j][k]]


def lax_functor(tag, base, carriers, verticals, comparisons=()) -> LaxFunctor:
    """Assemble and boundary-check a lax functor; coherence is validated
    separately by validate_lax_functor."""
    tag = Tag(tag)
    carrier_objs = tuple(c if isinstance(c, Obj) else make_obj(tag, c) for c in carriers)
    vs = []
    for key, v in sorted(verticals.items() if isinstance(verticals, dict) else verticals):
        if not isinstance(v, VMor):
            if isinstance(base, FinPoset):
                i, j = key
                v = make_vmor(carrier_objs[i], carrier_objs[j], v)
            else:
                v = make_vmor(carrier_objs[base.dom[key]], carrier_objs[base.cod[key]], v)
        vs.append((key, v))
    comps = tuple(sorted(comparisons.items() if isinstance(comparisons, dict) else comparisons))
    return LaxFunctor(tag, base, carrier_objs, tuple(vs), comps)


def terminal_lax_functor(tag, base) -> LaxFunctor:
    """Constant diagram on the horizontal terminal object with identity verticals."""
    tag = Tag(tag)
    t = core.terminal_object(tag)
    if isinstance(base, FinPoset):
        keys = [(i, j) for i in range(base.n) for j in range(base.n)
                if i != j and base.leq[i][j]]
        verticals = {k: identity_v(t) for k in keys}
        comparisons = {}
        if tag == Tag.CAT:
            comparisons = {(i, j, k): _hom_multiplication_pairing(t.payload)
                           for (i, j) in keys for k in range(base.n)
                           if base.leq[j][k] and j != k and i != k}
        return lax_functor(tag, base, [t] * base.n, verticals, comparisons)
    keys = [b for b in range(base.n_mor) if b not in base.identity]
    verticals = {k: identity_v(t) for k in keys}
    comparisons = {}
    for b2 in keys:
        for b1 in keys:
            if base.cod[b1] == base.dom[b2]:
                comparisons[(b1, b2)] = _hom_multiplication_pairing(t.payload)
    return lax_functor(tag, base, [t] * base.n_obj, verticals, comparisons)


def _hom_multiplication_pairing(c):
    """Pairing for id•id -> id on a category: compose the representative pair."""
    hom = ci.hom_profunctor(c)
    _, table = ci.prof_compose(hom, hom)
    out = []
    for r in table.reps:
        e1, e2 = table.pairs[r]
        g1 = c.morphisms.index(hom.elems[e1][2])
        g2 = c.morphisms.index(hom.elems[e2][2])
        g = c.comp[g2][g1]
        out.append(hom.find(c.dom[g], c.cod[g], c.morphisms[g]))
    return tuple(out)


def two_stage(m: VMor) -> LaxFunctor:
    """A vertical morphism packaged as a lax functor over the two-chain."""
    from .order_instances import chain
    return lax_functor(m.tag, chain(2), [m.src, m.tgt], {(0, 1): m})


def _composable_comparison_keys(fun: LaxFunctor):
    if fun.base_is_poset:
        return [((i, j), (j, k), (i, k), (i, j, k)) for (i, j, k) in fun.chains3()]
    base = fun.base
    keys = []
    for b1 in range(base.n_mor):
        if b1 in base.identity:
            continue
        for b2 in range(base.n_mor):
            if b2 in base.identity or base.cod[b1] != base.dom[b2]:
                continue
            keys.append((b1, b2, base.comp[b2][b1], (b1, b2)))
    return keys


def validate_lax_functor(fun: LaxFunctor) -> LawReport:
    """Normality holds by representation (identity verticals are implicit);
    what gets checked is boundary data and the comparison coherence on every
    composable pair and triple of the base."""
    report = LawReport()
    base = fun.base
    if fun.tag != Tag.CAT and not fun.base_is_poset:
        report.fail("index must be a poset for this instance", base)
        return report
    # vertical endpoints and key coverage
    expected = set()
    if fun.base_is_poset:
        expected = set(fun.strict_pairs())
    else:
        expected = {b for b in range(base.n_mor) if b not in base.identity}
    got = {key for key, _ in fun.verticals}
    if got != expected:
        report.fail("verticals must cover exactly the strict base pairs",
                    (sorted(got), sorted(expected)))
        return report
    for key, v in fun.verticals:
        if fun.base_is_poset:
            i, j = key
        else:
            i, j = base.dom[key], base.cod[key]
        if v.src != fun.carriers[i] or v.tgt != fun.carriers[j]:
            report.fail("vertical endpoints do not match carriers", key)
    if not report.ok:
        return report
    # comparison existence (propositional for the order instances, data for Cat)
    for first, second, whole, ckey in _composable_comparison_keys(fun):
        composite = compose_vertical(_vert(fun, first), _vert(fun, second))
        target = _vert(fun, whole)
        if fun.tag != Tag.CAT:
            inst = instance(fun.tag)
            w = inst.cell_condition_witness(
                inst.h_id(composite.src.payload), composite.payload,
                target.payload, inst.h_id(composite.tgt.payload))
            if w is not None:
                report.fail("comparison cell missing", (ckey, w))
        else:
            try:
                pairing = fun.comparison(ckey)
            except KeyError:
                report.fail("comparison pairing missing", ckey)
                continue
            try:
                ci._check_prof_map_natural(composite.payload, target.payload, pairing)
            except LawViolation as exc:
                report.fail("comparison pairing not natural", (ckey, exc.law, exc.witness))
        report.tick()
    if fun.tag == Tag.CAT and report.ok:
        _check_cat_comparison_associativity(fun, report)
    return report


def _vert(fun, key):
    if fun.base_is_poset:
        return fun.vertical(*key)
    return fun.vertical(key)


def _nonidentity(fun, key):
    if fun.base_is_poset:
        return key[0] != key[1]
    return key not in fun.base.identity


def pairing_value(fun, first, second, e1, e2):
    """Comparison pairing applied to an element pair; unit comparisons (one
    key an identity) are the canonical action maps and carry no stored data."""
    first_id = not _nonidentity(fun, first)
    second_id = not _nonidentity(fun, second)
    m, n = _vert(fun, first).payload, _vert(fun, second).payload
    if first_id and second_id:
        cat = m.src
        g1 = cat.morphisms.index(m.elems[e1][2])
        g2 = cat.morphisms.index(n.elems[e2][2])
        g = cat.comp[g2][g1]
        return m.find(cat.dom[g], cat.cod[g], cat.morphisms[g])
    if first_id:
        alpha = m.src.morphisms.index(m.elems[e1][2])
        return n.lact[alpha][e2]
    if second_id:
        gamma = n.src.morphisms.index(n.elems[e2][2])
        return m.ract[gamma][e1]
    if fun.base_is_poset:
        ckey = (first[0], first[1], second[1])
    else:
        ckey = (first, second)
    _, table = ci.prof_compose(m, n)
    return fun.comparison(ckey)[table.cls[table.pair_index(e1, e2)]]


def _check_cat_comparison_associativity(fun: LaxFunctor, report: LawReport):
    """comp(whole12, third)∘(comp12⊗id) == comp(first, whole23)∘(id⊗comp23)
    elementwise, for every composable base triple."""
    if fun.base_is_poset:
        triples = []
        for (i, j, k) in fun.chains3():
            for l in range(fun.base.n):
                if fun.base.leq[k][l] and k != l:
                    triples.append(((i, j), (j, k), (k, l), (i, k), (j, l), (i, l)))
    else:
        base = fun.base
        nonid = [b for b in range(base.n_mor) if b not in base.identity]
        triples = []
        for b1 in nonid:
            for b2 in nonid:
                if base.cod[b1] != base.dom[b2]:
                    continue
                for b3 in nonid:
                    if base.cod[b2] != base.dom[b3]:
                        continue
                    triples.append((b1, b2, b3, base.comp[b2][b1],
                                    base.comp[b3][b2], base.comp[b3][base.comp[b2][b1]]))

    for t in triples:
        first, second, third, w12, w23, whole = t
        m1, m2, m3 = (_vert(fun, k).payload for k in (first, second, third))
        for e1 in range(m1.n_elems):
            for e2 in range(m2.n_elems):
                if m1.elems[e1][1] != m2.elems[e2][0]:
                    continue
                v12 = pairing_value(fun, first, second, e1, e2)
                for e3 in range(m3.n_elems):
                    if m2.elems[e2][1] != m3.elems[e3][0]:
                        continue
                    v23 = pairing_value(fun, second, third, e2, e3)
                    lhs = pairing_value(fun, w12, third, v12, e3)
                    rhs = pairing_value(fun, first, w23, e1, v23)
                    if lhs != rhs:
                        report.fail("comparison associativity", (t, e1, e2, e3))
                        return
        report.tick()


@dataclass(frozen=True)
class LaxTransformation:
    src: LaxFunctor
    tgt: LaxFunctor
    components: tuple       # HMor per base index
    squares: tuple          # (vertical key, Cell)

    def component(self, b) -> HMor:
        return self.components[b]

    def square(self, key) -> Cell:
        for k, c in self.squares:
            if k == key:
                return c
        raise KeyError(key)


def transformation(src: LaxFunctor, tgt: LaxFunctor, components,
                   square_witnesses=None) -> LaxTransformation:
    """Build a transformation, constructing the square cells (witnesses are
    required per vertical key for the Cat instance)."""
    comps = tuple(components)
    squares = []
    for key, v in src.verticals:
        w = None if square_witnesses is None else square_witnesses.get(key)
        if src.base_is_poset:
            i, j = key
        else:
            i, j = src.base.dom[key], src.base.cod[key]
        cell = make_cell(comps[i], v, _vert(tgt, key), comps[j], w)
        squares.append((key, cell))
    return LaxTransformation(src, tgt, comps, tuple(squares))


def identity_transformation(fun: LaxFunctor) -> LaxTransformation:
    w = None
    if fun.tag == Tag.CAT:
        w = {key: tuple(range(v.payload.n_elems)) for key, v in fun.verticals}
    return transformation(fun, fun, [identity_h(c) for c in fun.carriers], w)


def validate_transformation(t: LaxTransformation) -> LawReport:
    """Square cells valid, plus compatibility with the comparison pairings."""
    report = LawReport()
    if t.src.base != t.tgt.base or t.src.tag != t.tgt.tag:
        report.fail("transformation: base mismatch", ())
        return report
    for b, c in enumerate(t.components):
        if c.src != t.src.carriers[b] or c.tgt != t.tgt.carriers[b]:
            report.fail("transformation: component endpoints", b)
    for key, v in t.src.verticals:
        try:
            cell = t.square(key)
        except KeyError:
            report.fail("transformation: square missing", key)
            continue
        if cell.left != v or cell.right != _vert(t.tgt, key):
            report.fail("transformation: square edges", key)
        report.tick()
    if not report.ok:
        return report
    if t.src.tag == Tag.CAT:
        _check_cat_transformation_coherence(t, report)
    return report


def _square_witness(t: LaxTransformation, key):
    """Witness family of a square, including the implicit identity squares."""
    if _nonidentity(t.src, key):
        return t.square(key).witness
    b = key[0] if t.src.base_is_poset else t.src.base.dom[key]
    inst = instance(t.src.tag)
    return inst.id_cell_on_hmor_witness(t.src.carriers[b].payload,
                                        t.tgt.carriers[b].payload,
                                        t.components[b].payload)


def _check_cat_transformation_coherence(t: LaxTransformation, report: LawReport):
    """f_{whole}∘(comparison of src) == (comparison of tgt)∘(f_second•f_first)."""
    for first, second, whole, ckey in _composable_comparison_keys(t.src):
        m1, m2 = _vert(t.src, first).payload, _vert(t.src, second).payload
        w1 = _square_witness(t, first)
        w2 = _square_witness(t, second)
        w_whole = _square_witness(t, whole)
        for e1 in range(m1.n_elems):
            for e2 in range(m2.n_elems):
                if m1.elems[e1][1] != m2.elems[e2][0]:
                    continue
                lhs = w_whole[pairing_value(t.src, first, second, e1, e2)]
                rhs = pairing_value(t.tgt, first, second, w1[e1], w2[e2])
                if lhs != rhs:
                    report.fail("transformation: comparison compatibility",
                                (ckey, e1, e2))
                    return
        report.tick()


@dataclass(frozen=True)
class Modification:
    src: LaxTransformation
    tgt: LaxTransformation
    components: tuple       # special Cell per base index


def modification(src: LaxTransformation, tgt: LaxTransformation,
                 component_witnesses=None) -> Modification:
    comps = []
    for b in range(len(src.components)):
        w = None if component_witnesses is None else component_witnesses[b]
        cell = make_cell(src.components[b],
                         identity_v(src.src.carriers[b]),
                         identity_v(src.tgt.carriers[b]),
                         tgt.components[b], w)
        comps.append(cell)
    return Modification(src, tgt, tuple(comps))


def validate_modification(theta: Modification) -> LawReport:
    """Cylinder condition: pasting a component against the source squares
    equals pasting against the target squares, for every base pair.

    For the order instances both pastings are cells with the same boundary,
    hence equal as propositions; the genuine equation lives in Cat, where it
    is checked elementwise through the actions."""
    report = LawReport()
    s, g = theta.src, theta.tgt
    if s.src != g.src or s.tgt != g.tgt:
        report.fail("modification: parallel transformations required", ())
        return report
    fun, target = s.src, s.tgt
    for key, v in fun.verticals:
        if fun.base_is_poset:
            i, j = key
        else:
            i, j = fun.base.dom[key], fun.base.cod[key]
        # both pastings must compose (propositional content for Pos/Loc/Top)
        core.compose_cells("v", s.square(key), theta.components[j])
        core.compose_cells("v", theta.components[i], g.square(key))
        if fun.tag != Tag.CAT:
            report.tick()
            continue
        n_beta = _vert(target, key).payload
        sq_f, sq_g = s.square(key).witness, g.square(key).witness
        th_i, th_j = theta.components[i].witness, theta.components[j].witness
        hom_i = ci.hom_profunctor(fun.carriers[i].payload)
        hom_j = ci.hom_profunctor(fun.carriers[j].payload)
        gtj = target.carriers[j].payload
        gti = target.carriers[i].payload
        for e in range(v.payload.n_elems):
            x, x2, _ = v.payload.elems[e]
            cx = fun.carriers[i].payload
            cx2 = fun.carriers[j].payload
            e_idx = hom_i.find(x, x, cx.morphisms[cx.identity[x]])
            e_idx2 = hom_j.find(x2, x2, cx2.morphisms[cx2.identity[x2]])
            t_x2 = gtj.morphisms.index(
                ci.hom_profunctor(gtj).elems[th_j[e_idx2]][2])
            s_x = gti.morphisms.index(
                ci.hom_profunctor(gti).elems[th_i[e_idx]][2])
            side1 = n_beta.ract[t_x2][sq_f[e]]
            side2 = n_beta.lact[s_x][sq_g[e]]
            if side1 != side2:
                report.fail("modification: cylinder condition", (key, v.payload.elems[e]))
                return report
        report.tick()
    return report


# ---------------------------------------------------------------------------
# slices of the horizontal 2-category


@dataclass(frozen=True)
class SliceObject:
    total: Obj
    base: Obj
    map: HMor

    def __post_init__(self):
        if self.map.src != self.total or self.map.tgt != self.base:
            raise LawViolation("slice object: structure map endpoints", self)


def slice_object(total: Obj, base: Obj, payload) -> SliceObject:
    return SliceObject(total, base, make_hmor(total, base, payload))


def slice_of_identity(d: Obj) -> SliceObject:
    return SliceObject(d, d, identity_h(d))


@dataclass(frozen=True)
class SliceMorphism:
    src: SliceObject
    tgt: SliceObject
    arrow: HMor

    def __post_init__(self):
        if self.src.base != self.tgt.base:
            raise LawViolation("slice morphism: bases differ", self)
        if core.compose_horizontal(self.arrow, self.tgt.map) != self.src.map:
            raise LawViolation("slice morphism: triangle does not commute", self)


def enumerate_slice_morphisms(a: SliceObject, b: SliceObject, size_bound=64):
    """Complete duplicate-free list of morphisms a -> b over the shared base."""
    if a.base != b.base:
        raise LawViolation("slice morphisms: bases differ", (a.base, b.base))
    if a.total.size() > size_bound or b.total.size() > size_bound:
        raise core.SizeBoundExceeded((a.total.size(), b.total.size()))
    out = []
    for payload in _hmors_over(a, b):
        arrow = HMor(a.total, b.total, payload)
        out.append(SliceMorphism(a, b, arrow))
    return out


def _hmors_over(a: SliceObject, b: SliceObject):
    """Instance-specific enumeration of commuting arrows, pruned by fibers."""
    tag = a.total.tag
    inst = instance(tag)
    X, Y = a.total.payload, b.total.payload
    p, q = a.map.payload, b.map.payload
    if tag == Tag.POS:
        from .order_instances import MonotoneMap, enumerate_monotone_maps
        allowed = [[j for j in range(Y.n) if q.mapping[j] == p.mapping[i]]
                   for i in range(X.n)]
        return [MonotoneMap(X, Y, m) for m in enumerate_monotone_maps(X, Y, allowed)]
    if tag == Tag.TOP:
        from .order_instances import enumerate_continuous_maps
        allowed = [[j for j in range(Y.n) if q.mapping[j] == p.mapping[i]]
                   for i in range(X.n)]
        return enumerate_continuous_maps(X, Y, allowed)
    return [h for h in inst.enumerate_hmors(X, Y) if inst.h_compose(h, q) == p]


def find_slice_iso(a: SliceObject, b: SliceObject):
    """An isomorphism over the base, or None."""
    if a.total.size() != b.total.size():
        return None
    inst = instance(a.total.tag)
    for m in enumerate_slice_morphisms(a, b):
        invp = inst.hmor_invertible(m.arrow.payload)
        if invp is None:
            continue
        inv = HMor(b.total, a.total, invp)
        if core.compose_horizontal(inv, a.map) == b.map:
            return m
    return None


def compose_transformations(t1: LaxTransformation, t2: LaxTransformation):
    """Pasted transformation t2∘t1 (components compose, squares paste)."""
    if t1.tgt != t2.src:
        raise LawViolation("transformation composition: mismatch", ())
    comps = tuple(core.compose_horizontal(a, b)
                  for a, b in zip(t1.components, t2.components))
    squares = []
    for key, _ in t1.src.verticals:
        squares.append((key, core.compose_cells("h", t1.square(key), t2.square(key))))
    return LaxTransformation(t1.src, t2.tgt, comps, tuple(squares))


@dataclass(frozen=True)
class LaxSliceObject:
    """An object of the slice of lax diagrams over a fixed diagram."""

    functor: LaxFunctor
    structure: LaxTransformation

    def __post_init__(self):
        if self.structure.src != self.functor:
            raise LawViolation("lax slice object: structure source mismatch", self)

    @property
    def over(self) -> LaxFunctor:
        return self.structure.tgt

    def carrier_slice(self, b) -> SliceObject:
        """Evaluation at a base index, as a slice over the base carrier."""
        return SliceObject(self.functor.carriers[b], self.over.carriers[b],
                           self.structure.components[b])


def enumerate_lax_slice_morphisms(a: LaxSliceObject, b: LaxSliceObject):
    """Transformations between the diagrams commuting with the structures."""
    if a.over != b.over:
        raise LawViolation("lax slice morphisms: bases differ", ())
    inst = instance(a.functor.tag)
    cands = []
    for idx in range(len(a.functor.carriers)):
        options = []
        for p in inst.enumerate_hmors(a.functor.carriers[idx].payload,
                                      b.functor.carriers[idx].payload):
            h = HMor(a.functor.carriers[idx], b.functor.carriers[idx], p)
            if core.compose_horizontal(h, b.structure.components[idx]) == \
                    a.structure.components[idx]:
                options.append(h)
        cands.append(options)
    out = []
    for t in enumerate_transformations(a.functor, b.functor, cands):
        if a.functor.tag != Tag.CAT:
            out.append(t)
            continue
        if compose_transformations(t, b.structure) == a.structure:
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# transformations enumerated (oracle backbone for adjunction checks)


def enumerate_transformations(src: LaxFunctor, tgt: LaxFunctor,
                              component_candidates=None):
    """All transformations src -> tgt; exponential in the base size, so desk
    scale only."""
    inst = instance(src.tag)
    n = len(src.carriers)
    cands = []
    for b in range(n):
        if component_candidates is not None:
            cands.append(list(component_candidates[b]))
        else:
            cands.append([HMor(src.carriers[b], tgt.carriers[b], p)
                          for p in inst.enumerate_hmors(src.carriers[b].payload,
                                                        tgt.carriers[b].payload)])
    out = []
    for comps in itertools.product(*cands):
        if src.tag != Tag.CAT:
            try:
                t = transformation(src, tgt, comps)
            except (core.ConditionFails, LawViolation):
                continue
            if validate_transformation(t).ok:
                out.append(t)
            continue
        # Cat: enumerate witness families per square
        per_key = []
        keys = [key for key, _ in src.verticals]
        feasible = True
        for key, v in src.verticals:
            if src.base_is_poset:
                i, j = key
            else:
                i, j = src.base.dom[key], src.base.cod[key]
            fams = ci.enumerate_cell_families(
                comps[i].payload, v.payload, _vert(tgt, key).payload, comps[j].payload)
            if not fams:
                feasible = False
                break
            per_key.append(fams)
        if not feasible:
            continue
        for choice in itertools.product(*per_key):
            try:
                t = transformation(src, tgt, comps, dict(zip(keys, choice)))
            except (core.NotNatural, LawViolation):
                continue
            if validate_transformation(t).ok:
                out.append(t)
    return out
