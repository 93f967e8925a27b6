"""Collage constructions, their universal property, fibers and transports.

The collage of a lax diagram glues the carriers along the verticals:

* posets: pairs (b, x) with (b, x) <= (b', x') iff the connecting ideal
  relates x to x' (the fiber order when b = b');
* spaces: pairs (b, x), open when each trace is open and successive traces
  are bounded by the connecting maps applied to earlier ones;
* frames: descending families, ordered pointwise, with projections as the
  injections' inverse images;
* categories: the total category whose cross morphisms are the bimodule
  elements, composed through the comparison pairings.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

_log = logging.getLogger(__name__)

from . import cat_instance as ci
from . import core
from . import order_instances as oi
from .core import (Cell, HMor, LawViolation, NoMediator, NonUnique, Obj,
                   SizeBoundExceeded, Tag, VMor, compose_horizontal,
                   compose_vertical, identity_h, identity_v, instance,
                   make_cell, make_hmor, make_obj, make_vmor)
from .lax import (LaxFunctor, LaxSliceObject, LaxTransformation, SliceObject,
                  lax_functor, pairing_value, transformation, two_stage,
                  _vert)


@dataclass(frozen=True)
class Collage:
    functor: LaxFunctor
    total: Obj
    injections: tuple           # HMor per base index
    cells: tuple                # ((key), Cell) per strict pair / base morphism
    points: tuple = ()          # (b, fiber index) per total element (not Loc)
    families: tuple = ()        # Loc: fiber-element tuple per frame element
    mor_tags: tuple = ()        # Cat: (key, elem index) per total morphism

    def cell(self, key) -> Cell:
        for k, c in self.cells:
            if k == key:
                return c
        raise KeyError(key)

    def point_index(self, b, x):
        return self.points.index((b, x))


@dataclass(frozen=True)
class Cocone:
    functor: LaxFunctor
    apex: Obj
    legs: tuple
    cell_witnesses: tuple = ()   # (key, family) for Cat; empty otherwise

    def witness(self, key):
        for k, w in self.cell_witnesses:
            if k == key:
                return w
        return None


def cocone(fun: LaxFunctor, apex: Obj, legs, cell_witnesses=None) -> Cocone:
    """Validate a lax cocone: one cell per connecting vertical, compatible
    with the comparison pairings (the Cat equation is checked in mediate)."""
    legs = tuple(legs)
    ws = dict(cell_witnesses or {})
    for key, v in fun.verticals:
        i, j = _key_ends(fun, key)
        make_cell(legs[i], v, identity_v(apex), legs[j], ws.get(key))
    return Cocone(fun, apex, legs, tuple(sorted(ws.items())))


def _key_ends(fun, key):
    if fun.base_is_poset:
        return key
    return fun.base.dom[key], fun.base.cod[key]


def _base_point_names(fun):
    if fun.base_is_poset:
        return fun.base.elements
    return fun.base.objects


# ---------------------------------------------------------------------------
# collage construction


def collage(fun: LaxFunctor) -> Collage:
    tag = fun.tag
    if tag == Tag.POS:
        return _collage_pos(fun)
    if tag == Tag.TOP:
        return _collage_top(fun)
    if tag == Tag.LOC:
        return _collage_loc(fun)
    return _collage_cat(fun)


def _points_of(fun, fiber_sizes):
    names = _base_point_names(fun)
    pts = []
    for b in range(len(fun.carriers)):
        for x in range(fiber_sizes(b)):
            pts.append((b, x))
    return tuple(pts), names


def _collage_pos(fun: LaxFunctor) -> Collage:
    base = fun.base
    pts, bnames = _points_of(fun, lambda b: fun.carriers[b].payload.n)
    names = tuple(f"{bnames[b]}.{fun.carriers[b].payload.elements[x]}" for b, x in pts)

    def rel(p, q):
        b, x = pts[p]
        b2, y = pts[q]
        if not base.leq[b][b2]:
            return False
        if b == b2:
            return fun.carriers[b].payload.leq[x][y]
        return fun.vertical(b, b2).payload.rel[x][y]

    leq = tuple(tuple(rel(p, q) for q in range(len(pts))) for p in range(len(pts)))
    total = make_obj(Tag.POS, oi.FinPoset(names, leq))
    injections = []
    for b in range(len(fun.carriers)):
        mapping = tuple(pts.index((b, x)) for x in range(fun.carriers[b].payload.n))
        injections.append(make_hmor(fun.carriers[b], total,
                                    oi.MonotoneMap(fun.carriers[b].payload,
                                                   total.payload, mapping)))
    cells = _injection_cells(fun, total, injections)
    return Collage(fun, total, tuple(injections), cells, points=pts)


def _collage_top(fun: LaxFunctor) -> Collage:
    pts, bnames = _points_of(fun, lambda b: fun.carriers[b].payload.n)
    names = tuple(f"{bnames[b]}.{fun.carriers[b].payload.points[x]}" for b, x in pts)
    spaces = [c.payload for c in fun.carriers]
    keys = fun.strict_pairs()
    if len(pts) > 16:
        raise SizeBoundExceeded(len(pts))
    opens = []
    for bits in itertools.product((False, True), repeat=len(pts)):
        u = frozenset(i for i in range(len(pts)) if bits[i])
        traces = []
        for b in range(len(spaces)):
            traces.append(frozenset(x for i in u for (bb, x) in [pts[i]] if bb == b))
        if any(not spaces[b].is_open(traces[b]) for b in range(len(spaces))):
            continue
        ok = True
        for (i, j) in keys:
            m = fun.vertical(i, j).payload
            img = m.mapping[spaces[i].open_index(traces[i])]
            if not traces[j] <= spaces[j].opens[img]:
                ok = False
                break
        if ok:
            opens.append(u)
    total = make_obj(Tag.TOP, oi.FinSpace(names, oi._canon_opens(opens)))
    injections = []
    for b in range(len(spaces)):
        mapping = tuple(pts.index((b, x)) for x in range(spaces[b].n))
        injections.append(make_hmor(fun.carriers[b], total,
                                    oi.ContinuousMap(spaces[b], total.payload, mapping)))
    cells = _injection_cells(fun, total, injections)
    return Collage(fun, total, tuple(injections), cells, points=pts)


def _collage_loc(fun: LaxFunctor) -> Collage:
    frames = [c.payload for c in fun.carriers]
    keys = fun.strict_pairs()
    fams = []
    for fam in itertools.product(*(range(fr.n) for fr in frames)):
        ok = True
        for (i, j) in keys:
            m = fun.vertical(i, j).payload
            if not frames[j].leq[fam[j]][m.mapping[fam[i]]]:
                ok = False
                break
        if ok:
            fams.append(fam)
    fams = tuple(sorted(fams))
    names = tuple("(" + ",".join(frames[b].elements[v] for b, v in enumerate(fam)) + ")"
                  for fam in fams)
    leq = tuple(tuple(all(frames[b].leq[fa[b]][fb[b]] for b in range(len(frames)))
                      for fb in fams) for fa in fams)
    total = make_obj(Tag.LOC, oi.frame_validate(names, leq))
    injections = []
    for b in range(len(frames)):
        inv = tuple(fam[b] for fam in fams)    # projection is the inverse image
        injections.append(make_hmor(fun.carriers[b], total,
                                    oi.LocaleMap(frames[b], total.payload, inv)))
    cells = _injection_cells(fun, total, injections)
    return Collage(fun, total, tuple(injections), cells, families=fams)


def co_nucleus_fixed_points(fun: LaxFunctor):
    """Oracle for the frame collage: fixed points of the deflationary operator
    sending a family to the meets of its images under the connecting maps."""
    frames = [c.payload for c in fun.carriers]
    base = fun.base
    fixed = []
    for fam in itertools.product(*(range(fr.n) for fr in frames)):
        g = []
        for b2 in range(len(frames)):
            vals = [fam[b2]]
            for b in range(len(frames)):
                if b != b2 and base.leq[b][b2]:
                    vals.append(fun.vertical(b, b2).payload.mapping[fam[b]])
            g.append(frames[b2].meet_all(vals))
        if tuple(g) == fam:
            fixed.append(fam)
    return tuple(sorted(fixed))


def _collage_cat(fun: LaxFunctor) -> Collage:
    base = fun.base
    cats = [c.payload for c in fun.carriers]
    pts, bnames = _points_of(fun, lambda b: cats[b].n_obj)
    obj_names = tuple(f"{bnames[b]}.{cats[b].objects[x]}" for b, x in pts)
    if fun.base_is_poset:
        base_keys = [(i, i) for i in range(base.n)] + fun.strict_pairs()
        key_name = {k: (bnames[k[0]] if k[0] == k[1]
                        else f"{bnames[k[0]]}<{bnames[k[1]]}")
                    for k in base_keys}
        key_ends = {k: k for k in base_keys}
    else:
        base_keys = list(range(base.n_mor))
        key_name = {k: base.morphisms[k] for k in base_keys}
        key_ends = {k: (base.dom[k], base.cod[k]) for k in base_keys}

    mor_tags = []
    for key in base_keys:
        i, j = key_ends[key]
        v = _vert(fun, key)
        for e in range(v.payload.n_elems):
            mor_tags.append((key, e))
    mor_tags = tuple(mor_tags)
    midx = {t: k for k, t in enumerate(mor_tags)}

    def mor_ends(tag_):
        key, e = tag_
        i, j = key_ends[key]
        v = _vert(fun, key).payload
        x, y, _ = v.elems[e]
        return pts.index((i, x)), pts.index((j, y))

    names = []
    for key, e in mor_tags:
        v = _vert(fun, key).payload
        names.append(f"{key_name[key]}:{v.elems[e][2]}")
    doms = tuple(mor_ends(t)[0] for t in mor_tags)
    cods = tuple(mor_ends(t)[1] for t in mor_tags)
    identity = []
    for (b, x) in pts:
        key = (b, b) if fun.base_is_poset else base.identity[b]
        identity.append(midx[(key, cats[b].identity[x])])
    n_m = len(mor_tags)
    comp = [[-1] * n_m for _ in range(n_m)]
    for g in range(n_m):
        for f in range(n_m):
            if cods[f] != doms[g]:
                continue
            kf, ef = mor_tags[f]
            kg, eg = mor_tags[g]
            if fun.base_is_poset:
                kw = (kf[0], kg[1])
            else:
                kw = base.comp[kg][kf]
            comp[g][f] = midx[(kw, pairing_value(fun, kf, kg, ef, eg))]
    total = make_obj(Tag.CAT, ci.FinCat(obj_names, tuple(names), doms, cods,
                                        tuple(identity),
                                        tuple(tuple(r) for r in comp)))
    injections = []
    for b in range(len(cats)):
        omap = tuple(pts.index((b, x)) for x in range(cats[b].n_obj))
        key = (b, b) if fun.base_is_poset else base.identity[b]
        mmap = tuple(midx[(key, m)] for m in range(cats[b].n_mor))
        injections.append(make_hmor(fun.carriers[b], total,
                                    ci.Functor(cats[b], total.payload, omap, mmap)))
    cells = _injection_cells(fun, total, injections, midx=midx)
    return Collage(fun, total, tuple(injections), cells,
                   points=pts, mor_tags=mor_tags)


def _injection_cells(fun, total, injections, midx=None):
    cells = []
    for key, v in fun.verticals:
        i, j = _key_ends(fun, key)
        w = None
        if fun.tag == Tag.CAT:
            w = tuple(midx[(key, e)] for e in range(v.payload.n_elems))
        cells.append((key, make_cell(injections[i], v, identity_v(total),
                                     injections[j], w)))
    return tuple(cells)


# ---------------------------------------------------------------------------
# the universal property


def _mediator_search_size(tag, total, apex):
    if tag in (Tag.POS, Tag.TOP):
        return max(apex.n, 1) ** total.n
    if tag == Tag.LOC:
        return max(apex.n, 1) ** max(len(total.join_irreducibles()), 1)
    nonid = total.n_mor - total.n_obj
    return max(apex.n_obj, 1) ** total.n_obj * max(apex.n_mor, 1) ** nonid


def mediate(c: Collage, k: Cocone, unique_bound=20000) -> HMor:
    """The unique morphism out of the collage restricting to the cocone legs.

    Existence and the restriction equations are verified exactly; uniqueness
    is re-verified by exhaustive search when the search space is small, and
    trusted (with a log notice) above the bound."""
    fun = c.functor
    if k.functor != fun:
        raise LawViolation("mediate: cocone is for a different diagram", ())
    tag = fun.tag
    if tag in (Tag.POS, Tag.TOP):
        mapping = tuple(k.legs[b].payload.mapping[x] for (b, x) in c.points)
        cls = oi.MonotoneMap if tag == Tag.POS else oi.ContinuousMap
        try:
            payload = cls(c.total.payload, k.apex.payload, mapping)
        except LawViolation as exc:
            raise NoMediator(exc) from exc
    elif tag == Tag.LOC:
        inv = []
        for y in range(k.apex.payload.n):
            fam = tuple(k.legs[b].payload.inverse_image[y]
                        for b in range(len(fun.carriers)))
            if fam not in c.families:
                raise NoMediator(("legs do not assemble to a descending family", y))
            inv.append(c.families.index(fam))
        payload = oi.LocaleMap(c.total.payload, k.apex.payload, tuple(inv))
    else:
        omap = tuple(k.legs[b].payload.omap[x] for (b, x) in c.points)
        mmap = []
        for key, e in c.mor_tags:
            i, j = _key_ends(fun, key)
            if (fun.base_is_poset and key[0] == key[1]) or \
                    (not fun.base_is_poset and key in fun.base.identity):
                mmap.append(k.legs[i].payload.mmap[e])
            else:
                fam = k.witness(key)
                if fam is None:
                    raise NoMediator(("cocone lacks a witness for", key))
                hom_apex = ci.hom_profunctor(k.apex.payload)
                mmap.append(k.apex.payload.morphisms.index(
                    hom_apex.elems[fam[e]][2]))
        try:
            payload = ci.Functor(c.total.payload, k.apex.payload, omap, tuple(mmap))
        except LawViolation as exc:
            raise NoMediator(exc) from exc
    med = make_hmor(c.total, k.apex, payload)
    inst = instance(tag)
    for b in range(len(fun.carriers)):
        if inst.h_compose(c.injections[b].payload, payload) != k.legs[b].payload:
            raise NoMediator(("restriction along an injection differs", b))
    if _mediator_search_size(tag, c.total.payload, k.apex.payload) <= unique_bound:
        count = 0
        for cand in inst.enumerate_hmors(c.total.payload, k.apex.payload):
            if all(inst.h_compose(c.injections[b].payload, cand) == k.legs[b].payload
                   for b in range(len(fun.carriers))) and _cells_factor(c, k, cand):
                count += 1
        if count == 0:
            raise NoMediator("exhaustive search found no mediator")
        if count > 1:
            raise NonUnique(count)
    else:
        _log.info("mediate: uniqueness trusted above search bound (size %d)",
                  _mediator_search_size(tag, c.total.payload, k.apex.payload))
    return med


def _cells_factor(c, k, cand):
    """Does `cand` carry every injection cell onto the cocone cell?"""
    fun = c.functor
    if fun.tag != Tag.CAT:
        return True      # propositional cells: restriction equality suffices
    hom_apex = ci.hom_profunctor(k.apex.payload)
    for key, cell in c.cells:
        fam = k.witness(key)
        for e, tagm in enumerate(cell.witness):
            g = cand.mmap[tagm]
            target = hom_apex.find(k.apex.payload.dom[g], k.apex.payload.cod[g],
                                   k.apex.payload.morphisms[g])
            if fam is not None and fam[e] != target:
                return False
    return True


def mediate_modification(c: Collage, f: HMor, g: HMor, components) -> Cell:
    """The unique special cell f -> g restricting to the given family of
    special cells along the injections."""
    fun = c.functor
    if fun.tag != Tag.CAT:
        for b, comp_cell in enumerate(components):
            if comp_cell.top != compose_horizontal(c.injections[b], f) or \
                    comp_cell.bottom != compose_horizontal(c.injections[b], g):
                raise LawViolation("modification components do not match", b)
        return make_cell(f, identity_v(c.total), identity_v(f.tgt), g, None)
    apex = f.tgt.payload
    hom_apex = ci.hom_profunctor(apex)
    fam = []
    gp = g.payload
    for mtot in range(c.total.payload.n_mor):
        src_obj = c.total.payload.dom[mtot]
        b, x = c.points[src_obj]
        cx = fun.carriers[b].payload
        e_id = ci.hom_profunctor(cx).find(x, x, cx.morphisms[cx.identity[x]])
        t_comp = components[b].witness[e_id]
        t_mor = apex.morphisms.index(hom_apex.elems[t_comp][2])
        val = apex.comp[gp.mmap[mtot]][t_mor]
        fam.append(hom_apex.find(apex.dom[val], apex.cod[val], apex.morphisms[val]))
    return make_cell(f, identity_v(c.total), identity_v(f.tgt), g, tuple(fam))


# ---------------------------------------------------------------------------
# fibers (pullbacks along the injections)


@dataclass(frozen=True)
class Fiber:
    slice: SliceObject       # the fiber over the carrier at b
    inclusion: HMor          # fiber total -> ambient total
    member_indices: tuple    # indices of the ambient elements in the fiber


def fiber(c: Collage, p: SliceObject, b: int) -> Fiber:
    """Pullback of p along the injection at b."""
    if p.base != c.total:
        raise LawViolation("fiber: slice is not over this collage", ())
    tag = c.total.tag
    fun = c.functor
    if tag == Tag.POS:
        part = [i for i in range(p.total.payload.n)
                if c.points[p.map.payload.mapping[i]][0] == b]
        sub, idxs = oi.induced_subposet(p.total.payload, part)
        proj = tuple(c.points[p.map.payload.mapping[i]][1] for i in idxs)
        fib = make_obj(tag, sub)
        sl = SliceObject(fib, fun.carriers[b],
                         make_hmor(fib, fun.carriers[b],
                                   oi.MonotoneMap(sub, fun.carriers[b].payload, proj)))
        incl = make_hmor(fib, p.total, oi.MonotoneMap(sub, p.total.payload, tuple(idxs)))
        return Fiber(sl, incl, tuple(idxs))
    if tag == Tag.TOP:
        part = [i for i in range(p.total.payload.n)
                if c.points[p.map.payload.mapping[i]][0] == b]
        sub, idxs = oi.subspace(p.total.payload, part)
        proj = tuple(c.points[p.map.payload.mapping[i]][1] for i in idxs)
        fib = make_obj(tag, sub)
        sl = SliceObject(fib, fun.carriers[b],
                         make_hmor(fib, fun.carriers[b],
                                   oi.ContinuousMap(sub, fun.carriers[b].payload, proj)))
        incl = make_hmor(fib, p.total, oi.ContinuousMap(sub, p.total.payload, tuple(idxs)))
        return Fiber(sl, incl, tuple(idxs))
    if tag == Tag.CAT:
        part = [i for i in range(p.total.payload.n_obj)
                if c.points[p.map.payload.omap[i]][0] == b]
        sub, objs, mors = ci.induced_subcategory(p.total.payload, part)
        omap = tuple(c.points[p.map.payload.omap[o]][1] for o in objs)
        mmap = tuple(c.mor_tags[p.map.payload.mmap[m]][1] for m in mors)
        fib = make_obj(tag, sub)
        sl = SliceObject(fib, fun.carriers[b],
                         make_hmor(fib, fun.carriers[b],
                                   ci.Functor(sub, fun.carriers[b].payload, omap, mmap)))
        o_in = tuple(objs)
        m_in = tuple(mors)
        incl = make_hmor(fib, p.total, ci.Functor(sub, p.total.payload, o_in, m_in))
        return Fiber(sl, incl, (o_in, m_in))
    return _fiber_loc(c, p, b)


def _fiber_loc(c: Collage, p: SliceObject, b: int) -> Fiber:
    """The fiber in the frame instance: the interval sublocale between the
    preimages of the down-set opens at b and strictly below b."""
    fun = c.functor
    base = fun.base
    x_frame = p.total.payload
    inv = p.map.payload.inverse_image

    def downset_open(pred):
        fam = tuple(fun.carriers[bb].payload.top if pred(bb)
                    else fun.carriers[bb].payload.bottom
                    for bb in range(len(fun.carriers)))
        return c.families.index(fam)

    u = inv[downset_open(lambda bb: base.leq[bb][b])]
    s = inv[downset_open(lambda bb: base.leq[bb][b] and bb != b)]
    lo = x_frame.meet[s][u]
    members = tuple(x for x in range(x_frame.n)
                    if x_frame.leq[lo][x] and x_frame.leq[x][u])
    names = tuple(x_frame.elements[x] for x in members)
    leq = tuple(tuple(x_frame.leq[a][bb] for bb in members) for a in members)
    sub = oi.frame_validate(names, leq)
    fib = make_obj(Tag.LOC, sub)
    # inclusion of the sublocale: inverse image is the quotient x |-> (x∧u)∨lo
    quot = tuple(members.index(x_frame.join[x_frame.meet[x][u]][lo])
                 for x in range(x_frame.n))
    incl = make_hmor(fib, p.total, oi.LocaleMap(sub, x_frame, quot))
    # structure map to the carrier: v |-> quotient of p^*(tau_b(v))
    carrier = fun.carriers[b].payload
    proj_inv = []
    for v in range(carrier.n):
        fam = tuple(
            fun.carriers[bb].payload.top if (base.leq[bb][b] and bb != b)
            else (v if bb == b else fun.carriers[bb].payload.bottom)
            for bb in range(len(fun.carriers)))
        w = inv[c.families.index(fam)]
        proj_inv.append(members.index(x_frame.join[x_frame.meet[w][u]][lo]))
    sl = SliceObject(fib, fun.carriers[b],
                     make_hmor(fib, fun.carriers[b],
                               oi.LocaleMap(sub, carrier, tuple(proj_inv))))
    return Fiber(sl, incl, members)


# ---------------------------------------------------------------------------
# the two adjoint transports into the lax slice


def pad_left(fun: LaxFunctor, b: int, x_slice: SliceObject) -> LaxSliceObject:
    """Left adjoint to evaluation at b: the carrier sits at b, the zero
    object everywhere else, with the unique verticals in between."""
    if x_slice.base != fun.carriers[b]:
        raise LawViolation("pad_left: slice is not over the carrier at b", ())
    tag = fun.tag
    inst = instance(tag)
    zero = make_obj(tag, inst.zero_obj())
    carriers = [x_slice.total if idx == b else zero
                for idx in range(len(fun.carriers))]
    verticals = {}
    for key, _ in fun.verticals:
        i, j = _key_ends(fun, key)
        if i == b:
            verticals[key] = make_vmor(carriers[i], carriers[j],
                                       inst.v_to_zero(x_slice.total.payload))
        elif j == b:
            verticals[key] = make_vmor(carriers[i], carriers[j],
                                       inst.v_from_zero(x_slice.total.payload))
        else:
            verticals[key] = identity_v(zero)
    comparisons = {}
    if tag == Tag.CAT:
        # every padded vertical has the empty category on one side, so every
        # composite is empty and every pairing is the empty tuple
        from .lax import _composable_comparison_keys
        comparisons = {ckey: () for _, _, _, ckey in _composable_comparison_keys(fun)}
    padded = LaxFunctor(Tag(tag), fun.base, tuple(carriers),
                        tuple(sorted(verticals.items())),
                        tuple(sorted(comparisons.items())))
    comps = []
    for idx in range(len(fun.carriers)):
        if idx == b:
            comps.append(x_slice.map)
        else:
            comps.append(HMor(zero, fun.carriers[idx],
                              inst.h_from_zero(fun.carriers[idx].payload)))
    witnesses = {key: () for key, _ in padded.verticals} if tag == Tag.CAT else None
    structure = transformation(padded, fun, comps, witnesses)
    return LaxSliceObject(padded, structure)


def right_transport(k: int, l: VMor, q: SliceObject) -> LaxSliceObject:
    """Right adjoint to evaluation at an end of a two-stage diagram.

    For k = 0 the new vertical is the composite of the companion of the
    structure map with l; for k = 1 it is l followed by the conjoint."""
    base_fun = two_stage(l)
    if k == 0:
        if q.base != base_fun.carriers[0]:
            raise LawViolation("right_transport: slice not over the 0 end", ())
        qstar = core.companion(q.map).fstar
        vert = compose_vertical(qstar, l)
        carriers = [q.total, base_fun.carriers[1]]
        comps = [q.map, identity_h(base_fun.carriers[1])]
        witness = None
        if l.tag == Tag.CAT:
            fam = []
            _, table = ci.prof_compose(qstar.payload, l.payload)
            for r in table.reps:
                e_g, e_l = table.pairs[r]
                g = l.src.payload.morphisms.index(qstar.payload.elems[e_g][2])
                fam.append(l.payload.lact[g][e_l])
            witness = tuple(fam)
    else:
        if q.base != base_fun.carriers[1]:
            raise LawViolation("right_transport: slice not over the 1 end", ())
        qup = core.conjoint(q.map).fupperstar
        vert = compose_vertical(l, qup)
        carriers = [base_fun.carriers[0], q.total]
        comps = [identity_h(base_fun.carriers[0]), q.map]
        witness = None
        if l.tag == Tag.CAT:
            fam = []
            _, table = ci.prof_compose(l.payload, qup.payload)
            for r in table.reps:
                e_l, e_g = table.pairs[r]
                g = l.tgt.payload.morphisms.index(qup.payload.elems[e_g][2])
                fam.append(l.payload.ract[g][e_l])
            witness = tuple(fam)
    fun = lax_functor(l.tag, base_fun.base, carriers, {(0, 1): vert})
    structure = transformation(fun, base_fun, comps,
                               None if witness is None else {(0, 1): witness})
    return LaxSliceObject(fun, structure)
