"""Glueing: slices over a collage against lax diagrams over its shape.

glue2/unglue2 realize the equivalence for two-stage diagrams: gluing takes
the collage with its mediated structure map; ungluing takes fibers along the
two injections and connects them by the composite of a companion and a
conjoint, computed concretely per instance (interior formula for spaces,
Heyting implication for frames, cross hom-sets for categories).

For a finite poset index the equivalence is produced inductively: peel a
maximal element, factor the collage into an open and a closed inclusion, and
apply the two-stage case to the connecting vertical.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import cat_instance as ci
from . import core
from . import order_instances as oi
from .colimits import Collage, Fiber, cocone, collage, fiber, mediate
from .core import (Cell, HMor, LawReport, LawViolation, Obj, Tag, VMor,
                   companion, compose_horizontal, compose_vertical, conjoint,
                   identity_h, identity_v, instance, make_cell, make_hmor,
                   make_obj, make_vmor)
from .lax import (LaxFunctor, LaxSliceObject, LaxTransformation, SliceObject,
                  SliceMorphism, enumerate_lax_slice_morphisms,
                  enumerate_slice_morphisms, lax_functor, transformation,
                  two_stage, _vert)
from .order_instances import chain, induced_subposet


def hmor_inverse(f: HMor) -> HMor:
    invp = instance(f.tag).hmor_invertible(f.payload)
    if invp is None:
        raise LawViolation("morphism is not invertible", f)
    return HMor(f.tgt, f.src, invp)


# ---------------------------------------------------------------------------
# gluing (any poset base): collage with the mediated structure map


def glue(c_base: Collage, obj: LaxSliceObject):
    """The collage of the diagram with its mediated map to the base collage."""
    fun, t = obj.functor, obj.structure
    if t.tgt != c_base.functor:
        raise LawViolation("glue: structure is not over the base diagram", ())
    c = collage(fun)
    legs = tuple(compose_horizontal(t.components[b], c_base.injections[b])
                 for b in range(len(fun.carriers)))
    witnesses = None
    if fun.tag == Tag.CAT:
        witnesses = {}
        for key, v in fun.verticals:
            sq = t.square(key).witness
            fam = []
            for e in range(v.payload.n_elems):
                fam.append(c_base.mor_tags.index((key, sq[e])))
            witnesses[key] = tuple(fam)
    k = cocone(fun, c_base.total, legs, witnesses)
    structure = mediate(c, k)
    return SliceObject(c.total, c_base.total, structure), c


def glue2(obj: LaxSliceObject, c_base: Collage = None):
    """Two-stage special case of glue (the base collage defaults to the one
    computed from the structure's target)."""
    if c_base is None:
        c_base = collage(obj.structure.tgt)
    sl, _ = glue(c_base, obj)
    return sl


def glue_morphism(c_base: Collage, a: LaxSliceObject, b: LaxSliceObject,
                  ca: Collage, cb: Collage, t: LaxTransformation) -> HMor:
    """Image of a transformation under gluing: the mediated comparison of
    collages (computed pointwise on the canonical points)."""
    tag = a.functor.tag
    if tag in (Tag.POS, Tag.TOP):
        mapping = tuple(cb.point_index(bb, t.components[bb].payload.mapping[x])
                        for (bb, x) in ca.points)
        cls = oi.MonotoneMap if tag == Tag.POS else oi.ContinuousMap
        return HMor(ca.total, cb.total,
                    cls(ca.total.payload, cb.total.payload, mapping))
    if tag == Tag.LOC:
        inv = []
        for fam in ca.families:
            img = tuple(t.components[bb].payload.inverse_image[fam[bb]]
                        for bb in range(len(fam)))
            inv.append(cb.families.index(img))
        return HMor(ca.total, cb.total,
                    oi.LocaleMap(ca.total.payload, cb.total.payload, tuple(inv)))
    omap = tuple(cb.point_index(bb, t.components[bb].payload.omap[x])
                 for (bb, x) in ca.points)
    mmap = []
    for key, e in ca.mor_tags:
        if (a.functor.base_is_poset and key[0] == key[1]):
            bb = key[0]
            mmap.append(cb.mor_tags.index((key, t.components[bb].payload.mmap[e])))
        elif not a.functor.base_is_poset and key in a.functor.base.identity:
            bb = a.functor.base.dom[key]
            mmap.append(cb.mor_tags.index((key, t.components[bb].payload.mmap[e])))
        else:
            mmap.append(cb.mor_tags.index((key, t.square(key).witness[e])))
    return HMor(ca.total, cb.total,
                ci.Functor(ca.total.payload, cb.total.payload, omap, tuple(mmap)))


# ---------------------------------------------------------------------------
# ungluing for two-stage diagrams


def unglue2(p: SliceObject, c_base: Collage) -> LaxSliceObject:
    """Fibers along the two injections, connected by the composite of the
    open part's companion with the closed part's conjoint."""
    fun = c_base.functor
    if len(fun.carriers) != 2 or not fun.base_is_poset or fun.base != chain(2):
        raise LawViolation("unglue2: base collage is not two-stage", fun.base)
    if p.base != c_base.total:
        raise LawViolation("unglue2: slice is not over the collage", ())
    l = fun.vertical(0, 1)
    f0 = fiber(c_base, p, 0)
    f1 = fiber(c_base, p, 1)
    tag = p.total.tag
    if tag == Tag.POS:
        m = _cross_ideal(p.total.payload, f0, f1)
    elif tag == Tag.TOP:
        m = _cross_interior(p.total.payload, f0, f1)
    elif tag == Tag.LOC:
        m = _cross_heyting(p.total.payload, f0, f1)
    else:
        m = _cross_homs(p.total.payload, f0, f1)
    vert = make_vmor(f0.slice.total, f1.slice.total, m)
    g = lax_functor(tag, chain(2), [f0.slice.total, f1.slice.total], {(0, 1): vert})
    witnesses = None
    if tag == Tag.CAT:
        fam = []
        for (x0, x1, name) in m.elems:
            amb = p.total.payload.morphisms.index(name)
            key, e = c_base.mor_tags[p.map.payload.mmap[amb]]
            fam.append(e)
        witnesses = {(0, 1): tuple(fam)}
    structure = transformation(g, fun, [f0.slice.map, f1.slice.map], witnesses)
    return LaxSliceObject(g, structure)


def _cross_ideal(x, f0: Fiber, f1: Fiber):
    rel = tuple(tuple(x.leq[a][b] for b in f1.member_indices)
                for a in f0.member_indices)
    return oi.OrderIdeal(f0.slice.total.payload, f1.slice.total.payload, rel)


def _cross_interior(x, f0: Fiber, f1: Fiber):
    """m(U0) = interior(U0 ∪ X1) ∩ X1, indexed through the fiber lattices."""
    s0, s1 = f0.slice.total.payload, f1.slice.total.payload
    part1 = frozenset(f1.member_indices)
    mapping = []
    for u0 in s0.opens:
        amb = frozenset(f0.member_indices[i] for i in u0)
        val = x.interior(amb | part1) & part1
        back = frozenset(f1.member_indices.index(i) for i in val)
        mapping.append(s1.open_index(back))
    return oi.MeetMap(oi.open_lattice(s0), oi.open_lattice(s1), tuple(mapping))


def _cross_heyting(x, f0: Fiber, f1: Fiber):
    """m(w) = (u ⇒ w) ∨ u on the interval representations of the fibers."""
    s0, s1 = f0.slice.total.payload, f1.slice.total.payload
    u = f0.member_indices[s0.top]
    mapping = []
    for k in range(s0.n):
        w = f0.member_indices[k]
        val = x.join[x.imp(u, w)][u]
        mapping.append(f1.member_indices.index(val))
    return oi.MeetMap(s0, s1, tuple(mapping))


def _cross_homs(x, f0: Fiber, f1: Fiber):
    objs0, mors0 = f0.member_indices
    objs1, mors1 = f1.member_indices
    c0, c1 = f0.slice.total.payload, f1.slice.total.payload
    elems = []
    for i0, a0 in enumerate(objs0):
        for i1, a1 in enumerate(objs1):
            for mor in x.hom(a0, a1):
                elems.append((i0, i1, x.morphisms[mor]))
    elems = tuple(elems)
    eidx = {t: k for k, t in enumerate(elems)}
    lact = [[-1] * len(elems) for _ in range(c0.n_mor)]
    ract = [[-1] * len(elems) for _ in range(c1.n_mor)]
    for k, (i0, i1, name) in enumerate(elems):
        mor = x.morphisms.index(name)
        for a in range(c0.n_mor):
            if c0.cod[a] == i0:
                amb_a = mors0[a]
                val = x.comp[mor][amb_a]
                lact[a][k] = eidx[(c0.dom[a], i1, x.morphisms[val])]
        for g in range(c1.n_mor):
            if c1.dom[g] == i1:
                amb_g = mors1[g]
                val = x.comp[amb_g][mor]
                ract[g][k] = eidx[(i0, c1.cod[g], x.morphisms[val])]
    return ci.Profunctor(c0, c1, elems,
                         tuple(tuple(r) for r in lact),
                         tuple(tuple(r) for r in ract))


def glue_unglue_comparison(p: SliceObject, c_base: Collage,
                           unglued: LaxSliceObject, reglued: SliceObject,
                           cg: Collage) -> HMor:
    """The canonical comparison from the reglued total back to the original,
    sending a collage point to the ambient element it came from."""
    tag = p.total.tag
    f_parts = [fiber(c_base, p, b) for b in range(len(c_base.functor.carriers))]
    if tag in (Tag.POS, Tag.TOP):
        mapping = tuple(f_parts[b].member_indices[x] for (b, x) in cg.points)
        cls = oi.MonotoneMap if tag == Tag.POS else oi.ContinuousMap
        return HMor(reglued.total, p.total,
                    cls(reglued.total.payload, p.total.payload, mapping))
    if tag == Tag.LOC:
        u = p.map.payload.inverse_image[_part_open_index(c_base, 0)]
        x = p.total.payload
        inv = []
        for w in range(x.n):
            w0 = f_parts[0].member_indices.index(x.meet[w][u])
            w1 = f_parts[1].member_indices.index(x.join[w][u])
            inv.append(cg.families.index((w0, w1)))
        return HMor(reglued.total, p.total,
                    oi.LocaleMap(reglued.total.payload, x, tuple(inv)))
    omap = tuple(f_parts[b].member_indices[0][x] for (b, x) in cg.points)
    mmap = []
    for key, e in cg.mor_tags:
        if key[0] == key[1]:
            b = key[0]
            mmap.append(f_parts[b].member_indices[1][e])
        else:
            name = unglued.functor.vertical(0, 1).payload.elems[e][2]
            mmap.append(p.total.payload.morphisms.index(name))
    return HMor(reglued.total, p.total,
                ci.Functor(reglued.total.payload, p.total.payload, omap, tuple(mmap)))


def _part_open_index(c_base: Collage, b):
    """Index in the collage frame of the open carried by the down-set at b."""
    fun = c_base.functor
    fam = tuple(fun.carriers[bb].payload.top if fun.base.leq[bb][b]
                else fun.carriers[bb].payload.bottom
                for bb in range(len(fun.carriers)))
    return c_base.families.index(fam)


# ---------------------------------------------------------------------------
# equivalence verification at desk scale


@dataclass
class GlueEquivalence:
    base: object
    report: LawReport = field(default_factory=LawReport)
    slice_objects: int = 0
    lax_objects: int = 0
    hom_pairs: int = 0


def enumerate_slice_objects(base: Obj, size_bound):
    inst = instance(base.tag)
    out = []
    for payload in inst.enumerate_objects(size_bound):
        total = Obj(base.tag, payload)
        for h in inst.enumerate_hmors(payload, base.payload):
            out.append(SliceObject(total, base, HMor(total, base, h)))
    return out


def enumerate_lax2_objects(l: VMor, size_bound, slot_bound=1):
    """All two-stage diagrams over l with carrier sizes within the bound."""
    inst = instance(l.tag)
    fun_l = two_stage(l)
    out = []
    for x0 in inst.enumerate_objects(size_bound):
        o0 = Obj(l.tag, x0)
        h0s = inst.enumerate_hmors(x0, l.src.payload)
        if not h0s:
            continue
        for x1 in inst.enumerate_objects(size_bound):
            if inst.obj_size(x0) + inst.obj_size(x1) > size_bound:
                continue
            o1 = Obj(l.tag, x1)
            h1s = inst.enumerate_hmors(x1, l.tgt.payload)
            if not h1s:
                continue
            if l.tag == Tag.CAT:
                verts = inst.enumerate_vmors(x0, x1, slot_bound)
            else:
                verts = inst.enumerate_vmors(x0, x1)
            for vp in verts:
                vert = VMor(o0, o1, vp)
                g = lax_functor(l.tag, chain(2), [o0, o1], {(0, 1): vert})
                for h0 in h0s:
                    c0 = HMor(o0, l.src, h0)
                    for h1 in h1s:
                        c1 = HMor(o1, l.tgt, h1)
                        if l.tag != Tag.CAT:
                            try:
                                t = transformation(g, fun_l, [c0, c1])
                            except core.ConditionFails:
                                continue
                            out.append(LaxSliceObject(g, t))
                            continue
                        fams = ci.enumerate_cell_families(
                            h0, vp, l.payload, h1)
                        for fam in fams:
                            t = transformation(g, fun_l, [c0, c1],
                                               {(0, 1): fam})
                            out.append(LaxSliceObject(g, t))
    return out


def _unglued_matches_exactly(m_obj: LaxSliceObject, back: LaxSliceObject):
    """Positional equality of carriers, verticals and structure components."""
    tag = m_obj.functor.tag
    va = m_obj.functor.vertical(0, 1).payload
    vb = back.functor.vertical(0, 1).payload
    for b in range(2):
        if m_obj.functor.carriers[b].size() != back.functor.carriers[b].size():
            return False
    if tag == Tag.POS:
        return va.rel == vb.rel and \
            tuple(c.payload.mapping for c in m_obj.structure.components) == \
            tuple(c.payload.mapping for c in back.structure.components)
    if tag == Tag.TOP:
        return va.mapping == vb.mapping and \
            tuple(c.payload.mapping for c in m_obj.structure.components) == \
            tuple(c.payload.mapping for c in back.structure.components)
    if tag == Tag.LOC:
        return va.mapping == vb.mapping and \
            tuple(c.payload.inverse_image for c in m_obj.structure.components) == \
            tuple(c.payload.inverse_image for c in back.structure.components)
    return True  # Cat is compared in the pseudo sense by _cat_unglue_iso


def verify_equivalence2(tag, l: VMor, size_bound=3, hom_bound=2) -> GlueEquivalence:
    """Round trips in both directions plus hom-set comparison on small pairs."""
    result = GlueEquivalence(base=l)
    rep = result.report
    c_base = collage(two_stage(l))
    # slice -> lax -> slice: canonical comparison must be an iso over the base
    for p in enumerate_slice_objects(c_base.total, size_bound):
        result.slice_objects += 1
        unglued = unglue2(p, c_base)
        reglued, cg = glue(c_base, unglued)
        comp = glue_unglue_comparison(p, c_base, unglued, reglued, cg)
        inst = instance(Tag(tag))
        if inst.hmor_invertible(comp.payload) is None:
            rep.fail("glue∘unglue comparison not invertible", p)
            continue
        if compose_horizontal(comp, p.map) != reglued.map:
            rep.fail("glue∘unglue comparison not over the base", p)
        rep.tick()
    # lax -> slice -> lax: fibers and verticals recovered on the nose
    lax_objs = enumerate_lax2_objects(l, size_bound)
    for m_obj in lax_objs:
        result.lax_objects += 1
        sl, _ = glue(c_base, m_obj)
        back = unglue2(sl, c_base)
        if tag == Tag.CAT:
            ok = _unglued_matches_exactly(m_obj, back) and \
                _cat_unglue_iso(m_obj, back)
        else:
            ok = _unglued_matches_exactly(m_obj, back)
        if not ok:
            rep.fail("unglue∘glue did not recover the diagram", m_obj)
        rep.tick()
    # full and faithful on small pairs
    small = [m for m in lax_objs
             if sum(c.size() for c in m.functor.carriers) <= hom_bound]
    for ma in small:
        sa, ca_ = glue(c_base, ma)
        for mb in small:
            sb, cb_ = glue(c_base, mb)
            lax_homs = enumerate_lax_slice_morphisms(ma, mb)
            glued = [glue_morphism(c_base, ma, mb, ca_, cb_, t) for t in lax_homs]
            payloads = {repr(gm.payload) for gm in glued}
            slice_homs = enumerate_slice_morphisms(sa, sb)
            result.hom_pairs += 1
            if len(payloads) != len(lax_homs):
                rep.fail("gluing not faithful", (ma, mb))
            if len(slice_homs) != len(lax_homs):
                rep.fail("gluing not full", (ma, mb, len(slice_homs), len(lax_homs)))
            else:
                slice_payloads = {repr(sm.arrow.payload) for sm in slice_homs}
                if slice_payloads != payloads:
                    rep.fail("glued morphisms do not match the slice homs", (ma, mb))
            rep.tick()
    return result


def _cat_unglue_iso(m_obj, back):
    """The recovered fibers agree with the carriers up to renaming (their
    tables are positionally equal), and the recovered vertical is naturally
    isomorphic to the original after that relabeling (pseudo sense)."""
    for b in range(2):
        ca = m_obj.functor.carriers[b].payload
        cb = back.functor.carriers[b].payload
        if (ca.dom, ca.cod, ca.identity, ca.comp) != \
                (cb.dom, cb.cod, cb.identity, cb.comp):
            return False
        pa = m_obj.structure.components[b].payload
        pb = back.structure.components[b].payload
        if pa.omap != pb.omap or pa.mmap != pb.mmap:
            return False
    va = m_obj.functor.vertical(0, 1).payload
    vb = back.functor.vertical(0, 1).payload
    relabeled = ci.Profunctor(va.src, va.tgt, vb.elems, vb.lact, vb.ract)
    return ci.find_canonical_prof_iso(va, relabeled) is not None


# ---------------------------------------------------------------------------
# open/closed factorization of a collage at a maximal element


@dataclass(frozen=True)
class CollageFactorization:
    functor: LaxFunctor          # the diagram being factored
    b1: int
    restricted: LaxFunctor       # over the base minus b1
    sub_collage: Collage         # collage of the restriction
    ambient: Collage             # collage of the whole diagram
    open_part: HMor              # sub collage total -> ambient total
    closed_part: HMor            # carrier at b1   -> ambient total
    connecting: VMor             # sub collage total -|-> carrier at b1
    two_collage: Collage         # collage of the connecting vertical
    identification: HMor         # two-stage collage total -> ambient total


def factor_collage(fun: LaxFunctor, b1: int) -> CollageFactorization:
    """Peel a maximal base element: the rest of the collage includes openly,
    the fiber at b1 includes closedly, and the connecting vertical is the
    conjoint of the closed part composed after the companion of the open one."""
    base = fun.base
    if not fun.base_is_poset:
        raise LawViolation("factor_collage: poset base required", base)
    if b1 not in base.maximal():
        raise LawViolation("factor_collage: element is not maximal", b1)
    keep = [b for b in range(base.n) if b != b1]
    sub_base, _ = induced_subposet(base, keep)
    sub_verts = {}
    sub_comps = {}
    for key, v in fun.verticals:
        i, j = key
        if i != b1 and j != b1:
            sub_verts[(keep.index(i), keep.index(j))] = v
    if fun.tag == Tag.CAT:
        for ckey, pairing in fun.comparisons:
            i, j, k = ckey
            if b1 not in (i, j, k):
                sub_comps[(keep.index(i), keep.index(j), keep.index(k))] = pairing
    restricted = lax_functor(fun.tag, sub_base,
                             [fun.carriers[b] for b in keep], sub_verts, sub_comps)
    sub_c = collage(restricted)
    amb = collage(fun)
    open_part = _collage_inclusion(restricted, sub_c, fun, amb, keep)
    closed_part = amb.injections[b1]
    lvert = compose_vertical(companion(open_part).fstar,
                             conjoint(closed_part).fupperstar)
    two_c = collage(two_stage(lvert))
    identification = _identify_two_stage(lvert, two_c, open_part, closed_part, amb)
    return CollageFactorization(fun, b1, restricted, sub_c, amb, open_part,
                                closed_part, lvert, two_c, identification)


def _collage_inclusion(sub_fun, sub_c, fun, amb, keep):
    tag = fun.tag
    if tag in (Tag.POS, Tag.TOP):
        mapping = tuple(amb.point_index(keep[b], x) for (b, x) in sub_c.points)
        cls = oi.MonotoneMap if tag == Tag.POS else oi.ContinuousMap
        return HMor(sub_c.total, amb.total,
                    cls(sub_c.total.payload, amb.total.payload, mapping))
    if tag == Tag.LOC:
        inv = []
        for fam in amb.families:
            restricted_fam = tuple(fam[keep[b]] for b in range(len(keep)))
            inv.append(sub_c.families.index(restricted_fam))
        return HMor(sub_c.total, amb.total,
                    oi.LocaleMap(sub_c.total.payload, amb.total.payload, tuple(inv)))
    omap = tuple(amb.point_index(keep[b], x) for (b, x) in sub_c.points)
    mmap = []
    for key, e in sub_c.mor_tags:
        amb_key = (keep[key[0]], keep[key[1]])
        mmap.append(amb.mor_tags.index((amb_key, e)))
    return HMor(sub_c.total, amb.total,
                ci.Functor(sub_c.total.payload, amb.total.payload, omap, tuple(mmap)))


def _identify_two_stage(lvert, two_c, open_part, closed_part, amb):
    """Mediated comparison from the two-stage collage onto the ambient one."""
    fun2 = two_c.functor
    witnesses = None
    if lvert.tag == Tag.CAT:
        fam = []
        comp = lvert.payload
        _, table = ci.prof_compose(companion(open_part).fstar.payload,
                                   conjoint(closed_part).fupperstar.payload)
        ambc = amb.total.payload
        for cidx in range(comp.n_elems):
            e_g, e_h = table.pairs[table.reps[cidx]]
            gname = companion(open_part).fstar.payload.elems[e_g][2]
            hname = conjoint(closed_part).fupperstar.payload.elems[e_h][2]
            g = ambc.morphisms.index(gname)
            h = ambc.morphisms.index(hname)
            val = ambc.comp[h][g]
            fam.append(val)
        witnesses = {(0, 1): tuple(fam)}
    k = cocone(fun2, amb.total, [open_part, closed_part], witnesses)
    med = mediate(two_c, k)
    if instance(lvert.tag).hmor_invertible(med.payload) is None:
        raise LawViolation("two-stage collage does not identify with the ambient",
                           lvert)
    return med


# ---------------------------------------------------------------------------
# inductive glueing over finite poset bases


def b_glue(c_base: Collage, obj: LaxSliceObject) -> SliceObject:
    """Forward direction over any finite poset base: glue directly."""
    sl, _ = glue(c_base, obj)
    return sl


def b_unglue(c_base: Collage, p: SliceObject, peel_order=None) -> LaxSliceObject:
    """Pseudo-inverse by induction: peel a maximal element, unglue the
    two-stage factorization, recurse on the rest."""
    obj, _, _ = _b_unglue_rec(c_base, p, list(peel_order) if peel_order else None)
    return obj


def _b_unglue_rec(c_base: Collage, p: SliceObject, peel_order):
    fun = c_base.functor
    base = fun.base
    tag = fun.tag
    inst = instance(tag)
    n = base.n
    if n == 0:
        raise LawViolation("b_unglue: empty base", base)
    if n == 1:
        inj_inv = hmor_inverse(c_base.injections[0])
        comp = compose_horizontal(p.map, inj_inv)
        g = lax_functor(tag, base, [p.total], {})
        t = transformation(g, fun, [comp], {} if tag == Tag.CAT else None)
        ambm = {} if tag == Tag.CAT else None
        return LaxSliceObject(g, t), [identity_h(p.total)], ambm
    if peel_order:
        b1 = peel_order[0]
        rest = list(peel_order[1:])
    else:
        b1 = base.maximal()[0]
        rest = None
    fc = factor_collage(fun, b1)
    ident_inv = hmor_inverse(fc.identification)
    p2 = SliceObject(p.total, fc.two_collage.total,
                     compose_horizontal(p.map, ident_inv))
    m2 = unglue2(p2, fc.two_collage)
    y0 = fiber(fc.two_collage, p2, 0)
    y1 = fiber(fc.two_collage, p2, 1)
    cross = m2.functor.vertical(0, 1)
    keep = [b for b in range(n) if b != b1]
    rec_order = [keep.index(b) for b in rest] if rest else None
    rec_p = SliceObject(y0.slice.total, fc.sub_collage.total, y0.slice.map)
    rec_obj, rec_incl, rec_amb = _b_unglue_rec(fc.sub_collage, rec_p, rec_order)
    carriers = [None] * n
    for sb in range(len(keep)):
        carriers[keep[sb]] = rec_obj.functor.carriers[sb]
    carriers[b1] = y1.slice.total
    inclusions = [None] * n
    for sb in range(len(keep)):
        inclusions[keep[sb]] = compose_horizontal(rec_incl[sb], y0.inclusion)
    inclusions[b1] = y1.inclusion
    verts = {}
    amb_maps = {} if tag == Tag.CAT else None
    for key, v in rec_obj.functor.verticals:
        i, j = keep[key[0]], keep[key[1]]
        verts[(i, j)] = v
        if tag == Tag.CAT:
            inner = rec_amb[key]
            verts_amb = tuple(y0.member_indices[1][a] for a in inner)
            amb_maps[(i, j)] = verts_amb
    for b in keep:
        if not base.leq[b][b1]:
            continue
        incl_b = rec_incl[keep.index(b)]
        comp_b = companion(incl_b).fstar
        vert = compose_vertical(comp_b, cross)
        verts[(b, b1)] = vert
        if tag == Tag.CAT:
            x_cat = p.total.payload
            y0incl = y0.member_indices[1]
            _, table = ci.prof_compose(comp_b.payload, cross.payload)
            fam = []
            for cidx in range(vert.payload.n_elems):
                e_g, e_mu = table.pairs[table.reps[cidx]]
                y0cat = y0.slice.total.payload
                g_y0 = y0cat.morphisms.index(comp_b.payload.elems[e_g][2])
                g_x = y0incl[g_y0]
                mu_x = x_cat.morphisms.index(cross.payload.elems[e_mu][2])
                fam.append(x_cat.comp[mu_x][g_x])
            amb_maps[(b, b1)] = tuple(fam)
    comparisons = {}
    if tag == Tag.CAT:
        comparisons = _assemble_comparisons(tag, base, carriers, verts, amb_maps,
                                            p.total.payload)
    g = lax_functor(tag, base, carriers, verts, comparisons)
    comps = [None] * n
    for sb in range(len(keep)):
        comps[keep[sb]] = rec_obj.structure.components[sb]
    comps[b1] = y1.slice.map
    witnesses = None
    if tag == Tag.CAT:
        witnesses = {}
        for key, _ in g.verticals:
            witnesses[key] = _structure_witness(c_base, p, key, amb_maps[key])
    structure = transformation(g, fun, comps, witnesses)
    return LaxSliceObject(g, structure), inclusions, amb_maps


def _structure_witness(c_base, p, key, amb_map):
    fam = []
    for amb_mor in amb_map:
        k2, e = c_base.mor_tags[p.map.payload.mmap[amb_mor]]
        fam.append(e)
    return tuple(fam)


def _assemble_comparisons(tag, base, carriers, verts, amb_maps, x_cat):
    comparisons = {}
    rev = {key: {a: idx for idx, a in enumerate(amb)}
           for key, amb in amb_maps.items()}
    for i in range(base.n):
        for j in range(base.n):
            if i == j or not base.leq[i][j]:
                continue
            for k in range(base.n):
                if k == j or k == i or not base.leq[j][k]:
                    continue
                m1, m2 = verts[(i, j)], verts[(j, k)]
                _, table = ci.prof_compose(m1.payload, m2.payload)
                fam = []
                for cidx in range(len(table.reps)):
                    e1, e2 = table.pairs[table.reps[cidx]]
                    a1 = amb_maps[(i, j)][e1]
                    a2 = amb_maps[(j, k)][e2]
                    fam.append(rev[(i, k)][x_cat.comp[a2][a1]])
                comparisons[(i, j, k)] = tuple(fam)
    return comparisons


def verify_b_glueing(c_base: Collage, size_bound=3, peel_orders=None) -> GlueEquivalence:
    """Round trips both ways over a poset base, for every object within the
    bound, with the unglue side repeated for each requested peeling order."""
    fun = c_base.functor
    result = GlueEquivalence(base=fun)
    rep = result.report
    orders = peel_orders or [None]
    for p in enumerate_slice_objects(c_base.total, size_bound):
        result.slice_objects += 1
        previous = None
        for order in orders:
            obj = b_unglue(c_base, p, peel_order=order)
            back = b_glue(c_base, obj)
            iso = _find_slice_iso_over(back, p)
            if iso is None:
                rep.fail("b_glue∘b_unglue not isomorphic to the identity",
                         (p, order))
            if previous is not None:
                if not _lax_isomorphic(previous, obj):
                    rep.fail("peeling order changed the result", p)
            previous = obj
            rep.tick()
    if fun.tag == Tag.CAT and fun.base_is_poset and fun.base == chain(2):
        lax_objs = enumerate_lax2_objects(fun.vertical(0, 1), size_bound)
    else:
        lax_objs = enumerate_lax_objects(fun, size_bound)
    for obj in lax_objs:
        result.lax_objects += 1
        sl = b_glue(c_base, obj)
        back = b_unglue(c_base, sl)
        if not _lax_isomorphic(obj, back):
            rep.fail("b_unglue∘b_glue not isomorphic to the identity", obj)
        rep.tick()
    return result


def _find_slice_iso_over(a: SliceObject, b: SliceObject):
    from .lax import find_slice_iso
    return find_slice_iso(a, b)


def _lax_isomorphic(a: LaxSliceObject, b: LaxSliceObject):
    """Componentwise isomorphism commuting with structures and verticals."""
    if a.over != b.over:
        return False
    homs = enumerate_lax_slice_morphisms(a, b)
    inst = instance(a.functor.tag)
    for t in homs:
        if all(inst.hmor_invertible(c.payload) is not None for c in t.components):
            return True
    return False


def enumerate_lax_objects(fun: LaxFunctor, size_bound):
    """All diagram objects over `fun` with total carrier size within bound."""
    tag = fun.tag
    inst = instance(tag)
    base = fun.base
    n = base.n if fun.base_is_poset else base.n_obj
    per_carrier = [inst.enumerate_objects(size_bound) for _ in range(n)]
    out = []
    for choice in itertools.product(*per_carrier):
        if sum(inst.obj_size(c) for c in choice) > size_bound:
            continue
        carriers = [Obj(tag, c) for c in choice]
        comp_opts = []
        feasible = True
        for b in range(n):
            hs = inst.enumerate_hmors(choice[b], fun.carriers[b].payload)
            if not hs:
                feasible = False
                break
            comp_opts.append([HMor(carriers[b], fun.carriers[b], h) for h in hs])
        if not feasible:
            continue
        keys = [(i, j) for i in range(n) for j in range(n)
                if i != j and base.leq[i][j]] if fun.base_is_poset else []
        vert_opts = []
        for (i, j) in keys:
            vs = inst.enumerate_vmors(choice[i], choice[j])
            vert_opts.append([VMor(carriers[i], carriers[j], v) for v in vs])
        for verts in itertools.product(*vert_opts):
            vmap = dict(zip(keys, verts))
            try:
                g = lax_functor(tag, base, carriers, vmap)
            except LawViolation:
                continue
            from .lax import validate_lax_functor
            if not validate_lax_functor(g).ok:
                continue
            for comps in itertools.product(*comp_opts):
                try:
                    t = transformation(g, fun, list(comps))
                except (core.ConditionFails, LawViolation):
                    continue
                out.append(LaxSliceObject(g, t))
    return out
