"""Law sweeps: exhaustive desk-scale checks plus seeded random sampling.

These back the `verify` command and the acceptance suite:

* framing: companion/conjoint equations and the vertical adjunction for
  every morphism in a catalog, plus random samples at a larger size;
* interchange: every composable 2x2 grid of cells whose corner objects come
  from a small per-instance catalog;
* vertical category laws: strict unitality/associativity for the order
  instances, canonical isomorphisms for the category instance;
* mutation robustness: seeded single-field mutations of valid fixtures must
  all be rejected with a located witness.
"""
from __future__ import annotations

import itertools
import random

from . import cat_instance as ci
from . import order_instances as oi
from .core import (Cell, HMor, LawReport, LawViolation, NotNatural, Obj, Tag,
                   VMor, compose_cells, compose_vertical, identity_v, instance,
                   make_cell, validate_framed)


def _catalog(tag):
    """Small object catalog: the one-element object and one two-element one."""
    tag = Tag(tag)
    if tag == Tag.POS:
        return [oi.chain(1), oi.chain(2)]
    if tag == Tag.TOP:
        return [oi.point_space(), oi.sierpinski()]
    if tag == Tag.LOC:
        return [oi.chain_frame(1), oi.chain_frame(2)]
    return [ci.ONE_CAT, ci.ARROW_CAT]


def _all_cells(tag, catalog):
    inst = instance(tag)
    cells = []
    for xp, x2p in itertools.product(catalog, repeat=2):
        x, x2 = Obj(tag, xp), Obj(tag, x2p)
        for mp in inst.enumerate_vmors(xp, x2p):
            m = VMor(x, x2, mp)
            for yp, y2p in itertools.product(catalog, repeat=2):
                y, y2 = Obj(tag, yp), Obj(tag, y2p)
                for np_ in inst.enumerate_vmors(yp, y2p):
                    n = VMor(y, y2, np_)
                    for fp in inst.enumerate_hmors(xp, yp):
                        f = HMor(x, y, fp)
                        for f2p in inst.enumerate_hmors(x2p, y2p):
                            f2 = HMor(x2, y2, f2p)
                            for w in inst.cell_witnesses(fp, mp, np_, f2p):
                                cells.append(Cell(f, f2, m, n, w))
    return cells


def interchange_exhaustive(tag, catalog=None) -> LawReport:
    """Middle-four interchange over every composable 2x2 grid whose corner
    objects come from the catalog."""
    tag = Tag(tag)
    report = LawReport()
    cells = _all_cells(tag, catalog or _catalog(tag))
    by_left = {}
    by_top_left = {}
    for c in cells:
        by_left.setdefault(c.left, []).append(c)
        by_top_left.setdefault((c.top, c.left), []).append(c)
    for phi in cells:
        for psi in by_left.get(phi.right, ()):
            top_row_h = compose_cells("h", phi, psi)
            for phi2 in by_top_left.get((phi.bottom, None), ()):
                pass
            for phi2 in cells:
                if phi2.top != phi.bottom:
                    continue
                left_col_v = compose_cells("v", phi, phi2)
                for psi2 in by_top_left.get((psi.bottom, phi2.right), ()):
                    one = compose_cells("v", top_row_h, compose_cells("h", phi2, psi2))
                    two = compose_cells("h", left_col_v, compose_cells("v", psi, psi2))
                    if one != two:
                        report.fail("middle-four interchange", (phi, psi, phi2, psi2))
                        return report
                    report.tick()
    return report


def interchange_random(tag, rng, samples, size=3) -> LawReport:
    """Seeded random grids at the given object size."""
    tag = Tag(tag)
    inst = instance(tag)
    report = LawReport()
    produced = 0
    attempts = 0
    while produced < samples and attempts < samples * 60:
        attempts += 1
        objs = [Obj(tag, inst.random_object(rng, rng.randint(1, size)))
                for _ in range(9)]
        x, y, z, x2, y2, z2, x3, y3, z3 = objs
        try:
            grid = _random_grid(tag, inst, rng, objs)
        except (LawViolation, NotNatural):
            continue
        if grid is None:
            continue
        phi, psi, phi2, psi2 = grid
        one = compose_cells("v", compose_cells("h", phi, psi),
                            compose_cells("h", phi2, psi2))
        two = compose_cells("h", compose_cells("v", phi, phi2),
                            compose_cells("v", psi, psi2))
        if one != two:
            report.fail("middle-four interchange (random)", grid)
            return report
        produced += 1
        report.tick()
    if produced < samples:
        report.fail("random grid generation starved", (produced, samples))
    return report


def _random_grid(tag, inst, rng, objs):
    x, y, z, x2, y2, z2, x3, y3, z3 = objs

    def vmor(a, b):
        p = inst.random_vmor(rng, a.payload, b.payload)
        return None if p is None else VMor(a, b, p)

    def hmor(a, b):
        p = inst.random_hmor(rng, a.payload, b.payload)
        return None if p is None else HMor(a, b, p)

    m1, m2 = vmor(x, x2), vmor(x2, x3)
    n1, n2 = vmor(y, y2), vmor(y2, y3)
    p1, p2 = vmor(z, z2), vmor(z2, z3)
    f1, f2, f3 = hmor(x, y), hmor(x2, y2), hmor(x3, y3)
    g1, g2, g3 = hmor(y, z), hmor(y2, z2), hmor(y3, z3)
    parts = [m1, m2, n1, n2, p1, p2, f1, f2, f3, g1, g2, g3]
    if any(v is None for v in parts):
        return None

    def cell(f, m, n, f2):
        ws = inst.cell_witnesses(f.payload, m.payload, n.payload, f2.payload)
        if not ws:
            return None
        return make_cell(f, m, n, f2, rng.choice(ws))

    phi = cell(f1, m1, n1, f2)
    psi = cell(g1, n1, p1, g2)
    phi2 = cell(f2, m2, n2, f3)
    psi2 = cell(g2, n2, p2, g3)
    if any(c is None for c in (phi, psi, phi2, psi2)):
        return None
    return phi, psi, phi2, psi2


def framing_exhaustive(tag, max_size=2) -> LawReport:
    """Companion/conjoint laws for every morphism between catalog objects."""
    tag = Tag(tag)
    inst = instance(tag)
    sample = []
    for xp in inst.enumerate_objects(max_size):
        for yp in inst.enumerate_objects(max_size):
            for fp in inst.enumerate_hmors(xp, yp):
                sample.append(HMor(Obj(tag, xp), Obj(tag, yp), fp))
    return validate_framed(tag, sample)


def framing_random(tag, rng, samples, size=3) -> LawReport:
    tag = Tag(tag)
    inst = instance(tag)
    sample = []
    while len(sample) < samples:
        x = inst.random_object(rng, rng.randint(1, size))
        y = inst.random_object(rng, rng.randint(1, size))
        fp = inst.random_hmor(rng, x, y)
        if fp is not None:
            sample.append(HMor(Obj(tag, x), Obj(tag, y), fp))
    return validate_framed(tag, sample)


def vertical_category_laws(tag, max_size=2) -> LawReport:
    """Unitality and associativity of vertical composition: strict equality
    for the order instances, canonical isomorphism for categories."""
    tag = Tag(tag)
    inst = instance(tag)
    report = LawReport()
    objs = [Obj(tag, p) for p in inst.enumerate_objects(max_size)]
    for a, b in itertools.product(objs, repeat=2):
        for mp in inst.enumerate_vmors(a.payload, b.payload):
            m = VMor(a, b, mp)
            left = compose_vertical(identity_v(a), m)
            right = compose_vertical(m, identity_v(b))
            if tag != Tag.CAT:
                if left.payload != mp or right.payload != mp:
                    report.fail("vertical identity law", m)
            else:
                ci.rho_iso(mp)
                ci.lambda_iso(mp)
            report.tick()
    small = objs[:2]
    for a, b, c, d in itertools.product(small, repeat=4):
        for mp in inst.enumerate_vmors(a.payload, b.payload):
            for np_ in inst.enumerate_vmors(b.payload, c.payload):
                for pp in inst.enumerate_vmors(c.payload, d.payload):
                    if tag != Tag.CAT:
                        m, n, p = (VMor(a, b, mp), VMor(b, c, np_), VMor(c, d, pp))
                        one = compose_vertical(compose_vertical(m, n), p)
                        two = compose_vertical(m, compose_vertical(n, p))
                        if one.payload != two.payload:
                            report.fail("vertical associativity", (m, n, p))
                    else:
                        ci.assoc_iso(mp, np_, pp)
                    report.tick()
    return report


# ---------------------------------------------------------------------------
# mutation robustness


def _expect_rejection(builder, law_hint, report):
    try:
        builder()
    except (LawViolation, NotNatural) as exc:
        witness = getattr(exc, "witness", None)
        if witness is None and not str(exc):
            report.fail(f"{law_hint}: rejected without a witness", exc)
        else:
            report.tick()
        return
    report.fail(f"{law_hint}: mutant was accepted", None)


def mutate_poset_validator(rng, report):
    base = oi.chain(3)
    rows = [list(r) for r in base.leq]
    op = rng.choice(["diag", "reverse", "transitive"])
    if op == "diag":
        i = rng.randrange(3)
        rows[i][i] = False
    elif op == "reverse":
        i, j = sorted(rng.sample(range(3), 2))
        rows[j][i] = True
    else:
        rows[0][2] = False      # 0<1<2 remains, breaking transitivity
    _expect_rejection(lambda: oi.FinPoset(base.elements, oi._freeze(rows)),
                      "poset validator", report)


def mutate_frame_validator(rng, report):
    base = oi.downset_frame(oi.antichain(2))    # four-element boolean frame
    rows = [list(r) for r in base.leq]
    op = rng.choice(["diag", "reverse", "drop-bottom"])
    if op == "diag":
        i = rng.randrange(base.n)
        rows[i][i] = False
    elif op == "reverse":
        pairs = [(i, j) for i in range(base.n) for j in range(base.n)
                 if i != j and base.leq[i][j]]
        i, j = rng.choice(pairs)
        rows[j][i] = True
    else:
        atoms = [x for x in range(base.n)
                 if x != base.bottom and base.leq[base.bottom][x]
                 and sum(base.leq[y][x] for y in range(base.n)) == 2]
        a = rng.choice(atoms)
        rows[base.bottom][a] = False
    _expect_rejection(lambda: oi.frame_validate(base.elements, rows),
                      "frame validator", report)


def mutate_lax_coherence(rng, report):
    from .lax import lax_functor, validate_lax_functor
    from .core import make_obj, make_vmor
    two = oi.chain(2)
    full = tuple((True, True) for _ in range(2))
    carriers = [make_obj(Tag.POS, two) for _ in range(3)]
    op = rng.choice(["composite-pair", "forced-pair"])
    if op == "composite-pair":
        f02 = [[True, True], [True, True]]
        f02[1][0] = False       # in the composite of the full relations
        verts = {(0, 1): oi.OrderIdeal(two, two, full),
                 (1, 2): oi.OrderIdeal(two, two, full),
                 (0, 2): oi.OrderIdeal(two, two, oi._freeze(f02))}

        def build():
            fun = lax_functor(Tag.POS, oi.chain(3), carriers, verts)
            rep = validate_lax_functor(fun)
            if not rep.ok:
                raise LawViolation(*rep.failures[0])
            return fun

        _expect_rejection(build, "lax coherence", report)
    else:
        f01 = [[False, True], [True, True]]     # (0,1) removed but forced

        def build():
            return oi.OrderIdeal(two, two, oi._freeze(f01))

        _expect_rejection(build, "ideal closure", report)


def mutate_cat_naturality(rng, report):
    c2 = ci.c2_group()
    hom = ci.hom_profunctor(c2)
    f = ci.identity_functor(c2)
    family = list(range(hom.n_elems))
    k = rng.randrange(hom.n_elems)
    others = [e for e in hom.slot(0, 0) if e != family[k]]
    family[k] = rng.choice(others)
    _expect_rejection(
        lambda: ci.cat_cell_validate(f, hom, hom, f, tuple(family)),
        "cat naturality", report)


def mutation_suite(seed, rounds=50) -> LawReport:
    """For each validator, `rounds` seeded single-field mutations of a valid
    fixture, each of which must be rejected with a witness."""
    report = LawReport()
    rng = random.Random(seed)
    for _ in range(rounds):
        mutate_poset_validator(rng, report)
        mutate_frame_validator(rng, report)
        mutate_lax_coherence(rng, report)
        mutate_cat_naturality(rng, report)
    return report
