"""Generic double-category layer: objects, horizontal/vertical morphisms, cells.

Four concrete instances (finite posets, finite topological spaces, finite
frames, finite categories) register themselves here and every polymorphic
operation dispatches on the instance tag.  Values are immutable after
construction and all operations are pure.
"""
from __future__ import annotations

import importlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class Tag(str, Enum):
    POS = "pos"
    TOP = "top"
    LOC = "loc"
    CAT = "cat"

    def __str__(self):
        return self.value


class LawViolation(Exception):
    """A validator found broken structure.  Carries the law name and a witness."""

    def __init__(self, law, witness=None):
        super().__init__(f"{law}: {witness!r}" if witness is not None else law)
        self.law = law
        self.witness = witness


class BoundaryMismatch(Exception):
    pass


class ConditionFails(Exception):
    """The order condition for a Pos/Loc/Top cell does not hold."""

    def __init__(self, witness=None):
        super().__init__(f"cell condition fails at {witness!r}")
        self.witness = witness


class NotNatural(Exception):
    """A candidate Cat cell family breaks one of its naturality squares."""

    def __init__(self, witness=None):
        super().__init__(f"family not natural at {witness!r}")
        self.witness = witness


class SizeBoundExceeded(Exception):
    pass


class NoMediator(Exception):
    pass


class NonUnique(Exception):
    pass


@dataclass(frozen=True)
class Obj:
    tag: Tag
    payload: Any

    def size(self):
        return instance(self.tag).obj_size(self.payload)


@dataclass(frozen=True)
class HMor:
    src: Obj
    tgt: Obj
    payload: Any

    @property
    def tag(self):
        return self.src.tag


@dataclass(frozen=True)
class VMor:
    src: Obj
    tgt: Obj
    payload: Any

    @property
    def tag(self):
        return self.src.tag


@dataclass(frozen=True)
class Cell:
    top: HMor
    bottom: HMor
    left: VMor
    right: VMor
    witness: Any = None

    @property
    def tag(self):
        return self.top.tag

    def is_special(self):
        return self.left == identity_v(self.left.src) and self.right == identity_v(self.right.src)


@dataclass(frozen=True)
class CompanionData:
    f: HMor
    fstar: VMor
    eta: Cell
    eps: Cell


@dataclass(frozen=True)
class ConjointData:
    f: HMor
    fupperstar: VMor
    alpha: Cell
    beta: Cell


@dataclass(frozen=True)
class ZeroObject:
    obj: Obj


@dataclass
class LawReport:
    ok: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)

    def fail(self, law, witness):
        self.ok = False
        self.failures.append((law, witness))

    def tick(self, n=1):
        self.checked += n

    def merge(self, other):
        self.ok = self.ok and other.ok
        self.checked += other.checked
        self.failures.extend(other.failures)


_REGISTRY: dict[Tag, Any] = {}

_DEFINING_MODULE = {
    Tag.POS: "doublecat.order_instances",
    Tag.TOP: "doublecat.order_instances",
    Tag.LOC: "doublecat.order_instances",
    Tag.CAT: "doublecat.cat_instance",
}


def register_instance(tag, inst):
    _REGISTRY[tag] = inst


def instance(tag):
    tag = Tag(tag)
    if tag not in _REGISTRY:
        importlib.import_module(_DEFINING_MODULE[tag])
    return _REGISTRY[tag]


def make_obj(tag, payload) -> Obj:
    tag = Tag(tag)
    instance(tag).validate_obj(payload)
    return Obj(tag, payload)


def make_hmor(src: Obj, tgt: Obj, payload) -> HMor:
    if src.tag != tgt.tag:
        raise BoundaryMismatch(f"tags differ: {src.tag} vs {tgt.tag}")
    instance(src.tag).validate_hmor(src.payload, tgt.payload, payload)
    return HMor(src, tgt, payload)


def make_vmor(src: Obj, tgt: Obj, payload) -> VMor:
    if src.tag != tgt.tag:
        raise BoundaryMismatch(f"tags differ: {src.tag} vs {tgt.tag}")
    instance(src.tag).validate_vmor(src.payload, tgt.payload, payload)
    return VMor(src, tgt, payload)


def identity_h(x: Obj) -> HMor:
    return HMor(x, x, instance(x.tag).h_id(x.payload))


def identity_v(x: Obj) -> VMor:
    return VMor(x, x, instance(x.tag).v_id(x.payload))


def compose_horizontal(f: HMor, g: HMor) -> HMor:
    """The composite g∘f of horizontal morphisms f: X->Y, g: Y->Z."""
    if f.tag != g.tag:
        raise BoundaryMismatch("tag mismatch")
    if f.tgt != g.src:
        raise BoundaryMismatch("horizontal boundary mismatch")
    return HMor(f.src, g.tgt, instance(f.tag).h_compose(f.payload, g.payload))


def compose_vertical(m: VMor, n: VMor) -> VMor:
    """The composite n•m of vertical morphisms m: X-|->X', n: X'-|->X''."""
    if m.tag != n.tag:
        raise BoundaryMismatch("tag mismatch")
    if m.tgt != n.src:
        raise BoundaryMismatch("vertical boundary mismatch")
    return VMor(m.src, n.tgt, instance(m.tag).v_compose(m.payload, n.payload))


def _check_cell_boundary(f: HMor, m: VMor, n: VMor, f2: HMor):
    if not (f.tag == m.tag == n.tag == f2.tag):
        raise BoundaryMismatch("tag mismatch")
    if f.src != m.src or f.tgt != n.src or f2.src != m.tgt or f2.tgt != n.tgt:
        raise BoundaryMismatch("cell boundary mismatch")


def make_cell(f: HMor, m: VMor, n: VMor, f2: HMor, witness=None) -> Cell:
    """Build the cell m -> n over (f, f2), validating the instance condition.

    For Pos/Loc/Top the cell is a proposition and `witness` must be None;
    for Cat a witness family m(x,x') -> n(fx,f2x') is required and its
    naturality in both variables is checked.
    """
    _check_cell_boundary(f, m, n, f2)
    inst = instance(f.tag)
    w = inst.validate_cell(f.payload, m.payload, n.payload, f2.payload,
                           m.src.payload, m.tgt.payload, n.src.payload, n.tgt.payload,
                           witness)
    return Cell(f, f2, m, n, w)


def identity_cell_of_hmor(f: HMor) -> Cell:
    """The vertically-identity cell on f (left/right edges are id verticals)."""
    inst = instance(f.tag)
    w = inst.id_cell_on_hmor_witness(f.src.payload, f.tgt.payload, f.payload)
    return Cell(f, f, identity_v(f.src), identity_v(f.tgt), w)


def identity_cell_of_vmor(m: VMor) -> Cell:
    """The horizontally-identity cell on m (top/bottom edges are identities)."""
    inst = instance(m.tag)
    w = inst.id_cell_on_vmor_witness(m.payload)
    return Cell(identity_h(m.src), identity_h(m.tgt), m, m, w)


def compose_cells(direction: str, c1: Cell, c2: Cell) -> Cell:
    """Compose two cells; direction 'h' puts c2 to the right of c1,
    direction 'v' puts c2 below c1."""
    if c1.tag != c2.tag:
        raise BoundaryMismatch("tag mismatch")
    inst = instance(c1.tag)
    if direction == "h":
        if c1.right != c2.left:
            raise BoundaryMismatch("shared vertical edge differs")
        top = compose_horizontal(c1.top, c2.top)
        bottom = compose_horizontal(c1.bottom, c2.bottom)
        w = inst.cell_h_compose(c1, c2)
        return make_cell(top, c1.left, c2.right, bottom, w)
    if direction == "v":
        if c1.bottom != c2.top:
            raise BoundaryMismatch("shared horizontal edge differs")
        left = compose_vertical(c1.left, c2.left)
        right = compose_vertical(c1.right, c2.right)
        w = inst.cell_v_compose(c1, c2)
        return make_cell(c1.top, left, right, c2.bottom, w)
    raise ValueError(f"direction must be 'h' or 'v', got {direction!r}")


def companion(f: HMor) -> CompanionData:
    """The companion vertical f_* with its unit/counit cells."""
    inst = instance(f.tag)
    vp, eta_w, eps_w = inst.companion(f.src.payload, f.tgt.payload, f.payload)
    fstar = VMor(f.src, f.tgt, vp)
    eta = make_cell(identity_h(f.src), identity_v(f.src), fstar, f, eta_w)
    eps = make_cell(f, fstar, identity_v(f.tgt), identity_h(f.tgt), eps_w)
    return CompanionData(f, fstar, eta, eps)


def conjoint(f: HMor) -> ConjointData:
    """The conjoint vertical f^* with its unit/counit cells."""
    inst = instance(f.tag)
    vp, alpha_w, beta_w = inst.conjoint(f.src.payload, f.tgt.payload, f.payload)
    fup = VMor(f.tgt, f.src, vp)
    alpha = make_cell(f, identity_v(f.src), fup, identity_h(f.src), alpha_w)
    beta = make_cell(identity_h(f.tgt), fup, identity_v(f.tgt), f, beta_w)
    return ConjointData(f, fup, alpha, beta)


def terminal_object(tag) -> Obj:
    return make_obj(tag, instance(tag).terminal_obj())


def hmor_to_terminal(x: Obj) -> HMor:
    t = terminal_object(x.tag)
    return HMor(x, t, instance(x.tag).h_to_terminal(x.payload))


def hmor_from_zero(x: Obj) -> HMor:
    z = Obj(Tag(x.tag), instance(x.tag).zero_obj())
    return HMor(z, x, instance(x.tag).h_from_zero(x.payload))


def vmor_from_zero(x: Obj) -> VMor:
    z = Obj(Tag(x.tag), instance(x.tag).zero_obj())
    return VMor(z, x, instance(x.tag).v_from_zero(x.payload))


def vmor_to_zero(x: Obj) -> VMor:
    z = Obj(Tag(x.tag), instance(x.tag).zero_obj())
    return VMor(x, z, instance(x.tag).v_to_zero(x.payload))


def zero_object(tag, test_family=None) -> ZeroObject:
    """The zero object: horizontally initial, vertically initial and terminal.

    Its invariants are checked by enumeration against `test_family`
    (a list of Obj; a small default family is used when omitted).
    """
    tag = Tag(tag)
    inst = instance(tag)
    z = make_obj(tag, inst.zero_obj())
    if test_family is None:
        test_family = [Obj(tag, p) for p in inst.enumerate_objects(2)]
    for x in test_family:
        hs = inst.enumerate_hmors(z.payload, x.payload)
        if len(hs) != 1:
            raise LawViolation("zero object: horizontal morphisms not unique", (x, len(hs)))
        u = HMor(z, x, hs[0])
        v_out = inst.enumerate_vmors(z.payload, x.payload)
        v_in = inst.enumerate_vmors(x.payload, z.payload)
        if len(v_out) != 1:
            raise LawViolation("zero object: outgoing vertical not unique", (x, len(v_out)))
        if len(v_in) != 1:
            raise LawViolation("zero object: incoming vertical not unique", (x, len(v_in)))
        comp = companion(u)
        conj = conjoint(u)
        if comp.fstar.payload != v_out[0]:
            raise LawViolation("zero object: companion is not the unique vertical", x)
        if conj.fupperstar.payload != v_in[0]:
            raise LawViolation("zero object: conjoint is not the unique vertical", x)
    return ZeroObject(z)


def _companion_equations(f: HMor, report: LawReport):
    data = companion(f)
    # counit after unit, composed horizontally, must be the identity cell on f
    left = compose_cells("h", data.eta, data.eps)
    if left != identity_cell_of_hmor(f):
        report.fail("companion: eps∘eta != id cell", f)
    # stacked vertically the composite frames f_* between the identity
    # isomorphisms; for our instances this is the identity family on f_*
    stacked = compose_cells("v", data.eta, data.eps)
    inst = instance(f.tag)
    if not inst.special_cell_is_canonical_identity(stacked, data.fstar):
        report.fail("companion: eta•eps not the canonical identity on f_*", f)
    report.tick()
    return data


def _conjoint_equations(f: HMor, report: LawReport):
    data = conjoint(f)
    right = compose_cells("h", data.alpha, data.beta)
    if right != identity_cell_of_hmor(f):
        report.fail("conjoint: beta∘alpha != id cell", f)
    stacked = compose_cells("v", data.beta, data.alpha)
    inst = instance(f.tag)
    if not inst.special_cell_is_canonical_identity(stacked, data.fupperstar):
        report.fail("conjoint: beta•alpha not the canonical identity on f^*", f)
    report.tick()
    return data


def validate_framed(tag, sample) -> LawReport:
    """Check that every f in `sample` has a companion and conjoint satisfying
    the unit/counit equations, and that f_* is left adjoint to f^* vertically.

    Never raises on a law failure; all violations are reported with witnesses.
    """
    tag = Tag(tag)
    inst = instance(tag)
    report = LawReport()
    for f in sample:
        try:
            comp = _companion_equations(f, report)
            conj = _conjoint_equations(f, report)
            inst.check_vertical_adjunction(f, comp, conj, report)
        except (LawViolation, BoundaryMismatch, ConditionFails, NotNatural) as exc:
            report.fail("framing data failed to build", (f, exc))
    return report
