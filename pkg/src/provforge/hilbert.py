"""Modus-ponens-only Hilbert proof system.

A proof is a sequence of formulas, each one either taken as an assumption or
obtained by modus ponens from two earlier lines.  Logical axioms count as
assumptions under the degree-zero reading: ``assumptions(p)`` is everything
not justified by modus ponens.  The schema set below is complete for the
classical propositional fragment (property-tested against a truth-table
oracle via the constructive tautology prover).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from . import syntax
from .syntax import (
    And, Atom, BExists, BForAll, Bot, Exists, ForAll, Formula, Imp, Not, Or,
    Term, Top, Var, substitute,
)


class ProofError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line + 1}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Assumption:
    def describe(self) -> str:
        return "assume"


@dataclass(frozen=True)
class MP:
    imp: int  # index of the implication line
    ant: int  # index of the antecedent line

    def describe(self) -> str:
        return f"mp {self.imp + 1} {self.ant + 1}"


Justification = Union[Assumption, MP]
ASSUME = Assumption()


@dataclass(frozen=True)
class HilbertProof:
    lines: tuple[tuple[Formula, Justification], ...]

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1][0]

    def formulas(self) -> list[Formula]:
        return [f for f, _ in self.lines]

    def __len__(self) -> int:
        return len(self.lines)


def proof_of(lines: Iterable[tuple[Formula, Justification]]) -> HilbertProof:
    return HilbertProof(tuple(lines))


def check(p: HilbertProof) -> frozenset[Formula]:
    """Validate every justification; returns the assumption set (all lines
    not justified by modus ponens)."""
    if not p.lines:
        raise ProofError("empty proof")
    assumptions: set[Formula] = set()
    for idx, (f, just) in enumerate(p.lines):
        match just:
            case Assumption():
                assumptions.add(f)
            case MP(i, j):
                if not (0 <= i < idx) or not (0 <= j < idx):
                    raise ProofError(f"mp cites lines {i + 1},{j + 1} not strictly earlier", idx)
                imp = p.lines[i][0]
                if not isinstance(imp, Imp):
                    raise ProofError(f"mp cites non-implication line {i + 1}", idx)
                if imp.left != p.lines[j][0]:
                    raise ProofError(f"line {j + 1} does not match the antecedent of line {i + 1}", idx)
                if imp.right != f:
                    raise ProofError(f"conclusion differs from the consequent of line {i + 1}", idx)
            case _:
                raise ProofError("unknown justification", idx)
    return frozenset(assumptions)


def assumptions_of(p: HilbertProof) -> frozenset[Formula]:
    return check(p)


# ---------------------------------------------------------------------------
# Degree-zero subformulas: strip either side of implications

def subformulas_circ(f: Formula) -> frozenset[Formula]:
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        if isinstance(g, Imp):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def subformulas_circ_set(fs: Iterable[Formula]) -> frozenset[Formula]:
    out: set[Formula] = set()
    for f in fs:
        out |= subformulas_circ(f)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Logical axiom schemas

SCHEMA_NAMES: tuple[str, ...] = (
    "K", "S", "AND-I", "AND-E1", "AND-E2", "OR-I1", "OR-I2", "OR-E",
    "NEG-I", "DNE", "TOP", "EFQ", "NOT-AS-IMP", "IMP-AS-NOT",
    "UNIV-INST", "EXIST-GEN",
)


def _match_schema(f: Formula) -> Optional[str]:
    match f:
        case Top():
            return "TOP"
        case Imp(Bot(), _):
            return "EFQ"
        case Imp(a, Imp(_, a2)) if a == a2:
            return "K"
        case _:
            pass
    match f:
        case Imp(Imp(a, Imp(b, c)), Imp(Imp(a2, b2), Imp(a3, c2))) if a == a2 == a3 and b == b2 and c == c2:
            return "S"
        case Imp(a, Imp(b, And(a2, b2))) if a == a2 and b == b2:
            return "AND-I"
        case Imp(And(a, _), a2) if a == a2:
            return "AND-E1"
        case Imp(And(_, b), b2) if b == b2:
            return "AND-E2"
        case Imp(a, Or(a2, _)) if a == a2:
            return "OR-I1"
        case Imp(b, Or(_, b2)) if b == b2:
            return "OR-I2"
        case Imp(Imp(a, c), Imp(Imp(b, c2), Imp(Or(a2, b2), c3))) if a == a2 and b == b2 and c == c2 == c3:
            return "OR-E"
        case Imp(Imp(a, b), Imp(Imp(a2, Not(b2)), Not(a3))) if a == a2 == a3 and b == b2:
            return "NEG-I"
        case Imp(Not(Not(a)), a2) if a == a2:
            return "DNE"
        case Imp(Not(a), Imp(a2, Bot())) if a == a2:
            return "NOT-AS-IMP"
        case Imp(Imp(a, Bot()), Not(a2)) if a == a2:
            return "IMP-AS-NOT"
        case _:
            pass
    # Quantifier schemas: forall-instantiation and exists-generalization.
    match f:
        case Imp(ForAll(x, body), inst):
            t = _infer_instance(body, x, inst)
            if t is not None:
                return "UNIV-INST"
        case Imp(inst, Exists(x, body)):
            t = _infer_instance(body, x, inst)
            if t is not None:
                return "EXIST-GEN"
        case _:
            pass
    return None


def _infer_instance(body: Formula, var: int, inst: Formula) -> Optional[Term]:
    """Find t with substitute(body, var, t) == inst, if any."""
    if var not in syntax.free_vars(body):
        return syntax.ZERO if inst == body else None
    candidates: list[Term] = []

    def walk(b, i) -> bool:
        if isinstance(b, Var) and b.index == var:
            candidates.append(i)
            return True
        if type(b) is not type(i):
            return False
        match b:
            case Var():
                return b == i
            case syntax.Zero() | syntax.One():
                return True
            case syntax.Succ():
                return walk(b.arg, i.arg)
            case syntax.Add() | syntax.Mul():
                return walk(b.left, i.left) and walk(b.right, i.right)
            case syntax.Exp():
                return walk(b.base, i.base) and walk(b.power, i.power)
            case Atom():
                return b.rel == i.rel and walk(b.left, i.left) and walk(b.right, i.right)
            case Bot() | Top():
                return True
            case Not():
                return walk(b.body, i.body)
            case And() | Or() | Imp():
                return walk(b.left, i.left) and walk(b.right, i.right)
            case ForAll() | Exists():
                return b.var == i.var and walk(b.body, i.body)
            case BForAll() | BExists():
                return (b.var == i.var and b.strict == i.strict
                        and walk(b.bound, i.bound) and walk(b.body, i.body))
        return False

    if not walk(body, inst):
        return None
    if not candidates:
        return None
    t = candidates[0]
    if any(c != t for c in candidates):
        return None
    return t if substitute(body, var, t) == inst else None


def is_logical_axiom(f: Formula) -> bool:
    return _match_schema(f) is not None


def axiom_schema_of(f: Formula) -> Optional[str]:
    return _match_schema(f)


# ---------------------------------------------------------------------------
# Proof construction toolkit

class ProofBuilder:
    def __init__(self):
        self.lines: list[tuple[Formula, Justification]] = []
        self._index: dict[Formula, int] = {}

    def add(self, f: Formula, just: Justification) -> int:
        if f in self._index:
            return self._index[f]
        self.lines.append((f, just))
        self._index[f] = len(self.lines) - 1
        return self._index[f]

    def assume(self, f: Formula) -> int:
        return self.add(f, ASSUME)

    def axiom(self, f: Formula) -> int:
        if not is_logical_axiom(f):
            raise ProofError(f"not an instance of a schema: {syntax.pretty(f)}")
        return self.add(f, ASSUME)

    def mp(self, imp_idx: int, ant_idx: int) -> int:
        imp = self.lines[imp_idx][0]
        if not isinstance(imp, Imp) or self.lines[ant_idx][0] != imp.left:
            raise ProofError("bad modus ponens application")
        return self.add(imp.right, MP(imp_idx, ant_idx))

    def have(self, f: Formula) -> int:
        idx = self._index.get(f)
        if idx is None:
            raise ProofError(f"formula not yet derived: {syntax.pretty(f)}")
        return idx

    def identity(self, a: Formula) -> int:
        """A -> A via S and K."""
        aa = Imp(a, a)
        if aa in self._index:
            return self._index[aa]
        k1 = self.axiom(Imp(a, Imp(aa, a)))
        s1 = self.axiom(Imp(Imp(a, Imp(aa, a)), Imp(Imp(a, aa), aa)))
        step = self.mp(s1, k1)
        k2 = self.axiom(Imp(a, aa))
        return self.mp(step, k2)

    def compose(self, xy: int, yz: int) -> int:
        """From X->Y and Y->Z derive X->Z."""
        fxy = self.lines[xy][0]
        fyz = self.lines[yz][0]
        assert isinstance(fxy, Imp) and isinstance(fyz, Imp) and fxy.right == fyz.left
        x, y, z = fxy.left, fxy.right, fyz.right
        k = self.axiom(Imp(fyz, Imp(x, fyz)))
        lifted = self.mp(k, yz)
        s = self.axiom(Imp(Imp(x, Imp(y, z)), Imp(Imp(x, y), Imp(x, z))))
        step = self.mp(s, lifted)
        return self.mp(step, xy)

    def proof(self) -> HilbertProof:
        return HilbertProof(tuple(self.lines))


# ---------------------------------------------------------------------------
# Minimization (duplicate removal, tail truncation, dead-line pruning)

def minimize(p: HilbertProof) -> HilbertProof:
    check(p)
    lines = list(p.lines)
    changed = True
    while changed:
        changed = False
        conclusion = lines[-1][0]
        # cut everything after the first occurrence of the conclusion
        first = next(i for i, (f, _) in enumerate(lines) if f == conclusion)
        if first != len(lines) - 1:
            lines = lines[: first + 1]
            changed = True
        # drop duplicate occurrences, remapping citations to the first one
        seen: dict[Formula, int] = {}
        keep: list[tuple[Formula, Justification]] = []
        remap: dict[int, int] = {}
        for idx, (f, just) in enumerate(lines):
            if f in seen:
                remap[idx] = seen[f]
                changed = True
                continue
            if isinstance(just, MP):
                just = MP(remap[just.imp], remap[just.ant])
            seen[f] = len(keep)
            remap[idx] = len(keep)
            keep.append((f, just))
        lines = keep
        # prune lines unreachable from the conclusion
        used = set()
        stack = [len(lines) - 1]
        while stack:
            i = stack.pop()
            if i in used:
                continue
            used.add(i)
            just = lines[i][1]
            if isinstance(just, MP):
                stack.extend((just.imp, just.ant))
        if len(used) != len(lines):
            changed = True
            order = sorted(used)
            renumber = {old: new for new, old in enumerate(order)}
            lines = [
                (lines[i][0],
                 MP(renumber[lines[i][1].imp], renumber[lines[i][1].ant])
                 if isinstance(lines[i][1], MP) else lines[i][1])
                for i in order
            ]
    out = HilbertProof(tuple(lines))
    check(out)
    return out


# ---------------------------------------------------------------------------
# Deduction transform

def _code_order_key(f: Formula) -> tuple[int, tuple[str, ...]]:
    toks = tuple(syntax.formula_tokens(f))
    return (len(toks), toks)


def conjunction_of(fs: Iterable[Formula]) -> Formula:
    """Right-associated conjunction in code order; empty set gives top."""
    ordered = sorted(set(fs), key=_code_order_key)
    if not ordered:
        return syntax.TOP
    out = ordered[-1]
    for f in reversed(ordered[:-1]):
        out = And(f, out)
    return out


def deduction_transform(p: HilbertProof, discharged: Iterable[Formula]) -> HilbertProof:
    """Turn a proof of C from assumptions including S into a proof of
    (/\\S -> C) from the remaining assumptions plus logical axioms.

    The transform is the standard line-by-line translation; its output grows
    linearly in the input."""
    s = frozenset(discharged)
    ass = check(p)
    if not s <= ass:
        raise ProofError("discharged set is not a subset of the proof's assumptions")
    cunj = conjunction_of(s)
    b = ProofBuilder()

    # projections C -> member, peeled off the right-associated conjunction
    proj: dict[Formula, int] = {}
    if s:
        ordered = sorted(s, key=_code_order_key)
        prefix = b.identity(cunj)  # C -> C, peeled progressively
        rest = cunj
        for member in ordered[:-1]:
            assert isinstance(rest, And) and rest.left == member
            e1 = b.axiom(Imp(rest, member))
            proj[member] = b.compose(prefix, e1) if rest != cunj else e1
            e2 = b.axiom(Imp(rest, rest.right))
            prefix = b.compose(prefix, e2) if rest != cunj else e2
            rest = rest.right
        proj[ordered[-1]] = prefix

    translated: dict[int, int] = {}
    for idx, (f, just) in enumerate(p.lines):
        target = Imp(cunj, f)
        if isinstance(just, Assumption) and f in s:
            translated[idx] = proj[f]
            continue
        if isinstance(just, Assumption):
            line = b.assume(f)
            k = b.axiom(Imp(f, target))
            translated[idx] = b.mp(k, line)
            continue
        assert isinstance(just, MP)
        imp_f = p.lines[just.imp][0]
        assert isinstance(imp_f, Imp)
        sx = b.axiom(Imp(Imp(cunj, imp_f), Imp(Imp(cunj, imp_f.left), target)))
        step = b.mp(sx, translated[just.imp])
        translated[idx] = b.mp(step, translated[just.ant])
    out = _finish(b, translated[len(p.lines) - 1])
    check(out)
    return out


# ---------------------------------------------------------------------------
# Constructive propositional completeness (tautology -> proof)

def _prop_atoms(f: Formula) -> list[Formula]:
    """Smallest non-propositional subformulas, in first-use order."""
    out: list[Formula] = []

    def go(g: Formula):
        match g:
            case Bot() | Top():
                return
            case Not(b):
                go(b)
            case And(a, b) | Or(a, b) | Imp(a, b):
                go(a)
                go(b)
            case _:
                if g not in out:
                    out.append(g)

    go(f)
    return out


def prop_eval(f: Formula, val: dict[Formula, bool]) -> bool:
    match f:
        case Bot():
            return False
        case Top():
            return True
        case Not(b):
            return not prop_eval(b, val)
        case And(a, b):
            return prop_eval(a, val) and prop_eval(b, val)
        case Or(a, b):
            return prop_eval(a, val) or prop_eval(b, val)
        case Imp(a, b):
            return (not prop_eval(a, val)) or prop_eval(b, val)
        case _:
            return val[f]


def is_tautology(f: Formula) -> bool:
    atoms = _prop_atoms(f)
    for mask in range(1 << len(atoms)):
        val = {a: bool(mask >> i & 1) for i, a in enumerate(atoms)}
        if not prop_eval(f, val):
            return False
    return True


def _lit(f: Formula, truth: bool) -> Formula:
    return f if truth else Not(f)


def _prove_signed(b: ProofBuilder, f: Formula, val: dict[Formula, bool]) -> int:
    """Derive f or not-f (per its truth value) from the literal assumptions."""
    truth = prop_eval(f, val)
    goal = _lit(f, truth)
    match f:
        case Top():
            return b.axiom(Top())
        case Bot():
            efq = b.axiom(Imp(Bot(), Bot()))
            return b.mp(b.axiom(Imp(Imp(Bot(), Bot()), Not(Bot()))), efq)
        case Not(g):
            gi = _prove_signed(b, g, val)
            if truth:
                return gi  # proved not-g already
            # g holds; derive not-not-g
            gg = b.lines[gi][0]
            k = b.axiom(Imp(gg, Imp(Not(g), gg)))
            lifted = b.mp(k, gi)
            neg = b.axiom(Imp(Imp(Not(g), g), Imp(Imp(Not(g), Not(g)), Not(Not(g)))))
            step = b.mp(neg, lifted)
            return b.mp(step, b.identity(Not(g)))
        case And(x, y):
            xi, yi = _prove_signed(b, x, val), _prove_signed(b, y, val)
            if truth:
                a = b.axiom(Imp(x, Imp(y, f)))
                return b.mp(b.mp(a, xi), yi)
            if not prop_eval(x, val):
                return _neg_via(b, f, x, b.axiom(Imp(f, x)), xi)
            return _neg_via(b, f, y, b.axiom(Imp(f, y)), yi)
        case Or(x, y):
            if truth:
                if prop_eval(x, val):
                    return b.mp(b.axiom(Imp(x, f)), _prove_signed(b, x, val))
                return b.mp(b.axiom(Imp(y, f)), _prove_signed(b, y, val))
            xi, yi = _prove_signed(b, x, val), _prove_signed(b, y, val)
            # from not-x and not-y derive not-(x or y)
            ei = b.axiom(Imp(Imp(x, Bot()), Imp(Imp(y, Bot()), Imp(f, Bot()))))
            xbot = _not_to_imp(b, x, xi)
            ybot = _not_to_imp(b, y, yi)
            fbot = b.mp(b.mp(ei, xbot), ybot)
            return b.mp(b.axiom(Imp(Imp(f, Bot()), Not(f))), fbot)
        case Imp(x, y):
            if truth:
                if prop_eval(y, val):
                    return b.mp(b.axiom(Imp(y, f)), _prove_signed(b, y, val))
                xi = _prove_signed(b, x, val)  # not-x
                xbot = _not_to_imp(b, x, xi)
                efq = b.axiom(Imp(Bot(), y))
                return b.compose(xbot, efq)
            xi, yi = _prove_signed(b, x, val), _prove_signed(b, y, val)  # x, not-y
            # from x and not-y derive not-(x -> y)
            k = b.axiom(Imp(x, Imp(f, x)))
            fx = b.mp(k, xi)  # f -> x
            s = b.axiom(Imp(Imp(f, Imp(x, y)), Imp(Imp(f, x), Imp(f, y))))
            step = b.mp(s, b.identity(f))  # (f -> x) -> (f -> y)
            fy = b.mp(step, fx)
            k2 = b.axiom(Imp(Not(y), Imp(f, Not(y))))
            fny = b.mp(k2, yi)
            neg = b.axiom(Imp(Imp(f, y), Imp(Imp(f, Not(y)), Not(f))))
            return b.mp(b.mp(neg, fy), fny)
        case _:
            return b.assume(goal)


def _not_to_imp(b: ProofBuilder, x: Formula, not_x_idx: int) -> int:
    """From not-x derive x -> bot."""
    ax = b.axiom(Imp(Not(x), Imp(x, Bot())))
    return b.mp(ax, not_x_idx)


def _neg_via(b: ProofBuilder, f: Formula, part: Formula, f_to_part: int, not_part: int) -> int:
    """From (f -> part) and not-part derive not-f."""
    k = b.axiom(Imp(Not(part), Imp(f, Not(part))))
    f_not_part = b.mp(k, not_part)
    neg = b.axiom(Imp(Imp(f, part), Imp(Imp(f, Not(part)), Not(f))))
    return b.mp(b.mp(neg, f_to_part), f_not_part)


def _embed(b: ProofBuilder, p: HilbertProof) -> int:
    idx_map: dict[int, int] = {}
    for i, (f, just) in enumerate(p.lines):
        if isinstance(just, MP):
            idx_map[i] = b.add(f, MP(idx_map[just.imp], idx_map[just.ant]))
        else:
            idx_map[i] = b.add(f, ASSUME)
    return idx_map[len(p.lines) - 1]


def _finish(b: ProofBuilder, goal_idx: int) -> HilbertProof:
    """Proof whose last line is the formula at goal_idx."""
    lines = list(b.lines)
    if goal_idx == len(lines) - 1:
        return HilbertProof(tuple(lines))
    f = lines[goal_idx][0]
    ident = b.identity(f)
    lines = list(b.lines)
    lines.append((f, MP(ident, goal_idx)))
    return HilbertProof(tuple(lines))


def _hypothetical(b: ProofBuilder, hypothesis: Formula, build) -> int:
    """Derive (hypothesis -> goal) inside ``b`` by running ``build`` on a
    scratch builder that may assume the hypothesis, then discharging it."""
    bb = ProofBuilder()
    bb.assume(hypothesis)
    goal_idx = build(bb)
    sub = _finish(bb, goal_idx)
    discharged = deduction_transform(sub, {hypothesis})
    return _embed(b, discharged)


def _excluded_middle(b: ProofBuilder, a: Formula) -> int:
    """Derive a or not-a from the schemas (via double negation)."""
    x = Or(a, Not(a))

    def from_not_x(bb: ProofBuilder, lit: Formula, inj: Formula) -> int:
        # under hypothesis not-x, conclude not-lit (inj is lit -> x)
        i1 = bb.axiom(inj)
        k = bb.axiom(Imp(Not(x), Imp(lit, Not(x))))
        lit_notx = bb.mp(k, bb.have(Not(x)))
        neg = bb.axiom(Imp(Imp(lit, x), Imp(Imp(lit, Not(x)), Not(lit))))
        return bb.mp(bb.mp(neg, i1), lit_notx)

    na = _hypothetical(b, Not(x), lambda bb: from_not_x(bb, a, Imp(a, x)))
    nna = _hypothetical(b, Not(x), lambda bb: from_not_x(bb, Not(a), Imp(Not(a), x)))
    # NEG-I on not-x itself, then double negation elimination
    neg = b.axiom(Imp(Imp(Not(x), Not(a)), Imp(Imp(Not(x), Not(Not(a))), Not(Not(x)))))
    nnx = b.mp(b.mp(neg, na), nna)
    dne = b.axiom(Imp(Not(Not(x)), x))
    return b.mp(dne, nnx)


def _merge_on(goal: Formula, atom: Formula,
              with_atom: HilbertProof, with_neg: HilbertProof) -> HilbertProof:
    """Combine proofs of goal from {atom} u Gamma and {not-atom} u Gamma."""
    pa = deduction_transform(with_atom, {atom})
    pn = deduction_transform(with_neg, {Not(atom)})
    b = ProofBuilder()
    ia = _embed(b, pa)
    in_ = _embed(b, pn)
    a_imp = Imp(atom, goal)
    n_imp = Imp(Not(atom), goal)
    assert b.lines[ia][0] == a_imp and b.lines[in_][0] == n_imp
    em = _excluded_middle(b, atom)
    ore = b.axiom(Imp(a_imp, Imp(n_imp, Imp(Or(atom, Not(atom)), goal))))
    step = b.mp(b.mp(ore, ia), in_)
    return _finish(b, b.mp(step, em))


def prove_tautology(f: Formula) -> HilbertProof:
    """Constructive completeness for the propositional fragment: returns a
    proof of ``f`` whose assumptions are all logical axioms."""
    if not is_tautology(f):
        raise ProofError(f"not a propositional tautology: {syntax.pretty(f)}")
    atoms = _prop_atoms(f)

    def build(fixed: dict[Formula, bool], rest: list[Formula]) -> HilbertProof:
        if not rest:
            b = ProofBuilder()
            for a, tv in fixed.items():
                b.assume(_lit(a, tv))
            idx = _prove_signed(b, f, dict(fixed))
            return _finish(b, idx)
        a, tail = rest[0], rest[1:]
        with_a = build({**fixed, a: True}, tail)
        with_n = build({**fixed, a: False}, tail)
        return _merge_on(f, a, with_a, with_n)

    p = build({}, atoms)
    ass = check(p)
    bad = [g for g in ass if not is_logical_axiom(g)]
    if bad:
        raise ProofError(f"tautology proof leaked assumptions: {bad[:3]}")
    return p


# ---------------------------------------------------------------------------
# Proof file format

def format_proof(p: HilbertProof) -> str:
    out = []
    for i, (f, just) in enumerate(p.lines):
        out.append(f"{i + 1} {just.describe()} {syntax.pretty(f)}")
    return "\n".join(out) + "\n"


def parse_proof(text: str) -> HilbertProof:
    lines: list[tuple[Formula, Justification]] = []
    for raw in text.splitlines():
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        parts = raw.split(None, 2)
        if len(parts) < 3:
            raise ProofError(f"malformed proof line: {raw!r}")
        _, tag, rest = parts
        if tag == "assume":
            lines.append((syntax.parse(rest), ASSUME))
        elif tag == "mp":
            bits = rest.split(None, 2)
            if len(bits) < 3:
                raise ProofError(f"malformed mp line: {raw!r}")
            i, j = int(bits[0]) - 1, int(bits[1]) - 1
            lines.append((syntax.parse(bits[2]), MP(i, j)))
        else:
            raise ProofError(f"unknown tag {tag!r}")
    return HilbertProof(tuple(lines))
