"""Builders for arithmetized syntax: proof and provability predicates,
the truth-predicate family, the soundness guard, witness comparison, and
axiom-set transforms.

Every builder emits a genuine formula over the coding.  Builders register
the emitted body in the evaluation registry together with a direct
computation, so the formulas stay evaluable at real code magnitudes; the
direct computations are validated against raw evaluation on small
instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Protocol

from . import certs, coding, hilbert, relations, syntax
from .evaluator import (
    EvalContext, Relation, Registry, T, F, X, Tri, default_registry,
)
from .relations import (
    K_TERM, KM1_TERM, Lit, Ref, Slot, apply_relation, code_of,
    elements_of, make_pattern_relation, toks_of,
)
from .syntax import (
    Add, And, BExists, BForAll, Exists, Exp, ForAll, Formula, FormulaClass,
    Imp, Mul, Not, One, Or, Term, Var, classify, conj, disj, eq, le, lt,
    numeral, substitute,
)

BOT_CODE = coding.encode_formula(syntax.BOT)  # the falsum constant codes to 1


class ShapeError(ValueError):
    pass


class ClassError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Predicate value types

class AxiomExtension(Protocol):
    def contains(self, ctx: EvalContext, code: int) -> Tri: ...
    def members(self) -> Optional[tuple[int, ...]]: ...


@dataclass(frozen=True)
class FiniteAxiomSet:
    codes: tuple[int, ...]

    def contains(self, ctx: EvalContext, code: int) -> Tri:
        return T if code in self.codes else F

    def members(self) -> Optional[tuple[int, ...]]:
        return self.codes


@dataclass(frozen=True)
class AxiomPredicate:
    """A formula with one distinguished free variable, numerating an axiom
    set.  ``params`` lists additional free parameter variables (for staged
    variants)."""

    body: Formula
    var: int
    label: str
    cls: FormulaClass
    params: tuple[int, ...] = ()
    extension: Optional[object] = field(default=None, compare=False)

    def at(self, t: "Term | int") -> Formula:
        if isinstance(t, int):
            t = numeral(t)
        return substitute(self.body, self.var, t)


@dataclass(frozen=True)
class BinaryPredicate:
    """A formula with two distinguished free variables (stage, sentence
    code).  ``persistent`` asserts upward persistence in the stage."""

    body: Formula
    stage_var: int
    code_var: int
    label: str
    persistent: bool = False
    semantics: Optional[object] = field(default=None, compare=False)

    def at(self, stage: "Term | int", code: "Term | int") -> Formula:
        s = numeral(stage) if isinstance(stage, int) else stage
        c = numeral(code) if isinstance(code, int) else code
        out = substitute(self.body, self.stage_var, s)
        return substitute(out, self.code_var, c)


# ---------------------------------------------------------------------------
# Schema patterns for the arithmetized logical-axiom recognizer

_A, _B, _C = Slot(), Slot(), Slot()

_SCHEMA_PATTERNS = {
    "ax_k": [Lit("("), Slot(), Lit("imp", "("), Slot(), Lit("imp"), Ref(0), Lit(")", ")")],
    "ax_s": [Lit("(", "("), Slot(), Lit("imp", "("), Slot(), Lit("imp"), Slot(),
             Lit(")", ")", "imp", "(", "("), Ref(0), Lit("imp"), Ref(1),
             Lit(")", "imp", "("), Ref(0), Lit("imp"), Ref(2), Lit(")", ")", ")")],
    "ax_and_i": [Lit("("), Slot(), Lit("imp", "("), Slot(), Lit("imp", "("),
                 Ref(0), Lit("and"), Ref(1), Lit(")", ")", ")")],
    "ax_and_e1": [Lit("(", "("), Slot(), Lit("and"), Slot(), Lit(")", "imp"), Ref(0), Lit(")")],
    "ax_and_e2": [Lit("(", "("), Slot(), Lit("and"), Slot(), Lit(")", "imp"), Ref(1), Lit(")")],
    "ax_or_i1": [Lit("("), Slot(), Lit("imp", "("), Ref(0), Lit("or"), Slot(), Lit(")", ")")],
    "ax_or_i2": [Lit("("), Slot(), Lit("imp", "("), Slot(), Lit("or"), Ref(0), Lit(")", ")")],
    "ax_or_e": [Lit("(", "("), Slot(), Lit("imp"), Slot(), Lit(")", "imp", "(", "("),
                Slot(), Lit("imp"), Ref(1), Lit(")", "imp", "(", "("), Ref(0),
                Lit("or"), Ref(2), Lit(")", "imp"), Ref(1), Lit(")", ")", ")")],
    "ax_neg_i": [Lit("(", "("), Slot(), Lit("imp"), Slot(), Lit(")", "imp", "(", "("),
                 Ref(0), Lit("imp", "not"), Ref(1), Lit(")", "imp", "not"), Ref(0), Lit(")", ")")],
    "ax_dne": [Lit("(", "not", "not"), Slot(), Lit("imp"), Ref(0), Lit(")")],
    "ax_efq": [Lit("(", "bot", "imp"), Slot(), Lit(")")],
    "ax_not_imp": [Lit("(", "not"), Slot(), Lit("imp", "("), Ref(0), Lit("imp", "bot", ")", ")")],
    "ax_imp_not": [Lit("(", "("), Slot(), Lit("imp", "bot", ")", "imp", "not"), Ref(0), Lit(")")],
    "ax_ui": [Lit("(", "all", "v"), Slot("digits"), Slot(), Lit("imp"), Slot(), Lit(")")],
    "ax_eg": [Lit("("), Slot(), Lit("imp", "ex", "v"), Slot("digits"), Slot(), Lit(")")],
}

for _name, _parts in _SCHEMA_PATTERNS.items():
    make_pattern_relation(_name, _parts)


# ---------------------------------------------------------------------------
# Standalone substitution certificates (for quantifier schema recognition)

def _subst_cert_body() -> Formula:
    c, ds, nu, f, g = 0, 1, 2, 3, 4
    e, u, e2, ep = 5, 6, 7, 8
    root = BExists(e, Var(c), False, And(
        apply_relation("occurs_in", c, e),
        apply_relation("subst_entry", e, ds, nu, f, g)))
    every = BForAll(u, Var(c), False, Imp(
        BExists(ep, Var(c), False, apply_relation("elem_occ", c, u, ep)),
        BForAll(e2, Var(c), False, Imp(
            apply_relation("elem_occ", c, u, e2),
            apply_relation("entry_ok", e2, c)))))
    return And(root, every)


def _subst_chain_entries(ds: int, nu: int, f: int) -> Optional[list[tuple[str, ...]]]:
    """Entry token tuples witnessing the total substitution, or None."""
    if certs._has_occ(nu, ds):
        return None
    final = certs._subst_total(f, ds, nu)
    if final is None:
        return None
    dst, nut = toks_of(ds), toks_of(nu)
    pat = ("v",) + dst
    out = []
    cur = toks_of(f)
    for _ in range(10_000):
        out.append(("+", "v") + dst + (",",) + nut + (",",) + cur + (",",) + toks_of(final))
        pos = None
        for i in range(len(cur) - len(pat) + 1):
            if (cur[i:i + len(pat)] == pat
                    and (i + len(pat) >= len(cur) or not cur[i + len(pat)].startswith("d"))):
                pos = i
                break
        if pos is None:
            break
        cur = cur[:pos] + nut + cur[pos + len(pat):]
    return out


def _entries_to_code(entries: Iterable[tuple[str, ...]]) -> int:
    toks: list[str] = []
    for i, entry in enumerate(sorted(set(entries), key=lambda ts: (len(ts), ts))):
        if i:
            toks.append(";")
        toks.extend(entry)
    return code_of(toks)


def _subst_cert_fn(ctx: EvalContext, args: tuple[int, ...]):
    c, ds, nu, f, g = args
    cert = certs._cert_of(c)
    if not cert.ok_shape or (ds, nu, f, g) not in cert.subst_entries:
        return F
    for entry in cert.all_entries:
        if certs.entry_ok_fn(ctx, (entry, c)) is not T:
            return F
    return T


def _subst_cert_solve(ctx: EvalContext, known: dict[int, int]):
    ds, nu, f, g = known.get(1), known.get(2), known.get(3), known.get(4)
    if ds is None or f is None:
        return None
    if nu is not None:
        gg = certs._subst_total(f, ds, nu)
        if gg is None or (g is not None and g != gg):
            return []
        entries = _subst_chain_entries(ds, nu, f)
        if entries is None:
            return []
        return [{0: _entries_to_code(entries), 1: ds, 2: nu, 3: f, 4: g if g is not None else gg}]
    if g is None:
        return None
    # infer the substituted string
    candidates: list[int] = []
    if not certs._has_occ(f, ds):
        if f == g:
            candidates.append(code_of(("0",)))
    else:
        gt = toks_of(g)
        for end in range(len(gt) + 1):
            for start in range(end):
                cand = code_of(gt[start:end])
                if certs._subst_total(f, ds, cand) == g:
                    candidates.append(cand)
    out = []
    for cand in sorted(set(candidates)):
        entries = _subst_chain_entries(ds, cand, f)
        if entries is not None:
            out.append({0: _entries_to_code(entries), 1: ds, 2: cand, 3: f, 4: g})
    return out


SUBST_CERT = relations._register(Relation(
    "subst_cert", 5, _subst_cert_body(), _subst_cert_fn, _subst_cert_solve))


# ---------------------------------------------------------------------------
# logic(x): arithmetized recognizer for the schema set

def _logic_body() -> Formula:
    x = 0
    a, b, c = 1, 2, 3
    ds, g, h, t, cc, L, el = 4, 5, 6, 7, 8, 9, 10
    cases: list[Formula] = [eq(Var(x), numeral(relations.TOKDIG["top"]))]
    slot_counts = {
        "ax_k": 2, "ax_s": 3, "ax_and_i": 2, "ax_and_e1": 2, "ax_and_e2": 2,
        "ax_or_i1": 2, "ax_or_i2": 2, "ax_or_e": 3, "ax_neg_i": 2,
        "ax_dne": 1, "ax_efq": 1, "ax_not_imp": 1, "ax_imp_not": 1,
    }
    for name, n in slot_counts.items():
        slots = [a, b, c][:n]
        case: Formula = apply_relation(name, x, *slots)
        for v in reversed(slots):
            case = BExists(v, Var(x), False, case)
        cases.append(case)
    cert_bound = Mul(Exp(Var(el), Mul(numeral(5), Var(L))), K_TERM)
    for name, swap in (("ax_ui", False), ("ax_eg", True)):
        slots = (ds, g, h) if not swap else (h, ds, g)
        body_var, inst_var = g, h
        case = And(
            apply_relation(name, x, *slots),
            BExists(L, Var(x), False, BExists(el, Add(Mul(KM1_TERM, Var(x)), One()), False, conj([
                apply_relation("len_pow", x, el),
                eq(Var(el), Exp(K_TERM, Var(L))),
                BExists(t, Var(x), False, BExists(cc, cert_bound, False,
                    apply_relation("subst_cert", cc, ds, t, body_var, inst_var))),
            ]))))
        for v in reversed((ds, g, h)):
            case = BExists(v, Var(x), False, case)
        cases.append(case)
    return disj(cases)


def _logic_fn(ctx: EvalContext, args: tuple[int, ...]):
    f = coding.try_decode_formula(args[0])
    if f is None:
        return F
    return T if hilbert.is_logical_axiom(f) else F


LOGIC_AX = relations._register(Relation("logic_ax", 1, _logic_body(), _logic_fn))


def mk_logic_predicate() -> AxiomPredicate:
    body = apply_relation("logic_ax", 0)
    return AxiomPredicate(body, 0, "logic", classify(body), extension=_LogicExtension())


class _LogicExtension:
    def contains(self, ctx: EvalContext, code: int) -> Tri:
        return _logic_fn(ctx, (code,))

    def members(self) -> Optional[tuple[int, ...]]:
        return None


# ---------------------------------------------------------------------------
# Toy axiom-set predicates

def mk_finite_alpha(axioms: Iterable[Formula], label: str) -> AxiomPredicate:
    codes = tuple(sorted(coding.encode_formula(f) for f in axioms))
    if not codes:
        raise ShapeError("an axiom predicate needs at least one axiom")
    body = disj([eq(Var(0), numeral(cd)) for cd in codes])
    return AxiomPredicate(body, 0, label, classify(body), extension=FiniteAxiomSet(codes))


# ---------------------------------------------------------------------------
# proof predicates

class ProofOracle(Protocol):
    """Theory-level provability answers used by the fast denotations."""

    def provable(self, ctx: EvalContext, code: int) -> Tri: ...
    def min_proof_code(self, ctx: EvalContext, code: int) -> Optional[int]: ...
    def soundness_failure_stage(self, ctx: EvalContext) -> "Tri | int": ...


def _justified_clause(u: int, e: int, alpha: Optional[AxiomPredicate],
                      with_logic: bool, mp_first: bool) -> Formula:
    a, i = 20, 21
    mp = BExists(a, Var(u), False, And(
        apply_relation("occurs_in", u, a),
        BExists(i, Var(u), False, And(
            apply_relation("imp_code", i, a, e),
            apply_relation("occurs_in", u, i)))))
    parts: list[Formula] = [mp] if mp_first else []
    if alpha is not None:
        parts.append(alpha.at(Var(e)))
    if with_logic:
        parts.append(apply_relation("logic_ax", e))
    if not mp_first:
        parts.append(mp)
    return disj(parts)


def _proof_body(alpha: Optional[AxiomPredicate], with_logic: bool,
                degree_zero: bool) -> Formula:
    """proof(p, c): p is a separator-joined sequence whose last element is c
    and whose every element is justified."""
    p, c = 0, 1
    u, e, ep = 10, 11, 12
    justified = _justified_clause(u, e, alpha, with_logic, mp_first=degree_zero)
    every = BForAll(u, Var(p), False, Imp(
        BExists(ep, Var(p), False, apply_relation("elem_occ", p, u, ep)),
        BForAll(e, Var(p), False, Imp(
            apply_relation("elem_occ", p, u, e),
            justified))))
    return conj([
        le(One(), Var(p)),
        apply_relation("last_elem", p, c),
        every,
    ])


def _imp_code_of(a: int, b: int) -> int:
    return code_of(("(",) + toks_of(a) + ("imp",) + toks_of(b) + (")",))


def _proof_fn_factory(alpha: Optional[AxiomPredicate], with_logic: bool,
                      degree_zero: bool):
    def fn(ctx: EvalContext, args: tuple[int, ...]):
        p, c = args
        elems = elements_of(p)
        if not elems or elems[-1][1] != c:
            return F
        pu, px = elems[-1]
        if relations.concat_int(pu, px) != p:
            return F  # the conclusion must be the final element, not mid-string
        lines = [e for _, e in elems]
        saw_x = False
        for idx, e in enumerate(lines):
            prev = lines[:idx]
            prevset = set(prev)
            if any(_imp_code_of(a, e) in prevset for a in prev):
                continue
            verdict = F
            if alpha is not None and alpha.extension is not None:
                verdict = alpha.extension.contains(ctx, e)
            if verdict is F and with_logic:
                verdict = _logic_fn(ctx, (e,))
            if verdict is F:
                return F
            if verdict is X:
                saw_x = True
        return X if saw_x else T

    return fn


def mk_proof(alpha: AxiomPredicate, *, degree_zero: bool = False,
             registry: Optional[Registry] = None) -> BinaryPredicate:
    """proof predicate for the axiom set alpha.

    The standard reading justifies a line as a logical axiom, an alpha
    axiom, or modus ponens; the degree-zero reading drops the logical-axiom
    clause, so anything not derived by modus ponens counts as an assumption
    and must satisfy alpha."""
    if alpha.cls not in (FormulaClass.DELTA0EXP, FormulaClass.SIGMA1):
        raise ClassError(f"axiom predicate {alpha.label} is {alpha.cls.value}, "
                         "but proof predicates need Delta0exp or Sigma1")
    with_logic = not degree_zero
    body = _proof_body(alpha, with_logic, degree_zero)
    rel = Relation(f"proof[{alpha.label}{'r' if degree_zero else ''}]", 2, body,
                   _proof_fn_factory(alpha, with_logic, degree_zero))
    (registry or default_registry()).register(rel)
    return BinaryPredicate(body, 0, 1, rel.name, persistent=False)


def mk_bounded_prov(alpha: AxiomPredicate, *, degree_zero: bool = False,
                    oracle: Optional[ProofOracle] = None,
                    registry: Optional[Registry] = None) -> BinaryPredicate:
    """Provability by a proof with code below the stage: ex p <= x proof(p, c).
    Exp-bounded and upward persistent in the stage."""
    proof = mk_proof(alpha, degree_zero=degree_zero, registry=registry)
    x, c, p = 0, 1, 2
    body = BExists(p, Var(x), False,
                   substitute(substitute(proof.body, 0, Var(p)), 1, Var(c)))
    proof_fn = _proof_fn_factory(alpha, not degree_zero, degree_zero)

    def fn(ctx: EvalContext, args: tuple[int, ...]):
        stage, code = args
        if oracle is not None:
            mpc = oracle.min_proof_code(ctx, code)
            if mpc is not None:
                return T if mpc <= stage else F
            if oracle.provable(ctx, code) is F:
                return F
        if stage <= ctx.budget.witness_cap:
            saw_x = False
            for p_ in range(stage + 1):
                r = proof_fn(ctx, (p_, code))
                if r is T:
                    return T
                if r is X:
                    saw_x = True
            return X if saw_x else F
        return X

    rel = Relation(f"boundedprov[{alpha.label}{'r' if degree_zero else ''}]", 2, body, fn)
    (registry or default_registry()).register(rel)
    return BinaryPredicate(body, x, c, rel.name, persistent=True)


def mk_prov(alpha: AxiomPredicate, *, degree_zero: bool = False,
            oracle: Optional[ProofOracle] = None,
            registry: Optional[Registry] = None) -> AxiomPredicate:
    """prov(c) = ex p proof(p, c)."""
    proof = mk_proof(alpha, degree_zero=degree_zero, registry=registry)
    c, p = 0, 2
    body = Exists(p, substitute(substitute(proof.body, 0, Var(p)), 1, Var(c)))

    def fn(ctx: EvalContext, args: tuple[int, ...]):
        if oracle is None:
            return X
        return oracle.provable(ctx, args[0])

    rel = Relation(f"prov[{alpha.label}{'r' if degree_zero else ''}]", 1, body, fn)
    (registry or default_registry()).register(rel)
    return AxiomPredicate(body, c, rel.name, classify(body), extension=None)


# ---------------------------------------------------------------------------
# truth predicate family

def mk_true0(y: int = 0, s: int = 1) -> Formula:
    return apply_relation("true0", y, s)


def _true_fn(ctx: EvalContext, code: int) -> Tri:
    f = coding.try_decode_formula(code)
    if f is None or not isinstance(f, Exists) or not syntax.is_delta0(f.body):
        return F
    r = certs.eval_formula(f, ctx.budget)
    if r.is_true:
        return T
    if r.is_false:
        return F
    return X


def mk_true(registry: Optional[Registry] = None) -> AxiomPredicate:
    s, y = 0, 1
    body = Exists(y, mk_true0(y, s))

    def fn(ctx: EvalContext, args: tuple[int, ...]):
        return _true_fn(ctx, args[0])

    rel = Relation("true_sigma", 1, body, fn)
    (registry or default_registry()).register(rel)
    return AxiomPredicate(body, s, "true", classify(body), extension=_TrueExtension())


class _TrueExtension:
    def contains(self, ctx: EvalContext, code: int) -> Tri:
        return _true_fn(ctx, code)

    def members(self) -> Optional[tuple[int, ...]]:
        return None


def mk_trueZ(registry: Optional[Registry] = None) -> BinaryPredicate:
    """true-up-to(z, s): some certificate below z establishes s."""
    z, s, y = 0, 1, 2
    body = BExists(y, Var(z), False, mk_true0(y, s))

    def fn(ctx: EvalContext, args: tuple[int, ...]):
        zv, code = args
        base = _true_fn(ctx, code)
        if base is not T:
            return base
        f = coding.decode_formula(code)
        cert = certs.write_certificate(f, ctx.budget)
        if cert is None:
            return X
        return T if cert <= zv else X

    rel = Relation("true_upto", 2, body, fn)
    (registry or default_registry()).register(rel)
    return BinaryPredicate(body, z, s, "true_upto", persistent=True)


# ---------------------------------------------------------------------------
# The soundness guard S(x)

def mk_sigma_shape() -> AxiomPredicate:
    s, ds, mx = 0, 1, 2
    body = BExists(ds, Var(s), False, BExists(mx, Var(s), False,
                                              apply_relation("ex_code", s, ds, mx)))
    return AxiomPredicate(body, s, "sigma_shape", classify(body))


def mk_S(alpha: AxiomPredicate, *, oracle: Optional[ProofOracle] = None,
         registry: Optional[Registry] = None) -> AxiomPredicate:
    """S(x): every existential sentence with an alpha-proof below x is true
    with a common certificate bound."""
    if alpha.cls not in (FormulaClass.DELTA0EXP, FormulaClass.SIGMA1):
        raise ClassError("the soundness guard needs an exp-bounded axiom predicate")
    bounded = mk_bounded_prov(alpha, oracle=oracle, registry=registry)
    shape = mk_sigma_shape()
    x, z, s, y = 0, 1, 2, 3
    guard = And(shape.at(Var(s)),
                substitute(substitute(bounded.body, bounded.stage_var, Var(x)),
                           bounded.code_var, Var(s)))
    body = Exists(z, BForAll(s, Var(x), False, Imp(
        guard,
        BExists(y, Var(z), False, mk_true0(y, s)))))

    def fn(ctx: EvalContext, args: tuple[int, ...]):
        if oracle is None:
            return X
        stage = oracle.soundness_failure_stage(ctx)
        if stage is X:
            return X
        if stage is None:
            return T
        return T if args[0] < stage else F

    rel = Relation(f"sguard[{alpha.label}]", 1, body, fn)
    (registry or default_registry()).register(rel)
    return AxiomPredicate(body, x, rel.name, classify(body), extension=None)


# ---------------------------------------------------------------------------
# Witness comparison

def _split_sigma(f: Formula, which: str) -> tuple[int, Formula]:
    if not isinstance(f, Exists):
        raise ShapeError(f"{which} must begin with an existential quantifier: {syntax.pretty(f)}")
    return f.var, f.body


def mk_witness_leq(a: Formula, b: Formula) -> Formula:
    """a holds with a witness no later than b's first witness."""
    xa, ma = _split_sigma(a, "left")
    xb, mb = _split_sigma(b, "right")
    fresh = max(syntax.all_vars(a) | syntax.all_vars(b)) + 1
    y = fresh + 1
    mb = substitute(mb, xb, Var(y))
    return Exists(fresh, And(substitute(ma, xa, Var(fresh)),
                             BForAll(y, Var(fresh), True, Not(mb))))


def mk_witness_lt(a: Formula, b: Formula) -> Formula:
    """a holds with a witness strictly before every witness of b."""
    xa, ma = _split_sigma(a, "left")
    xb, mb = _split_sigma(b, "right")
    fresh = max(syntax.all_vars(a) | syntax.all_vars(b)) + 1
    y = fresh + 1
    mb = substitute(mb, xb, Var(y))
    return Exists(fresh, And(substitute(ma, xa, Var(fresh)),
                             BForAll(y, Var(fresh), False, Not(mb))))


def minimal_witness(f: Formula, budget=None) -> Optional[int]:
    """Brute-force least witness of an existential sentence (the oracle the
    comparison builders are tested against)."""
    from .evaluator import DEFAULT_BUDGET, eval_formula
    budget = budget or DEFAULT_BUDGET
    xa, ma = _split_sigma(f, "sentence")
    for w in range(budget.witness_cap + 1):
        r = eval_formula(substitute(ma, xa, numeral(w)), budget)
        if r.is_true:
            return w
        if not r.is_false:
            return None
    return None


# ---------------------------------------------------------------------------
# Axiom-set transforms

def restrict_axioms(alpha: AxiomPredicate, stage_var: int) -> AxiomPredicate:
    """alpha restricted to codes below a stage parameter."""
    if stage_var == alpha.var or stage_var in alpha.params:
        raise ShapeError("stage variable collides with the predicate's variables")
    body = And(alpha.body, le(Var(alpha.var), Var(stage_var)))
    return AxiomPredicate(body, alpha.var, f"{alpha.label}|<=v{stage_var}",
                          alpha.cls, params=alpha.params + (stage_var,),
                          extension=None)


def mk_alpha_prime(alpha: AxiomPredicate, gamma: AxiomPredicate, *,
                   quantified_reading: bool = False,
                   registry: Optional[Registry] = None) -> AxiomPredicate:
    """alpha(x) refined by consistency-so-far of gamma.

    The default emits the displayed form, in which the universally
    quantified bound variable is unused and the proof slot carries x
    itself; ``quantified_reading`` switches the proof slot to the bound
    variable."""
    proof_g = mk_proof(gamma, registry=registry)
    x = alpha.var
    yv = max(syntax.all_vars(alpha.body) | syntax.all_vars(proof_g.body)) + 1
    cvar = yv + 1
    slot = yv if quantified_reading else x
    neg = Not(BExists(cvar, One(), False, And(
        eq(Var(cvar), numeral(BOT_CODE)),
        substitute(substitute(proof_g.body, 0, Var(slot)), 1, Var(cvar)))))
    body = And(alpha.body, BForAll(yv, Var(x), False, neg))
    return AxiomPredicate(body, x, f"{alpha.label}'", classify(body),
                          params=alpha.params,
                          extension=_AlphaPrimeExtension(alpha, gamma, quantified_reading))


class _AlphaPrimeExtension:
    def __init__(self, alpha: AxiomPredicate, gamma: AxiomPredicate, quantified: bool):
        self.alpha = alpha
        self.gamma = gamma
        self.quantified = quantified
        self._proof_fn = _proof_fn_factory(gamma, True, False)

    def contains(self, ctx: EvalContext, code: int) -> Tri:
        base = self.alpha.extension.contains(ctx, code) if self.alpha.extension else X
        if base is not T:
            return base
        if self.quantified:
            if code > ctx.budget.witness_cap:
                return X
            saw_x = False
            for y in range(code + 1):
                r = self._proof_fn(ctx, (y, BOT_CODE))
                if r is T:
                    return F
                if r is X:
                    saw_x = True
            return X if saw_x else T
        # literal reading: the proof slot is the axiom code itself
        r = self._proof_fn(ctx, (code, BOT_CODE))
        if r is T:
            return F
        return X if r is X else T

    def members(self) -> Optional[tuple[int, ...]]:
        return None


def mk_preceq_sentence(gamma: AxiomPredicate, delta: AxiomPredicate,
                       registry: Optional[Registry] = None) -> Formula:
    """Everything gamma proves, delta proves: a Pi-2 shaped sentence emitted
    for external or semantic use, not decided here."""
    pg = mk_prov(gamma, registry=registry)
    pd = mk_prov(delta, registry=registry)
    a = max(syntax.all_vars(pg.body) | syntax.all_vars(pd.body)) + 1
    return ForAll(a, Imp(pg.at(Var(a)), pd.at(Var(a))))
