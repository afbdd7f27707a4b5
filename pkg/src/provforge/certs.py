"""Bounded truth certificates for existential sentences.

A certificate for an existential sentence (ex v . matrix) is a
separator-joined sequence of entries, each a token string tagged by its
first token:

  "(" b                witness entry: b is the binary string of the witness
  ")" t "(" b          term entry: closed term t has the value denoted by b
  "," f                formula entry: f is certified true
  "=" f                formula entry: f is certified false
  "+" "v" ds "," n "," f "," g   substitution entry: g is f with every
                       occurrence of variable ds replaced by the string n

Entry correctness is local (arithmetic over denoted values plus existence of
supporting entries), so a certificate is checked in one bounded pass; truth
of the certified sentence follows by induction on the support order.  These
conditions form the exp-bounded core of the truth predicate.  The writer
and checker below are its fast denotation, property-tested against raw
evaluation of the bodies.
"""

from __future__ import annotations

import functools
from typing import Optional

from . import coding, syntax
from .evaluator import (
    EvalBudget, EvalContext, Relation, T, F, X, Tri, eval_formula,
)
from .relations import (
    DIGIT_HI, DIGIT_LO, K_TERM, KM1_TERM, _PATTERN_PARTS, _match_parts,
    _register, apply_relation, bin_tokens, bin_value, code_of, elements_of,
    toks_of,
)
from .syntax import (
    Add, And, BExists, BForAll, Exists, Exp, Formula, Imp, Mul, Not, One, Or,
    Term, Var, conj, disj, eq, le, lt, numeral,
)

TOK = {name: coding.DEFAULT_ALPHABET.digit(name) for name in coding.DEFAULT_TOKENS}


# ---------------------------------------------------------------------------
# Formula-side helpers.  Scratch variable indices are passed explicitly; the
# binding discipline is always "entry variable first, then its payload
# slots, then denoted values", which keeps every existential solvable.

def exists_entry(y: int, e: int, inner: Formula) -> Formula:
    return BExists(e, Var(y), False, And(apply_relation("occurs_in", y, e), inner))


def entry_true_in(y: int, f: int, e: int) -> Formula:
    return exists_entry(y, e, apply_relation("true_entry", e, f))


def entry_false_in(y: int, f: int, e: int) -> Formula:
    return exists_entry(y, e, apply_relation("false_entry", e, f))


def term_value_in(y: int, t: int, e: int, b: int, n: int, inner: Formula) -> Formula:
    """Bind n to a certified value of the (known) term string t."""
    return exists_entry(y, e, BExists(b, Var(e), False, And(
        apply_relation("term_entry", e, t, b),
        BExists(n, Var(b), False, And(apply_relation("bin_val", b, n), inner)))))


def _boundary_ok(c1: int, ch: int, rest: int) -> Formula:
    not_digit = Not(And(le(numeral(DIGIT_LO), Var(ch)), le(Var(ch), numeral(DIGIT_HI))))
    return Or(eq(Var(c1), syntax.ZERO),
              BExists(ch, K_TERM, False, BExists(rest, Var(c1), False, And(
                  apply_relation("first_char", c1, ch, rest), not_digit))))


def has_var_occurrence(h: int, ds: int, base: int) -> Formula:
    c0, c1, ch, rest = base, base + 1, base + 2, base + 3
    return BExists(c0, Var(h), False, BExists(c1, Var(h), False, And(
        apply_relation("var_occ_split", h, c0, ds, c1),
        _boundary_ok(c1, ch, rest))))


# ---------------------------------------------------------------------------
# EntryOK(e, y)

def _term_cond(t: int, b: int, y: int, base: int) -> Formula:
    """Local condition of a term entry (t, b)."""
    n, t1, t2 = base, base + 1, base + 2
    e1, b1, n1 = base + 3, base + 4, base + 5
    e2, b2, n2 = base + 6, base + 7, base + 8

    def with_n(inner: Formula) -> Formula:
        return BExists(n, Var(b), False, And(apply_relation("bin_val", b, n), inner))

    cases = [
        And(eq(Var(t), numeral(TOK["0"])), with_n(eq(Var(n), syntax.ZERO))),
        And(eq(Var(t), numeral(TOK["1"])), with_n(eq(Var(n), One()))),
        BExists(t1, Var(t), False, And(
            apply_relation("succ_code", t, t1),
            term_value_in(y, t1, e1, b1, n1, with_n(eq(Var(n), Add(Var(n1), One())))))),
    ]
    for pat, op in (("add_code", Add), ("mul_code", Mul), ("exp_code", Exp)):
        cases.append(BExists(t1, Var(t), False, BExists(t2, Var(t), False, And(
            apply_relation(pat, t, t1, t2),
            term_value_in(y, t1, e1, b1, n1,
                          term_value_in(y, t2, e2, b2, n2,
                                        with_n(eq(Var(n), op(Var(n1), Var(n2))))))))))
    return disj(cases)


def _inst_clause(y: int, ds: int, g: int, j: int, base: int, *, truth: bool) -> Formula:
    """The instance of g at value j is certified with the given truth."""
    bnu, e1, nu, e2, g2, e3 = range(base, base + 6)
    tail = exists_entry(y, e3, apply_relation(
        "true_entry" if truth else "false_entry", e3, g2))
    return BExists(bnu, Var(y), False, And(
        apply_relation("bin_val", bnu, j),
        exists_entry(y, e1, BExists(nu, Var(e1), False, And(
            apply_relation("term_entry", e1, nu, bnu),
            exists_entry(y, e2, BExists(g2, Var(e2), False, And(
                apply_relation("subst_entry", e2, ds, nu, g, g2),
                tail))))))))


def _quant_cond(y: int, ds: int, t: int, g: int, base: int, *,
                strict: bool, forall: bool, truth: bool) -> Formula:
    e_t, bt, m, j = base, base + 1, base + 2, base + 3
    inst = _inst_clause(y, ds, g, j, base + 4, truth=truth)
    need_all = forall == truth
    quant = (BForAll if need_all else BExists)(j, Var(m), strict, inst)
    return term_value_in(y, t, e_t, bt, m, quant)


def _formula_cond(f: int, y: int, base: int, *, truth: bool) -> Formula:
    g, h, t1, t2, ds = base, base + 1, base + 2, base + 3, base + 4
    e1, b1, n1, e2, b2, n2 = base + 5, base + 6, base + 7, base + 8, base + 9, base + 10
    scratch = base + 11

    atom_rel = {
        "atom_eq_code": eq(Var(n1), Var(n2)) if truth else Or(lt(Var(n1), Var(n2)), lt(Var(n2), Var(n1))),
        "atom_le_code": le(Var(n1), Var(n2)) if truth else lt(Var(n2), Var(n1)),
        "atom_lt_code": lt(Var(n1), Var(n2)) if truth else le(Var(n2), Var(n1)),
    }
    cases: list[Formula] = [eq(Var(f), numeral(TOK["top" if truth else "bot"]))]
    for pat, relcond in atom_rel.items():
        cases.append(BExists(t1, Var(f), False, BExists(t2, Var(f), False, And(
            apply_relation(pat, f, t1, t2),
            term_value_in(y, t1, e1, b1, n1,
                          term_value_in(y, t2, e2, b2, n2, relcond))))))
    cases.append(BExists(g, Var(f), False, And(
        apply_relation("not_code", f, g),
        (entry_false_in if truth else entry_true_in)(y, g, e1))))
    for pat, mkcond in (
        ("and_code", (lambda: And(entry_true_in(y, g, e1), entry_true_in(y, h, e2))) if truth
         else (lambda: Or(entry_false_in(y, g, e1), entry_false_in(y, h, e2)))),
        ("or_code", (lambda: Or(entry_true_in(y, g, e1), entry_true_in(y, h, e2))) if truth
         else (lambda: And(entry_false_in(y, g, e1), entry_false_in(y, h, e2)))),
        ("imp_code", (lambda: Or(entry_false_in(y, g, e1), entry_true_in(y, h, e2))) if truth
         else (lambda: And(entry_true_in(y, g, e1), entry_false_in(y, h, e2)))),
    ):
        cases.append(BExists(g, Var(f), False, BExists(h, Var(f), False, And(
            apply_relation(pat, f, g, h), mkcond()))))
    for pat, strict, forall in (("ball_le_code", False, True), ("ball_lt_code", True, True),
                                ("bex_le_code", False, False), ("bex_lt_code", True, False)):
        cases.append(BExists(ds, Var(f), False, BExists(t1, Var(f), False, BExists(g, Var(f), False, And(
            apply_relation(pat, f, ds, t1, g),
            _quant_cond(y, ds, t1, g, scratch, strict=strict, forall=forall, truth=truth))))))
    return disj(cases)


def _subst_cond(ds: int, nu: int, f: int, g: int, y: int, base: int) -> Formula:
    c0, c1, ch, rest, m1, f2, e2 = range(base, base + 7)
    done = And(Not(has_var_occurrence(f, ds, base + 7)), eq(Var(f), Var(g)))
    f2_bound = Mul(K_TERM, Mul(Add(Mul(KM1_TERM, Var(f)), One()),
                               Add(Mul(KM1_TERM, Var(nu)), One())))
    step = BExists(c0, Var(f), False, BExists(c1, Var(f), False, conj([
        apply_relation("var_occ_split", f, c0, ds, c1),
        _boundary_ok(c1, ch, rest),
        BExists(m1, f2_bound, False, And(
            apply_relation("concat", nu, c1, m1),
            BExists(f2, f2_bound, False, And(
                apply_relation("concat", c0, m1, f2),
                exists_entry(y, e2, apply_relation("subst_entry", e2, ds, nu, f2, g)))))),
    ])))
    return And(Not(has_var_occurrence(nu, ds, base + 7)), Or(done, step))


def _entry_ok_body() -> Formula:
    e, y = 0, 1
    b, t, f, ds, nu, g = 2, 3, 4, 5, 6, 7
    base = 8
    cases = [
        BExists(b, Var(e), False, apply_relation("wit_entry", e, b)),
        BExists(t, Var(e), False, BExists(b, Var(e), False, And(
            apply_relation("term_entry", e, t, b),
            _term_cond(t, b, y, base)))),
        BExists(f, Var(e), False, And(
            apply_relation("true_entry", e, f),
            _formula_cond(f, y, base, truth=True))),
        BExists(f, Var(e), False, And(
            apply_relation("false_entry", e, f),
            _formula_cond(f, y, base, truth=False))),
        BExists(ds, Var(e), False, BExists(nu, Var(e), False,
        BExists(f, Var(e), False, BExists(g, Var(e), False, And(
            apply_relation("subst_entry", e, ds, nu, f, g),
            _subst_cond(ds, nu, f, g, y, base)))))),
    ]
    return disj(cases)


# ---------------------------------------------------------------------------
# Python-side certificate model (the fast denotation)

class _Cert:
    def __init__(self, y: int):
        self.ok_shape = False
        self.first_witness: Optional[int] = None  # binary-string code
        self.term_entries: set[tuple[int, int]] = set()
        self.term_values: dict[int, int] = {}
        self.true_entries: set[int] = set()
        self.false_entries: set[int] = set()
        self.subst_entries: set[tuple[int, int, int, int]] = set()
        self.all_entries: list[int] = []
        elems = elements_of(y)
        if elems is None:
            return
        self.ok_shape = True
        for idx, (_, ecode) in enumerate(elems):
            self.all_entries.append(ecode)
            toks = toks_of(ecode)
            head, rest = toks[0], toks[1:]
            if head == "(" and idx == 0:
                self.first_witness = code_of(rest)
            elif head == ")":
                for m in _entry_matches("term_entry", toks):
                    self.term_entries.add((m[0], m[1]))
                    v = bin_value(m[1])
                    if v is not None:
                        self.term_values.setdefault(m[0], v)
            elif head == ",":
                self.true_entries.add(code_of(rest))
            elif head == "=":
                self.false_entries.add(code_of(rest))
            elif head == "+":
                for m in _entry_matches("subst_entry", toks):
                    self.subst_entries.add(tuple(m))


def _entry_matches(pat_name: str, toks: tuple[str, ...]) -> list[tuple[int, ...]]:
    return [tuple(code_of(p) for p in m)
            for m in _match_parts(_PATTERN_PARTS[pat_name], toks)]


@functools.lru_cache(maxsize=4096)
def _cert_of(y: int) -> _Cert:
    return _Cert(y)


def _has_occ(f: int, ds: int) -> bool:
    pat = ("v",) + toks_of(ds)
    toks = toks_of(f)
    for i in range(len(toks) - len(pat) + 1):
        if (tuple(toks[i:i + len(pat)]) == pat
                and (i + len(pat) >= len(toks) or not toks[i + len(pat)].startswith("d"))):
            return True
    return False


def _subst_total(f: int, ds: int, nu: int) -> Optional[int]:
    if _has_occ(nu, ds):
        return None
    pat = ("v",) + toks_of(ds)
    nut = toks_of(nu)
    toks = list(toks_of(f))
    out: list[str] = []
    i = 0
    while i < len(toks):
        if (tuple(toks[i:i + len(pat)]) == pat
                and (i + len(pat) >= len(toks) or not toks[i + len(pat)].startswith("d"))):
            out.extend(nut)
            i += len(pat)
        else:
            out.append(toks[i])
            i += 1
    return code_of(out)


def _term_entry_ok(t: int, b: int, c: _Cert, ctx: EvalContext) -> Tri:
    n = bin_value(b)
    if n is None:
        return F
    toks = toks_of(t)
    if toks == ("0",):
        return T if n == 0 else F
    if toks == ("1",):
        return T if n == 1 else F
    for m in _entry_matches("succ_code", toks):
        v = c.term_values.get(m[0])
        if v is not None and n == v + 1:
            return T
    for pat in ("add_code", "mul_code", "exp_code"):
        for m in _entry_matches(pat, toks):
            v1, v2 = c.term_values.get(m[0]), c.term_values.get(m[1])
            if v1 is None or v2 is None:
                continue
            if pat == "add_code" and n == v1 + v2:
                return T
            if pat == "mul_code" and n == v1 * v2:
                return T
            if pat == "exp_code":
                if v1 >= 2 and (v1.bit_length() - 1) * v2 > ctx.budget.term_value_cap.bit_length() + 64:
                    return X
                if n == v1 ** v2:
                    return T
    return F


def _quant_entry_ok(c: _Cert, ds: int, t: int, g: int, ctx: EvalContext, *,
                    strict: bool, forall: bool, truth: bool) -> Tri:
    m = c.term_values.get(t)
    if m is None:
        return F
    top = m - 1 if strict else m
    if top > ctx.budget.witness_cap:
        return X
    want = c.true_entries if truth else c.false_entries
    need_all = forall == truth

    def inst_ok(j: int) -> bool:
        bj = code_of(bin_tokens(j))
        for (tt, bb) in c.term_entries:
            if bb != bj:
                continue
            g2 = _subst_total(g, ds, tt)
            if g2 is not None and (ds, tt, g, g2) in c.subst_entries and g2 in want:
                return True
        return False

    if need_all:
        return T if all(inst_ok(j) for j in range(top + 1)) else F
    return T if any(inst_ok(j) for j in range(top + 1)) else F


def _formula_entry_ok(f: int, c: _Cert, ctx: EvalContext, *, truth: bool) -> Tri:
    toks = toks_of(f)
    if toks == (("top",) if truth else ("bot",)):
        return T
    for pat, test in (("atom_eq_code", lambda a, b: a == b),
                      ("atom_le_code", lambda a, b: a <= b),
                      ("atom_lt_code", lambda a, b: a < b)):
        for m in _entry_matches(pat, toks):
            v1, v2 = c.term_values.get(m[0]), c.term_values.get(m[1])
            if v1 is None or v2 is None:
                continue
            if test(v1, v2) == truth:
                return T
    for m in _entry_matches("not_code", toks):
        if m[0] in (c.false_entries if truth else c.true_entries):
            return T
    for pat in ("and_code", "or_code", "imp_code"):
        for g, h in _entry_matches(pat, toks):
            gt, gf = g in c.true_entries, g in c.false_entries
            ht, hf = h in c.true_entries, h in c.false_entries
            ok = {
                ("and_code", True): gt and ht, ("and_code", False): gf or hf,
                ("or_code", True): gt or ht, ("or_code", False): gf and hf,
                ("imp_code", True): gf or ht, ("imp_code", False): gt and hf,
            }[(pat, truth)]
            if ok:
                return T
    saw_x = False
    for pat, strict, forall in (("ball_le_code", False, True), ("ball_lt_code", True, True),
                                ("bex_le_code", False, False), ("bex_lt_code", True, False)):
        for m in _entry_matches(pat, toks):
            res = _quant_entry_ok(c, m[0], m[1], m[2], ctx,
                                  strict=strict, forall=forall, truth=truth)
            if res is T:
                return T
            if res is X:
                saw_x = True
    return X if saw_x else F


def _subst_entry_ok(ds: int, nu: int, f: int, g: int, c: _Cert) -> Tri:
    if _has_occ(nu, ds):
        return F
    if not _has_occ(f, ds):
        return T if f == g else F
    pat = ("v",) + toks_of(ds)
    toks = toks_of(f)
    nut = toks_of(nu)
    for i in range(len(toks) - len(pat) + 1):
        if (tuple(toks[i:i + len(pat)]) == pat
                and (i + len(pat) >= len(toks) or not toks[i + len(pat)].startswith("d"))):
            f2 = code_of(list(toks[:i]) + list(nut) + list(toks[i + len(pat):]))
            if (ds, nu, f2, g) in c.subst_entries:
                return T
    return F


def entry_ok_fn(ctx: EvalContext, args: tuple[int, ...]):
    e, y = args
    c = _cert_of(y)
    if not c.ok_shape:
        return F
    toks = toks_of(e)
    if not toks:
        return F
    head = toks[0]
    if head == "(":
        return T if len(toks) > 1 and all(t in ("0", "1") for t in toks[1:]) else F
    if head == ")":
        saw_x = False
        for t, b in _entry_matches("term_entry", toks):
            res = _term_entry_ok(t, b, c, ctx)
            if res is T:
                return T
            if res is X:
                saw_x = True
        return X if saw_x else F
    if head in (",", "="):
        return _formula_entry_ok(code_of(toks[1:]), c, ctx, truth=(head == ","))
    if head == "+":
        for ds, nu, f, g in _entry_matches("subst_entry", toks):
            if _subst_entry_ok(ds, nu, f, g, c) is T:
                return T
        return F
    return F


ENTRY_OK = _register(Relation("entry_ok", 2, _entry_ok_body(), entry_ok_fn))


# ---------------------------------------------------------------------------
# The root relation: True0(y, s)

def _true0_body() -> Formula:
    y, s = 0, 1
    ds, mx = 2, 3
    uz, we, bw, nw = 4, 5, 6, 7
    bnu, e1, nu, e2, inst, e3 = 8, 9, 10, 11, 12, 13
    u, e, ep = 14, 15, 16

    cert_ok = BForAll(u, Var(y), False, Imp(
        BExists(ep, Var(y), False, apply_relation("elem_occ", y, u, ep)),
        BForAll(e, Var(y), False, Imp(
            apply_relation("elem_occ", y, u, e),
            apply_relation("entry_ok", e, y)))))

    root = BExists(uz, One(), False, And(
        eq(Var(uz), syntax.ZERO),
        BExists(we, Var(y), False, And(
            apply_relation("elem_occ", y, uz, we),
            BExists(bw, Var(we), False, And(
                apply_relation("wit_entry", we, bw),
                BExists(nw, Var(bw), False, And(
                    apply_relation("bin_val", bw, nw),
                    BExists(bnu, Var(y), False, And(
                        apply_relation("bin_val", bnu, nw),
                        exists_entry(y, e1, BExists(nu, Var(e1), False, And(
                            apply_relation("term_entry", e1, nu, bnu),
                            exists_entry(y, e2, BExists(inst, Var(e2), False, And(
                                apply_relation("subst_entry", e2, ds, nu, mx, inst),
                                exists_entry(y, e3, apply_relation("true_entry", e3, inst)),
                            ))))))))))))))))

    return BExists(ds, Var(s), False, BExists(mx, Var(s), False, conj([
        apply_relation("ex_code", s, ds, mx),
        root,
        cert_ok,
    ])))


def true0_fn(ctx: EvalContext, args: tuple[int, ...]):
    y, s = args
    c = _cert_of(y)
    if not c.ok_shape:
        return F
    saw_x = False
    for ecode in c.all_entries:
        res = entry_ok_fn(ctx, (ecode, y))
        if res is F:
            return F
        if res is X:
            saw_x = True
    if c.first_witness is None:
        return F
    nw = bin_value(c.first_witness)
    if nw is None:
        return F
    heads = _entry_matches("ex_code", toks_of(s))
    root_ok = False
    bw = code_of(bin_tokens(nw))
    for ds, mx in heads:
        for (tt, bb) in c.term_entries:
            if bb != bw:
                continue
            inst = _subst_total(mx, ds, tt)
            if inst is not None and (ds, tt, mx, inst) in c.subst_entries and inst in c.true_entries:
                root_ok = True
                break
        if root_ok:
            break
    if not root_ok:
        return F
    return X if saw_x else T


TRUE0 = _register(Relation("true0", 2, _true0_body(), true0_fn))


# ---------------------------------------------------------------------------
# Certificate writer

class _CertFail(Exception):
    pass


def _eval_closed(f: Formula, budget: EvalBudget) -> Optional[bool]:
    r = eval_formula(f, budget)
    if r.is_true:
        return True
    if r.is_false:
        return False
    return None


class CertWriter:
    def __init__(self, budget: EvalBudget):
        self.budget = budget
        self.entries: set[tuple[str, ...]] = set()
        self.witness_entry: Optional[tuple[str, ...]] = None

    def fail(self) -> None:
        raise _CertFail()

    def term(self, t: Term) -> int:
        try:
            v = syntax.term_value(t)
        except (ValueError, OverflowError):
            self.fail()
        if v > self.budget.term_value_cap:
            self.fail()
        toks = tuple(syntax.term_tokens(t))
        self.entries.add((")",) + toks + ("(",) + bin_tokens(v))
        match t:
            case syntax.Succ(a):
                self.term(a)
            case syntax.Add(a, b) | syntax.Mul(a, b):
                self.term(a)
                self.term(b)
            case syntax.Exp(a, b):
                self.term(a)
                self.term(b)
            case _:
                pass
        return v

    def subst_chain(self, var: int, nu: Term, f: Formula) -> Formula:
        ds = tuple(f"d{c}" for c in str(var))
        nut = tuple(syntax.term_tokens(nu))
        inst = syntax.substitute(f, var, nu)
        cur = tuple(syntax.formula_tokens(f))
        final = tuple(syntax.formula_tokens(inst))
        pat = ("v",) + ds
        for _ in range(10_000):
            self.entries.add(("+", "v") + ds + (",",) + nut + (",",) + cur + (",",) + final)
            pos = None
            for i in range(len(cur) - len(pat) + 1):
                if (cur[i:i + len(pat)] == pat
                        and (i + len(pat) >= len(cur) or not cur[i + len(pat)].startswith("d"))):
                    pos = i
                    break
            if pos is None:
                break
            cur = cur[:pos] + nut + cur[pos + len(pat):]
        if cur != final:
            self.fail()
        return inst

    def formula(self, f: Formula, truth: bool) -> None:
        toks = tuple(syntax.formula_tokens(f))
        key = ("," if truth else "=",) + toks
        if key in self.entries:
            return
        self.entries.add(key)
        match f:
            case syntax.Top():
                if not truth:
                    self.fail()
            case syntax.Bot():
                if truth:
                    self.fail()
            case syntax.Atom(rel, a, b):
                va, vb = self.term(a), self.term(b)
                holds = {"=": va == vb, "<=": va <= vb, "<": va < vb}[rel]
                if holds != truth:
                    self.fail()
            case syntax.Not(g):
                self.formula(g, not truth)
            case syntax.And(a, b):
                if truth:
                    self.formula(a, True)
                    self.formula(b, True)
                else:
                    g = a if _eval_closed(a, self.budget) is False else b
                    self.formula(g, False)
            case syntax.Or(a, b):
                if truth:
                    g = a if _eval_closed(a, self.budget) is True else b
                    self.formula(g, True)
                else:
                    self.formula(a, False)
                    self.formula(b, False)
            case syntax.Imp(a, b):
                if truth:
                    if _eval_closed(a, self.budget) is False:
                        self.formula(a, False)
                    else:
                        self.formula(b, True)
                else:
                    self.formula(a, True)
                    self.formula(b, False)
            case syntax.BForAll(x, bound, strict, body) | syntax.BExists(x, bound, strict, body):
                is_all = isinstance(f, syntax.BForAll)
                mv = self.term(bound)
                top = mv - 1 if strict else mv
                if top > self.budget.witness_cap:
                    self.fail()
                need_all = is_all == truth
                found = False
                for j in range(top + 1):
                    wanted = need_all
                    if not need_all:
                        wanted = _eval_closed(
                            syntax.substitute(body, x, numeral(j)), self.budget) is truth
                    if wanted:
                        nu = numeral(j)
                        self.term(nu)
                        inst = self.subst_chain(x, nu, body)
                        self.formula(inst, truth)
                        if not need_all:
                            found = True
                            break
                if not need_all and not found:
                    self.fail()
            case _:
                self.fail()

    def build(self, sentence: Formula) -> Optional[int]:
        if not isinstance(sentence, Exists):
            return None
        res = eval_formula(sentence, self.budget)
        if not res.is_true or res.witness is None:
            return None
        w = res.witness
        try:
            self.witness_entry = ("(",) + bin_tokens(w)
            nu = numeral(w)
            self.term(nu)
            inst = self.subst_chain(sentence.var, nu, sentence.body)
            self.formula(inst, True)
        except _CertFail:
            return None
        ordered = [self.witness_entry] + sorted(self.entries, key=lambda ts: (len(ts), ts))
        toks: list[str] = []
        for i, entry in enumerate(ordered):
            if i:
                toks.append(";")
            toks.extend(entry)
        return code_of(toks)


def write_certificate(sentence: Formula, budget: EvalBudget = EvalBudget()) -> Optional[int]:
    """Certificate code for a true existential sentence, or None when the
    budget does not suffice."""
    return CertWriter(budget).build(sentence)
