"""Primitive relations over Goedel codes.

Each relation couples an honest exp-bounded formula body (what the emitted
predicates are made of) with a direct computation on the integers and, where
useful, a complete solution enumerator that the evaluator's witness solver
can call.  The direct computations are property-tested against raw
evaluation of the bodies on small instances, so the fast path never becomes
an unchecked oracle.

Everything here is pinned to the default 32-token alphabet; the manifest
records that choice.
"""

from __future__ import annotations

import functools
from typing import Optional

from . import coding
from .coding import DEFAULT_ALPHABET, SEPARATOR
from .evaluator import (
    EvalContext, Relation, Registry, T, F, X, Tri, default_registry,
)
from .syntax import (
    Add, And, Atom, BExists, BForAll, Bot, Exists, Exp, ForAll, Formula, Imp,
    Mul, Not, One, Or, Succ, Term, Top, Var, Zero, conj, disj, eq, le, lt,
    numeral,
)

K = DEFAULT_ALPHABET.size  # 32
K_TERM = numeral(K)
KM1_TERM = numeral(K - 1)

TOKDIG = {tok: i + 1 for i, tok in enumerate(DEFAULT_ALPHABET.tokens)}
SEP_DIG = TOKDIG[SEPARATOR]
DIGIT_LO = TOKDIG["d0"]
DIGIT_HI = TOKDIG["d9"]
BIN0 = TOKDIG["0"]
BIN1 = TOKDIG["1"]


@functools.lru_cache(maxsize=65536)
def toks_of(code: int) -> tuple[str, ...]:
    return tuple(coding.decode_string(code))


def code_of(tokens) -> int:
    return coding.encode_string(list(tokens))


def strlen(code: int) -> int:
    return coding.string_length(code)


def concat_int(a: int, b: int) -> int:
    return a * K ** strlen(b) + b


def elements_of(code: int) -> Optional[list[tuple[int, int]]]:
    """(prefix_code, element_code) pairs for every element occurrence: the
    maximal nonempty separator-free runs, with the prefix covering everything
    strictly before the run (including its trailing separator).  This is
    exactly the decomposition the occurrence formulas admit.  None when the
    string is empty."""
    toks = toks_of(code)
    if not toks:
        return None
    out = []
    i = 0
    while i < len(toks):
        if toks[i] == SEPARATOR:
            i += 1
            continue
        j = i
        while j < len(toks) and toks[j] != SEPARATOR:
            j += 1
        out.append((code_of(toks[:i]), code_of(toks[i:j])))
        i = j
    return out


def bin_tokens(n: int) -> tuple[str, ...]:
    """Bijective-binary token string denoting n (digit string of n+1)."""
    m = n + 1
    out: list[str] = []
    while m > 0:
        m, r = divmod(m - 1, 2)
        out.append("0" if r == 0 else "1")
    out.reverse()
    return tuple(out)


def bin_value(code: int) -> Optional[int]:
    toks = toks_of(code)
    if not toks or any(t not in ("0", "1") for t in toks):
        return None
    m = 0
    for t in toks:
        m = m * 2 + (1 if t == "0" else 2)
    return m - 1


# ---------------------------------------------------------------------------
# Registration helpers

_REGISTERED: dict[str, Relation] = {}


def _register(rel: Relation) -> Relation:
    default_registry().register(rel)
    _REGISTERED[rel.name] = rel
    return rel


def relation(name: str) -> Relation:
    return _REGISTERED[name]


def apply_relation(name: str, *args: "Term | int") -> Formula:
    """Instantiate a registered relation body at the given argument terms.

    Variable arguments substitute directly (preserving the registry
    pattern); other terms are bound through an existential equality so the
    instantiated subtree still hash-matches the registered body."""
    rel = _REGISTERED[name]
    from .syntax import all_vars, substitute, term_vars
    body = rel.body
    taken = set(all_vars(body))
    for a in args:
        if isinstance(a, int):
            taken.add(a)
        elif isinstance(a, Var):
            taken.add(a.index)
        else:
            taken |= set(term_vars(a))
    fresh = max(taken, default=-1) + 1
    pre: list[tuple[int, Term]] = []
    arg_vars: list[int] = []
    for a in args:
        if isinstance(a, int):
            arg_vars.append(a)
        elif isinstance(a, Var):
            arg_vars.append(a.index)
        else:
            pre.append((fresh, a))
            arg_vars.append(fresh)
            fresh += 1
    # substitute pattern variables (0..arity-1) by the argument variables,
    # via a temporary high range to avoid collisions
    tmp = fresh
    for i in range(rel.arity):
        body = substitute(body, i, Var(tmp + i))
    for i, v in enumerate(arg_vars):
        body = substitute(body, tmp + i, Var(v))
    for v, t in reversed(pre):
        body = Exists(v, And(eq(Var(v), t), body))
    return body


def _term_vars_objs(t: Term):
    from .syntax import term_vars
    return [Var(i) for i in term_vars(t)]


# ---------------------------------------------------------------------------
# LenPow(v, e): e = K ** len(v)

def _lenpow_body() -> Formula:
    v, e, l = Var(0), Var(1), Var(2)
    return BExists(2, e, False, conj([
        eq(e, Exp(K_TERM, l)),
        le(e, Add(Mul(KM1_TERM, v), One())),
        le(Add(Mul(KM1_TERM, v), K_TERM), Mul(K_TERM, e)),
    ]))


def _lenpow_fn(ctx: EvalContext, args: tuple[int, ...]):
    v, e = args
    return T if e == K ** strlen(v) else F


def _lenpow_solve(ctx: EvalContext, known: dict[int, int]):
    if 0 in known:
        return [{0: known[0], 1: K ** strlen(known[0])}]
    return None


LEN_POW = _register(Relation("len_pow", 2, _lenpow_body(), _lenpow_fn, _lenpow_solve))


# ---------------------------------------------------------------------------
# Concat(u, v, w): w = u followed by v

def _concat_body() -> Formula:
    u, v, w, e = Var(0), Var(1), Var(2), Var(3)
    return BExists(3, Add(Mul(KM1_TERM, v), One()), False, And(
        apply_relation("len_pow", v, e),
        eq(w, Add(Mul(u, e), v)),
    ))


def _concat_fn(ctx: EvalContext, args: tuple[int, ...]):
    u, v, w = args
    return T if w == concat_int(u, v) else F


def _concat_solve(ctx: EvalContext, known: dict[int, int]):
    u, v, w = known.get(0), known.get(1), known.get(2)
    if u is not None and v is not None:
        return [{0: u, 1: v, 2: concat_int(u, v)}]
    if w is not None:
        toks = toks_of(w)
        if u is not None:
            pre = toks_of(u)
            if toks[:len(pre)] != pre:
                return []
            return [{0: u, 1: code_of(toks[len(pre):]), 2: w}]
        if v is not None:
            suf = toks_of(v)
            if len(suf) > len(toks) or (len(suf) and toks[-len(suf):] != suf):
                return []
            return [{0: code_of(toks[:len(toks) - len(suf)]), 1: v, 2: w}]
        return [{0: code_of(toks[:i]), 1: code_of(toks[i:]), 2: w}
                for i in range(len(toks) + 1)]
    return None


CONCAT = _register(Relation("concat", 3, _concat_body(), _concat_fn, _concat_solve))


# ---------------------------------------------------------------------------
# Character-class relations

def _char_class_body(lo: int, hi: int, negate_class: bool) -> Formula:
    """No decomposition x = a . c . b exists with single char c violating
    (lo <= c <= hi) (or satisfying it, when negate_class)."""
    x, a, c, m, b = Var(0), Var(1), Var(2), Var(3), Var(4)
    in_class = And(le(numeral(lo), c), le(c, numeral(hi)))
    bad = Not(in_class) if not negate_class else in_class
    return Not(
        BExists(1, x, False,
        BExists(2, K_TERM, False,
        BExists(3, x, False,
        BExists(4, x, False, conj([
            le(One(), c),
            bad,
            apply_relation("concat", c, b, m),
            apply_relation("concat", a, m, x),
        ]))))))


def _class_fn(lo: int, hi: int, negate: bool):
    def fn(ctx: EvalContext, args: tuple[int, ...]):
        for t in toks_of(args[0]):
            d = TOKDIG[t]
            inside = lo <= d <= hi
            if (not inside) if not negate else inside:
                return F
        return T
    return fn


SEP_FREE = _register(Relation(
    "sep_free", 1, _char_class_body(1, K - 1, False), _class_fn(1, K - 1, False)))
ALL_DIGITS = _register(Relation(
    "all_index_digits", 1, _char_class_body(DIGIT_LO, DIGIT_HI, False),
    _class_fn(DIGIT_LO, DIGIT_HI, False)))
ALL_BINARY = _register(Relation(
    "all_binary", 1, _char_class_body(BIN0, BIN1, False), _class_fn(BIN0, BIN1, False)))


# ---------------------------------------------------------------------------
# ElemOcc(w, u, x): u is the part strictly before an occurrence of element x
# in the separator-joined sequence w (u includes its trailing separator).

def _elemocc_body() -> Formula:
    w, u, x = Var(0), Var(1), Var(2)
    b, m = Var(3), Var(4)
    up, us = Var(5), Var(6)
    bp, bs = Var(7), Var(8)
    u_ok = Or(eq(u, Zero()),
              BExists(5, u, False, BExists(6, K_TERM, False, And(
                  eq(us, K_TERM),
                  apply_relation("concat", up, us, u)))))
    b_ok = Or(eq(b, Zero()),
              BExists(7, b, False, BExists(8, K_TERM, False, And(
                  eq(bs, K_TERM),
                  apply_relation("concat", bs, bp, b)))))
    # m before b: m is solvable from (u, w), then b from (x, m)
    return BExists(4, w, False, BExists(3, w, False, conj([
        apply_relation("concat", x, b, m),
        apply_relation("concat", u, m, w),
        apply_relation("sep_free", x),
        le(One(), x),
        u_ok,
        b_ok,
    ])))


def _elemocc_fn(ctx: EvalContext, args: tuple[int, ...]):
    w, u, x = args
    elems = elements_of(w)
    if elems is None:
        return F
    return T if any(pu == u and px == x for pu, px in elems) else F


def _elemocc_solve(ctx: EvalContext, known: dict[int, int]):
    w = known.get(0)
    if w is None:
        return None
    elems = elements_of(w)
    if elems is None:
        return []
    out = []
    for pu, px in elems:
        if 1 in known and known[1] != pu:
            continue
        if 2 in known and known[2] != px:
            continue
        out.append({0: w, 1: pu, 2: px})
    return out


ELEM_OCC = _register(Relation("elem_occ", 3, _elemocc_body(), _elemocc_fn, _elemocc_solve))


def _occursin_body() -> Formula:
    w, x, u = Var(0), Var(1), Var(2)
    return BExists(2, w, False, apply_relation("elem_occ", w, u, x))


def _occursin_fn(ctx: EvalContext, args: tuple[int, ...]):
    w, x = args
    elems = elements_of(w)
    if elems is None:
        return F
    return T if any(px == x for _, px in elems) else F


def _occursin_solve(ctx: EvalContext, known: dict[int, int]):
    w = known.get(0)
    if w is None:
        return None
    elems = elements_of(w)
    if elems is None:
        return []
    out = []
    seen = set()
    for _, px in elems:
        if px in seen:
            continue
        seen.add(px)
        if 1 in known and known[1] != px:
            continue
        out.append({0: w, 1: px})
    return out


OCCURS_IN = _register(Relation("occurs_in", 2, _occursin_body(), _occursin_fn, _occursin_solve))


def _lastelem_body() -> Formula:
    w, x, u = Var(0), Var(1), Var(2)
    return BExists(2, w, False, And(
        apply_relation("elem_occ", w, u, x),
        apply_relation("concat", u, x, w),
    ))


def _lastelem_fn(ctx: EvalContext, args: tuple[int, ...]):
    w, x = args
    elems = elements_of(w)
    if elems is None:
        return F
    pu, px = elems[-1]
    return T if px == x and concat_int(pu, px) == w else F


def _lastelem_solve(ctx: EvalContext, known: dict[int, int]):
    w = known.get(0)
    if w is None:
        return None
    elems = elements_of(w)
    if elems is None:
        return []
    pu, px = elems[-1]
    if 1 in known and known[1] != px:
        return []
    return [{0: w, 1: px}]


LAST_ELEM = _register(Relation("last_elem", 2, _lastelem_body(), _lastelem_fn, _lastelem_solve))


# ---------------------------------------------------------------------------
# BinVal(r, n): r codes the bijective-binary token string denoting n.
#
# With m = n + 1 of bijective-binary length L and offset o = n + 2 - 2**L,
# the digit at position i from the right is 1 + bit_i(o); the corresponding
# token has digit value 3 + bit_i(o).  Digits of r are read off by string
# decomposition, which the concat solver can enumerate.

def _binval_body() -> Formula:
    r, n = Var(0), Var(1)
    two = numeral(2)
    L, P, o, e = Var(2), Var(3), Var(4), Var(5)
    i = Var(6)
    pre, c, suf, m, ph = Var(7), Var(8), Var(9), Var(10), Var(11)
    pb, bit, q, rest = Var(12), Var(13), Var(14), Var(15)

    bit_cond = BExists(12, P, False, And(
        eq(pb, Exp(two, i)),
        BExists(13, One(), False, BExists(14, o, False, BExists(15, pb, False, conj([
            eq(o, Add(Mul(q, Mul(two, pb)), Add(Mul(bit, pb), rest))),
            lt(rest, pb),
            eq(c, Add(numeral(3), bit)),
        ]))))))

    # nesting order matters for witness solving: pre and m split r, then c
    # and suf split m, then ph is pinned by i
    digit_cond = BForAll(6, L, True,
        BExists(7, r, False, BExists(10, r, False, BExists(8, K_TERM, False,
        BExists(9, r, False, BExists(11, e, False, conj([
            apply_relation("concat", pre, m, r),
            apply_relation("concat", c, suf, m),
            le(One(), c),
            eq(ph, Exp(K_TERM, i)),
            apply_relation("len_pow", suf, ph),
            bit_cond,
        ])))))))

    return BExists(2, Add(n, two), False, BExists(3, Add(n, two), False, conj([
        eq(P, Exp(two, L)),
        le(P, Add(n, two)),
        lt(Add(n, two), Mul(two, P)),
        BExists(4, P, False, conj([
            eq(Add(n, two), Add(P, o)),
            lt(o, P),
            BExists(5, Add(Mul(KM1_TERM, r), One()), False, conj([
                apply_relation("len_pow", r, e),
                eq(e, Exp(K_TERM, L)),
                digit_cond,
            ])),
        ])),
    ])))


def _binval_fn(ctx: EvalContext, args: tuple[int, ...]):
    r, n = args
    return T if code_of(bin_tokens(n)) == r else F


def _binval_solve(ctx: EvalContext, known: dict[int, int]):
    if 1 in known:
        return [{0: code_of(bin_tokens(known[1])), 1: known[1]}]
    if 0 in known:
        v = bin_value(known[0])
        return [] if v is None else [{0: known[0], 1: v}]
    return None


BIN_VAL = _register(Relation("bin_val", 2, _binval_body(), _binval_fn, _binval_solve))


# ---------------------------------------------------------------------------
# Pattern relations: x = part1 . part2 . ... with literal anchors and slots

class Lit:
    def __init__(self, *tokens: str):
        self.tokens = tokens
        self.code = code_of(tokens)


class Slot:
    # kinds: "any" (nonempty), "any0" (may be empty), "char" (single token),
    # "digits" (nonempty run of index digits), "binary" (nonempty 0/1 run)
    def __init__(self, kind: str = "any"):
        self.kind = kind


class Ref:
    """Repetition of an earlier slot (by slot index)."""

    def __init__(self, idx: int):
        self.idx = idx


_SLOT_CHARSET = {
    "digits": frozenset(f"d{i}" for i in range(10)),
    "binary": frozenset(("0", "1")),
}


def _slot_ok(kind: str, toks: tuple[str, ...]) -> bool:
    if kind == "any0":
        return True
    if not toks:
        return False
    if kind == "char":
        return len(toks) == 1
    allowed = _SLOT_CHARSET.get(kind)
    return allowed is None or all(t in allowed for t in toks)


def _pattern_body(parts: list) -> Formula:
    """x = concatenation of parts.  x is Var(0); slot i binds Var(1 + i) in
    order of appearance."""
    n_slots = sum(1 for p in parts if isinstance(p, Slot))
    x = Var(0)
    conds: list[Formula] = []
    piece_vars: list[Var] = []
    next_free = 1 + n_slots
    slot_idx = 0
    for p in parts:
        if isinstance(p, Lit):
            lv = Var(next_free)
            next_free += 1
            conds.append(eq(lv, numeral(p.code)))
            piece_vars.append(lv)
        elif isinstance(p, Ref):
            piece_vars.append(Var(1 + p.idx))
        else:
            sv = Var(1 + slot_idx)
            slot_idx += 1
            if p.kind == "char":
                conds.append(le(One(), sv))
                conds.append(le(sv, K_TERM))
            elif p.kind != "any0":
                conds.append(le(One(), sv))
            if p.kind in _SLOT_CHARSET:
                conds.append(apply_relation(
                    "all_index_digits" if p.kind == "digits" else "all_binary", sv))
            piece_vars.append(sv)
    acc = piece_vars[-1]
    for pv in reversed(piece_vars[:-1]):
        mv = Var(next_free)
        next_free += 1
        conds.append(apply_relation("concat", pv, acc, mv))
        acc = mv
    conds.append(eq(x, acc))
    body: Formula = conj(conds)
    for v in range(1 + n_slots, next_free):
        body = BExists(v, x, False, body)
    return body


def _match_parts(parts: list, toks: tuple[str, ...]) -> list[tuple[tuple[str, ...], ...]]:
    """All ways to split toks by the pattern; returns slot token tuples."""
    out: list[tuple[tuple[str, ...], ...]] = []

    def go(pi: int, pos: int, acc: list[tuple[str, ...]]):
        if pi == len(parts):
            if pos == len(toks):
                out.append(tuple(acc))
            return
        p = parts[pi]
        if isinstance(p, Lit):
            end = pos + len(p.tokens)
            if toks[pos:end] == p.tokens:
                go(pi + 1, end, acc)
            return
        if isinstance(p, Ref):
            piece = acc[p.idx]
            end = pos + len(piece)
            if toks[pos:end] == piece:
                go(pi + 1, end, acc)
            return
        if p.kind == "char":
            if pos < len(toks):
                go(pi + 1, pos + 1, acc + [toks[pos:pos + 1]])
            return
        lo = 0 if p.kind == "any0" else 1
        allowed = _SLOT_CHARSET.get(p.kind)
        for end in range(pos + lo, len(toks) + 1):
            piece = toks[pos:end]
            if allowed is not None and any(t not in allowed for t in piece):
                break
            go(pi + 1, end, acc + [piece])

    go(0, 0, [])
    return out


_PATTERN_PARTS: dict[str, list] = {}


def _rebuild(parts: list, slot_codes: tuple[int, ...]) -> Optional[list[str]]:
    toks: list[str] = []
    si = 0
    for p in parts:
        if isinstance(p, Lit):
            toks.extend(p.tokens)
        elif isinstance(p, Ref):
            toks.extend(toks_of(slot_codes[p.idx]))
        else:
            st = toks_of(slot_codes[si])
            if not _slot_ok(p.kind, st):
                return None
            toks.extend(st)
            si += 1
    return toks


def make_pattern_relation(name: str, parts: list) -> Relation:
    n_slots = sum(1 for p in parts if isinstance(p, Slot))
    _PATTERN_PARTS[name] = parts

    def fn(ctx: EvalContext, args: tuple[int, ...]):
        toks = _rebuild(parts, args[1:])
        return T if toks is not None and code_of(toks) == args[0] else F

    def solve(ctx: EvalContext, known: dict[int, int]):
        if 0 not in known:
            if all(1 + i in known for i in range(n_slots)):
                toks = _rebuild(parts, tuple(known[1 + i] for i in range(n_slots)))
                if toks is None:
                    return []
                sol = {0: code_of(toks)}
                sol.update(known)
                return [sol]
            return None
        matches = _match_parts(parts, toks_of(known[0]))
        out = []
        for m in matches:
            sol = {0: known[0]}
            good = True
            for i, piece in enumerate(m):
                c = code_of(piece)
                if 1 + i in known and known[1 + i] != c:
                    good = False
                    break
                sol[1 + i] = c
            if good:
                out.append(sol)
        return out

    return _register(Relation(name, 1 + n_slots, _pattern_body(parts), fn, solve))


# formula/term constructors at the string level
IMP_CODE = make_pattern_relation("imp_code", [Lit("("), Slot(), Lit("imp"), Slot(), Lit(")")])
AND_CODE = make_pattern_relation("and_code", [Lit("("), Slot(), Lit("and"), Slot(), Lit(")")])
OR_CODE = make_pattern_relation("or_code", [Lit("("), Slot(), Lit("or"), Slot(), Lit(")")])
NOT_CODE = make_pattern_relation("not_code", [Lit("not"), Slot()])
ATOM_EQ_CODE = make_pattern_relation("atom_eq_code", [Lit("("), Slot(), Lit("="), Slot(), Lit(")")])
ATOM_LE_CODE = make_pattern_relation("atom_le_code", [Lit("("), Slot(), Lit("<="), Slot(), Lit(")")])
ATOM_LT_CODE = make_pattern_relation("atom_lt_code", [Lit("("), Slot(), Lit("<"), Slot(), Lit(")")])
SUCC_CODE = make_pattern_relation("succ_code", [Lit("S", "("), Slot(), Lit(")")])
ADD_CODE = make_pattern_relation("add_code", [Lit("("), Slot(), Lit("+"), Slot(), Lit(")")])
MUL_CODE = make_pattern_relation("mul_code", [Lit("("), Slot(), Lit("*"), Slot(), Lit(")")])
EXP_CODE = make_pattern_relation("exp_code", [Lit("exp", "("), Slot(), Lit(","), Slot(), Lit(")")])
EX_CODE = make_pattern_relation("ex_code", [Lit("ex", "v"), Slot("digits"), Slot()])
ALL_CODE = make_pattern_relation("all_code", [Lit("all", "v"), Slot("digits"), Slot()])
BALL_LE_CODE = make_pattern_relation("ball_le_code", [Lit("all", "v"), Slot("digits"), Lit("<="), Slot(), Slot()])
BALL_LT_CODE = make_pattern_relation("ball_lt_code", [Lit("all", "v"), Slot("digits"), Lit("<"), Slot(), Slot()])
BEX_LE_CODE = make_pattern_relation("bex_le_code", [Lit("ex", "v"), Slot("digits"), Lit("<="), Slot(), Slot()])
BEX_LT_CODE = make_pattern_relation("bex_lt_code", [Lit("ex", "v"), Slot("digits"), Lit("<"), Slot(), Slot()])

# certificate entry shapes
WIT_ENTRY = make_pattern_relation("wit_entry", [Lit("("), Slot("binary")])
TERM_ENTRY = make_pattern_relation("term_entry", [Lit(")"), Slot(), Lit("("), Slot("binary")])
TRUE_ENTRY = make_pattern_relation("true_entry", [Lit(","), Slot()])
FALSE_ENTRY = make_pattern_relation("false_entry", [Lit("="), Slot()])
SUBST_ENTRY = make_pattern_relation(
    "subst_entry", [Lit("+", "v"), Slot("digits"), Lit(","), Slot(), Lit(","), Slot(), Lit(","), Slot()])
VAR_OCC_SPLIT = make_pattern_relation("var_occ_split", [Slot(), Lit("v"), Slot("digits"), Slot("any0")])
FIRST_CHAR = make_pattern_relation("first_char", [Slot("char"), Slot("any0")])
