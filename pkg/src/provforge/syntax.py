"""First-order arithmetic terms and formulas.

The language has constants 0 and 1, successor, +, *, exp, the relations
=, <= and <, the propositional connectives, unbounded quantifiers and
*primitive* bounded quantifiers (so the exp-bounded fragment is a purely
syntactic class).  Values are immutable; every operation here is a pure
function.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union

# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    index: int

    def __repr__(self) -> str:
        return f"v{self.index}"


@dataclass(frozen=True)
class Zero:
    def __repr__(self) -> str:
        return "0"


@dataclass(frozen=True)
class One:
    def __repr__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Succ:
    arg: "Term"

    def __repr__(self) -> str:
        return f"S({self.arg!r})"


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"

    def __repr__(self) -> str:
        return f"({self.left!r}+{self.right!r})"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"

    def __repr__(self) -> str:
        return f"({self.left!r}*{self.right!r})"


@dataclass(frozen=True)
class Exp:
    base: "Term"
    power: "Term"

    def __repr__(self) -> str:
        return f"exp({self.base!r},{self.power!r})"


Term = Union[Var, Zero, One, Succ, Add, Mul, Exp]

ZERO = Zero()
ONE = One()
TWO = Succ(ONE)

# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Atom:
    rel: str  # "=", "<=", "<"
    left: Term
    right: Term


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class BForAll:
    var: int
    bound: Term
    strict: bool
    body: "Formula"


@dataclass(frozen=True)
class BExists:
    var: int
    bound: Term
    strict: bool
    body: "Formula"


Formula = Union[Atom, Bot, Top, Not, And, Or, Imp, ForAll, Exists, BForAll, BExists]

BOT = Bot()
TOP = Top()


class FormulaClass(enum.Enum):
    DELTA0EXP = "Delta0exp"
    SIGMA1 = "Sigma1"
    PI1 = "Pi1"
    SIGMA11 = "Sigma11"
    SIGMA2 = "Sigma2"
    OTHER = "Other"


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at token {position})")
        self.position = position


class NotSigma1(ValueError):
    """sigma1_normalize cannot rewrite the formula into an exists-prefix form."""


# ---------------------------------------------------------------------------
# Helpers: equality of relations, conjunction/disjunction builders


def eq(left: Term, right: Term) -> Atom:
    return Atom("=", left, right)


def le(left: Term, right: Term) -> Atom:
    return Atom("<=", left, right)


def lt(left: Term, right: Term) -> Atom:
    return Atom("<", left, right)


def conj(parts: list) -> Formula:
    if not parts:
        return TOP
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disj(parts: list) -> Formula:
    if not parts:
        return BOT
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


# ---------------------------------------------------------------------------
# Numerals

def numeral(n: int) -> Term:
    """Binary-structured numeral for ``n``; the term has size O(log n).

    Built codes of concrete sentences are astronomically large, so iterated
    successors are not an option.
    """
    if n < 0:
        raise ValueError("numerals denote naturals")
    if n == 0:
        return ZERO
    if n == 1:
        return ONE
    half = numeral(n // 2)
    doubled = Mul(half, TWO)
    return Succ(doubled) if n % 2 else doubled


def term_value(t: Term, env: dict[int, int] | None = None) -> int:
    """Standard-model value of a term (no caps; the evaluator adds budgets)."""
    match t:
        case Var(i):
            if env is None or i not in env:
                raise ValueError(f"unbound variable v{i}")
            return env[i]
        case Zero():
            return 0
        case One():
            return 1
        case Succ(a):
            return term_value(a, env) + 1
        case Add(a, b):
            return term_value(a, env) + term_value(b, env)
        case Mul(a, b):
            return term_value(a, env) * term_value(b, env)
        case Exp(a, b):
            return term_value(a, env) ** term_value(b, env)
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Variables, substitution

# Variable-set caches are keyed by object id and hold a strong reference to
# the node, so ids stay valid; formula values are immutable.
_TV_CACHE: dict[int, tuple] = {}
_FV_CACHE: dict[int, tuple] = {}
_AV_CACHE: dict[int, tuple] = {}


def term_vars(t: Term) -> frozenset[int]:
    got = _TV_CACHE.get(id(t))
    if got is not None:
        return got[1]
    match t:
        case Var(i):
            out = frozenset((i,))
        case Zero() | One():
            out = frozenset()
        case Succ(a):
            out = term_vars(a)
        case Add(a, b) | Mul(a, b) | Exp(a, b):
            out = term_vars(a) | term_vars(b)
        case _:
            raise TypeError(f"not a term: {t!r}")
    _TV_CACHE[id(t)] = (t, out)
    return out


def free_vars(f: Formula) -> frozenset[int]:
    got = _FV_CACHE.get(id(f))
    if got is not None:
        return got[1]
    match f:
        case Atom(_, a, b):
            out = term_vars(a) | term_vars(b)
        case Bot() | Top():
            out = frozenset()
        case Not(b):
            out = free_vars(b)
        case And(a, b) | Or(a, b) | Imp(a, b):
            out = free_vars(a) | free_vars(b)
        case ForAll(x, b) | Exists(x, b):
            out = free_vars(b) - {x}
        case BForAll(x, t, _, b) | BExists(x, t, _, b):
            out = term_vars(t) | (free_vars(b) - {x})
        case _:
            raise TypeError(f"not a formula: {f!r}")
    _FV_CACHE[id(f)] = (f, out)
    return out


def all_vars(f: Formula) -> frozenset[int]:
    got = _AV_CACHE.get(id(f))
    if got is not None:
        return got[1]
    match f:
        case Atom(_, a, b):
            out = term_vars(a) | term_vars(b)
        case Bot() | Top():
            out = frozenset()
        case Not(b):
            out = all_vars(b)
        case And(a, b) | Or(a, b) | Imp(a, b):
            out = all_vars(a) | all_vars(b)
        case ForAll(x, b) | Exists(x, b):
            out = all_vars(b) | {x}
        case BForAll(x, t, _, b) | BExists(x, t, _, b):
            out = term_vars(t) | all_vars(b) | {x}
        case _:
            raise TypeError(f"not a formula: {f!r}")
    _AV_CACHE[id(f)] = (f, out)
    return out


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def subst_term(t: Term, var: int, repl: Term) -> Term:
    if var not in term_vars(t):
        return t
    match t:
        case Var(i):
            return repl if i == var else t
        case Zero() | One():
            return t
        case Succ(a):
            return Succ(subst_term(a, var, repl))
        case Add(a, b):
            return Add(subst_term(a, var, repl), subst_term(b, var, repl))
        case Mul(a, b):
            return Mul(subst_term(a, var, repl), subst_term(b, var, repl))
        case Exp(a, b):
            return Exp(subst_term(a, var, repl), subst_term(b, var, repl))
    raise TypeError(f"not a term: {t!r}")


def substitute(f: Formula, var: int, repl: Term) -> Formula:
    """Capture-avoiding substitution of ``repl`` for free ``var`` in ``f``.

    Bound variables that would capture a variable of ``repl`` are renamed
    first, so the operation is total.  Untouched subtrees are shared."""
    repl_vars = term_vars(repl)

    def fresh(taken: frozenset[int]) -> int:
        return max(taken, default=-1) + 1

    def go(g: Formula) -> Formula:
        if var not in free_vars(g):
            return g
        match g:
            case Atom(rel, a, b):
                return Atom(rel, subst_term(a, var, repl), subst_term(b, var, repl))
            case Bot() | Top():
                return g
            case Not(b):
                return Not(go(b))
            case And(a, b):
                return And(go(a), go(b))
            case Or(a, b):
                return Or(go(a), go(b))
            case Imp(a, b):
                return Imp(go(a), go(b))
            case ForAll(x, b) | Exists(x, b):
                ctor = ForAll if isinstance(g, ForAll) else Exists
                if x in repl_vars:
                    nx = fresh(repl_vars | all_vars(b) | {var})
                    b = substitute(b, x, Var(nx))
                    x = nx
                return ctor(x, go(b))
            case BForAll(x, t, s, b) | BExists(x, t, s, b):
                ctor = BForAll if isinstance(g, BForAll) else BExists
                nt = subst_term(t, var, repl)
                if x == var or var not in free_vars(b):
                    return ctor(x, nt, s, b)
                if x in repl_vars:
                    nx = fresh(repl_vars | all_vars(b) | {var})
                    b = substitute(b, x, Var(nx))
                    x = nx
                return ctor(x, nt, s, go(b))
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


# ---------------------------------------------------------------------------
# Canonical printing / token strings

_REL_TOKEN = {"=": "=", "<=": "<=", "<": "<"}


def term_tokens(t: Term) -> list[str]:
    match t:
        case Var(i):
            return ["v"] + [f"d{c}" for c in str(i)]
        case Zero():
            return ["0"]
        case One():
            return ["1"]
        case Succ(a):
            return ["S", "("] + term_tokens(a) + [")"]
        case Add(a, b):
            return ["("] + term_tokens(a) + ["+"] + term_tokens(b) + [")"]
        case Mul(a, b):
            return ["("] + term_tokens(a) + ["*"] + term_tokens(b) + [")"]
        case Exp(a, b):
            return ["exp", "("] + term_tokens(a) + [","] + term_tokens(b) + [")"]
    raise TypeError(f"not a term: {t!r}")


def formula_tokens(f: Formula) -> list[str]:
    match f:
        case Atom(rel, a, b):
            return ["("] + term_tokens(a) + [_REL_TOKEN[rel]] + term_tokens(b) + [")"]
        case Bot():
            return ["bot"]
        case Top():
            return ["top"]
        case Not(b):
            return ["not"] + formula_tokens(b)
        case And(a, b):
            return ["("] + formula_tokens(a) + ["and"] + formula_tokens(b) + [")"]
        case Or(a, b):
            return ["("] + formula_tokens(a) + ["or"] + formula_tokens(b) + [")"]
        case Imp(a, b):
            return ["("] + formula_tokens(a) + ["imp"] + formula_tokens(b) + [")"]
        case ForAll(x, b):
            return ["all", "v"] + [f"d{c}" for c in str(x)] + formula_tokens(b)
        case Exists(x, b):
            return ["ex", "v"] + [f"d{c}" for c in str(x)] + formula_tokens(b)
        case BForAll(x, t, s, b):
            rel = "<" if s else "<="
            return (["all", "v"] + [f"d{c}" for c in str(x)] + [rel]
                    + term_tokens(t) + formula_tokens(b))
        case BExists(x, t, s, b):
            rel = "<" if s else "<="
            return (["ex", "v"] + [f"d{c}" for c in str(x)] + [rel]
                    + term_tokens(t) + formula_tokens(b))
    raise TypeError(f"not a formula: {f!r}")


_TOKEN_GLYPH = {
    "bot": "⊥", "top": "⊤", "0": "0", "1": "1", "v": "v", "S": "S",
    "+": "+", "*": "*", "exp": "exp", "(": "(", ")": ")", ",": ",",
    "=": "=", "<=": "≤", "<": "<", "not": "¬", "and": "∧",
    "or": "∨", "imp": "→", "all": "∀", "ex": "∃",
    ";": ";",
}
for _d in range(10):
    _TOKEN_GLYPH[f"d{_d}"] = str(_d)


def render_tokens(tokens: list[str]) -> str:
    """Canonical text: glyphs with a space after a quantifier's variable."""
    out: list[str] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        out.append(_TOKEN_GLYPH[tok])
        if tok in ("all", "ex"):
            # render "all v d1 d2" as "∀v12 " with one trailing space
            j = i + 1
            assert tokens[j] == "v"
            out.append("v")
            j += 1
            while j < len(tokens) and tokens[j].startswith("d"):
                out.append(_TOKEN_GLYPH[tokens[j]])
                j += 1
            if j < len(tokens) and tokens[j] not in ("<=", "<"):
                out.append(" ")
            i = j
            continue
        i += 1
    return "".join(out)


def pretty(f: Formula) -> str:
    return render_tokens(formula_tokens(f))


def pretty_term(t: Term) -> str:
    return render_tokens(term_tokens(t))


# ---------------------------------------------------------------------------
# Parsing: text -> tokens -> AST

_GLYPH_ALIASES = {
    "⊥": "bot", "_|_": "bot", "false": "bot",
    "⊤": "top", "true": "top",
    "¬": "not", "!": "not", "~": "not",
    "∧": "and", "&": "and", "/\\": "and",
    "∨": "or", "|": "or", "\\/": "or",
    "→": "imp", "->": "imp",
    "∀": "all", "∃": "ex",
    "≤": "<=",
}

_LETTER_VARS = {"x": 0, "y": 1, "z": 2, "u": 3, "w": 4}


def tokenize(text: str) -> list[str]:
    toks: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace() or c == ".":
            i += 1
            continue
        for alias in ("_|_", "->", "<=", "/\\", "\\/"):
            if text.startswith(alias, i):
                toks.append(_GLYPH_ALIASES.get(alias, alias))
                i += len(alias)
                break
        else:
            if text.startswith("exp", i):
                toks.append("exp")
                i += 3
            elif text.startswith("false", i):
                toks.append("bot")
                i += 5
            elif text.startswith("true", i):
                toks.append("top")
                i += 4
            elif c in _GLYPH_ALIASES:
                toks.append(_GLYPH_ALIASES[c])
                i += 1
            elif c == "A" and i + 1 < n and (text[i + 1].isspace() or text[i + 1] in "vxyzuw"):
                toks.append("all")
                i += 1
            elif c == "E" and i + 1 < n and (text[i + 1].isspace() or text[i + 1] in "vxyzuw"):
                toks.append("ex")
                i += 1
            elif c == "v" and i + 1 < n and text[i + 1].isdigit():
                toks.append("v")
                i += 1
                while i < n and text[i].isdigit():
                    toks.append(f"d{text[i]}")
                    i += 1
            elif c in _LETTER_VARS:
                toks.append("v")
                toks.extend(f"d{ch}" for ch in str(_LETTER_VARS[c]))
                i += 1
            elif c.isdigit():
                if toks and toks[-1] == "v":
                    toks.append(f"d{c}")
                elif c in "01":
                    toks.append(c)
                else:
                    raise ParseError(f"unexpected digit {c!r}", len(toks))
                i += 1
            elif c in "()=<+*,S":
                toks.append(c)
                i += 1
            else:
                raise ParseError(f"unexpected character {c!r}", len(toks))
    return toks


class _TokenParser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        if self.pos >= len(self.toks):
            raise ParseError("unexpected end of input", self.pos)
        tok = self.toks[self.pos]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", self.pos)
        self.pos += 1
        return tok

    def var_index(self) -> int:
        self.take("v")
        digits = ""
        while (t := self.peek()) is not None and t.startswith("d"):
            digits += t[1]
            self.pos += 1
        if not digits:
            raise ParseError("variable needs an index", self.pos)
        return int(digits)

    def term(self) -> Term:
        tok = self.peek()
        if tok == "0":
            self.take()
            return ZERO
        if tok == "1":
            self.take()
            return ONE
        if tok == "v":
            return Var(self.var_index())
        if tok == "S":
            self.take()
            self.take("(")
            inner = self.term()
            self.take(")")
            return Succ(inner)
        if tok == "exp":
            self.take()
            self.take("(")
            a = self.term()
            self.take(",")
            b = self.term()
            self.take(")")
            return Exp(a, b)
        if tok == "(":
            self.take()
            a = self.term()
            op = self.take()
            if op not in ("+", "*"):
                raise ParseError(f"expected + or *, found {op!r}", self.pos - 1)
            b = self.term()
            self.take(")")
            return Add(a, b) if op == "+" else Mul(a, b)
        raise ParseError(f"expected a term, found {tok!r}", self.pos)

    def formula(self) -> Formula:
        tok = self.peek()
        if tok == "bot":
            self.take()
            return BOT
        if tok == "top":
            self.take()
            return TOP
        if tok == "not":
            self.take()
            return Not(self.formula())
        if tok in ("all", "ex"):
            self.take()
            x = self.var_index()
            nxt = self.peek()
            if nxt in ("<=", "<"):
                self.take()
                strict = nxt == "<"
                bound = self.term()
                body = self.formula()
                ctor = BForAll if tok == "all" else BExists
                return ctor(x, bound, strict, body)
            body = self.formula()
            return ForAll(x, body) if tok == "all" else Exists(x, body)
        if tok == "(":
            # atom or binary connective; parse a term first, backtracking to a
            # formula when the term parse fails or a connective follows.
            save = self.pos
            self.take("(")
            try:
                a = self.term()
                rel = self.peek()
                if rel in ("=", "<=", "<"):
                    self.take()
                    b = self.term()
                    self.take(")")
                    return Atom("<=" if rel == "<=" else rel, a, b)
            except ParseError:
                pass
            self.pos = save
            self.take("(")
            left = self.formula()
            op = self.take()
            if op not in ("and", "or", "imp"):
                raise ParseError(f"expected a connective, found {op!r}", self.pos - 1)
            right = self.formula()
            self.take(")")
            ctor = {"and": And, "or": Or, "imp": Imp}[op]
            return ctor(left, right)
        raise ParseError(f"expected a formula, found {tok!r}", self.pos)


def parse_tokens(tokens: list[str]) -> Formula:
    p = _TokenParser(tokens)
    f = p.formula()
    if p.pos != len(p.toks):
        raise ParseError("trailing tokens", p.pos)
    return f


def parse(text: str) -> Formula:
    return parse_tokens(tokenize(text))


def parse_term(text: str) -> Term:
    p = _TokenParser(tokenize(text))
    t = p.term()
    if p.pos != len(p.toks):
        raise ParseError("trailing tokens", p.pos)
    return t


# ---------------------------------------------------------------------------
# Syntactic class inference

def is_delta0(f: Formula) -> bool:
    match f:
        case Atom() | Bot() | Top():
            return True
        case Not(b):
            return is_delta0(b)
        case And(a, b) | Or(a, b) | Imp(a, b):
            return is_delta0(a) and is_delta0(b)
        case ForAll() | Exists():
            return False
        case BForAll(_, _, _, b) | BExists(_, _, _, b):
            return is_delta0(b)
    raise TypeError(f"not a formula: {f!r}")


def strip_exists(f: Formula) -> tuple[list[int], Formula]:
    out = []
    while isinstance(f, Exists):
        out.append(f.var)
        f = f.body
    return out, f


def _is_prenex_sigma1(f: Formula) -> bool:
    _, matrix = strip_exists(f)
    return is_delta0(matrix)


def _is_prenex_pi1(f: Formula) -> bool:
    while isinstance(f, ForAll):
        f = f.body
    return is_delta0(f)


def sigma1_normalizable(f: Formula) -> bool:
    try:
        sigma1_normalize(f)
        return True
    except NotSigma1:
        return False


def _is_sigma11(f: Formula) -> bool:
    """Exists-prefix over a positive combination of exp-bounded formulas,
    exists-prefix formulas, and bounded-universal quantifications of them."""
    _, matrix = strip_exists(f)

    def combo(g: Formula) -> bool:
        if is_delta0(g) or sigma1_normalizable(g):
            return True
        match g:
            case And(a, b) | Or(a, b):
                return combo(a) and combo(b)
            case BExists(_, _, _, b):
                return combo(b)
            case BForAll(_, _, _, b):
                return sigma1_normalizable(b) or is_delta0(b)
        return False

    return combo(matrix)


def _levels(f: Formula) -> tuple[int, int]:
    """(s, p) with f in Sigma_s and Pi_p, counted with bounded quantifiers
    transparent.  Level 0 means exp-bounded."""
    match f:
        case Atom() | Bot() | Top():
            return 0, 0
        case Not(b):
            s, p = _levels(b)
            return p, s
        case Imp(a, b):
            sa, pa = _levels(a)
            sb, pb = _levels(b)
            return max(pa, sb), max(sa, pb)
        case And(a, b) | Or(a, b):
            sa, pa = _levels(a)
            sb, pb = _levels(b)
            return max(sa, sb), max(pa, pb)
        case BForAll(_, _, _, b) | BExists(_, _, _, b):
            return _levels(b)
        case Exists(_, b):
            s, p = _levels(b)
            s2 = min(max(s, 1), p + 1)
            return s2, s2 + 1
        case ForAll(_, b):
            s, p = _levels(b)
            p2 = min(max(p, 1), s + 1)
            return p2 + 1, p2
    raise TypeError(f"not a formula: {f!r}")


def classify(f: Formula) -> FormulaClass:
    """Least class in Delta0exp < {Sigma1, Pi1} < Sigma11 < Sigma2 < Other
    that admits the formula syntactically.  Sigma1 is the strict form: an
    exists-prefix over an exp-bounded matrix (no collection is assumed, so a
    bounded-universal over an existential does not count)."""
    if is_delta0(f):
        return FormulaClass.DELTA0EXP
    if _is_prenex_sigma1(f):
        return FormulaClass.SIGMA1
    if _is_prenex_pi1(f):
        return FormulaClass.PI1
    if _is_sigma11(f):
        return FormulaClass.SIGMA11
    s, _ = _levels(f)
    if s <= 2:
        return FormulaClass.SIGMA2
    return FormulaClass.OTHER


# ---------------------------------------------------------------------------
# Sigma1 normalization

def _fresh_var(*fs: Formula) -> int:
    taken: set[int] = set()
    for g in fs:
        taken |= all_vars(g)
    return max(taken, default=-1) + 1


def sigma1_normalize(f: Formula) -> Formula:
    """Rewrite ``f`` into a single existential over an exp-bounded matrix.

    The rewriting is standard-model sound: conjunctions of existentials are
    merged under a common bound, bounded universals over existentials get an
    explicit witness bound, and disjuncts share one witness variable.  Raises
    NotSigma1 when no rule applies.
    """
    if isinstance(f, Exists) and is_delta0(f.body):
        return f
    norm = _normalize(f)
    if is_delta0(norm):
        v = _fresh_var(norm)
        return Exists(v, norm)
    return norm


def _normalize(f: Formula) -> Formula:
    """Returns either a Delta0(exp) formula or Exists(v, delta0-matrix)."""
    if is_delta0(f):
        return f
    match f:
        case Exists(x, b):
            nb = _normalize(b)
            if is_delta0(nb):
                return Exists(x, nb)
            assert isinstance(nb, Exists)
            y, inner = nb.var, nb.body
            z = _fresh_var(f, nb)
            merged = BExists(x, Var(z), False, BExists(y, Var(z), False, inner))
            return Exists(z, merged)
        case And(a, b):
            na, nb = _normalize(a), _normalize(b)
            z = _fresh_var(f, na, nb)
            left = BExists(na.var, Var(z), False, na.body) if isinstance(na, Exists) else na
            right = BExists(nb.var, Var(z), False, nb.body) if isinstance(nb, Exists) else nb
            return Exists(z, And(left, right))
        case Or(a, b):
            na, nb = _normalize(a), _normalize(b)
            z = _fresh_var(f, na, nb)
            left = substitute(na.body, na.var, Var(z)) if isinstance(na, Exists) else na
            right = substitute(nb.body, nb.var, Var(z)) if isinstance(nb, Exists) else nb
            return Exists(z, Or(left, right))
        case Imp(a, b):
            if not is_delta0(a):
                raise NotSigma1(f"antecedent is not exp-bounded: {pretty(a)}")
            nb = _normalize(b)
            if is_delta0(nb):
                return Imp(a, nb)
            return Exists(nb.var, Imp(a, nb.body))
        case Not(b):
            raise NotSigma1(f"negation of an unbounded formula: {pretty(f)}")
        case BExists(x, t, s, b):
            nb = _normalize(b)
            if is_delta0(nb):
                return BExists(x, t, s, nb)
            assert isinstance(nb, Exists)
            return Exists(nb.var, BExists(x, t, s, nb.body))
        case BForAll(x, t, s, b):
            nb = _normalize(b)
            if is_delta0(nb):
                return BForAll(x, t, s, nb)
            assert isinstance(nb, Exists)
            z = _fresh_var(f, nb)
            return Exists(z, BForAll(x, t, s, BExists(nb.var, Var(z), False, nb.body)))
        case ForAll():
            raise NotSigma1(f"unbounded universal quantifier: {pretty(f)}")
    raise NotSigma1(f"cannot normalize: {pretty(f)}")


def freshen_bound(f: Formula, start: int) -> tuple[Formula, int]:
    """Rename every binder to a distinct index >= start (no shadowing in the
    result).  Returns the renamed formula and the next unused index."""
    counter = [start]

    def go(g: Formula, ren: dict[int, int]) -> Formula:
        match g:
            case Atom(rel, a, b):
                return Atom(rel, _ren_term(a, ren), _ren_term(b, ren))
            case Bot() | Top():
                return g
            case Not(b):
                return Not(go(b, ren))
            case And(a, b):
                return And(go(a, ren), go(b, ren))
            case Or(a, b):
                return Or(go(a, ren), go(b, ren))
            case Imp(a, b):
                return Imp(go(a, ren), go(b, ren))
            case ForAll(x, b) | Exists(x, b):
                nx = counter[0]
                counter[0] += 1
                inner = dict(ren)
                inner[x] = nx
                ctor = ForAll if isinstance(g, ForAll) else Exists
                return ctor(nx, go(b, inner))
            case BForAll(x, t, s, b) | BExists(x, t, s, b):
                nt = _ren_term(t, ren)
                nx = counter[0]
                counter[0] += 1
                inner = dict(ren)
                inner[x] = nx
                ctor = BForAll if isinstance(g, BForAll) else BExists
                return ctor(nx, nt, s, go(b, inner))
        raise TypeError(f"not a formula: {g!r}")

    def _ren_term(t: Term, ren: dict[int, int]) -> Term:
        match t:
            case Var(i):
                return Var(ren.get(i, i))
            case Zero() | One():
                return t
            case Succ(a):
                return Succ(_ren_term(a, ren))
            case Add(a, b):
                return Add(_ren_term(a, ren), _ren_term(b, ren))
            case Mul(a, b):
                return Mul(_ren_term(a, ren), _ren_term(b, ren))
            case Exp(a, b):
                return Exp(_ren_term(a, ren), _ren_term(b, ren))
        raise TypeError(f"not a term: {t!r}")

    return go(f, {}), counter[0]


# ---------------------------------------------------------------------------
# Traversal helper used by several modules

def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    match f:
        case Not(b) | ForAll(_, b) | Exists(_, b) | BForAll(_, _, _, b) | BExists(_, _, _, b):
            yield from subformulas(b)
        case And(a, b) | Or(a, b) | Imp(a, b):
            yield from subformulas(a)
            yield from subformulas(b)


def formula_size(f: Formula) -> int:
    match f:
        case Atom() | Bot() | Top():
            return 1
        case Not(b) | ForAll(_, b) | Exists(_, b):
            return 1 + formula_size(b)
        case BForAll(_, _, _, b) | BExists(_, _, _, b):
            return 1 + formula_size(b)
        case And(a, b) | Or(a, b) | Imp(a, b):
            return 1 + formula_size(a) + formula_size(b)
    raise TypeError(f"not a formula: {f!r}")
