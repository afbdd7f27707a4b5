"""Bounded standard-model evaluation.

Verdicts are three-valued: true, false, or exhausted.  True/false are final:
enlarging the budget never flips them, it can only resolve exhausted.

Two mechanisms make formulas about Goedel codes evaluable even though their
quantifier bounds are astronomical:

* a witness solver that reads candidate values off pinning conjuncts
  (equations, exponential bounds, and registered relations that can
  enumerate their solution sets), and

* a registry of named relations.  A registered relation carries an honest
  formula body; whenever a subformula is alpha-equivalent to that body the
  evaluator may answer with the relation's direct computation instead of
  recursing.  The direct computations are property-tested against the raw
  evaluator on small instances.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .syntax import (
    Add, And, Atom, BExists, BForAll, Bot, Exists, Exp, ForAll, Formula, Imp,
    Mul, Not, One, Or, Succ, Term, Top, Var, Zero,
)


class Tri(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    EXHAUSTED = "exhausted"

    def negate(self) -> "Tri":
        if self is Tri.TRUE:
            return Tri.FALSE
        if self is Tri.FALSE:
            return Tri.TRUE
        return Tri.EXHAUSTED


T, F, X = Tri.TRUE, Tri.FALSE, Tri.EXHAUSTED


@dataclass(frozen=True)
class EvalBudget:
    witness_cap: int = 4096
    term_value_cap: int = field(default_factory=lambda: 1 << 200_000, repr=False)
    step_cap: int = 5_000_000

    def __post_init__(self):
        if self.witness_cap <= 0 or self.term_value_cap <= 0 or self.step_cap <= 0:
            raise ValueError("budget components must be positive")


DEFAULT_BUDGET = EvalBudget()


@dataclass(frozen=True)
class EvalResult:
    verdict: str  # "true" | "false" | "exhausted"
    witness: Optional[int] = None

    @property
    def is_true(self) -> bool:
        return self.verdict == "true"

    @property
    def is_false(self) -> bool:
        return self.verdict == "false"

    @property
    def is_exhausted(self) -> bool:
        return self.verdict == "exhausted"


class _Overflow(Exception):
    pass


class _StepsExceeded(Exception):
    pass


# ---------------------------------------------------------------------------
# Alpha-invariant structural keys

def _term_key(t: Term, binders: dict[int, int], free: list[int]):
    match t:
        case Var(i):
            if i in binders:
                return ("bv", binders[i])
            if i not in free:
                free.append(i)
            return ("fv", free.index(i))
        case Zero():
            return ("0",)
        case One():
            return ("1",)
        case Succ(a):
            return ("S", _term_key(a, binders, free))
        case Add(a, b):
            return ("+", _term_key(a, binders, free), _term_key(b, binders, free))
        case Mul(a, b):
            return ("*", _term_key(a, binders, free), _term_key(b, binders, free))
        case Exp(a, b):
            return ("exp", _term_key(a, binders, free), _term_key(b, binders, free))
    raise TypeError(f"not a term: {t!r}")


def _formula_key(f: Formula, binders: dict[int, int], free: list[int], depth: int = 0):
    match f:
        case Atom(rel, a, b):
            return ("atom", rel, _term_key(a, binders, free), _term_key(b, binders, free))
        case Bot():
            return ("bot",)
        case Top():
            return ("top",)
        case Not(b):
            return ("not", _formula_key(b, binders, free, depth))
        case And(a, b):
            return ("and", _formula_key(a, binders, free, depth), _formula_key(b, binders, free, depth))
        case Or(a, b):
            return ("or", _formula_key(a, binders, free, depth), _formula_key(b, binders, free, depth))
        case Imp(a, b):
            return ("imp", _formula_key(a, binders, free, depth), _formula_key(b, binders, free, depth))
        case ForAll(x, b) | Exists(x, b):
            tag = "all" if isinstance(f, ForAll) else "ex"
            inner = dict(binders)
            inner[x] = depth
            return (tag, _formula_key(b, inner, free, depth + 1))
        case BForAll(x, t, s, b) | BExists(x, t, s, b):
            tag = "ball" if isinstance(f, BForAll) else "bex"
            tkey = _term_key(t, binders, free)
            inner = dict(binders)
            inner[x] = depth
            return (tag, s, tkey, _formula_key(b, inner, free, depth + 1))
    raise TypeError(f"not a formula: {f!r}")


# Key cache holds strong references, keeping ids valid.
_KEY_CACHE: dict[int, tuple] = {}


def _key_and_order(f: Formula) -> tuple[tuple, tuple[int, ...]]:
    got = _KEY_CACHE.get(id(f))
    if got is not None:
        return got[1], got[2]
    free: list[int] = []
    key = _formula_key(f, {}, free)
    order = tuple(free)
    _KEY_CACHE[id(f)] = (f, key, order)
    return key, order


def pattern_key(f: Formula) -> tuple:
    """Alpha-invariant key with free variables canonicalized in first-use order."""
    return _key_and_order(f)[0]


def free_order(f: Formula) -> tuple[int, ...]:
    return _key_and_order(f)[1]


# ---------------------------------------------------------------------------
# Registered relations

SolveFn = Callable[["EvalContext", dict[int, int]], Optional[Iterable[dict[int, int]]]]
DenoteFn = Callable[["EvalContext", tuple[int, ...]], "Tri | tuple[Tri, Optional[int]]"]


@dataclass
class Relation:
    """A named relation with an honest formula body and a fast denotation.

    ``body`` has free variables Var(0)..Var(arity-1) in first-use order.
    ``fn`` decides the relation directly; ``solve`` returns the *complete*
    list of assignments extending ``known`` (None when it cannot)."""

    name: str
    arity: int
    body: Formula
    fn: Optional[DenoteFn] = None
    solve: Optional[SolveFn] = None
    key: tuple = field(init=False, repr=False)
    order: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        self.key = pattern_key(self.body)
        self.order = free_order(self.body)
        if set(self.order) != set(range(self.arity)):
            raise ValueError(
                f"relation {self.name}: body free variables {self.order} "
                f"must be exactly Var(0)..Var({self.arity - 1})")


class Registry:
    def __init__(self):
        self._by_key: dict[tuple, Relation] = {}

    def register(self, rel: Relation) -> Relation:
        self._by_key[rel.key] = rel
        return rel

    def lookup(self, key: tuple) -> Optional[Relation]:
        return self._by_key.get(key)

    def __len__(self) -> int:
        return len(self._by_key)


_default_registry = Registry()


def default_registry() -> Registry:
    return _default_registry


# ---------------------------------------------------------------------------
# Evaluation context

@dataclass
class EvalContext:
    budget: EvalBudget = DEFAULT_BUDGET
    registry: Registry = field(default_factory=default_registry)
    use_fn: bool = True
    use_solve: bool = True
    steps: int = 0

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.budget.step_cap:
            raise _StepsExceeded()


# ---------------------------------------------------------------------------
# Terms under budget

def term_value_capped(t: Term, env: dict[int, int], cap: int) -> int:
    match t:
        case Var(i):
            try:
                return env[i]
            except KeyError:
                raise ValueError(f"unbound variable v{i}") from None
        case Zero():
            return 0
        case One():
            return 1
        case Succ(a):
            v = term_value_capped(a, env, cap) + 1
        case Add(a, b):
            v = term_value_capped(a, env, cap) + term_value_capped(b, env, cap)
        case Mul(a, b):
            v = term_value_capped(a, env, cap) * term_value_capped(b, env, cap)
        case Exp(a, b):
            base = term_value_capped(a, env, cap)
            power = term_value_capped(b, env, cap)
            if base >= 2 and (base.bit_length() - 1) * power > cap.bit_length() + 64:
                raise _Overflow()
            v = base ** power
        case _:
            raise TypeError(f"not a term: {t!r}")
    if v > cap:
        raise _Overflow()
    return v


# ---------------------------------------------------------------------------
# Witness solving

def _closed_value(t: Term, env: dict[int, int], ctx: EvalContext) -> Optional[int]:
    try:
        return term_value_capped(t, env, ctx.budget.term_value_cap)
    except (ValueError, _Overflow):
        return None


def _iter_conjuncts(f: Formula, bound_here: set[int]):
    """Yield (node, shadowed_vars) along the conjunctive spine: conjunctions
    are flattened and existential spines are entered (their variables become
    join variables for relation solving).  Composite nodes are yielded too,
    so whole relation instances can match the registry before being taken
    apart."""
    match f:
        case And(a, b):
            yield from _iter_conjuncts(a, bound_here)
            yield from _iter_conjuncts(b, bound_here)
        case Exists(x, b):
            yield f, frozenset(bound_here)
            yield from _iter_conjuncts(b, bound_here | {x})
        case BExists(x, _, _, b):
            yield f, frozenset(bound_here)
            yield from _iter_conjuncts(b, bound_here | {x})
        case _:
            yield f, frozenset(bound_here)


def _atom_pin(conj: Formula, target: int, env: dict[int, int], ctx: EvalContext,
              shadowed: frozenset[int] = frozenset()) -> Optional[list[int]]:
    """Candidate values for ``target`` from a single atomic conjunct.
    Every returned list is complete for that conjunct."""
    if not isinstance(conj, Atom):
        return None

    def closed(t: Term) -> Optional[int]:
        vs = _tvars(t)
        if target in vs or vs & shadowed:
            return None
        return _closed_value(t, env, ctx)

    left, right = conj.left, conj.right
    if conj.rel == "=":
        for a, b in ((left, right), (right, left)):
            if a == Var(target):
                v = closed(b)
                return None if v is None else [v]
            # t0 = t1 + x  /  t0 = x + t1
            if isinstance(b, Add):
                for u, w in ((b.left, b.right), (b.right, b.left)):
                    if u == Var(target):
                        v0, v1 = closed(a), closed(w)
                        if v0 is None or v1 is None:
                            continue
                        d = v0 - v1
                        return [d] if d >= 0 else []
            # t0 = t1 * x (exact division)
            if isinstance(b, Mul):
                for u, w in ((b.left, b.right), (b.right, b.left)):
                    if u == Var(target):
                        v0, v1 = closed(a), closed(w)
                        if v0 is None or v1 is None or v1 == 0:
                            continue
                        q, r = divmod(v0, v1)
                        return [q] if r == 0 else []
            # t0 = exp(c, x)
            if isinstance(b, Exp) and b.power == Var(target):
                v0, vc = closed(a), closed(b.base)
                if v0 is not None and vc is not None and vc >= 2:
                    if v0 <= 0:
                        return []
                    e = 0
                    acc = 1
                    while acc < v0:
                        acc *= vc
                        e += 1
                    return [e] if acc == v0 else []
    if conj.rel in ("<=", "<"):
        # exp(c, x) <= t0  -> x ranges over a logarithmic interval
        if isinstance(left, Exp) and left.power == Var(target):
            vc = closed(left.base)
            v0 = closed(right)
            if vc is not None and v0 is not None and vc >= 2:
                hi = -1
                acc = 1
                while (acc <= v0 if conj.rel == "<=" else acc < v0):
                    hi += 1
                    acc *= vc
                return list(range(hi + 1))
        # x <= t0 with a small bound
        if left == Var(target):
            v0 = closed(right)
            if v0 is not None and v0 <= ctx.budget.witness_cap:
                top = v0 if conj.rel == "<=" else v0 - 1
                return list(range(top + 1))
    return None


def _tvars(t: Term) -> frozenset[int]:
    from .syntax import term_vars
    return term_vars(t)


class _Compiled:
    """Per-node registry information computed once per evaluation call.

    ``args[i]`` is the instance variable playing the role of the relation's
    pattern variable Var(i)."""

    __slots__ = ("relation", "args")

    def __init__(self, relation: Relation, instance_order: tuple[int, ...]):
        self.relation = relation
        pos_of = {pv: idx for idx, pv in enumerate(relation.order)}
        self.args = tuple(instance_order[pos_of[i]] for i in range(relation.arity))


class Evaluator:
    def __init__(self, ctx: EvalContext):
        self.ctx = ctx
        # keyed by id(); sound because the formula tree outlives the call
        self._hits: dict[int, Optional[_Compiled]] = {}
        self._fvars: dict[int, frozenset[int]] = {}
        self._conj_index: dict[tuple[int, int], list] = {}

    def _free_vars(self, f: Formula) -> frozenset[int]:
        got = self._fvars.get(id(f))
        if got is None:
            from .syntax import free_vars
            got = free_vars(f)
            self._fvars[id(f)] = got
        return got

    def _relevant_conjuncts(self, body: Formula, target: int) -> list:
        """Conjuncts of the spine that mention the target variable unshadowed
        (cached: the spine does not depend on the environment)."""
        key = (id(body), target)
        got = self._conj_index.get(key)
        if got is None:
            got = [(conj, joins) for conj, joins in _iter_conjuncts(body, set())
                   if target not in joins and target in self._free_vars(conj)
                   and (isinstance(conj, Atom) or self._registry_hit(conj) is not None)]
            self._conj_index[key] = got
        return got

    # -- registry ----------------------------------------------------------

    def _registry_hit(self, f: Formula) -> Optional[_Compiled]:
        cached = self._hits.get(id(f), False)
        if cached is not False:
            return cached
        rel = self.ctx.registry.lookup(pattern_key(f))
        hit = None
        if rel is not None:
            hit = _Compiled(rel, free_order(f))
        self._hits[id(f)] = hit
        return hit

    def _relation_solutions(self, conj: Formula, target: int, env: dict[int, int],
                            join_vars: frozenset[int]) -> Optional[list[int]]:
        hit = self._registry_hit(conj)
        if hit is None or hit.relation.solve is None:
            return None
        known: dict[int, int] = {}
        target_pos = None
        for pos, var in enumerate(hit.args):
            if var == target:
                target_pos = pos
            elif var in join_vars:
                pass  # shadowed by an inner binder: treat as unknown
            elif var in env:
                known[pos] = env[var]
            else:
                return None  # constrains a variable we cannot treat as joint
        if target_pos is None or target_pos in known:
            return None
        sols = hit.relation.solve(self.ctx, known)
        if sols is None:
            return None
        out = sorted({s[target_pos] for s in sols if target_pos in s})
        return out

    # -- solving -----------------------------------------------------------

    def candidates(self, body: Formula, target: int, env: dict[int, int]) -> Optional[list[int]]:
        """Complete candidate list for ``target`` making ``body`` satisfiable,
        read off pinning conjuncts.  None when nothing pins the variable."""
        if not self.ctx.use_solve:
            return None
        best: Optional[list[int]] = None
        for conj, joins in self._relevant_conjuncts(body, target):
            cands = _atom_pin(conj, target, env, self.ctx, joins)
            if cands is None:
                cands = self._relation_solutions(conj, target, env, joins)
            if cands is not None and (best is None or len(cands) < len(best)):
                best = cands
                if len(best) <= 1:
                    break
        return best

    # -- evaluation --------------------------------------------------------

    def eval(self, f: Formula, env: dict[int, int]) -> tuple[Tri, Optional[int]]:
        self.ctx.tick()
        hit = self._registry_hit(f)
        if hit is not None and self.ctx.use_fn and hit.relation.fn is not None:
            if all(v in env for v in hit.args):
                res = hit.relation.fn(self.ctx, tuple(env[v] for v in hit.args))
                if isinstance(res, tuple):
                    return res
                return res, None
        match f:
            case Bot():
                return F, None
            case Top():
                return T, None
            case Atom(rel, a, b):
                try:
                    va = term_value_capped(a, env, self.ctx.budget.term_value_cap)
                    vb = term_value_capped(b, env, self.ctx.budget.term_value_cap)
                except _Overflow:
                    return X, None
                if rel == "=":
                    return (T if va == vb else F), None
                if rel == "<=":
                    return (T if va <= vb else F), None
                return (T if va < vb else F), None
            case Not(b):
                v, _ = self.eval(b, env)
                return v.negate(), None
            case And(a, b):
                va, _ = self.eval(a, env)
                if va is F:
                    return F, None
                vb, _ = self.eval(b, env)
                if vb is F:
                    return F, None
                if va is T and vb is T:
                    return T, None
                return X, None
            case Or(a, b):
                va, _ = self.eval(a, env)
                if va is T:
                    return T, None
                vb, _ = self.eval(b, env)
                if vb is T:
                    return T, None
                if va is F and vb is F:
                    return F, None
                return X, None
            case Imp(a, b):
                va, _ = self.eval(a, env)
                if va is F:
                    return T, None
                vb, _ = self.eval(b, env)
                if vb is T:
                    return T, None
                if va is T and vb is F:
                    return F, None
                return X, None
            case Exists(x, b):
                return self._eval_exists(x, None, False, b, env)
            case ForAll(x, b):
                return self._eval_forall(x, None, False, b, env)
            case BExists(x, t, s, b):
                return self._eval_exists(x, t, s, b, env)
            case BForAll(x, t, s, b):
                return self._eval_forall(x, t, s, b, env)
        raise TypeError(f"not a formula: {f!r}")

    def _bound_value(self, t: Optional[Term], strict: bool, env: dict[int, int]) -> tuple[Optional[int], bool]:
        """(inclusive bound, overflowed)"""
        if t is None:
            return None, False
        try:
            v = term_value_capped(t, env, self.ctx.budget.term_value_cap)
        except _Overflow:
            return None, True
        return (v - 1 if strict else v), False

    def _eval_exists(self, x: int, t: Optional[Term], strict: bool, body: Formula,
                     env: dict[int, int]) -> tuple[Tri, Optional[int]]:
        bound, overflowed = self._bound_value(t, strict, env)
        if bound is not None and bound < 0:
            return F, None
        cands = self.candidates(body, x, env)
        saw_exhausted = overflowed
        tested: set[int] = set()
        if cands is not None:
            for v in cands:
                if v < 0 or (bound is not None and v > bound):
                    continue
                tested.add(v)
                res = self._eval_at(x, v, body, env)
                if res is T:
                    return T, v
                if res is X:
                    saw_exhausted = True
            if not saw_exhausted:
                return F, None
            return X, None
        # enumeration fallback
        cap = self.ctx.budget.witness_cap
        top = cap if bound is None else min(bound, cap)
        for v in range(top + 1):
            if v in tested:
                continue
            res = self._eval_at(x, v, body, env)
            if res is T:
                return T, v
            if res is X:
                saw_exhausted = True
        if bound is not None and bound <= cap and not saw_exhausted:
            return F, None
        return X, None

    def _eval_forall(self, x: int, t: Optional[Term], strict: bool, body: Formula,
                     env: dict[int, int]) -> tuple[Tri, Optional[int]]:
        bound, overflowed = self._bound_value(t, strict, env)
        if bound is not None and bound < 0:
            return T, None
        cap = self.ctx.budget.witness_cap
        if bound is not None and bound <= cap and not overflowed:
            saw_exhausted = False
            for v in range(bound + 1):
                res = self._eval_at(x, v, body, env)
                if res is F:
                    return F, None
                if res is X:
                    saw_exhausted = True
            return (X if saw_exhausted else T), None
        # large or unbounded range: only a guarded body can be decided, by
        # enumerating the complete solution set of its guard (completeness is
        # over all naturals, so an overflowed bound does not matter here)
        if isinstance(body, Imp):
            cands = self.candidates(body.left, x, env)
            if cands is not None:
                saw_exhausted = False
                for v in cands:
                    if v < 0 or (bound is not None and v > bound):
                        continue
                    res = self._eval_at(x, v, body, env)
                    if res is F:
                        return F, None
                    if res is X:
                        saw_exhausted = True
                return (X if saw_exhausted else T), None
        # partial counterexample search keeps false verdicts reachable
        top = cap if bound is None else min(bound, cap)
        for v in range(top + 1):
            res = self._eval_at(x, v, body, env)
            if res is F:
                return F, None
        return X, None

    def _eval_at(self, x: int, v: int, body: Formula, env: dict[int, int]) -> Tri:
        had = x in env
        old = env.get(x)
        env[x] = v
        try:
            res, _ = self.eval(body, env)
        finally:
            if had:
                env[x] = old  # type: ignore[assignment]
            else:
                del env[x]
        return res


def eval_formula(f: Formula, budget: EvalBudget = DEFAULT_BUDGET,
                 env: Optional[dict[int, int]] = None,
                 registry: Optional[Registry] = None,
                 use_fn: bool = True, use_solve: bool = True) -> EvalResult:
    """Three-valued bounded evaluation of ``f`` under ``env``."""
    ctx = EvalContext(budget=budget,
                      registry=registry if registry is not None else default_registry(),
                      use_fn=use_fn, use_solve=use_solve)
    ev = Evaluator(ctx)
    try:
        verdict, witness = ev.eval(f, dict(env) if env else {})
    except _StepsExceeded:
        return EvalResult("exhausted")
    return EvalResult(verdict.value, witness)
