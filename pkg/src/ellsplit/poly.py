"""Multivariate polynomials over Q with a small deterministic Buchberger engine.

Polynomials are dictionaries {exponent tuple: Fraction}.  Three monomial
orders are provided: graded reverse lexicographic (used for dimension
computations), lexicographic, and a block elimination order (grevlex on the
eliminated leading block, grevlex on the rest) used for every elimination
and saturation in the package.

The basis returned by ``groebner`` is reduced and monic, hence canonical for
the given order: two generating sets define the same ideal exactly when
their reduced bases coincide.
"""

from __future__ import annotations

import heapq
import itertools
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import BudgetExceeded

Exp = tuple[int, ...]


# --------------------------------------------------------------------------
# monomial orders
# --------------------------------------------------------------------------

class MonomialOrder:
    """A monomial order given by a key function; larger key = larger monomial."""

    def __init__(self, name: str, n: int, key: Callable[[Exp], tuple]):
        self.name = name
        self.n = n
        self.key = key

    def __repr__(self):
        return f"MonomialOrder({self.name}, n={self.n})"


def grevlex(n: int) -> MonomialOrder:
    def key(e: Exp):
        return (sum(e), tuple(-e[i] for i in range(n - 1, -1, -1)))

    return MonomialOrder("grevlex", n, key)


def lex(n: int) -> MonomialOrder:
    return MonomialOrder("lex", n, lambda e: e)


def block_elim(k: int, n: int) -> MonomialOrder:
    """Eliminate the first k variables: any monomial involving them wins."""

    def key(e: Exp):
        head, tail = e[:k], e[k:]
        return (
            sum(head),
            tuple(-head[i] for i in range(k - 1, -1, -1)),
            sum(tail),
            tuple(-tail[i] for i in range(n - k - 1, -1, -1)),
        )

    return MonomialOrder(f"elim{k}", n, key)


# --------------------------------------------------------------------------
# polynomial arithmetic
# --------------------------------------------------------------------------

class Poly:
    """Sparse polynomial; immutable by convention once constructed."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[Exp, Fraction] | None = None):
        self.n = n
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "Poly":
        return Poly(n)

    @staticmethod
    def const(n: int, c) -> "Poly":
        c = Fraction(c)
        return Poly(n, {(0,) * n: c} if c else {})

    @staticmethod
    def var(i: int, n: int) -> "Poly":
        e = [0] * n
        e[i] = 1
        return Poly(n, {tuple(e): Fraction(1)})

    @staticmethod
    def monomial(exp: Exp, c=1) -> "Poly":
        return Poly(len(exp), {tuple(exp): Fraction(c)})

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.n, out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) - c
        return Poly(self.n, out)

    def __neg__(self) -> "Poly":
        return Poly(self.n, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Poly(self.n, {e: k * c for e, k in self.terms.items()})
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Poly) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def variables_used(self) -> set[int]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return used

    def leading(self, order: MonomialOrder) -> tuple[Exp, Fraction]:
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def monic(self, order: MonomialOrder) -> "Poly":
        if self.is_zero():
            return self
        _, c = self.leading(order)
        return self * (Fraction(1) / c)

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact evaluation; ``point`` entries must support + * ** with Fraction."""
        acc = None
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = term * point[i] ** k
            acc = term if acc is None else acc + term
        return acc if acc is not None else Fraction(0)

    def derivative(self, i: int) -> "Poly":
        out: dict[Exp, Fraction] = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = out.get(tuple(e2), Fraction(0)) + c * e[i]
        return Poly(self.n, out)

    def map_vars(self, mapping: Sequence[int], new_n: int) -> "Poly":
        """Reindex variables: old variable i becomes mapping[i]."""
        out: dict[Exp, Fraction] = {}
        for e, c in self.terms.items():
            e2 = [0] * new_n
            for i, k in enumerate(e):
                if k:
                    e2[mapping[i]] += k
            key = tuple(e2)
            out[key] = out.get(key, Fraction(0)) + c
        return Poly(new_n, out)

    def render(self, names: Sequence[str]) -> str:
        if self.is_zero():
            return "0"
        items = sorted(self.terms.items(), key=lambda t: grevlex(self.n).key(t[0]), reverse=True)
        parts = []
        for e, c in items:
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append(f"{names[i]}^{k}")
            body = "*".join(factors)
            if not body:
                chunk = str(c)
            elif c == 1:
                chunk = body
            elif c == -1:
                chunk = f"-{body}"
            else:
                chunk = f"{c}*{body}"
            if parts and not chunk.startswith("-"):
                parts.append("+ " + chunk)
            elif parts:
                parts.append("- " + chunk[1:])
            else:
                parts.append(chunk)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self.render([f'x{i+1}' for i in range(self.n)])})"


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

def parse_poly(text: str, names: Sequence[str]) -> Poly:
    """Parse + - * ^ expressions with integer/rational coefficients.

    Implicit multiplication is not supported; write ``5*z1^4*z4``.
    """
    n = len(names)
    index = {name: i for i, name in enumerate(names)}
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        t = tokens[pos]
        pos += 1
        return t

    def parse_expr() -> Poly:
        node = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term() -> Poly:
        node = parse_power()
        while peek() == "*":
            take()
            node = node * parse_power()
        return node

    def parse_power() -> Poly:
        base = parse_atom()
        if peek() == "^":
            take()
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            t = take()
            if not t.isdigit():
                raise ValueError(f"expected integer exponent, got {t!r}")
            if sign < 0:
                raise ValueError("negative exponents are not allowed in generators")
            return base ** int(t)
        return base

    def parse_atom() -> Poly:
        t = peek()
        if t == "(":
            take()
            node = parse_expr()
            if take() != ")":
                raise ValueError("unbalanced parenthesis")
            return node
        if t == "-":
            take()
            return -parse_atom()
        if t == "+":
            take()
            return parse_atom()
        t = take()
        if t is None:
            raise ValueError("unexpected end of polynomial")
        if t in index:
            return Poly.var(index[t], n)
        if t.replace("/", "").isdigit():
            return Poly.const(n, Fraction(t))
        raise ValueError(f"unknown token {t!r} (variables are {list(names)})")

    result = parse_expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input near {tokens[pos:]}")
    return result


def _tokenize(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*^()":
            out.append(ch)
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(text[i:j])
            i = j
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == "/":
                k = j + 1
                while k < len(text) and text[k].isdigit():
                    k += 1
                if k > j + 1:
                    j = k
            out.append(text[i:j])
            i = j
        else:
            raise ValueError(f"bad character {ch!r} in polynomial text")
    return out


# --------------------------------------------------------------------------
# division and Buchberger
# --------------------------------------------------------------------------

def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _exp_sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def _exp_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def normal_form(p: Poly, basis: Sequence[Poly], order: MonomialOrder) -> Poly:
    """Remainder of p under multivariate division by basis (full reduction)."""
    if p.is_zero() or not basis:
        return p
    leads = [g.leading(order) for g in basis]
    work = dict(p.terms)
    remainder: dict[Exp, Fraction] = {}
    while work:
        e = max(work, key=order.key)
        c = work.pop(e)
        if c == 0:
            continue
        hit = None
        for g, (le, lc) in zip(basis, leads):
            if _divides(le, e):
                hit = (g, le, lc)
                break
        if hit is None:
            remainder[e] = remainder.get(e, Fraction(0)) + c
            continue
        g, le, lc = hit
        shift = _exp_sub(e, le)
        factor = c / lc
        for ge, gc in g.terms.items():
            key = tuple(a + b for a, b in zip(ge, shift))
            if key == e:
                continue
            work[key] = work.get(key, Fraction(0)) - factor * gc
            if work[key] == 0:
                del work[key]
    return Poly(p.n, remainder)


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    ef, cf = f.leading(order)
    eg, cg = g.leading(order)
    l = _exp_lcm(ef, eg)
    return f * Poly.monomial(_exp_sub(l, ef), Fraction(1, 1) / cf) - g * Poly.monomial(
        _exp_sub(l, eg), Fraction(1, 1) / cg
    )


DEFAULT_SPAIR_BUDGET = 25_000


def groebner(
    gens: Iterable[Poly],
    order: MonomialOrder,
    s_budget: int = DEFAULT_SPAIR_BUDGET,
) -> tuple[Poly, ...]:
    """Reduced monic Groebner basis; deterministic for a fixed input order.

    Raises BudgetExceeded when more than ``s_budget`` S-pair reductions are
    attempted; callers that enumerate many ideals use this as a safety net.
    """
    basis: list[Poly] = []
    for p in gens:
        if not p.is_zero():
            basis.append(p.monic(order))
    if not basis:
        return ()
    # order-stable dedupe
    seen = set()
    uniq = []
    for p in basis:
        key = frozenset(p.terms.items())
        if key not in seen:
            seen.add(key)
            uniq.append(p)
    basis = uniq

    leads = [p.leading(order)[0] for p in basis]
    pairs: list[tuple[tuple, int, int]] = []

    def push_pair(i, j):
        li, lj = leads[i], leads[j]
        l = _exp_lcm(li, lj)
        # product criterion: coprime leading terms reduce to zero
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            return
        heapq.heappush(pairs, (order.key(l), i, j))

    for i in range(len(basis)):
        for j in range(i):
            push_pair(j, i)

    reductions = 0
    while pairs:
        lkey, i, j = heapq.heappop(pairs)
        # chain criterion: with normal selection, a third lead dividing the
        # lcm whose own pair-lcms are strictly smaller makes (i, j) redundant
        lcm_ij = _exp_lcm(leads[i], leads[j])
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(leads[k], lcm_ij):
                continue
            if (
                order.key(_exp_lcm(leads[i], leads[k])) < lkey
                and order.key(_exp_lcm(leads[j], leads[k])) < lkey
            ):
                skip = True
                break
        if skip:
            continue
        reductions += 1
        if reductions > s_budget:
            raise BudgetExceeded(f"Groebner S-pair budget {s_budget} exhausted")
        sp = s_polynomial(basis[i], basis[j], order)
        rem = normal_form(sp, basis, order)
        if rem.is_zero():
            continue
        rem = rem.monic(order)
        basis.append(rem)
        leads.append(rem.leading(order)[0])
        k = len(basis) - 1
        for t in range(k):
            push_pair(t, k)

    # minimalize: drop generators whose lead is divisible by another lead
    keep = []
    for i, p in enumerate(basis):
        li = leads[i]
        if any(
            j != i and _divides(leads[j], li) and (leads[j] != li or j < i)
            for j in range(len(basis))
        ):
            continue
        keep.append(p)
    # inter-reduce tails
    reduced = []
    for i, p in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        q = normal_form(p, others, order) if others else p
        if not q.is_zero():
            reduced.append(q.monic(order))
    reduced.sort(key=lambda p: order.key(p.leading(order)[0]), reverse=True)
    return tuple(reduced)


def ideal_equal(g1: Sequence[Poly], g2: Sequence[Poly], order: MonomialOrder) -> bool:
    """Exact ideal equality via canonical reduced bases."""
    return groebner(g1, order) == groebner(g2, order)


# --------------------------------------------------------------------------
# elimination, saturation, dimension
# --------------------------------------------------------------------------

def substitute(p: Poly, i: int, value: Poly) -> Poly:
    """p with variable i replaced by ``value`` (which must not involve i)."""
    out = Poly.zero(p.n)
    for e, c in p.terms.items():
        if e[i] == 0:
            out = out + Poly(p.n, {e: c})
            continue
        e2 = list(e)
        k = e2[i]
        e2[i] = 0
        out = out + Poly(p.n, {tuple(e2): c}) * value ** k
    return out


def _presolve_dropped(gens: list[Poly], drop: set[int]) -> list[Poly]:
    """Substitute away dropped variables that some generator solves exactly.

    A generator of the form +-(z_i - p) with z_i dropped and p free of z_i
    contributes nothing to the elimination ideal in the kept variables, and
    substituting it into the rest preserves the ideal; repeating this shrinks
    the Groebner run to the genuinely coupled variables.
    """
    gens = [p for p in gens if not p.is_zero()]
    changed = True
    while changed:
        changed = False
        for gi, p in enumerate(gens):
            hit = None
            for e, c in p.terms.items():
                if sum(e) == 1 and abs(c) == 1:
                    i = next(k for k, v in enumerate(e) if v)
                    if i in drop and all(ee[i] == 0 for ee in p.terms if ee != e):
                        # p = c*z_i + rest  =>  z_i = -rest / c
                        rest = Poly(p.n, {ee: cc for ee, cc in p.terms.items() if ee != e})
                        hit = (i, rest * (Fraction(-1) / c))
                        break
            if hit is not None:
                i, value = hit
                gens = [
                    substitute(q, i, value)
                    for qi, q in enumerate(gens)
                    if qi != gi
                ]
                gens = [q for q in gens if not q.is_zero()]
                changed = True
                break
    return gens


def eliminate(
    gens: Sequence[Poly], drop: Sequence[int], n: int, s_budget: int = DEFAULT_SPAIR_BUDGET
) -> list[Poly]:
    """Generators of the elimination ideal with the ``drop`` variables removed.

    The returned polynomials still live in the ambient n-variable ring but
    involve none of the dropped variables.
    """
    drop = sorted(set(drop))
    gens = _presolve_dropped(list(gens), set(drop))
    keep = [i for i in range(n) if i not in drop]
    perm = {old: new for new, old in enumerate(drop + keep)}
    mapping = [perm[i] for i in range(n)]
    moved = [p.map_vars(mapping, n) for p in gens]
    basis = groebner(moved, block_elim(len(drop), n), s_budget=s_budget)
    inverse = [0] * n
    for old, new in perm.items():
        inverse[new] = old
    out = []
    for p in basis:
        if all(i >= len(drop) for i in p.variables_used()):
            out.append(p.map_vars(inverse, n))
    return out


def saturate(
    gens: Sequence[Poly], multiplier: Poly, s_budget: int = DEFAULT_SPAIR_BUDGET
) -> list[Poly]:
    """Saturation I : multiplier^infinity via the inverse-variable trick."""
    n = multiplier.n
    lifted = [p.map_vars(list(range(1, n + 1)), n + 1) for p in gens]
    m_lift = multiplier.map_vars(list(range(1, n + 1)), n + 1)
    t = Poly.var(0, n + 1)
    lifted.append(t * m_lift - Poly.const(n + 1, 1))
    basis = groebner(lifted, block_elim(1, n + 1), s_budget=s_budget)
    out = []
    for p in basis:
        if 0 not in p.variables_used():
            out.append(p.map_vars([-1] + list(range(n)), n))
    return out


def krull_dimension(gens: Sequence[Poly], n: int, s_budget: int = DEFAULT_SPAIR_BUDGET) -> int:
    """Dimension of V(I) in affine n-space via independent variable sets.

    dim = max |S| over subsets S of variables such that no leading monomial
    of the (grevlex) basis is supported inside S.  Returns -1 for the unit
    ideal.
    """
    basis = groebner(gens, grevlex(n), s_budget=s_budget)
    if not basis:
        return n
    leads = [p.leading(grevlex(n))[0] for p in basis]
    if any(sum(e) == 0 for e in leads):
        return -1
    supports = [frozenset(i for i, k in enumerate(e) if k) for e in leads]
    for size in range(n, 0, -1):
        for S in itertools.combinations(range(n), size):
            sset = set(S)
            if not any(sup <= sset for sup in supports):
                return size
    return 0
