"""Sparse multivariate polynomials and a Buchberger Groebner-basis engine.

Coefficients are :class:`fractions.Fraction` by default; ``QNum`` coefficients
are accepted wherever only field arithmetic is needed.  The monomial order is
graded reverse lexicographic in the declared variable order, so the variable
listed last (the saturation variable ``u`` by convention) is the smallest.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .exact import QNum

__all__ = [
    "Poly",
    "PolySystem",
    "GroebnerBasis",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "buchberger",
    "ideal_is_trivial",
    "is_zero_dimensional",
    "standard_monomials",
    "count_solutions",
    "count_distinct_solutions",
    "radical_basis",
    "eliminate",
    "normal_form",
    "minimal_polynomial",
    "verify_solution",
    "solve_numeric",
    "BasisCache",
]

DEFAULT_BUDGET = 2_000_000

Exp = tuple


def _key(e: Exp) -> tuple:
    # grevlex: higher total degree first, then smaller exponent in the last
    # variable wins
    return (sum(e), tuple(-x for x in reversed(e)))


_KEYCACHE: dict = {}


def _k(e: Exp) -> tuple:
    k = _KEYCACHE.get(e)
    if k is None:
        if len(_KEYCACHE) > 500_000:
            _KEYCACHE.clear()
        k = _KEYCACHE[e] = _key(e)
    return k


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def _is_zero(c) -> bool:
    return not c


class Poly:
    """Immutable sparse polynomial ``{exponent tuple: coefficient}``."""

    __slots__ = ("variables", "terms", "_lm")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exp, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError("exponent length does not match variables")
            if isinstance(c, int):
                c = Fraction(c)
            if not _is_zero(c):
                clean[tuple(e)] = c
        self.terms = clean
        self._lm = None

    # -- constructors -----------------------------------------------------------
    @classmethod
    def const(cls, c, variables: Sequence[str]) -> Poly:
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> Poly:
        variables = tuple(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        if sum(e) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(variables, {e: Fraction(1)})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> list[Poly]:
        return [cls.var(v, variables) for v in variables]

    # -- basic queries ----------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    @property
    def lm(self) -> Exp:
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=_k)
        return self._lm

    @property
    def lc(self):
        return self.terms[self.lm]

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Exp, object]]:
        return sorted(self.terms.items(), key=lambda t: _k(t[0]), reverse=True)

    def monic(self) -> Poly:
        if not self.terms:
            return self
        lc = self.lc
        if lc == 1:
            return self
        return Poly(self.variables, {e: c / lc for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other, self.variables)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.variables != self.variables:
                raise ValueError("polynomials over different variable sets")
            return other
        return Poly.const(other, self.variables)

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return Poly(self.variables, t)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            if _is_zero(other):
                return Poly(self.variables)
            return Poly(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add(e1, e2)
                v = c1 * c2
                t[e] = t[e] + v if e in t else v
        return Poly(self.variables, t)

    __rmul__ = __mul__

    def __truediv__(self, c) -> Poly:
        return Poly(self.variables, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int) -> Poly:
        out = Poly.const(1, self.variables)
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, assignment: Mapping[str, object]):
        """Evaluate at a (possibly partial) assignment.

        A full assignment returns a scalar; a partial one returns a ``Poly``
        in the remaining variables.
        """
        free = [v for v in self.variables if v not in assignment]
        if free:
            idx = [self.variables.index(v) for v in free]
            out: dict = {}
            for e, c in self.terms.items():
                val = c
                for v, k in zip(self.variables, e):
                    if k and v in assignment:
                        val = val * assignment[v] ** k
                ne = tuple(e[i] for i in idx)
                out[ne] = out[ne] + val if ne in out else val
            return Poly(free, out)
        total = Fraction(0)
        for e, c in self.terms.items():
            val = c
            for v, k in zip(self.variables, e):
                if k:
                    val = val * assignment[v] ** k
            total = total + val
        return total

    def extend(self, variables: Sequence[str]) -> Poly:
        """Re-embed into a larger (or reordered) variable list."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.variables]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for p, k in zip(pos, e):
                ne[p] = k
            out[tuple(ne)] = c
        return Poly(variables, out)

    # -- text form ----------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            if isinstance(c, QNum):
                cs = f"({c})"
            else:
                cs = f"{c.numerator}/{c.denominator}"
            mons = [f"{v}^{k}" for v, k in zip(self.variables, e) if k]
            parts.append("*".join([cs] + mons))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str, variables: Sequence[str]) -> Poly:
        variables = tuple(variables)
        text = text.strip()
        if text == "0":
            return cls(variables)
        terms: dict = {}
        for chunk in text.split(" + "):
            factors = chunk.strip().split("*")
            head = factors[0]
            if head.startswith("("):
                # QNum coefficient may itself contain '*sqrt5'
                j = 1
                while not factors[j - 1].endswith(")"):
                    j += 1
                coef = QNum.parse("*".join(factors[:j])[1:-1])
                factors = factors[j:]
            else:
                coef = Fraction(head)
                factors = factors[1:]
            e = [0] * len(variables)
            for f in factors:
                m = re.fullmatch(r"(\w+)\^(\d+)", f)
                if m is None:
                    raise ValueError(f"bad monomial factor {f!r}")
                e[variables.index(m.group(1))] += int(m.group(2))
            e = tuple(e)
            terms[e] = terms[e] + coef if e in terms else coef
        return cls(variables, terms)

    def __repr__(self) -> str:
        return f"Poly({self.to_text()})"

    __str__ = to_text


@dataclass(frozen=True)
class PolySystem:
    variables: tuple
    polys: tuple

    def __init__(self, polys: Iterable[Poly], variables: Sequence[str] | None = None):
        polys = list(polys)
        if variables is None:
            if not polys:
                raise ValueError("empty system needs explicit variables")
            variables = polys[0].variables
        variables = tuple(variables)
        for p in polys:
            if p.variables != variables:
                raise ValueError(
                    f"inconsistent variable sets: {p.variables} vs {variables}"
                )
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "polys", tuple(polys))

    def __len__(self) -> int:
        return len(self.polys)

    def to_text(self) -> str:
        lines = ["# vars: " + " ".join(self.variables)]
        lines += [p.to_text() for p in self.polys]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> PolySystem:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("# vars:"):
            raise ValueError("missing '# vars:' header")
        variables = tuple(lines[0][len("# vars:"):].split())
        return cls([Poly.from_text(ln, variables) for ln in lines[1:]], variables)

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()


@dataclass(frozen=True)
class GroebnerBasis:
    variables: tuple
    generators: tuple
    order: str = "grevlex"
    reductions: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.generators)

    def leading_monomials(self) -> list[Exp]:
        return [g.lm for g in self.generators]

    def to_text(self) -> str:
        return PolySystem(self.generators, self.variables).to_text()


class BudgetExceeded(Exception):
    """Raised when the S-polynomial reduction budget runs out.

    ``partial`` holds the generators accumulated so far; they generate the
    same ideal, so a later call may resume from them.
    """

    def __init__(self, reductions: int, partial: list[Poly]):
        super().__init__(f"Groebner budget exhausted after {reductions} reductions")
        self.reductions = reductions
        self.partial = partial


# ---------------------------------------------------------------------------
# reduction


def _reduce(terms: dict, basis: list[tuple[Exp, dict]], full: bool = True) -> dict:
    """Normal form of ``terms`` w.r.t. monic ``basis`` entries ``(lm, terms)``."""
    p = dict(terms)
    r: dict = {}
    while p:
        m = max(p, key=_k)
        c = p[m]
        for lm, g in basis:
            if _divides(lm, m):
                q = _sub(m, lm)
                for e, gc in g.items():
                    ne = _add(e, q)
                    v = p.get(ne)
                    v = -c * gc if v is None else v - c * gc
                    if _is_zero(v):
                        p.pop(ne, None)
                    else:
                        p[ne] = v
                break
        else:
            if not full:
                r.update(p)
                return r
            r[m] = c
            del p[m]
    return r


def _monic_terms(t: dict) -> dict:
    lm = max(t, key=_k)
    lc = t[lm]
    if lc == 1:
        return t
    return {e: c / lc for e, c in t.items()}


def _spoly(f: tuple[Exp, dict], g: tuple[Exp, dict]) -> dict:
    lf, tf = f
    lg, tg = g
    l = _lcm(lf, lg)
    a = _sub(l, lf)
    b = _sub(l, lg)
    out: dict = {}
    for e, c in tf.items():
        out[_add(e, a)] = c
    for e, c in tg.items():
        ne = _add(e, b)
        v = out.get(ne)
        v = -c if v is None else v - c
        if _is_zero(v):
            out.pop(ne, None)
        else:
            out[ne] = v
    return out


def _interreduce(gens: list[tuple[Exp, dict]]) -> list[tuple[Exp, dict]]:
    gens = sorted(gens, key=lambda g: _k(g[0]))
    minimal: list[tuple[Exp, dict]] = []
    for lm, t in gens:
        if not any(_divides(m, lm) for m, _ in minimal):
            minimal.append((lm, t))
    out = []
    for i, (lm, t) in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = _reduce(t, others)
        r = _monic_terms(r)
        out.append((max(r, key=_k), r))
    out.sort(key=lambda g: _k(g[0]), reverse=True)
    return out


def buchberger(sys: PolySystem, budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    """Reduced Groebner basis (grevlex) of the ideal generated by ``sys``.

    Pairs are processed by the normal strategy (smallest lcm degree first)
    with Buchberger's coprime and chain criteria.  ``budget`` bounds the
    number of S-polynomial reductions.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    variables = sys.variables
    gens: list[tuple[Exp, dict]] = []
    # inputs are reduced against earlier ones; dropping on equal leading
    # monomials is only valid for an actual basis
    for p in sorted((q for q in sys.polys if q.terms), key=lambda q: _k(q.lm)):
        r = _reduce(p.terms, gens)
        if r:
            r = _monic_terms(r)
            gens.append((max(r, key=_k), r))
    if not gens:
        return GroebnerBasis(variables, ())
    one = (0,) * len(variables)
    if any(lm == one for lm, _ in gens):
        return GroebnerBasis(variables, (Poly.const(1, variables),))

    basis: list[tuple[Exp, dict]] = list(gens)
    pairs: set[tuple[int, int]] = set()
    for j in range(len(basis)):
        for i in range(j):
            pairs.add((i, j))
    active = [True] * len(basis)
    reductions = 0

    def pair_key(ij):
        i, j = ij
        l = _lcm(basis[i][0], basis[j][0])
        return (sum(l), _k(l), j, i)

    while pairs:
        ij = min(pairs, key=pair_key)
        pairs.discard(ij)
        i, j = ij
        if not (active[i] and active[j]):
            continue
        li, lj = basis[i][0], basis[j][0]
        l = _lcm(li, lj)
        if _add(li, lj) == l:
            continue  # coprime leading monomials
        chain = False
        for k in range(len(basis)):
            if k in ij or not active[k]:
                continue
            if _divides(basis[k][0], l):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a not in pairs and b not in pairs:
                    chain = True
                    break
        if chain:
            continue
        if reductions >= budget:
            partial = [Poly(variables, t) for (lm, t), ok in zip(basis, active) if ok]
            raise BudgetExceeded(reductions, partial)
        reductions += 1
        cur = [g for g, ok in zip(basis, active) if ok]
        h = _reduce(_spoly(basis[i], basis[j]), cur)
        if not h:
            continue
        h = _monic_terms(h)
        lh = max(h, key=_k)
        if lh == one:
            return GroebnerBasis(variables, (Poly.const(1, variables),), reductions=reductions)
        n = len(basis)
        basis.append((lh, h))
        active.append(True)
        for k in range(n):
            if active[k]:
                pairs.add((k, n))
    final = _interreduce([g for g, ok in zip(basis, active) if ok])
    return GroebnerBasis(
        variables,
        tuple(Poly(variables, t) for _, t in final),
        reductions=reductions,
    )


def ideal_is_trivial(gb: GroebnerBasis) -> bool:
    """True iff the reduced basis is ``{1}`` (no common complex zero)."""
    return len(gb.generators) == 1 and gb.generators[0].is_constant() and bool(gb.generators[0])


def normal_form(p: Poly, gb: GroebnerBasis) -> Poly:
    basis = [(g.lm, g.terms) for g in gb.generators]
    return Poly(gb.variables, _reduce(p.terms, basis))


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    if ideal_is_trivial(gb):
        return True
    n = len(gb.variables)
    for v in range(n):
        if not any(
            lm[v] > 0 and all(lm[w] == 0 for w in range(n) if w != v)
            for lm in gb.leading_monomials()
        ):
            return False
    return True


def standard_monomials(gb: GroebnerBasis) -> list[Exp]:
    """Monomials not divisible by any leading monomial (zero-dim ideals only)."""
    if not is_zero_dimensional(gb):
        raise ValueError("ideal is not zero-dimensional")
    if ideal_is_trivial(gb):
        return []
    n = len(gb.variables)
    lms = gb.leading_monomials()
    bounds = []
    for v in range(n):
        bounds.append(
            min(
                lm[v]
                for lm in lms
                if lm[v] > 0 and all(lm[w] == 0 for w in range(n) if w != v)
            )
        )
    out = [
        e
        for e in itertools.product(*(range(b) for b in bounds))
        if not any(_divides(lm, e) for lm in lms)
    ]
    out.sort(key=_k)
    return out


def count_solutions(gb: GroebnerBasis):
    """Number of solutions counted with multiplicity, or ``"infinite"``."""
    if not is_zero_dimensional(gb):
        return "infinite"
    return len(standard_monomials(gb))


# ---------------------------------------------------------------------------
# univariate helpers over Q (coefficient lists, highest degree first)


def _uni_trim(p: list) -> list:
    i = 0
    while i < len(p) - 1 and not p[i]:
        i += 1
    return p[i:]


def _uni_divmod(a: list, b: list) -> tuple[list, list]:
    a = _uni_trim(list(a))
    b = _uni_trim(list(b))
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    for i in range(len(q)):
        c = r[i] / b[0]
        q[i] = c
        for j, bj in enumerate(b):
            r[i + j] -= c * bj
    return q, _uni_trim(r[len(q):] or [Fraction(0)])


def _uni_gcd(a: list, b: list) -> list:
    a, b = _uni_trim(list(a)), _uni_trim(list(b))
    while len(b) > 1 or b[0]:
        _, r = _uni_divmod(a, b)
        a, b = b, r
    return [c / a[0] for c in a]


def _uni_squarefree(p: list) -> list:
    n = len(p) - 1
    if n <= 0:
        return p
    dp = [c * (n - i) for i, c in enumerate(p[:-1])]
    g = _uni_gcd(p, dp)
    q, _ = _uni_divmod(p, g)
    return [c / q[0] for c in q]


def minimal_polynomial(gb: GroebnerBasis, var: str) -> list[Fraction]:
    """Monic minimal polynomial of ``var`` modulo a zero-dimensional ideal.

    Returned as a coefficient list, highest degree first.
    """
    stdm = standard_monomials(gb)
    index = {e: i for i, e in enumerate(stdm)}
    x = Poly.var(var, gb.variables)
    power = Poly.const(1, gb.variables)
    vectors: list[list] = []
    while True:
        nf = normal_form(power, gb)
        vec = [Fraction(0)] * len(stdm)
        for e, c in nf.terms.items():
            vec[index[e]] = c
        vectors.append(vec)
        coeffs = _dependency(vectors)
        if coeffs is not None:
            # sum coeffs[k] * x^k = 0 with coeffs[-1] = 1
            return list(reversed(coeffs))
        power = power * x


def _dependency(vectors: list[list]) -> list | None:
    """Coefficients ``c`` with ``c[-1] = 1`` and ``sum c_k v_k = 0``, if any."""
    k = len(vectors) - 1
    m = len(vectors[0])
    # solve sum_{i<k} c_i v_i = -v_k
    rows = [[vectors[i][r] for i in range(k)] + [-vectors[k][r]] for r in range(m)]
    piv_cols = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][k] for i in range(r, m)):
        return None
    sol = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][k]
    return sol + [Fraction(1)]


def radical_basis(gb: GroebnerBasis, budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    """Reduced basis of the radical of a zero-dimensional ideal (Seidenberg)."""
    if ideal_is_trivial(gb):
        return gb
    extra = []
    for v in gb.variables:
        mp = minimal_polynomial(gb, v)
        sf = _uni_squarefree(mp)
        if len(sf) < len(mp):
            deg = len(sf) - 1
            idx = gb.variables.index(v)
            terms = {}
            for i, c in enumerate(sf):
                if c:
                    e = [0] * len(gb.variables)
                    e[idx] = deg - i
                    terms[tuple(e)] = c
            extra.append(Poly(gb.variables, terms))
    if not extra:
        return gb
    return buchberger(PolySystem(list(gb.generators) + extra, gb.variables), budget)


def eliminate(gb: GroebnerBasis, keep: Sequence[str]) -> GroebnerBasis:
    """Reduced grevlex basis of ``I ∩ Q[keep]`` for a zero-dimensional ``I``.

    Monomials in ``keep`` are walked in increasing order and their normal
    forms tested for linear dependence (FGLM change of ordering restricted to
    the kept variables).
    """
    keep = tuple(keep)
    if any(v not in gb.variables for v in keep):
        raise ValueError("kept variables must belong to the ideal")
    if ideal_is_trivial(gb):
        return GroebnerBasis(keep, (Poly.const(1, keep),))
    stdm = standard_monomials(gb)
    index = {e: i for i, e in enumerate(stdm)}
    basis = [(g.lm, g.terms) for g in gb.generators]
    pos = [gb.variables.index(v) for v in keep]
    nk = len(keep)

    def full_exp(e: Exp) -> Exp:
        out = [0] * len(gb.variables)
        for p_, k in zip(pos, e):
            out[p_] = k
        return tuple(out)

    def to_vec(terms: dict) -> dict:
        return {index[e]: c for e, c in terms.items()}

    # echelon rows: pivot -> (vector, combination over staircase monomials)
    echelon: dict[int, tuple[dict, dict]] = {}
    nfs: dict[Exp, dict] = {}
    staircase: list[Exp] = []
    found: list[tuple[Exp, dict]] = []
    todo = [(0,) * nk]
    seen = set(todo)
    while todo:
        todo.sort(key=_k)
        m = todo.pop(0)
        if any(_divides(lm, m) for lm, _ in found):
            continue
        pred = next(((i, m[:i] + (m[i] - 1,) + m[i + 1:]) for i in range(nk) if m[i] and m[:i] + (m[i] - 1,) + m[i + 1:] in nfs), None)
        if pred is None:
            nf = _reduce({full_exp(m): Fraction(1)}, basis)
        else:
            i, q = pred
            shift = [0] * len(gb.variables)
            shift[pos[i]] = 1
            nf = _reduce({_add(e, tuple(shift)): c for e, c in nfs[q].items()}, basis)
        vec = to_vec(nf)
        comb = {m: Fraction(1)}
        for piv in sorted(echelon):
            c = vec.get(piv)
            if c:
                row, rc = echelon[piv]
                for k, v in row.items():
                    nv = vec.get(k, 0) - c * v
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
                for k, v in rc.items():
                    nv = comb.get(k, 0) - c * v
                    if nv:
                        comb[k] = nv
                    else:
                        comb.pop(k, None)
        if not vec:
            found.append((m, comb))
            continue
        piv = min(vec)
        pc = vec[piv]
        row = {k: v / pc for k, v in vec.items()}
        rc = {k: v / pc for k, v in comb.items()}
        for other in list(echelon):
            orow, orc = echelon[other]
            c = orow.get(piv)
            if c:
                for k, v in row.items():
                    nv = orow.get(k, 0) - c * v
                    if nv:
                        orow[k] = nv
                    else:
                        orow.pop(k, None)
                for k, v in rc.items():
                    nv = orc.get(k, 0) - c * v
                    if nv:
                        orc[k] = nv
                    else:
                        orc.pop(k, None)
        echelon[piv] = (row, rc)
        nfs[m] = nf
        staircase.append(m)
        for i in range(nk):
            nm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nm not in seen:
                seen.add(nm)
                todo.append(nm)
    gens = [Poly(keep, terms).monic() for _, terms in found]
    gens.sort(key=lambda g: _k(g.lm), reverse=True)
    return GroebnerBasis(keep, tuple(gens))


def count_distinct_solutions(gb: GroebnerBasis, budget: int = DEFAULT_BUDGET):
    """Number of distinct complex solutions, or ``"infinite"``."""
    if not is_zero_dimensional(gb):
        return "infinite"
    return count_solutions(radical_basis(gb, budget))


def verify_solution(sys: PolySystem, assignment: Mapping[str, object], sat_var: str = "u") -> bool:
    """Exact substitution check of a candidate solution of a system (2).

    Variables other than ``sat_var`` are the colour values; they must be
    pairwise distinct and avoid 0 and 1.  When ``sat_var`` is missing from the
    assignment only the equations not involving it are checked.
    """
    xs = [v for v in sys.variables if v != sat_var]
    if any(v not in assignment for v in xs):
        return False
    vals = [assignment[v] for v in xs]
    for a in vals:
        if a == 0 or a == 1:
            return False
    for a, b in itertools.combinations(vals, 2):
        if a == b:
            return False
    has_u = sat_var in sys.variables and sat_var in assignment
    u_idx = sys.variables.index(sat_var) if sat_var in sys.variables else None
    for p in sys.polys:
        if u_idx is not None and not has_u and any(e[u_idx] for e in p.terms):
            continue
        if p.evaluate(assignment) != 0:
            return False
    return True


def solve_numeric(gb: GroebnerBasis, dps: int = 60) -> list[dict]:
    """Numerical solutions of a zero-dimensional radical ideal.

    Uses the eigenvectors of a multiplication matrix in the standard-monomial
    basis, then polishes each coordinate against the exact univariate minimal
    polynomial.  Every returned coordinate carries the polishing error bound
    under the key ``"_radius"``.
    """
    import mpmath

    stdm = standard_monomials(gb)
    n = len(stdm)
    if n == 0:
        return []
    index = {e: i for i, e in enumerate(stdm)}
    variables = gb.variables
    with mpmath.workdps(dps + 20):
        # random-ish integer linear form separates the points generically
        weights = [3 + 7 * i for i in range(len(variables))]
        form = Poly(variables, {tuple(1 if j == i else 0 for j in range(len(variables))): Fraction(w) for i, w in enumerate(weights)})
        mat = mpmath.matrix(n, n)
        for col, e in enumerate(stdm):
            nf = normal_form(Poly(variables, {e: Fraction(1)}) * form, gb)
            for f, c in nf.terms.items():
                mat[index[f], col] = mpmath.mpf(c.numerator) / c.denominator
        # left eigenvectors: v^T M = lambda v^T  <=>  M^T v = lambda v
        _, vecs = mpmath.eig(mat.T)
        one = index[(0,) * len(variables)]
        coord_nf = {}
        for v in variables:
            nf = normal_form(Poly.var(v, variables), gb)
            coord_nf[v] = [(index[e], mpmath.mpf(c.numerator) / c.denominator) for e, c in nf.terms.items()]
        roots = {}
        for v in variables:
            mp = minimal_polynomial(gb, v)
            rts, err = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in mp], maxsteps=400, extraprec=4 * dps, error=True)
            roots[v] = (list(rts), err)
        sols = []
        for k in range(n):
            vec = [vecs[i, k] for i in range(n)]
            scale = vec[one]
            vec = [x / scale for x in vec]
            sol = {}
            radius = mpmath.mpf(0)
            for v in variables:
                approx = mpmath.fsum(c * vec[i] for i, c in coord_nf[v])
                rts, err = roots[v]
                best = min(rts, key=lambda r: abs(r - approx))
                sol[v] = best
                radius = max(radius, err)
            sol["_radius"] = radius
            sols.append(sol)
    return sols


# ---------------------------------------------------------------------------
# on-disk cache


CACHE_ENV = "FIVEDIST_CACHE_DIR"
CACHE_VERSION = 1


class BasisCache:
    """Content-addressed store of reduced Groebner bases.

    Entries are JSON files named by the SHA-256 of the serialized input
    system.  Entries written under another ``CACHE_VERSION`` are ignored.
    """

    def __init__(self, root: str | os.PathLike | None = None):
        root = root or os.environ.get(CACHE_ENV)
        self.root = Path(root) if root else None
        self.hits = 0
        self.misses = 0

    @property
    def enabled(self) -> bool:
        return self.root is not None

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, sys: PolySystem) -> GroebnerBasis | None:
        if not self.enabled:
            return None
        path = self._path(sys.content_hash())
        if not path.exists():
            self.misses += 1
            return None
        try:
            data = json.loads(path.read_text())
        except (OSError, ValueError):
            self.misses += 1
            return None
        if data.get("version") != CACHE_VERSION or data.get("system") != sys.to_text():
            self.misses += 1
            return None
        self.hits += 1
        basis = PolySystem.from_text(data["basis"])
        return GroebnerBasis(basis.variables, basis.polys)

    def put(self, sys: PolySystem, gb: GroebnerBasis) -> None:
        if not self.enabled:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        payload = {"version": CACHE_VERSION, "system": sys.to_text(), "basis": gb.to_text()}
        tmp = self._path(sys.content_hash()).with_suffix(".tmp")
        tmp.write_text(json.dumps(payload))
        tmp.replace(self._path(sys.content_hash()))

    def groebner(self, sys: PolySystem, budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
        gb = self.get(sys)
        if gb is None:
            gb = buchberger(sys, budget)
            self.put(sys, gb)
        return gb
