from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fivedist.polysys import (
    BasisCache,
    BudgetExceeded,
    Poly,
    PolySystem,
    buchberger,
    count_distinct_solutions,
    count_solutions,
    eliminate,
    ideal_is_trivial,
    is_zero_dimensional,
    minimal_polynomial,
    normal_form,
    radical_basis,
    solve_numeric,
    verify_solution,
)

VARS = ("x", "y", "z")


def to_sympy(p: Poly, syms):
    expr = 0
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s**k
        expr += term
    return expr


def sympy_reduced(polys, variables):
    syms = sympy.symbols(variables)
    G = sympy.groebner([to_sympy(p, syms) for p in polys], *syms, order="grevlex")
    return {monic(g, syms) for g in G.exprs}, syms


def monic(expr, syms):
    return sympy.expand(expr / sympy.LC(expr, *syms, order="grevlex"))


def random_system(rng: random.Random, nvars: int, npolys: int) -> PolySystem:
    variables = VARS[:nvars]
    xs = Poly.gens(variables)
    polys = []
    for _ in range(npolys):
        p = Poly(variables)
        for _ in range(rng.randint(1, 4)):
            m = Poly.const(rng.randint(-3, 3), variables)
            for x in xs:
                for _ in range(rng.randint(0, 2)):
                    m = m * x
            p = p + m
        if p.terms:
            polys.append(p)
    return PolySystem(polys or [xs[0]], variables)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
def test_buchberger_matches_sympy(seed, nvars, npolys):
    sys = random_system(random.Random(seed), nvars, npolys)
    gb = buchberger(sys, budget=5000)
    expected, syms = sympy_reduced(sys.polys, sys.variables)
    got = {monic(to_sympy(g, syms), syms) for g in gb.generators}
    assert got == expected


def test_trivial_and_zero_dimensional():
    x, y = Poly.gens(("x", "y"))
    inconsistent = PolySystem([x * y - 1, x], ("x", "y"))
    assert ideal_is_trivial(buchberger(inconsistent))
    gb = buchberger(PolySystem([x * x - 2, y * y - 3], ("x", "y")))
    assert is_zero_dimensional(gb)
    assert count_solutions(gb) == 4
    assert not is_zero_dimensional(buchberger(PolySystem([x * y], ("x", "y"))))


def test_distinct_solutions_ignore_multiplicity():
    x, y = Poly.gens(("x", "y"))
    gb = buchberger(PolySystem([(x - 1) * (x - 1), y - x], ("x", "y")))
    assert count_solutions(gb) == 2
    assert count_distinct_solutions(gb) == 1
    assert count_solutions(radical_basis(gb)) == 1


def test_minimal_polynomial():
    x, y = Poly.gens(("x", "y"))
    gb = buchberger(PolySystem([x * x - 2, y - x - 1], ("x", "y")))
    # y = 1 + sqrt2: y^2 - 2y - 1
    assert minimal_polynomial(gb, "y") == [1, -2, -1]


def test_eliminate_matches_sympy_lex():
    x, y, u = Poly.gens(("x", "y", "u"))
    sys = PolySystem([x * x - 3 * x + 2, y - x * x, u * x - 1], ("x", "y", "u"))
    J = eliminate(buchberger(sys), ["x", "y"])
    syms = sympy.symbols("u x y")
    G = sympy.groebner([to_sympy(p.extend(("u", "x", "y")), syms) for p in sys.polys], *syms, order="lex")
    elim = [g for g in G.exprs if not g.has(syms[0])]
    for g in J.generators:
        expr = to_sympy(g, sympy.symbols("x y"))
        assert sympy.reduced(expr, elim, *syms[1:], order="lex")[1] == 0
    assert count_solutions(J) == 2


def test_normal_form_reduces_ideal_members_to_zero():
    x, y = Poly.gens(("x", "y"))
    gb = buchberger(PolySystem([x * x + y * y - 1, x - y], ("x", "y")))
    member = (x * x + y * y - 1) * (x + 3) + (x - y) * y * y
    assert not normal_form(member, gb).terms


def test_budget_is_reported():
    x, y, z = Poly.gens(VARS)
    # leading monomials x^2, xy, y^2 share variables, so S-pairs must be reduced
    hard = PolySystem([x * y - z * z, y * z - x * x + 1, x * z - y * y + 2], VARS)
    with pytest.raises(BudgetExceeded) as info:
        buchberger(hard, budget=1)
    assert info.value.partial


def test_budget_must_be_positive():
    x = Poly.var("x", ("x",))
    with pytest.raises(ValueError):
        buchberger(PolySystem([x], ("x",)), budget=0)


def test_verify_solution_requires_distinct_values():
    x1, x2, u = Poly.gens(("x1", "x2", "u"))
    sys = PolySystem([(x1 - 2) * (x2 - 3)], ("x1", "x2", "u"))
    assert verify_solution(sys, {"x1": 2, "x2": 5})
    assert not verify_solution(sys, {"x1": 2, "x2": 2})
    assert not verify_solution(sys, {"x1": 1, "x2": 3})
    assert not verify_solution(sys, {"x1": 4, "x2": 5})


def test_solve_numeric_recovers_roots():
    x, y = Poly.gens(("x", "y"))
    gb = buchberger(PolySystem([x * x - 2, y - x * x * x], ("x", "y")))
    sols = solve_numeric(gb, dps=40)
    xs = sorted(float(s["x"]) for s in sols)
    assert xs == pytest.approx([-(2**0.5), 2**0.5])
    with mpmath.workdps(40):
        for s in sols:
            assert abs(s["y"] - s["x"] ** 3) < 1e-30


def test_text_roundtrip_and_hash():
    sys = random_system(random.Random(3), 3, 3)
    again = PolySystem.from_text(sys.to_text())
    assert again.polys == sys.polys
    assert again.content_hash() == sys.content_hash()
    with pytest.raises(ValueError):
        PolySystem.from_text("x + 1\n")


def test_cache_roundtrip(tmp_path):
    cache = BasisCache(tmp_path)
    sys = random_system(random.Random(11), 2, 2)
    first = cache.groebner(sys)
    second = cache.groebner(sys)
    assert cache.hits == 1
    assert first.generators == second.generators


def test_cache_ignores_other_versions(tmp_path):
    import json

    cache = BasisCache(tmp_path)
    sys = random_system(random.Random(12), 2, 2)
    cache.groebner(sys)
    path = next(tmp_path.glob("*.json"))
    data = json.loads(path.read_text())
    data["version"] = -1
    path.write_text(json.dumps(data))
    assert cache.get(sys) is None


def test_cache_disabled_without_root(monkeypatch):
    monkeypatch.delenv("FIVEDIST_CACHE_DIR", raising=False)
    assert not BasisCache().enabled
