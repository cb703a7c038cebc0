"""Independent reference computations used by the tests.

None of these reuse the package's algorithms: they work from first
principles (brute-force lattice counts, weight inequalities, Pluecker
coordinates with sympy, Groebner reduction with sympy).
"""

from fractions import Fraction
from itertools import combinations, product
import random

import sympy


def brute_colength(gens):
    """Lattice points not divisible by any generator."""
    xmax = max(a for a, _ in gens) + 1
    ymax = max(b for _, b in gens) + 1
    return sum(
        1
        for p, q in product(range(xmax), range(ymax))
        if not any(a <= p and b <= q for a, b in gens)
    )


def in_closure_by_weights(gens, p, q):
    """x^p y^q lies in the integral closure iff it passes every weight test.

    The defect alpha*p + beta*q - min_g(alpha*a + beta*b) is convex in the
    weight, so it suffices to test the tie points of pairs of generators and
    the two coordinate weights.
    """
    weights = {(1, 0), (0, 1)}
    for (a1, b1), (a2, b2) in combinations(gens, 2):
        alpha, beta = b2 - b1, a1 - a2
        if alpha * beta > 0:
            weights.add((abs(alpha), abs(beta)))
    for alpha, beta in weights:
        if alpha * p + beta * q < min(alpha * a + beta * b for a, b in gens):
            return False
    return True


def random_staircase(rng: random.Random, max_colength: int):
    """Generators of a random monomial ideal of colength between 1 and max_colength."""
    while True:
        r = rng.randint(1, 5)
        heights = sorted((rng.randint(1, max_colength) for _ in range(r)), reverse=True)
        if sum(heights) <= max_colength:
            gens = [(a, h) for a, h in enumerate(heights)] + [(r, 0)]
            return gens


def pluecker_limit(gens, direction, N):
    """Flat limit as t -> oo via leading Pluecker coordinates, one weight block at a time.

    Returns the set of exponent pairs of degree < N spanning the limit, or
    raises AssertionError if some block's limit is not a coordinate plane.
    """
    x, y, t = sympy.symbols("x y t")
    inside = lambda a, b: any(a >= ga and b >= gb for ga, gb in gens)
    if direction == "x+ty2":
        sub = {x: x + t * y**2}
        weight = lambda a, b: 2 * a + b
    else:
        sub = {y: y + t * x}
        weight = lambda a, b: a + b
    monos = [(a, d - a) for d in range(N) for a in range(d + 1)]
    blocks = {}
    for a, b in monos:
        blocks.setdefault(weight(a, b), []).append((a, b))
    result = set()
    for w, block in blocks.items():
        cols = [m for m in block if inside(*m)]
        if not cols:
            continue
        rows = block
        mat = []
        for a, b in cols:
            img = sympy.Poly(sympy.expand((x**a * y**b).subs(sub, simultaneous=True)), x, y)
            coeffs = {}
            for (ea, eb), c in img.terms():
                if ea + eb < N:
                    coeffs[(ea, eb)] = c
            mat.append([coeffs.get(r, 0) for r in rows])
        M = sympy.Matrix(mat).T  # rows = ambient monomials, columns = generators of the image
        k = M.shape[1]
        best, winners = None, []
        for S in combinations(range(len(rows)), k):
            det = sympy.expand(M.extract(list(S), list(range(k))).det())
            if det == 0:
                continue
            deg = sympy.degree(det, t)
            if best is None or deg > best:
                best, winners = deg, [S]
            elif deg == best:
                winners.append(S)
        assert len(winners) == 1, f"limit in weight {w} is not monomial"
        result.update(rows[i] for i in winners[0])
    return result


def principal_parts_N2():
    """Degree-two part of c((1 + D) * c(cotangent tensor L)) as (D^2, Dc1, c1^2, c2)."""
    D, c1, c2 = sympy.symbols("D c1 c2")
    # rank-two cotangent bundle twisted by L: c1 + 2D, c2 + c1 D + D^2
    total = sympy.expand((1 + D) * (1 + (c1 + 2 * D) + (c2 + c1 * D + D**2)))
    poly = sympy.Poly(total, D, c1, c2)
    get = lambda e: Fraction(int(poly.coeff_monomial(e)))
    return (get(D**2), get(D * c1), get(c1**2), get(c2))


def surface_truncation_monomials(symbols_with_degree, top):
    """Monomials generating the ideal killed by truncation: surface degree > 2 and total degree > top."""
    D, c1, c2 = symbols_with_degree[0][0], symbols_with_degree[1][0], symbols_with_degree[2][0]
    gens = [D**3, D**2 * c1, D * c1**2, c1**3, c2 * D, c2 * c1, c2**2]
    syms = [s for s, _ in symbols_with_degree]
    degs = [d for _, d in symbols_with_degree]
    for exps in product(*[range(top + 2) for _ in syms]):
        d = sum(e * g for e, g in zip(exps, degs))
        if top + 1 <= d <= top + 2:
            gens.append(sympy.Mul(*[s**e for s, e in zip(syms, exps)]))
    return gens
