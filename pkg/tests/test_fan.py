import random
from fractions import Fraction

import pytest

from cherncount.errors import FanError
from cherncount.fan import (
    Fan2D,
    FanCase,
    Ray,
    adjacent_intersection,
    divisor_square,
    intersection_matrix,
    parse_rays,
    pullback_divisor,
    ray_data,
    reference_fan,
    self_intersection,
    validate_standard_fan,
    wedge,
)

from helpers import F1, P2, subdivide


def test_wedge():
    assert wedge((1, 0), (0, 1)) == 1
    assert wedge((0, 1), (1, 0)) == -1
    assert wedge((2, 3), (2, 3)) == 0


def test_rays_are_primitive():
    assert tuple(Ray(1, 2)) == (1, 2)
    with pytest.raises(FanError):
        Ray(2, 4)
    with pytest.raises(FanError):
        Ray(0, 0)


def test_parse_rays():
    assert parse_rays("(-1,0); (0,1);(0,-1)") == [Ray(-1, 0), Ray(0, 1), Ray(0, -1)]
    with pytest.raises(FanError):
        parse_rays("(1,2,3)")


def test_reference_fan_self_intersections():
    f = reference_fan()
    got = [self_intersection(f, f.index(r)) for r in f.interior]
    assert got == [-4, -1, -3, -1, -2]


def test_reference_fan_is_smooth_and_valid():
    diag = validate_standard_fan(reference_fan())
    assert diag.valid and diag.unimodular
    assert all(adjacent_intersection(reference_fan(), i) == 1 for i in range(len(reference_fan()) - 1))


def test_projective_plane_and_hirzebruch():
    f = Fan2D.complete(P2)
    assert [self_intersection(f, i) for i in range(3)] == [1, 1, 1]
    g = Fan2D.complete(F1)
    assert self_intersection(g, g.index((1, 1))) == -1
    assert sorted(self_intersection(g, i) for i in range(4)) == [-1, 0, 0, 1]


def test_intersection_matrix_of_standard_fan():
    m = intersection_matrix(reference_fan())
    assert m[0][0] is None and m[-1][-1] is None
    assert m[1][2] == 1 and m[2][1] == 1 and m[1][3] == 0


def test_singular_cone_gives_fractional_numbers():
    f = Fan2D.standard([(-1, 0), (0, 1), (2, 1), (0, -1)])
    assert not validate_standard_fan(f).unimodular
    assert adjacent_intersection(f, 1) == Fraction(1, 2)
    assert self_intersection(f, 1) == Fraction(-1, 2)


@pytest.mark.parametrize("rays,message", [
    ([(0, 1), (1, 2), (0, -1)], "first ray"),
    ([(-1, 0), (1, 2), (0, 1), (0, -1)], "clockwise"),
    ([(-1, 0), (0, 1), (-1, -1), (0, -1)], "outside"),
    ([(-1, 0), (0, 1), (0, 1), (0, -1)], "duplicate"),
])
def test_invalid_standard_fans(rays, message):
    diag = validate_standard_fan(rays)
    assert not diag.valid
    assert any(message in e for e in diag.errors)
    with pytest.raises(FanError):
        Fan2D.standard(rays)


def test_bounding_rays():
    assert validate_standard_fan(reference_fan()).bounding_rays


def test_ray_data():
    assert ray_data((1, 4)) == (3, 5)
    assert ray_data((0, 1)) == (1, 2)
    assert ray_data((1, 2), FanCase.M32) == (3, 5)
    assert reference_fan().ray_data((1, 3)) == (2, 3)


def test_pullback_examples():
    coarse = Fan2D.complete(P2)
    fine = Fan2D.complete(F1)
    pb = dict(pullback_divisor(coarse, fine, (1, 0)))
    assert pb == {Ray(1, 0): 1, Ray(1, 1): 1, Ray(0, 1): 0, Ray(-1, -1): 0}
    std = reference_fan()
    sub = Fan2D.standard([(-1, 0), (0, 1), (1, 4), (1, 3), (2, 5), (1, 2), (1, 1), (0, -1)])
    pb = dict(pullback_divisor(std, sub, (1, 2)))
    assert pb[Ray(1, 1)] == Fraction(1, 1)


def test_pullback_rejects_non_refinements():
    with pytest.raises(FanError):
        pullback_divisor(Fan2D.complete(F1), Fan2D.complete(P2), (1, 0))


def _transform(M, v):
    return (M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1])


def _random_unimodular(rng):
    M = [[1, 0], [0, 1]]
    for _ in range(6):
        k = rng.randint(-2, 2)
        E = [[1, k], [0, 1]] if rng.random() < 0.5 else [[1, 0], [k, 1]]
        M = [[sum(M[i][t] * E[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
    return M


def test_self_intersection_is_invariant_under_unimodular_maps():
    rng = random.Random(3)
    for _ in range(30):
        rays = Fan2D.complete(subdivide(P2, rng, 4)).rays
        M = _random_unimodular(rng)
        f = Fan2D.complete(rays)
        g = Fan2D.complete([_transform(M, r) for r in rays])
        for r in rays:
            assert self_intersection(f, f.index(r)) == self_intersection(g, g.index(_transform(M, r)))


def test_smooth_complete_fans_satisfy_twelve_minus_three_n():
    rng = random.Random(4)
    for _ in range(40):
        rays = list(P2)
        for _ in range(rng.randint(0, 6)):
            # star subdivisions keep the fan smooth
            i = rng.randrange(len(rays))
            u, v = rays[i], rays[(i + 1) % len(rays)]
            rays.insert(i + 1, (u[0] + v[0], u[1] + v[1]))
        f = Fan2D.complete(rays)
        n = len(f.rays)
        assert sum(self_intersection(f, i) for i in range(n)) == 12 - 3 * n


def test_pullback_preserves_self_intersection_on_random_subdivisions():
    rng = random.Random(8)
    checked = 0
    for _ in range(120):
        coarse = Fan2D.complete(subdivide(rng.choice([P2, F1]), rng, rng.randint(0, 3)))
        fine = Fan2D.complete(subdivide(coarse.rays, rng, rng.randint(1, 4)))
        coeffs = {r: Fraction(rng.randint(-3, 3)) for r in coarse.rays}
        total = {}
        for r, c in coeffs.items():
            for s, a in pullback_divisor(coarse, fine, r):
                total[s] = total.get(s, 0) + c * a
        assert divisor_square(fine, total) == divisor_square(coarse, coeffs)
        checked += 1
    assert checked >= 100
