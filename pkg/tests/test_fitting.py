import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pacstl.errors import InputError
from pacstl.geomsets.sets import unit_ball_volume
from pacstl.reach import expand_corners, fit_mvee, fit_zonotope_template, refine_zonotope

seeds = st.integers(0, 2**31 - 1)


def test_mvee_of_square_corners_is_circumscribed_circle():
    e = fit_mvee([[-1, -1], [-1, 1], [1, -1], [1, 1]], tol=1e-9)
    assert np.allclose(e.center, 0.0, atol=1e-6)
    assert np.allclose(np.linalg.eigvalsh(e.shape_matrix), 2.0, rtol=1e-5)


def test_mvee_of_circle_points_is_unit_ball():
    th = np.linspace(0, 2 * math.pi, 200, endpoint=False)
    e = fit_mvee(np.c_[np.cos(th), np.sin(th)], tol=1e-9)
    assert np.allclose(e.center, 0.0, atol=1e-6)
    assert np.allclose(np.linalg.eigvalsh(e.shape_matrix), 1.0, rtol=1e-4)


@given(seeds, st.integers(2, 5))
def test_mvee_contains_points_and_beats_box_ellipsoid(seed, n):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(60, n)) @ rng.normal(size=(n, n))
    e = fit_mvee(P)
    assert np.all(e.membership(P) <= 1.0 + 1e-6)
    half = (P.max(axis=0) - P.min(axis=0)) / 2
    box_vol = unit_ball_volume(n) * n ** (n / 2) * np.prod(half)
    assert e.volume() <= box_vol * (1 + 1e-6)


def test_mvee_degenerate_cloud_warns():
    with pytest.warns(RuntimeWarning, match="degenerate"):
        e = fit_mvee([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
    assert np.all(e.membership([[0.0, 0.0], [2.0, 2.0]]) <= 1 + 1e-6)


def test_mvee_rejects_non_finite():
    with pytest.raises(InputError):
        fit_mvee([[0.0, np.nan], [1.0, 1.0], [2.0, 0.0]])


def test_template_box_example():
    pts = np.array([[-1, 0], [-1, 4], [2, 0], [2, 4]], float)
    z = fit_zonotope_template(pts, c=[0.5, 2.0])
    assert np.allclose(z.G, np.diag([1.5, 2.0]), rtol=1e-8)
    assert np.all(z.contains(pts))


def test_template_single_point_floors_with_warning():
    with pytest.warns(RuntimeWarning, match="collapsed"):
        z = fit_zonotope_template([[1.0, 2.0]], c=[1.0, 2.0])
    assert np.allclose(np.diag(z.G), 1e-9, rtol=1e-6)


@given(seeds)
def test_template_diagonal_closed_form(seed):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(40, 3))
    d = rng.uniform(0.5, 2.0, 3)
    z = fit_zonotope_template(P, G0=np.diag(d))
    lam = np.abs((P - P.mean(axis=0)) / d).max(axis=0)
    assert np.allclose(np.diag(z.G) / d, lam, rtol=1e-8)


@given(seeds)
def test_template_general_is_feasible(seed):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(50, 2))
    r2 = math.sqrt(2)
    G0 = np.array([[0, 1, r2, r2], [1, 0, r2, -r2]])
    z = fit_zonotope_template(P, G0=G0)
    assert np.all(z.membership(P) <= 1 + 1e-7)
    # scale of each row is tight: shrinking any row by 1% breaks feasibility
    for j in range(2):
        G = z.G.copy()
        G[j] *= 0.99
        assert np.abs((P - z.c) @ np.linalg.pinv(G).T).max() > 1.0


def test_template_rejects_rank_deficient():
    with pytest.raises(InputError):
        fit_zonotope_template(np.eye(2), G0=np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_refine_zero_iters_is_identity():
    rng = np.random.default_rng(0)
    P = rng.normal(size=(30, 2))
    z = fit_zonotope_template(P)
    assert refine_zonotope(z, P, iters=0) is z


@pytest.mark.parametrize("seed", range(4))
def test_refine_does_not_increase_volume(seed):
    rng = np.random.default_rng(seed)
    P = rng.uniform(-1, 1, (200, 2)) * [2.0, 0.5]
    th = 0.6
    G0 = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    z0 = fit_zonotope_template(P, G0=G0)
    vols = [z0.volume()]
    z = z0
    for _ in range(3):
        z = refine_zonotope(z, P, iters=30)
        vols.append(z.volume())
        assert np.all(z.membership(P) <= 1 + 1e-7)
    assert all(b <= a * (1 + 1e-12) for a, b in zip(vols, vols[1:]))
    assert vols[-1] < vols[0]


def test_expand_corners_identity_for_zero_size():
    P = np.array([[1.0, 2.0, 0.3, 5.0]])
    out = expand_corners(P, 0.0, 0.0)
    assert out.shape == (4, 4) and np.allclose(out, P)


def test_expand_corners_heading_zero():
    out = expand_corners([[0.0, 0.0, 0.0]], 1.0, 0.5)
    assert np.allclose(out[:, :2], [[1, 0.5], [1, -0.5], [-1, 0.5], [-1, -0.5]])


def test_expand_corners_heading_quarter_turn():
    out = expand_corners([[0.0, 0.0, math.pi / 2, 7.0]], 1.0, 0.5)
    assert {tuple(np.round(p, 12)) for p in out[:, :2]} == {(0.5, 1.0), (-0.5, 1.0), (0.5, -1.0), (-0.5, -1.0)}
    assert np.allclose(out[:, 2:], [math.pi / 2, 7.0])


def test_mvee_tolerance_certificate():
    rng = np.random.default_rng(3)
    P = rng.normal(size=(300, 3))
    tight = fit_mvee(P, tol=1e-9)
    loose = fit_mvee(P, tol=1e-3)
    assert loose.volume() <= tight.volume() * (1 + 1e-3) ** 3
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fit_mvee(P, tol=1e-6)
