"""a <-> b conversion and pointwise E evaluation against closed forms.

The disk and annulus give E in closed form outside the support:

    disk R at c:      E(z, w) = 1 - R^2 / ((z - c)(conj(w) - conj(c)))
    annulus r < R:    E(z, w) = (1 - R^2/(z conj(w))) / (1 - r^2/(z conj(w)))

and the rotationally invariant b-diagonals have product formulas.  Those
pin a_to_b, eval_E, and boundary_root independently of each other.
"""
import math

import numpy as np
import pytest

from expotrans.errors import InputError, MathDomainError
from expotrans.exptransform import (
    AnnulusProfile,
    TDiskProfile,
    a_to_b,
    b_to_a,
    boundary_root,
    eval_E,
    nevanlinna_density,
    rot_diag_b,
)
from expotrans.shapes import Annulus, Disk, Ellipse, Weighted, moments


def random_hermitian(rng, n: int) -> np.ndarray:
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (m + m.conj().T) / 2


def test_disk_b_is_rank_one():
    b = a_to_b(moments(Disk(0.0, 1.0), 6)).b
    want = np.zeros((6, 6))
    want[0, 0] = 1.0
    assert np.max(np.abs(b - want)) < 1e-14


def test_annulus_b_diagonal():
    r, R = 0.5, 1.0
    b = a_to_b(moments(Annulus(0.0, r, R), 8)).b
    for k in range(8):
        assert abs(b[k, k] - (R**2 - r**2) * r ** (2 * k)) < 1e-14
    off = b - np.diag(np.diag(b))
    assert np.max(np.abs(off)) < 1e-14


def test_tdisk_b_diagonal():
    t = 0.5
    b = a_to_b(moments(Weighted(Disk(0.0, 1.0), t), 8)).b
    assert abs(b[0, 0] - 0.5) < 1e-14
    assert abs(b[1, 1] - 0.125) < 1e-14
    assert abs(b[2, 2] - 1.0 / 16.0) < 1e-14
    for k in range(8):
        assert abs(b[k, k] - rot_diag_b(TDiskProfile(t), k)) < 1e-14


def test_rot_diag_b_values():
    assert rot_diag_b(TDiskProfile(1.0), 0) == 1.0
    assert rot_diag_b(TDiskProfile(1.0), 3) == 0.0
    assert abs(rot_diag_b(TDiskProfile(0.5), 2) - 1.0 / 16.0) < 1e-15
    assert abs(rot_diag_b(AnnulusProfile(0.5, 1.0), 3) - 3.0 / 256.0) < 1e-15
    with pytest.raises(InputError):
        rot_diag_b(TDiskProfile(0.5), -1)
    with pytest.raises(InputError):
        TDiskProfile(1.5)
    with pytest.raises(InputError):
        AnnulusProfile(1.0, 0.5)


def test_round_trip_random():
    rng = np.random.default_rng(19)
    for n in (2, 5, 12):
        for _ in range(4):
            a = random_hermitian(rng, n)
            back = b_to_a(a_to_b(a)).a
            assert np.max(np.abs(back - a)) < 1e-10


def test_first_column_exact():
    rng = np.random.default_rng(23)
    a = random_hermitian(rng, 9)
    b = a_to_b(a).b
    assert np.array_equal(b[:, 0], a[:, 0])


def test_b_psd_on_shapes():
    for s in (Disk(0.3, 1.0), Annulus(0.0, 0.4, 1.1), Ellipse(0.0, 2.0, 1.0, 0.2),
              Weighted(Disk(0.0, 1.0), 0.7)):
        b = a_to_b(moments(s, 8)).b
        lo = np.linalg.eigvalsh(b).min()
        assert lo > -1e-9 * np.linalg.norm(b, 2)


def test_eval_E_disk():
    d = Disk(0.25 + 0.1j, 1.0)
    for z, w in ((2.0 + 0.5j, 1.8 - 0.3j), (3.0, 2.5j + 1.5)):
        want = 1.0 - 1.0 / ((z - d.center) * np.conj(w - d.center))
        assert abs(eval_E(d, z, w) - want) < 1e-9
    assert abs(eval_E(Disk(0.0, 1.0), 2.0, 2.0) - 0.75) < 1e-10


def test_eval_E_annulus():
    r, R = 0.5, 1.0
    ann = Annulus(0.0, r, R)
    for z, w in ((1.7, 1.4 + 0.4j), (2.2j, -1.9)):
        x = 1.0 / (z * np.conj(w))
        want = (1.0 - R**2 * x) / (1.0 - r**2 * x)
        assert abs(eval_E(ann, z, w) - want) < 1e-9


def test_eval_E_matches_series_tail():
    # far from the support the truncated series controls E to its tail size
    s = Ellipse(0.0, 1.5, 0.5, 0.0)
    n = 8
    b = a_to_b(moments(s, n)).b
    z = w = 6.0 + 2.0j
    x = 1.0 / (z * np.conj(w))
    series = 1.0 + 0.0j
    for j in range(n):
        for k in range(n):
            series -= b[j, k] * z ** (-j - 1) * np.conj(w) ** (-k - 1)
    tail_bound = abs(b[n - 1, n - 1]) * abs(x) ** n / (1.0 - abs(x))
    # the evaluator itself carries quadrature error near its 1e-9 stop rule
    assert abs(eval_E(s, z, w) - series) < tail_bound + 5e-8


def test_boundary_root_disk():
    got = boundary_root(Disk(0.0, 1.0), 1.0 + 0.0j, (0.3, 2.0))
    assert abs(got - 1.0) < 1e-4


def test_boundary_root_no_crossing():
    with pytest.raises(MathDomainError):
        boundary_root(Disk(0.0, 1.0), 1.0 + 0.0j, (2.0, 4.0))


def test_nevanlinna_density_values():
    assert abs(nevanlinna_density(0.5, 0.5) - 1.0 / math.pi) < 1e-15
    with pytest.raises(MathDomainError):
        nevanlinna_density(1.5, 0.5)
    with pytest.raises(MathDomainError):
        nevanlinna_density(0.5, 1.0)


def test_nevanlinna_moments_match_diagonal():
    # Beta-integral oracle: int x^k (1/x - 1)^t dx = B(k+1-t, 1+t), so the
    # k-th moment of the density is sin(pi t)/pi * G(k+1-t) G(1+t) / G(k+2)
    def beta_moment(t, k):
        return (
            math.sin(math.pi * t)
            / math.pi
            * math.gamma(k + 1 - t)
            * math.gamma(1 + t)
            / math.gamma(k + 2)
        )

    for t in (0.3, 0.5, 0.8):
        assert abs(beta_moment(t, 0) - t) < 1e-14
        for k in range(9):
            assert abs(beta_moment(t, k) - rot_diag_b(TDiskProfile(t), k)) < 1e-14
    assert abs(beta_moment(0.5, 1) - 1.0 / 8.0) < 1e-15
    # and the pointwise density matches the same measure by quadrature at
    # t = 1/2, where x = sin^2(theta) removes both endpoint singularities
    nodes, weights = np.polynomial.legendre.leggauss(2000)
    theta = 0.25 * math.pi * (nodes + 1.0)
    w = 0.25 * math.pi * weights
    x = np.sin(theta) ** 2
    dx = 2.0 * np.sin(theta) * np.cos(theta)
    dens = nevanlinna_density(0.5, x)
    for k in range(9):
        mk = float(np.sum(w * x**k * dens * dx))
        assert abs(mk - beta_moment(0.5, k)) < 1e-10


def test_conversion_input_checks():
    with pytest.raises(InputError):
        a_to_b(np.zeros((2, 3)))
    rng = np.random.default_rng(1)
    with pytest.raises(InputError):
        a_to_b(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
