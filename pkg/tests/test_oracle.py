import math

import numpy as np
import pytest

from pt_horizon import (CouplingPoint, InvalidInputError, SpectralClass,
                        build_circular, char_poly, eigenpairs, eigenvalues,
                        in_domain_oracle)
from pt_horizon.oracle import build_circular_batch, eigenvalues_batch, real_simple_batch
from pt_horizon.spectrum import plus_minus_residual, sort_key


class TestCharPoly:
    def test_diagonal(self):
        poly = char_poly(np.diag([-3.0, -1.0, 1.0, 3.0]))
        assert poly.c4 == 1
        assert poly.c3 == pytest.approx(0, abs=1e-12)
        assert poly.c2 == pytest.approx(-10)
        assert poly.c1 == pytest.approx(0, abs=1e-12)
        assert poly.c0 == pytest.approx(9)

    def test_unit_point(self):
        poly = char_poly(build_circular(CouplingPoint(1, 1, 1)))
        assert poly.c2 == pytest.approx(-6)
        assert poly.c0 == pytest.approx(5)

    def test_sqrt5_point(self):
        # q1 vanishes and q0 = 9 + 30 + 25 = 64, so det(E I - H) = E^4 + 64
        poly = char_poly(build_circular(CouplingPoint(0, math.sqrt(5), 0)))
        assert poly.c2 == pytest.approx(0, abs=1e-12)
        assert poly.c0 == pytest.approx(64)

    def test_even_for_lattice_matrices(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            poly = char_poly(build_circular(CouplingPoint(*rng.uniform(-3, 3, 3))))
            assert abs(poly.c3) < 1e-12
            assert abs(poly.c1) < 1e-12 * (1 + abs(poly.c0))

    def test_matches_numpy_on_general_matrices(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            H = rng.normal(size=(4, 4))
            mine = np.array(char_poly(H))
            ref = np.poly(H)
            assert np.allclose(mine, ref, rtol=1e-9, atol=1e-9)

    def test_rejects_wrong_shape(self):
        with pytest.raises(InvalidInputError):
            char_poly(np.eye(3))


class TestEigenvalues:
    def test_diagonal(self):
        spec = eigenvalues(np.diag([-3.0, -1.0, 1.0, 3.0]))
        assert spec.classification is SpectralClass.REAL_SIMPLE
        assert sorted(spec.values.real) == pytest.approx([-3, -1, 1, 3])

    def test_block_point(self):
        spec = eigenvalues(build_circular(CouplingPoint(2.9, 0, 0)))
        assert spec.classification is SpectralClass.REAL_SIMPLE
        expect = sorted([-1, 1, -math.sqrt(0.59), math.sqrt(0.59)])
        assert sorted(spec.values.real) == pytest.approx(expect, abs=1e-10)

    def test_complex_point(self):
        spec = eigenvalues(build_circular(CouplingPoint(0, math.sqrt(5), 0)))
        assert spec.classification is SpectralClass.COMPLEX
        assert np.abs(spec.values.imag).max() > 0.1

    def test_degenerate_point(self):
        spec = eigenvalues(build_circular(CouplingPoint(math.sqrt(8), 0, 0)))
        assert spec.classification is SpectralClass.REAL_DEGENERATE

    def test_conjugation_closure(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            spec = eigenvalues(build_circular(CouplingPoint(*rng.uniform(-3, 3, 3))))
            conj = sort_key(np.conj(spec.values))
            assert np.allclose(sort_key(spec.values), conj, atol=1e-9)

    def test_root_coefficient_consistency(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            H = build_circular(CouplingPoint(*rng.uniform(-3, 3, 3)))
            vals = eigenvalues(H).values
            poly = char_poly(H)
            e1 = vals.sum()
            e2 = sum(vals[i] * vals[j] for i in range(4) for j in range(i + 1, 4))
            e3 = sum(vals[i] * vals[j] * vals[k]
                     for i in range(4) for j in range(i + 1, 4) for k in range(j + 1, 4))
            e4 = vals.prod()
            scale = 1 + max(abs(poly.c0), abs(poly.c2))
            assert abs(-e1 - poly.c3) < 1e-8 * scale
            assert abs(e2 - poly.c2) < 1e-8 * scale
            assert abs(-e3 - poly.c1) < 1e-8 * scale
            assert abs(e4 - poly.c0) < 1e-8 * scale

    def test_plus_minus_symmetry(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            spec = eigenvalues(build_circular(CouplingPoint(*rng.uniform(-3, 3, 3))))
            top = 1 + np.abs(spec.values).max()
            assert plus_minus_residual(spec.values) < 1e-8 * top

    def test_eigenpairs_residual(self):
        H = build_circular(CouplingPoint(0.5, 1.2, -0.7))
        vals, vecs = eigenpairs(H)
        for k in range(4):
            assert np.linalg.norm(H @ vecs[:, k] - vals[k] * vecs[:, k]) <= 1e-8 * np.linalg.norm(H, 2)


def test_independent_of_closed_form_roots():
    # the oracle must never route through the closed-form root formulas
    import inspect

    from pt_horizon import oracle as oracle_mod
    src = inspect.getsource(oracle_mod)
    assert "s_roots" not in src
    assert "energies" not in src


class TestInDomainOracle:
    def test_origin_inside(self):
        assert in_domain_oracle(CouplingPoint(0, 0, 0)) is True

    def test_pinch_point_outside(self):
        assert in_domain_oracle(CouplingPoint(math.sqrt(8), 0, 0)) is False

    def test_sqrt5_outside(self):
        assert in_domain_oracle(CouplingPoint(0, math.sqrt(5), 0)) is False

    def test_fish_tail_inside(self):
        assert in_domain_oracle(CouplingPoint(2.9, 0, 0)) is True

    def test_batch_agrees_with_scalar(self):
        rng = np.random.default_rng(12)
        pts = rng.uniform([-3.6, -2.3, -3.6], [3.6, 2.3, 3.6], (300, 3))
        batch = real_simple_batch(pts)
        for k in range(0, 300, 17):
            assert batch[k] == in_domain_oracle(CouplingPoint(*pts[k]))

    def test_batch_builder_matches_scalar_builder(self):
        rng = np.random.default_rng(13)
        pts = rng.uniform(-3, 3, (20, 3))
        Hs = build_circular_batch(pts)
        for k in range(20):
            assert np.array_equal(Hs[k], build_circular(CouplingPoint(*pts[k])))

    def test_batch_eigvals_shape(self):
        pts = np.zeros((5, 3))
        vals = eigenvalues_batch(build_circular_batch(pts))
        assert vals.shape == (5, 4)
