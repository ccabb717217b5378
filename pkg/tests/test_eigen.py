import numpy as np
import pytest

from nmcascade import (
    FrequencyGrid,
    NumericalError,
    Topology,
    biorthogonality_check,
    build_system,
    decompose,
    solve_by_expansion,
    solve_complex,
)
from nmcascade.eigen import adjoint_matrix, decompose_matrix, weighted_inner
from conftest import OMEGA0, canonical_atom, canonical_grid, canonical_spec


def system_for(topology, s=1.0, n=100, omega_big=1.0):
    spec = canonical_spec(omega_big=omega_big, topology=topology)
    return build_system(spec, canonical_atom(), s, canonical_grid(n=n))


class TestDecompose:
    def test_eigenpair_residuals(self):
        system = system_for(Topology.SINGLE)
        bio = decompose(system)
        k = system.k_matrix
        norm = np.abs(k).max()
        resid = np.abs(k @ bio.right_fns - bio.right_fns * bio.xi[None, :]).max()
        assert resid <= 1e-9 * norm

    def test_adjoint_spectrum_is_conjugate(self):
        system = system_for(Topology.SINGLE, s=0.7 + 0.9j, n=60)
        bio = decompose(system)
        adj = np.linalg.eigvals(adjoint_matrix(system))
        got = np.sort_complex(np.conj(adj))
        want = np.sort_complex(bio.xi)
        np.testing.assert_allclose(got, want, atol=1e-8 * np.abs(bio.xi).max())

    def test_left_vectors_satisfy_adjoint_equation(self):
        system = system_for(Topology.SINGLE, n=40)
        bio = decompose(system)
        adj = adjoint_matrix(system)
        resid = np.abs(adj @ bio.left_fns - bio.left_fns * bio.xi.conj()[None, :]).max()
        assert resid <= 1e-9 * np.abs(adj).max() * np.abs(bio.left_fns).max()

    def test_zero_kernel_all_zero_eigenvalues(self):
        system = system_for(Topology.SINGLE, omega_big=0.0, n=30)
        bio = decompose(system)
        assert np.abs(bio.xi).max() == 0.0

    def test_spectral_sum_equals_trace(self):
        system = system_for(Topology.SINGLE, s=1.3, n=80)
        bio = decompose(system)
        trace = np.trace(system.k_matrix)
        assert abs(bio.xi.sum() - trace) <= 1e-8 * abs(trace)

    def test_rank_one_two_reservoir_spectrum(self):
        system = system_for(Topology.TWO_RESERVOIRS)
        bio = decompose(system)
        norm = np.abs(system.k_matrix).max()
        big = np.abs(bio.xi) > 1e-10 * norm
        assert big.sum() == 1
        assert bio.xi[big][0] == pytest.approx(np.trace(system.k_matrix), rel=1e-10)

    def test_rank_one_eigenvalue_refines_to_closed_form(self):
        spec = canonical_spec(topology=Topology.TWO_RESERVOIRS)
        errs = []
        for n, w in [(201, 30.0), (601, 60.0), (1501, 60.0)]:
            grid = FrequencyGrid.uniform(OMEGA0, w, n)
            bio = decompose(build_system(spec, canonical_atom(), 1.0, grid))
            big = bio.xi[np.argmax(np.abs(bio.xi))]
            errs.append(abs(big - 0.5))
        assert errs[-1] <= 1e-3
        assert errs[0] > errs[-1]


class TestBiorthogonality:
    def test_well_separated_spectrum(self):
        system = system_for(Topology.SINGLE, s=0.9 + 0.3j, n=60)
        bio = decompose(system)
        assert biorthogonality_check(bio) <= 1e-8

    def test_diagonal_normalization(self):
        system = system_for(Topology.SINGLE, n=50)
        bio = decompose(system)
        gram = weighted_inner(bio.weights, bio.left_fns, bio.right_fns)
        np.testing.assert_allclose(np.diag(gram), 1.0, atol=1e-9)

    def test_hermitian_special_case(self):
        # symmetric real kernel with uniform weights: left = right and
        # biorthogonality reduces to orthonormality
        rng = np.random.default_rng(3)
        m = rng.standard_normal((12, 12))
        sym = 0.5 * (m + m.T)
        weights = np.full(12, 0.25)
        bio = decompose_matrix(sym.astype(complex), weights)
        np.testing.assert_allclose(bio.left_fns * 0.25, bio.right_fns.conj(), atol=1e-10)
        gram = weighted_inner(weights, bio.left_fns, bio.right_fns)
        np.testing.assert_allclose(gram, np.eye(12), atol=1e-10)

    def test_degenerate_pair_flagged_and_excluded(self):
        # diagonalizable matrix with an exactly repeated eigenvalue
        mat = np.diag([2.0, 2.0, 5.0]).astype(complex)
        mat[0, 2] = 0.3
        weights = np.ones(3)
        bio = decompose_matrix(mat, weights)
        assert bio.degenerate.sum() == 2
        assert not bio.defective.any()
        assert biorthogonality_check(bio) <= 1e-10


class TestExpansion:
    @pytest.mark.parametrize("topology", [Topology.SINGLE, Topology.TWO_RESERVOIRS])
    def test_matches_direct_solve(self, topology):
        system = system_for(topology, s=1.0, n=100)
        bio = decompose(system)
        direct = solve_complex(system)
        exp_sol = solve_by_expansion(system, bio)
        rel = np.abs(exp_sol.f_vals - direct.f_vals).max() / np.abs(direct.f_vals).max()
        assert rel <= 1e-6
        assert exp_sol.b2bar == pytest.approx(direct.b2bar, rel=1e-8)

    def test_zero_coupling_returns_rhs(self):
        system = system_for(Topology.SINGLE, omega_big=0.0, n=24)
        bio = decompose(system)
        sol = solve_by_expansion(system, bio)
        np.testing.assert_allclose(sol.f_vals, system.d_vals, atol=1e-12)

    def test_rank_one_resolvent_structure(self):
        # separable kernel: f = d - u (c.d)/(1 + c.u); on the diagonal
        # direction this is C/(1 + trace)/A
        system = system_for(Topology.TWO_RESERVOIRS, s=1.0, n=150)
        bio = decompose(system)
        sol = solve_by_expansion(system, bio)
        trace = np.trace(system.k_matrix)
        expected = system.d_vals / (1.0 + trace)
        np.testing.assert_allclose(sol.f_vals, expected, rtol=1e-9)

    def test_resonant_eigenvalue_refused(self):
        mat = np.diag([-1.0 + 1e-10, 0.5]).astype(complex)
        weights = np.ones(2)
        bio = decompose_matrix(mat, weights)
        system = system_for(Topology.SINGLE, n=2)
        fake = type(system)(
            s=system.s, grid=type(system.grid)(points=np.array([0.0, 1.0]),
                                               weights=weights, halfwidth=0.5, center=0.5),
            a_vals=np.ones(2, dtype=complex), d_vals=np.array([1.0, 1.0], dtype=complex),
            k_matrix=mat, r2_weighted=np.zeros(2), topology=system.topology,
        )
        with pytest.raises(NumericalError):
            solve_by_expansion(fake, bio)

    def test_defective_cluster_refused(self):
        # Jordan block: algebraic multiplicity 2, geometric 1
        mat = np.array([[2.0, 1.0], [0.0, 2.0]], dtype=complex)
        weights = np.ones(2)
        bio = decompose_matrix(mat, weights)
        assert bio.defective.any()
        system = system_for(Topology.SINGLE, n=2)
        fake = type(system)(
            s=system.s, grid=type(system.grid)(points=np.array([0.0, 1.0]),
                                               weights=weights, halfwidth=0.5, center=0.5),
            a_vals=np.ones(2, dtype=complex), d_vals=np.array([1.0, 1.0], dtype=complex),
            k_matrix=mat, r2_weighted=np.zeros(2), topology=system.topology,
        )
        with pytest.raises(NumericalError):
            solve_by_expansion(fake, bio)
