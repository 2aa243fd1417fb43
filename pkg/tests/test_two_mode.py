import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasequant.exceptions import DomainError
from phasequant.irrep import IrrepParams, OperatorKind, build_operator
from phasequant.two_mode import (
    TwoModeKind,
    build_two_mode,
    dirac_eigenvector,
    dirac_sqrt_check,
    dirac_sqrt_operator,
    irrep_decomposition,
    sector_matrix,
    sector_states,
    two_mode_commutator_defect,
)


def test_ladder_element():
    kp = build_two_mode("Kplus_a", 6)
    assert kp.element((3, 2), (2, 1)) == pytest.approx(np.sqrt(3 * 2))
    assert kp.element((2, 1), (3, 2)) == 0.0


def test_k3_from_number_operators():
    M = 7
    n1 = build_two_mode("N1", M).matrix
    n2 = build_two_mode("N2", M).matrix
    k3 = build_two_mode("K3a", M).matrix
    assert np.array_equal(k3, (n1 + n2 + np.eye(M * M)) / 2)


def test_kminus_is_adjoint():
    M = 6
    assert np.array_equal(build_two_mode("Kminus_a", M).matrix, build_two_mode("Kplus_a", M).matrix.T)


def test_kplus_from_oscillators():
    M = 5
    a_dag = np.diag(np.sqrt(np.arange(1, M)), -1)
    ref = np.kron(a_dag, a_dag)
    assert np.allclose(build_two_mode("Kplus_a", M).matrix, ref, atol=1e-15)


@pytest.mark.parametrize("M", [4, 8, 12, 20])
def test_commutator_interior(M):
    assert max(two_mode_commutator_defect(M)) < 1e-12


def test_commutator_full_space_has_boundary_defect():
    assert max(two_mode_commutator_defect(8, interior_only=False)) > 1.0


def test_sector_counting():
    M = 9
    recs = irrep_decomposition(M)
    assert sum(r.multiplicity for r in recs) == M * M
    seen = set()
    for r in recs:
        for m1, m2, n in r.states:
            assert abs(m1 - m2) == r.delta and min(m1, m2) == n
            seen.add((m1, m2))
    assert len(seen) == M * M


@pytest.mark.parametrize("M", [2, 5, 12])
def test_sectors_reproduce_irrep(M):
    for r in irrep_decomposition(M):
        assert r.k == 0.5 + 0.5 * r.delta
        assert r.max_defect < 1e-12


@given(st.integers(3, 15), st.data())
@settings(max_examples=25)
def test_sector_matrices_equal_irrep_truncation(M, data):
    delta = data.draw(st.integers(0, M - 2))
    branch = data.draw(st.sampled_from([1, -1]))
    size = M - delta
    p = IrrepParams(0.5 + 0.5 * delta)
    for kind, ikind in (("K3a", OperatorKind.K3), ("Kplus_a", OperatorKind.KPLUS),
                        ("Kminus_a", OperatorKind.KMINUS)):
        sec = sector_matrix(kind, M, delta, branch)
        assert np.allclose(sec, build_operator(ikind, p, size).to_dense(), atol=1e-13)


def test_sectors_are_invariant():
    # K+ and K- never connect different sectors
    M = 8
    kp = build_two_mode("Kplus_a", M).matrix
    label = {}
    for r in irrep_decomposition(M):
        for m1, m2, _ in r.states:
            label[m1 * M + m2] = (r.delta, r.branch)
    rows, cols = np.nonzero(kp)
    assert all(label[i] == label[j] for i, j in zip(rows, cols))


def test_sector_casimir():
    M = 10
    kp = build_two_mode("Kplus_a", M).matrix
    km = build_two_mode("Kminus_a", M).matrix
    k3 = build_two_mode("K3a", M).matrix
    cas = 0.5 * (kp @ km + km @ kp) - k3 @ k3
    for r in irrep_decomposition(M):
        idx = [m1 * M + m2 for m1, m2, n in r.states if max(m1, m2) <= M - 2]
        if idx:
            block = cas[np.ix_(idx, idx)]
            assert np.allclose(block, r.k * (1 - r.k) * np.eye(len(idx)), atol=1e-12)


def test_sector_states_domain():
    with pytest.raises(DomainError):
        sector_states(5, 5)
    with pytest.raises(DomainError):
        sector_states(5, 1, branch=0)


def test_build_domain():
    with pytest.raises(DomainError):
        build_two_mode("K3a", 1)
    with pytest.raises(DomainError):
        build_two_mode("K9", 4)
    with pytest.raises(DomainError):
        two_mode_commutator_defect(3)


def test_kind_enum_values():
    assert {k.value for k in TwoModeKind} == {"K3a", "Kplus_a", "Kminus_a", "N1", "N2"}


# ---------------------------------------------------------------- Dirac square root

@pytest.mark.parametrize("M", [3, 10, 40])
def test_dirac_identity(M):
    r = dirac_sqrt_check(M)
    assert r.defect < 1e-12
    assert r.eigen_ok


def test_dirac_eigenvalue_ratio():
    s = dirac_sqrt_operator(12)
    v4, v1 = dirac_eigenvector(12, 4), dirac_eigenvector(12, 1)
    lam4 = (v4 @ s @ v4) / (v4 @ v4)
    lam1 = (v1 @ s @ v1) / (v1 @ v1)
    assert lam4 / lam1 == pytest.approx(2.0, abs=1e-14)


def test_dirac_spectrum_contains_square_roots():
    M = 8
    w = np.linalg.eigvalsh(dirac_sqrt_operator(M))
    for n in range(M):
        assert np.min(np.abs(w - np.sqrt(n))) < 1e-12


def test_dirac_domain():
    with pytest.raises(DomainError):
        dirac_sqrt_check(2)
    with pytest.raises(DomainError):
        dirac_eigenvector(5, 5)
