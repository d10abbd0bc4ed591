"""
qcore Tests
===========

Invariantes testeadas:
1. DensityMatrix: rechaza no-Hermitianas, traza ≠ 1, no-PSD, split incompatible
2. Traza parcial: Bell → I/2; potencias tensoriales ordenadas A^n ⊗ B^n
3. Schmidt: coeficientes no crecientes que reconstruyen el estado
4. Medidas: F(ρ,ρ)=1, S(I/d)=ln d, S(ρ‖ω)=+inf fuera de soporte
5. Formato JSON: rechaza NaN/Inf y shapes inconsistentes
6. Fixtures: deterministas por semilla y válidos al releerse
"""
import json
import math
from pathlib import Path

import numpy as np
import pytest

from ecost.app.fixtures import generate_fixture
from ecost.config import FixtureSettings
from ecost.errors import (
    DimensionCapError,
    DimensionMismatchError,
    InvariantViolationError,
    StateParseError,
)
from ecost.qcore import (
    BipartiteSplit,
    DensityMatrix,
    PureState,
    binary_entropy,
    document_from_members,
    document_from_state,
    dump_document,
    fidelity,
    hermitian_eig,
    load_density,
    maximally_entangled,
    nats_to_bits,
    parse_document,
    partial_trace,
    purify,
    random_hermitian,
    relative_entropy,
    schmidt_decompose,
    tensor_product,
    trace_distance,
    von_neumann_entropy,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
QUBITS = BipartiteSplit(2, 2)


def _uneven_pure() -> PureState:
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = math.sqrt(0.8)
    amps[3] = math.sqrt(0.2)
    return PureState(amps, QUBITS)


@pytest.mark.unit
@pytest.mark.qcore
class TestDensityMatrixInvariants:
    """Validación en construcción."""

    def test_rejects_non_hermitian(self):
        """
        Invariante: Hermiticidad dentro de 1e-10.
        """
        with pytest.raises(InvariantViolationError):
            DensityMatrix(np.array([[0.5, 0.3], [0.0, 0.5]]))

    def test_rejects_wrong_trace(self):
        """
        Invariante: Traza 1 salvo subnormalized.
        """
        with pytest.raises(InvariantViolationError):
            DensityMatrix(np.eye(2))

        sub = DensityMatrix(np.eye(2) * 0.25, subnormalized=True)
        assert sub.trace == pytest.approx(0.5)

    def test_rejects_negative_eigenvalue(self):
        """
        Invariante: Autovalor mínimo ≥ -1e-10.
        """
        with pytest.raises(InvariantViolationError):
            DensityMatrix.diagonal([1.5, -0.5])

    def test_rejects_split_mismatch(self):
        """
        Invariante: dim_a·dim_b == dimensión de la matriz.
        """
        with pytest.raises(DimensionMismatchError):
            DensityMatrix(np.eye(3) / 3, BipartiteSplit(2, 2))

    def test_rejects_unnormalized_pure_state(self):
        with pytest.raises(InvariantViolationError):
            PureState(np.array([1.0, 1.0]))

        psi = PureState.normalized([1.0, 1.0])
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0)

    def test_matrix_is_read_only(self):
        rho = DensityMatrix.maximally_mixed(2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0

    def test_spectrum_is_non_increasing(self):
        rho = DensityMatrix.diagonal([0.1, 0.6, 0.3])
        assert np.allclose(rho.eigenvalues, [0.6, 0.3, 0.1])
        assert rho.rank == 3
        assert not rho.is_pure


@pytest.mark.unit
@pytest.mark.qcore
class TestLinalg:
    """Kronecker y descomposición espectral."""

    def test_tensor_product_dimensions_multiply(self):
        assert np.allclose(tensor_product(np.eye(2), np.eye(2)), np.eye(4))
        assert np.allclose(
            tensor_product(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])), np.diag([0.0, 1.0, 0.0, 0.0])
        )

    def test_tensor_product_trace_factorizes(self):
        rng = np.random.default_rng(11)
        a, b = random_hermitian(3, rng), random_hermitian(4, rng)

        assert np.trace(tensor_product(a, b)) == pytest.approx(np.trace(a) * np.trace(b), abs=1e-10)

    def test_eigenvalues_non_increasing(self):
        w, _ = hermitian_eig(np.diag([3.0, 1.0, -2.0]))
        assert np.allclose(w, [3.0, 1.0, -2.0])

        w, _ = hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(w, [1.0, -1.0])

    def test_reconstruction_and_orthonormality(self):
        """
        Invariante: A = Σ λ_i v_i v_i† dentro de 1e-8; V†V = I dentro de 1e-9.
        """
        rng = np.random.default_rng(5)
        a = random_hermitian(8, rng)

        w, v = hermitian_eig(a)

        assert np.max(np.abs((v * w) @ v.conj().T - a)) <= 1e-8
        assert np.max(np.abs(v.conj().T @ v - np.eye(8))) <= 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvariantViolationError):
            hermitian_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


@pytest.mark.unit
@pytest.mark.qcore
class TestPartialTraceAndPowers:
    """Trazas parciales y potencias tensoriales."""

    def test_bell_marginals_are_maximally_mixed(self):
        """
        Invariante: Tr_B |Φ+⟩⟨Φ+| = I/2.
        """
        bell = maximally_entangled(2, QUBITS).density()

        assert np.allclose(partial_trace(bell, keep="A").matrix, np.eye(2) / 2)
        assert np.allclose(bell.partial_trace("B").matrix, np.eye(2) / 2)

    def test_partial_trace_requires_matching_split(self):
        with pytest.raises(DimensionMismatchError):
            partial_trace(DensityMatrix.maximally_mixed(6), BipartiteSplit(2, 2))

    def test_tensor_power_groups_a_factors_first(self):
        """
        Invariante: (ρ_A⊗ρ_B)^⊗2 = (ρ_A⊗ρ_A) ⊗ (ρ_B⊗ρ_B) en el orden A^n B^n.
        """
        rho_a = np.diag([0.7, 0.3])
        rho_b = np.diag([0.6, 0.4])
        rho = DensityMatrix(np.kron(rho_a, rho_b), QUBITS)

        power = rho.tensor_power(2)

        expected = np.kron(np.kron(rho_a, rho_a), np.kron(rho_b, rho_b))
        assert power.split == BipartiteSplit(4, 4)
        assert np.allclose(power.matrix, expected)

    def test_tensor_power_of_bell_keeps_marginal(self):
        bell = maximally_entangled(2, QUBITS)
        power = bell.tensor_power(3)

        assert power.split == BipartiteSplit(8, 8)
        reduced = power.density().partial_trace("A")
        assert np.allclose(reduced.matrix, np.eye(8) / 8)

    def test_tensor_power_respects_dimension_cap(self):
        """
        Invariante: Construcciones explícitas sobre el cap fallan sin asignar memoria.
        """
        with pytest.raises(DimensionCapError):
            DensityMatrix.maximally_mixed(2).tensor_power(13)

    def test_tensor_power_rejects_zero(self):
        with pytest.raises(InvariantViolationError):
            DensityMatrix.maximally_mixed(2).tensor_power(0)


@pytest.mark.unit
@pytest.mark.qcore
class TestSchmidtAndPurification:
    """Descomposición de Schmidt, estados maximalmente entrelazados, purificación."""

    def test_schmidt_coefficients_and_reconstruction(self):
        psi = _uneven_pure()
        form = schmidt_decompose(psi)

        assert np.allclose(form.coefficients, [0.8, 0.2])
        assert form.rank == 2
        assert form.top_mass(1) == pytest.approx(0.8)
        overlap = abs(np.vdot(form.state().amplitudes, psi.amplitudes))
        assert overlap == pytest.approx(1.0)

    def test_schmidt_bases_are_orthonormal(self):
        rng = np.random.default_rng(3)
        v = rng.normal(size=6) + 1j * rng.normal(size=6)
        form = schmidt_decompose(PureState.normalized(v, BipartiteSplit(2, 3)))

        assert np.allclose(form.basis_a.conj().T @ form.basis_a, np.eye(form.size))
        assert np.allclose(form.basis_b.conj().T @ form.basis_b, np.eye(form.size))
        assert np.all(np.diff(form.coefficients) <= 1e-12)

    def test_truncated_vector_norm_is_top_mass(self):
        form = schmidt_decompose(_uneven_pure())
        assert np.linalg.norm(form.truncated_vector(1)) ** 2 == pytest.approx(0.8)

    def test_maximally_entangled_rank_bound(self):
        with pytest.raises(DimensionMismatchError):
            maximally_entangled(3, QUBITS)

        psi = maximally_entangled(2, BipartiteSplit(3, 3))
        assert np.allclose(schmidt_decompose(psi).coefficients[:2], [0.5, 0.5])

    def test_purification_reduces_to_state(self):
        """
        Invariante: Tr_ref |ψ⟩⟨ψ| = ρ y la referencia tiene dimensión rank(ρ).
        """
        rho = DensityMatrix.diagonal([0.5, 0.3, 0.2, 0.0])
        psi = purify(rho)

        assert psi.split == BipartiteSplit(4, 3)
        assert np.allclose(psi.density().partial_trace("A").matrix, rho.matrix)


@pytest.mark.unit
@pytest.mark.qcore
class TestMeasures:
    """Entropías, fidelidad, distancia de traza."""

    def test_entropy_of_maximally_mixed(self):
        assert von_neumann_entropy(DensityMatrix.maximally_mixed(4)) == pytest.approx(math.log(4))
        assert von_neumann_entropy(maximally_entangled(2, QUBITS).density()) == pytest.approx(0.0, abs=1e-10)

    def test_binary_entropy_in_bits(self):
        assert nats_to_bits(binary_entropy(0.5)) == pytest.approx(1.0)
        assert binary_entropy(0.0) == 0.0

    def test_relative_entropy_classical_case(self):
        """
        Invariante: Para estados diagonales S(ρ‖ω) es la divergencia KL.
        """
        p = np.array([0.7, 0.3])
        q = np.array([0.4, 0.6])
        expected = float(np.sum(p * np.log(p / q)))

        value = relative_entropy(DensityMatrix.diagonal(p), DensityMatrix.diagonal(q))

        assert value == pytest.approx(expected)
        assert relative_entropy(DensityMatrix.diagonal(p), DensityMatrix.diagonal(p)) == pytest.approx(0.0, abs=1e-12)

    def test_relative_entropy_outside_support_is_infinite(self):
        rho = DensityMatrix.maximally_mixed(2)
        omega = DensityMatrix.diagonal([1.0, 0.0])
        assert relative_entropy(rho, omega) == math.inf

    def test_fidelity_properties(self):
        """
        Invariante: F(ρ,ρ)=1, F diagonal = Σ√(p q), F de puros ortogonales = 0.
        """
        p = np.array([0.7, 0.3])
        q = np.array([0.4, 0.6])
        rho, sigma = DensityMatrix.diagonal(p), DensityMatrix.diagonal(q)

        assert fidelity(rho, rho) == pytest.approx(1.0)
        assert fidelity(rho, sigma) == pytest.approx(float(np.sum(np.sqrt(p * q))))
        assert fidelity(DensityMatrix.diagonal([1, 0]), DensityMatrix.diagonal([0, 1])) == pytest.approx(0.0, abs=1e-12)

    def test_fidelity_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fidelity(DensityMatrix.maximally_mixed(2), DensityMatrix.maximally_mixed(3))

    def test_trace_distance_orthogonal_states(self):
        assert trace_distance(DensityMatrix.diagonal([1, 0]), DensityMatrix.diagonal([0, 1])) == pytest.approx(1.0)


@pytest.mark.unit
@pytest.mark.qcore
class TestStateDocuments:
    """Formato JSON de estados."""

    def test_density_document_round_trip(self):
        bell = maximally_entangled(2, QUBITS).density()
        document = parse_document(dump_document(document_from_state(bell)))

        assert document.kind == "density"
        assert document.dims == [2, 2]
        assert np.allclose(document.to_density().matrix, bell.matrix)

    def test_rejects_non_finite_literals(self):
        """
        Invariante: NaN/Infinity no se aceptan aunque json los parsee por defecto.
        """
        text = json.dumps({"kind": "pure", "dims": [2], "data": [[1.0, 0.0], [0.0, 0.0]]})
        with pytest.raises(StateParseError):
            parse_document(text.replace("0.0, 0.0]]", "NaN, 0.0]]"))

    def test_rejects_shape_mismatch(self):
        text = json.dumps({"kind": "pure", "dims": [2, 2], "data": [[1.0, 0.0], [0.0, 0.0]]})
        with pytest.raises(StateParseError) as exc_info:
            parse_document(text)
        assert exc_info.value.code == "parse_failure"

    def test_rejects_invalid_json(self):
        with pytest.raises(StateParseError):
            parse_document("{not json")

    def test_ensemble_document_mixes_members(self):
        members = [
            PureState(np.array([1, 0, 0, 0], dtype=complex), QUBITS),
            PureState(np.array([0, 0, 0, 1], dtype=complex), QUBITS),
        ]
        document = document_from_members([0.25, 0.75], members, QUBITS)

        rho = document.to_density()

        assert np.allclose(np.diag(rho.matrix).real, [0.25, 0, 0, 0.75])
        probs, parsed = document.members()
        assert np.allclose(probs, [0.25, 0.75])
        assert len(parsed) == 2

    def test_pure_accessor_rejects_density_document(self):
        document = document_from_state(DensityMatrix.maximally_mixed(2))
        with pytest.raises(StateParseError):
            document.to_pure()

    def test_bundled_fixtures_load(self):
        bell = load_density(FIXTURES / "bell.json")
        qubit = load_density(FIXTURES / "qubit_09_01.json")

        assert bell.is_pure and bell.split == QUBITS
        assert np.allclose(bell.partial_trace("A").matrix, np.eye(2) / 2)
        assert np.allclose(qubit.partial_trace("A").eigenvalues, [0.9, 0.1])


@pytest.mark.unit
@pytest.mark.qcore
class TestFixtures:
    """Fixtures generados: releídos cumplen las invariantes de qcore."""

    def test_bell_fixture_marginals(self):
        document = parse_document(dump_document(generate_fixture(FixtureSettings(kind="bell"))))
        rho = document.to_density()

        assert document.dims == [2, 2]
        assert np.allclose(rho.partial_trace("A").matrix, np.eye(2) / 2)

    def test_werner_boundary_is_pure_singlet(self):
        rho = generate_fixture(FixtureSettings(kind="werner", p=1.0)).to_density()

        assert rho.is_pure
        assert von_neumann_entropy(rho.partial_trace("A")) == pytest.approx(math.log(2), abs=1e-10)

    def test_random_fixture_is_deterministic(self):
        """
        Invariante: Misma semilla → mismo archivo.
        """
        settings = FixtureSettings(kind="random-mixed", dim_a=2, dim_b=2)

        first = dump_document(generate_fixture(settings, seed=3))
        second = dump_document(generate_fixture(settings, seed=3))

        assert first == second
        assert first != dump_document(generate_fixture(settings, seed=4))

    def test_reserialization_is_idempotent(self):
        text = dump_document(generate_fixture(FixtureSettings(kind="random-pure", dim_a=2, dim_b=3), seed=9))

        assert dump_document(parse_document(text)) == text

    def test_product_fixture_is_unentangled(self):
        rho = generate_fixture(FixtureSettings(kind="product", dim_a=3, dim_b=2), seed=1).to_density()

        assert von_neumann_entropy(rho.partial_trace("A")) == pytest.approx(0.0, abs=1e-9)
