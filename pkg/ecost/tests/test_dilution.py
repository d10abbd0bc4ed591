"""
dilution Tests
==============

Invariantes testeadas:
1. Canal tijeras: la salida es un estado sobre A ⊗ (B ⊕ ⊥) para ambas variantes
2. Fidelidad: (Σ p q)² ≤ F_sim² ≤ Σ p q para todo M y forma (d_a, d_b); M = min(d_a, d_b) da F = 1
   y la fórmula cerrada no decrece con M
3. Las dos variantes dan la misma fidelidad (fallas ortogonales al objetivo)
4. M_n = ⌈e^{nR}⌉ con guarda de punto flotante y saturación
5. Alcanzabilidad i.i.d.: F² crece con n sobre S y cae bajo S
6. Converse: a la tasa realizada ln M / n la cota nunca queda bajo el F² alcanzado
   (n ≤ 24, toda la grilla γ); a la tasa nominal sí puede
"""
import math

import numpy as np
import pytest

from ecost.app.fixtures import bell_state
from ecost.errors import DimensionMismatchError, InvariantViolationError
from ecost.dilution import (
    achievability_curve_iid,
    best_converse_bound,
    coding_mass_comparison,
    converse_bound,
    converse_curve,
    dilution_fidelity_formula,
    member_theta,
    rank_for_rate,
    scissors_channel,
    simulate_dilution,
    theta_unitary,
    truncation_projectors,
    weyl_operator,
)
from ecost.entanglement import CqExtension, Ensemble, ensemble_from_isometry
from ecost.qcore import (
    BipartiteSplit,
    DensityMatrix,
    PureState,
    binary_entropy,
    random_density_matrix,
    random_unitary,
    schmidt_decompose,
)
from ecost.spectra import default_gamma_grid

QUBITS = BipartiteSplit(2, 2)
ENTROPY = binary_entropy(0.9)
VARIANTS = ("orthogonal-flag", "weyl-teleport")


def _qubit_pure() -> PureState:
    return PureState(np.array([math.sqrt(0.9), 0, 0, math.sqrt(0.1)], dtype=np.complex128), QUBITS)


def _bell_ensemble() -> Ensemble:
    return Ensemble.single(PureState(bell_state().eigenvectors[:, 0], QUBITS))


def _random_ensemble(seed: int, dim_a: int = 3, dim_b: int = 3, members: int = 3) -> Ensemble:
    rng = np.random.default_rng(seed)
    split = BipartiteSplit(dim_a, dim_b)
    rho = DensityMatrix(random_density_matrix(split.dimension, rng, rank=2), split)
    return ensemble_from_isometry(rho, random_unitary(members, rng), members)


def _shaped_ensemble(rng: np.random.Generator, dim_a: int, dim_b: int) -> Ensemble:
    """Hasta 3 miembros, rango de la mezcla al azar en [1, min(K, d_a·d_b)]."""
    split = BipartiteSplit(dim_a, dim_b)
    members = int(rng.integers(1, 4))
    rank = int(rng.integers(1, min(members, split.dimension) + 1))
    rho = DensityMatrix(random_density_matrix(split.dimension, rng, rank=rank), split)
    return ensemble_from_isometry(rho, random_unitary(members, rng), members)


def _truncated_mass(ensemble: Ensemble, m: int) -> float:
    """Σ_i p_i Σ_{j≤M} λ_j^i con λ^i sacado del SVD de cada miembro."""
    split = ensemble.split
    total = 0.0
    for p, member in zip(ensemble.probabilities, ensemble.members):
        singular = np.linalg.svd(member.amplitudes.reshape(split.dim_a, split.dim_b), compute_uv=False)
        total += float(p) * float(np.sum(np.sort(singular ** 2)[::-1][:m]))
    return total


def _assert_bounds_for_every_rank(ensemble: Ensemble) -> None:
    split = ensemble.split
    for m in range(1, min(split.dim_a, split.dim_b) + 1):
        reports = [simulate_dilution(ensemble, m, v) for v in VARIANTS]
        mass = _truncated_mass(ensemble, m)
        for report in reports:
            assert mass ** 2 - 1e-9 <= report.f2_sim <= mass + 1e-9
            assert report.within_bounds
            assert report.fidelity_flagged ** 2 <= report.upper_bound + 1e-9
            assert report.f2_formula == pytest.approx(mass, abs=1e-12)
        assert reports[0].f2_sim == pytest.approx(reports[1].f2_sim, abs=1e-9)


@pytest.mark.unit
@pytest.mark.dilution
class TestScissorsChannel:
    """Canal por miembro: Θ → teleportación de rango M → Θ†."""

    def test_theta_is_identity_for_canonical_schmidt_basis(self):
        """
        Invariante: √0.8|00⟩ + √0.2|11⟩ ya está en base canónica → Θ = I.
        """
        psi = PureState(np.array([math.sqrt(0.8), 0, 0, math.sqrt(0.2)], dtype=np.complex128), QUBITS)
        assert np.allclose(member_theta(schmidt_decompose(psi)), np.eye(2))

    def test_theta_rotates_schmidt_basis_to_canonical(self):
        form = _random_ensemble(1).member_schmidt()[0]
        theta = member_theta(form)

        assert np.allclose(theta @ theta.conj().T, np.eye(3), atol=1e-10)
        for k in range(form.size):
            assert np.allclose(theta @ form.basis_b[:, k], np.eye(3)[:, k], atol=1e-10)

    def test_theta_unitary_is_block_diagonal(self):
        ensemble = _random_ensemble(2)
        theta = theta_unitary(ensemble)
        assert theta.shape == (9, 9)
        assert np.allclose(theta @ theta.conj().T, np.eye(9), atol=1e-10)

    def test_weyl_operators(self):
        assert np.allclose(weyl_operator(0, 0, 3), np.eye(3))
        x = weyl_operator(1, 0, 3)
        assert np.allclose(x @ np.eye(3)[:, 0], np.eye(3)[:, 1])
        z = weyl_operator(0, 1, 3)
        assert np.allclose(z @ z.conj().T, np.eye(3))

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_output_is_a_state(self, variant):
        """
        Invariante: Traza 1, PSD y split (d_a, d_b + 1).
        """
        for form in _random_ensemble(3).member_schmidt():
            out = scissors_channel(form, 2, variant)
            assert out.split == BipartiteSplit(3, 4)
            assert out.trace == pytest.approx(1.0, abs=1e-10)
            assert out.eigenvalues[-1] >= -1e-10

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_failure_mass_is_discarded_schmidt_mass(self, variant):
        form = schmidt_decompose(_qubit_pure())
        out = scissors_channel(form, 1, variant).matrix.reshape(2, 3, 2, 3)
        flagged = float(np.einsum("ijij->", out[:, 2:, :, 2:]).real)
        assert flagged == pytest.approx(0.1)

    def test_rank_and_variant_validation(self):
        form = schmidt_decompose(_qubit_pure())
        with pytest.raises(DimensionMismatchError):
            scissors_channel(form, 3)
        with pytest.raises(DimensionMismatchError):
            scissors_channel(form, 0)
        with pytest.raises(InvariantViolationError):
            scissors_channel(form, 1, "sampled")  # type: ignore[arg-type]

    def test_truncation_projectors_have_rank_m(self):
        projectors = truncation_projectors(_random_ensemble(4), 2)
        assert len(projectors) == 3
        assert all(p.matrix.rank == 2 for p in projectors)


@pytest.mark.unit
@pytest.mark.dilution
class TestSimulateDilution:
    """Simulación completa y fidelidad cerrada."""

    def test_bell_with_unit_resource(self):
        """
        Invariante: Bell con M = 1 da q = 1/2, F_sim² = q² = 1/4 y fórmula 1/2.
        """
        for variant in VARIANTS:
            report = simulate_dilution(_bell_ensemble(), 1, variant)
            assert report.f2_formula == pytest.approx(0.5)
            assert report.f2_sim == pytest.approx(0.25, abs=1e-9)
            assert report.within_bounds
            assert report.rate_nats == pytest.approx(0.0)

    def test_full_rank_resource_is_perfect(self):
        """
        Invariante: M = min(d_a, d_b) → F = 1.
        """
        for variant in VARIANTS:
            report = simulate_dilution(_random_ensemble(5), 3, variant)
            assert report.fidelity_sim == pytest.approx(1.0, abs=1e-8)
            assert report.f2_formula == pytest.approx(1.0)

    @pytest.mark.parametrize("dim_a,dim_b", [(2, 3), (3, 2), (4, 2), (3, 4), (1, 3), (4, 4)])
    def test_random_ensembles_respect_bounds(self, dim_a, dim_b):
        """
        Invariante: (Σ p q)² ≤ F_sim² ≤ Σ p q para cada M ≤ min(d_a, d_b) y
        variante; F_formula² = Σ p_i Σ_{j≤M} λ_j^i.
        """
        rng = np.random.default_rng(10 * dim_a + dim_b)
        for _ in range(2):
            _assert_bounds_for_every_rank(_shaped_ensemble(rng, dim_a, dim_b))

    @pytest.mark.slow
    def test_fifty_random_ensembles_respect_bounds(self):
        """
        Invariante: Misma cota sobre 50 ensembles con d_a, d_b ∈ 1..4 (todas
        las combinaciones, incluidas d_a ≠ d_b) y ≤ 3 miembros.
        """
        shapes = [(a, b) for a in range(1, 5) for b in range(1, 5)]
        rng = np.random.default_rng(50)
        for draw in range(50):
            dim_a, dim_b = shapes[draw % len(shapes)]
            ensemble = _shaped_ensemble(rng, dim_a, dim_b)
            assert ensemble.size <= 3
            _assert_bounds_for_every_rank(ensemble)

    def test_formula_is_non_decreasing_in_rank(self):
        """
        Invariante: F(M) no decrece con M y vale 1 en M = min(d_a, d_b).
        """
        rng = np.random.default_rng(77)
        for dim_a, dim_b in [(4, 4), (3, 4), (4, 2)]:
            ensemble = _shaped_ensemble(rng, dim_a, dim_b)
            values = [dilution_fidelity_formula(ensemble, m) for m in range(1, min(dim_a, dim_b) + 1)]
            assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))
            assert values[-1] == pytest.approx(1.0)

        psi_values = [dilution_fidelity_formula(Ensemble.single(_qubit_pure()), m) for m in (1, 2)]
        assert psi_values == pytest.approx([math.sqrt(0.9), 1.0])

    def test_flagged_fidelity_is_mean_truncated_mass(self):
        ensemble = _random_ensemble(21)
        report = simulate_dilution(ensemble, 2)
        assert report.fidelity_flagged == pytest.approx(report.upper_bound, abs=1e-8)

    def test_formula_matches_report(self):
        ensemble = _random_ensemble(22)
        report = simulate_dilution(ensemble, 2, n=2)
        assert report.fidelity_formula == pytest.approx(dilution_fidelity_formula(ensemble, 2))
        assert report.rate_nats == pytest.approx(math.log(2.0) / 2.0)
        row = report.to_row()
        assert row["rate_bits"] == pytest.approx(0.5)
        assert row["variant"] == "orthogonal-flag"

    def test_rejects_invalid_level(self):
        with pytest.raises(InvariantViolationError):
            simulate_dilution(_bell_ensemble(), 1, n=0)


@pytest.mark.unit
@pytest.mark.dilution
class TestAchievability:
    """Rangos y curva i.i.d. por clases de tipo."""

    def test_rank_for_rate_guard(self):
        """
        Invariante: e^{n ln M} no sube a M + 1 por overshoot de punto flotante.
        """
        assert rank_for_rate(1, math.log(2.0)) == 2
        assert rank_for_rate(2, math.log(3.0)) == 9
        assert rank_for_rate(24, ENTROPY - 0.2) == 21
        assert rank_for_rate(4, -1.0) == 1

    def test_rank_for_rate_saturation(self):
        assert rank_for_rate(10, 1.0, max_rank=8) == 8
        assert rank_for_rate(1000, 1.0, max_rank=2 ** 1000) == 2 ** 1000
        with pytest.raises(InvariantViolationError):
            rank_for_rate(1000, 1.0)

    def test_matches_explicit_formula(self):
        """
        Invariante: El camino por tipos coincide con la fórmula sobre ψ^⊗n explícito.
        """
        psi = _qubit_pure()
        (point,) = achievability_curve_iid(psi, [0.5], [2], workers=1)

        explicit = Ensemble.single(psi.tensor_power(2))
        assert point.m_rank == 3
        assert point.f2 == pytest.approx(dilution_fidelity_formula(explicit, 3) ** 2)

    def test_above_entropy_is_reliable(self):
        points = achievability_curve_iid(_qubit_pure(), [ENTROPY + 0.1], [24], workers=1)
        assert points[0].f2 >= 0.9

    def test_above_entropy_trend(self):
        """
        Invariante: Sobre S, F² crece con n en la zona asintótica.
        """
        ns = [16, 32, 48, 64, 96]
        points = achievability_curve_iid(_qubit_pure(), [ENTROPY + 0.1], ns)
        values = [p.f2 for p in points]

        assert [p.n for p in points] == ns
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_below_entropy_decays(self):
        points = achievability_curve_iid(_qubit_pure(), [ENTROPY - 0.1], [4, 8, 16, 24])
        values = [p.f2 for p in points]

        assert all(b < a for a, b in zip(values, values[1:]))
        assert values[-1] < 0.5

    def test_points_follow_input_order(self):
        points = achievability_curve_iid(_qubit_pure(), [0.5, 0.1], [3, 1], workers=1)
        assert [(p.n, p.rate_nats) for p in points] == [(3, 0.5), (3, 0.1), (1, 0.5), (1, 0.1)]
        assert set(points[0].to_row()) == {"n", "rate_nats", "rate_bits", "m_rank", "f2_formula"}

    def test_rejects_bad_grids(self):
        psi = _qubit_pure()
        with pytest.raises(InvariantViolationError):
            achievability_curve_iid(psi, [], [1])
        with pytest.raises(InvariantViolationError):
            achievability_curve_iid(psi, [0.1], [0])
        with pytest.raises(InvariantViolationError):
            achievability_curve_iid(psi, [math.inf], [1])


@pytest.mark.unit
@pytest.mark.dilution
class TestConverse:
    """Cota converse y comparación de masas de codificación."""

    def test_converse_dominates_achievable_fidelity(self):
        """
        Invariante: f_n(γ) + e^{−n(γ − R)} ≥ F² alcanzado, con R = ln M / n.
        """
        n = 24
        (point,) = achievability_curve_iid(_qubit_pure(), [ENTROPY - 0.2], [n], workers=1)
        realized = math.log(point.m_rank) / n
        cq = CqExtension(Ensemble.single(_qubit_pure()))

        at_gap = converse_bound(cq, ENTROPY - 0.1, realized, n, iid=True)
        gamma_star, best = best_converse_bound(cq, realized, n, iid=True)

        assert point.m_rank == 21
        assert point.f2 == pytest.approx(0.257025, abs=1e-5)
        assert at_gap >= point.f2
        assert best >= point.f2 - 1e-9
        assert -2.0 <= gamma_star <= 2.0

    def test_converse_holds_on_grid_at_realized_rate(self):
        """
        Invariante: Con R = ln M / n, f_n(γ) + e^{−n(γ − R)} ≥ F² para todo γ
        de la grilla por defecto, todo n ≤ 24 y R ∈ {S − 0.2, S − 0.1, S + 0.1}.
        """
        psi = _qubit_pure()
        cq = CqExtension(Ensemble.single(psi))
        rates = [ENTROPY - 0.2, ENTROPY - 0.1, ENTROPY + 0.1]
        points = achievability_curve_iid(psi, rates, list(range(1, 25)), workers=1)
        grid = default_gamma_grid()

        assert len(points) == 72
        for point in points:
            realized = math.log(point.m_rank) / point.n
            curve = converse_curve(cq, grid, realized, point.n, iid=True)
            assert float(curve.min()) >= point.f2 - 1e-9

    def test_nominal_rate_converse_can_undercut_achievable_fidelity(self):
        """
        Invariante: Con la R nominal, M = ⌈e^{nR}⌉ > e^{nR} y la cota puede
        quedar bajo el F² alcanzado; el comando converse usa ln M / n.
        """
        psi = _qubit_pure()
        cq = CqExtension(Ensemble.single(psi))
        rates = [ENTROPY - 0.2, ENTROPY - 0.1, ENTROPY + 0.1]
        points = achievability_curve_iid(psi, rates, list(range(1, 25)), workers=1)

        gaps = [best_converse_bound(cq, p.rate_nats, p.n, iid=True)[1] - p.f2 for p in points]

        assert min(gaps) < -1e-3
        assert any(gap >= 0.0 for gap in gaps)

    def test_curve_matches_pointwise_bound(self):
        cq = CqExtension(Ensemble.single(_qubit_pure()))
        gammas = np.array([0.0, 0.2, 0.4])

        curve = converse_curve(cq, gammas, 0.3, 4, iid=True)

        for g, value in zip(gammas, curve):
            assert value == pytest.approx(converse_bound(cq, float(g), 0.3, 4, iid=True))

    def test_rejects_invalid_level(self):
        cq = CqExtension(Ensemble.single(_qubit_pure()))
        with pytest.raises(InvariantViolationError):
            converse_bound(cq, 0.1, 0.1, 0)
        with pytest.raises(InvariantViolationError):
            converse_curve(cq, [], 0.1, 1)

    def test_coding_mass_comparison(self):
        """
        Invariante: El proyector {ρ_A ≥ e^{−nα}} tiene rango ≤ M y masa ≤ la truncada.
        """
        records = coding_mass_comparison(Ensemble.single(_qubit_pure()), 0.5)

        (record,) = records
        assert record.m_rank == 2
        assert record.projector_rank == 1
        assert record.projector_mass == pytest.approx(0.9)
        assert record.truncated_mass == pytest.approx(1.0)

        for r in coding_mass_comparison(_random_ensemble(30), 0.4):
            assert r.projector_rank <= r.m_rank
            assert r.projector_mass <= r.truncated_mass + 1e-12
