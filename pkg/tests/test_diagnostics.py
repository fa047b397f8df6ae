import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundent import states
from boundent.diagnostics import (
    EntangledEvidence,
    Verdict,
    certify_bound_entangled,
    cut_record,
    dc_negativity,
    dc_undistillable,
    depolarize,
    find_orthogonal_product,
    geometric_measure_pure,
    negativity,
    negativity_sweep,
    noise_threshold,
    ppt_profile,
    project_to_dc,
    pt_inequality_value,
    upb_unextendible,
)
from boundent.linalg import (
    KET0,
    KET1,
    KET_MINUS,
    KET_PLUS,
    Bipartition,
    all_bipartitions,
    ket,
    projector,
    tensor,
)
from boundent.states import ABLSParams, DurCiracSpec

from oracles import negativity_bruteforce, product_angle_grid_max, werner_ppt_grid


def random_spec(rng, n):
    """Random normalized Dur-Cirac coefficients; each lambda_j counts twice."""
    m = 1 << (n - 1)
    w = rng.dirichlet(np.ones(m + 1))
    lambdas = {j: w[j + 1] / 2 for j in range(1, m)}
    return DurCiracSpec(n, float(w[0]), float(w[1]), lambdas)


def cut(n, *group):
    return Bipartition.from_qubits(n, list(group))


CHI = states.chi3_spec(1 / 3)


class TestNegativity:
    def test_smolin_one_vs_three(self):
        assert negativity(states.smolin_bell(), cut(4, 1)) == pytest.approx(1.0, abs=1e-9)

    def test_smolin_balanced_cut(self):
        assert negativity(states.smolin_bell(), cut(4, 1, 2)) == pytest.approx(0.0, abs=1e-10)

    def test_product(self):
        assert negativity(projector(ket("00")), Bipartition(2, 1)) == pytest.approx(0.0, abs=1e-15)

    def test_bell_pair_is_one(self):
        assert negativity(projector(states.ghz(2)), Bipartition(2, 1)) == pytest.approx(1.0, abs=1e-12)

    def test_dur_partitions(self):
        rho = states.dur_state(4, 0.2)
        assert negativity(rho, cut(4, 1, 2)) == pytest.approx(0.2, abs=1e-9)
        assert negativity(rho, cut(4, 1)) == pytest.approx(0.0, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            negativity(states.smolin_bell(), cut(3, 1))

    @pytest.mark.parametrize("group", [[1], [2], [1, 3], [2, 4]])
    def test_matches_oracle(self, group):
        rho = states.dur_state(4, 0.7)
        assert negativity(rho, cut(4, *group)) == pytest.approx(negativity_bruteforce(rho, group), abs=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 5), st.integers(0, 2**32 - 1))
    def test_nonnegative_and_complement_symmetric(self, n, seed):
        rng = np.random.default_rng(seed)
        d = 1 << n
        m = rng.normal(size=(d, 2)) + 1j * rng.normal(size=(d, 2))
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        for c in all_bipartitions(n):
            val = negativity(rho, c)
            assert val >= 0
            assert val == pytest.approx(negativity_bruteforce(rho, c.group_b), abs=1e-9)


class TestPptProfile:
    def test_upb_all_ppt(self):
        prof = ppt_profile(states.upb_state())
        assert len(prof) == 3
        assert prof.all_ppt

    def test_abls_all_ppt(self):
        assert ppt_profile(states.abls(ABLSParams(2, 3, 5))).all_ppt

    def test_chi3(self):
        prof = ppt_profile(states.chi3(1 / 3))
        assert prof[cut(3, 2)].is_ppt
        assert prof[cut(3, 1, 2)].is_ppt
        rec = prof[cut(3, 1)]
        assert not rec.is_ppt
        assert rec.negativity == pytest.approx(1 / 3, abs=1e-9)
        assert rec.negativity == pytest.approx(negativity_bruteforce(states.chi3(1 / 3), [1]), abs=1e-12)

    def test_record_invariants(self):
        for rec in ppt_profile(states.smolin_bell()):
            assert rec.is_ppt == (rec.min_pt_eigenvalue >= -1e-10)
            assert not (rec.negativity > 0 and rec.is_ppt)

    def test_record_dict_uses_group_a(self):
        rec = cut_record(states.smolin_bell(), cut(4, 3, 4))
        assert rec.to_dict()["cut"] == [1, 2]

    def test_rejects_large_register(self):
        with pytest.raises(ValueError):
            ppt_profile(states.maximally_mixed(9))


class TestDcNegativity:
    def test_chi_examples(self):
        assert dc_negativity(CHI, 2) == pytest.approx(1 / 3, abs=1e-15)
        assert dc_negativity(CHI, 1) == pytest.approx(0.0, abs=1e-15)

    def test_zero_delta(self):
        spec = DurCiracSpec(3, 0.25, 0.25, {1: 0.1, 2: 0.15})
        assert all(dc_negativity(spec, j) == 0 for j in range(1, 4))

    @pytest.mark.parametrize("j", [0, 4])
    def test_range(self, j):
        with pytest.raises(ValueError):
            dc_negativity(CHI, j)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_random_specs_match_numeric(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(25):
            spec = random_spec(rng, n)
            rho = states.dur_cirac(spec)
            for j in range(1, 1 << (n - 1)):
                numeric = negativity(rho, Bipartition.from_dc_index(n, j))
                assert dc_negativity(spec, j) == pytest.approx(numeric, abs=1e-9)

    def test_minus_dominated_orientation(self):
        spec = DurCiracSpec(3, 0.1, 0.5, {1: 0.2})
        rho = states.dur_cirac(spec)
        for j in range(1, 4):
            assert dc_negativity(spec, j) == pytest.approx(negativity(rho, Bipartition.from_dc_index(3, j)), abs=1e-9)


class TestUndistillable:
    def test_chi_certificate(self):
        cert = dc_undistillable(CHI)
        assert cert.undistillable
        assert cert.cover[(1, 2)] == cut(3, 2)
        assert cert.cover[(1, 3)].separates(1, 3)
        assert cert.cover[(2, 3)].separates(2, 3)

    def test_pure_ghz(self):
        cert = dc_undistillable(DurCiracSpec(3, 1.0))
        assert not cert
        assert len(cert.uncovered) == 3

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_llk(self, n):
        assert dc_undistillable(states.llk_spec(n, 1 / (n - 1)))

    def test_dict(self):
        d = dc_undistillable(CHI).to_dict()
        assert d["undistillable"] is True
        assert set(d["cover"]) == {"1,2", "1,3", "2,3"}


class TestProjectToDc:
    @pytest.mark.parametrize("n, x", [(4, 0.2), (5, 0.1), (3, 0.6)])
    def test_dur_state(self, n, x):
        spec = project_to_dc(states.dur_state(n, x))
        assert spec.lambda0_plus == pytest.approx(x, abs=1e-14)
        assert spec.lambda0_minus == pytest.approx(0.0, abs=1e-14)
        for m in range(n - 1):
            assert spec.lam(1 << m) == pytest.approx((1 - x) / (2 * n), abs=1e-14)
        assert spec.lam((1 << (n - 1)) - 1) == pytest.approx((1 - x) / (2 * n), abs=1e-14)
        assert spec.total() == pytest.approx(1.0, abs=1e-12)

    def test_maximally_mixed(self):
        n = 4
        spec = project_to_dc(states.maximally_mixed(n))
        assert spec.lambda0_plus == pytest.approx(1 / 16, abs=1e-15)
        assert spec.lambda0_minus == pytest.approx(1 / 16, abs=1e-15)
        for j in range(1, 8):
            assert spec.lam(j) == pytest.approx(1 / 16, abs=1e-15)

    @pytest.mark.parametrize("x", [0.1, 0.25, 1 / 3])
    def test_chi_fixed_point(self, x):
        back = project_to_dc(states.chi3(x))
        want = states.chi3_spec(x)
        assert back.lambda0_plus == pytest.approx(want.lambda0_plus, abs=1e-15)
        for j in range(1, 4):
            assert back.lam(j) == pytest.approx(want.lam(j), abs=1e-15)

    def test_idempotent_on_random_state(self):
        rng = np.random.default_rng(5)
        m = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        once = project_to_dc(rho)
        twice = project_to_dc(states.dur_cirac(once))
        assert once.total() == pytest.approx(1.0, abs=1e-12)
        assert twice.lambda0_plus == pytest.approx(once.lambda0_plus, abs=1e-14)
        for j in range(1, 8):
            assert twice.lam(j) == pytest.approx(once.lam(j), abs=1e-14)


class TestPtInequality:
    def test_chi(self):
        assert pt_inequality_value(states.chi3(1 / 3)) == pytest.approx(4 / 3, abs=1e-12)

    def test_maximally_mixed(self):
        assert pt_inequality_value(states.maximally_mixed(3)) == pytest.approx(0.0, abs=1e-15)

    def test_ghz(self):
        assert pt_inequality_value(projector(states.ghz(3))) == pytest.approx(4.0, abs=1e-12)

    def test_linear_on_same_sign_mixtures(self):
        # the absolute value is only linear while tr(rho PT) keeps its sign
        a, c = states.chi3(1 / 3), states.chi3(0.1)
        mix = 0.3 * a + 0.7 * c
        assert pt_inequality_value(mix) == pytest.approx(0.3 * 4 / 3 + 0.7 * pt_inequality_value(c), abs=1e-12)

    def test_minus_ghz(self):
        assert pt_inequality_value(projector(states.ghz(3, "-"))) == pytest.approx(4.0, abs=1e-12)


class TestUpb:
    def test_shifts_unextendible(self):
        assert upb_unextendible(states.upb_basis())

    def test_two_states_extendible(self):
        witness = find_orthogonal_product([ket("000"), ket("011")])
        assert witness is not None
        w = tensor(*witness)
        assert abs(np.vdot(ket("000"), w)) <= 1e-12
        assert abs(np.vdot(ket("011"), w)) <= 1e-12

    def test_drop_fourth(self):
        basis = states.upb_basis()[:3]
        assert not upb_unextendible(basis)
        w = tensor(*find_orthogonal_product(basis))
        assert max(abs(np.vdot(b, w)) for b in basis) <= 1e-12

    @pytest.mark.parametrize("drop", range(4))
    def test_any_three_extendible(self, drop):
        basis = [b for i, b in enumerate(states.upb_basis()) if i != drop]
        assert not upb_unextendible(basis)

    def test_rejects_entangled_member(self):
        with pytest.raises(ValueError):
            upb_unextendible([states.ghz(3), ket("000")])

    def test_full_basis_is_trivially_unextendible(self):
        basis = [ket(format(i, "02b")) for i in range(4)]
        assert upb_unextendible(basis)

    def test_product_basis_with_gap(self):
        basis = [tensor(KET0, KET0), tensor(KET1, KET_PLUS), tensor(KET1, KET_MINUS)]
        assert not upb_unextendible(basis)


class TestCertify:
    def test_smolin(self):
        v = certify_bound_entangled(states.smolin_bell())
        assert v.verdict is Verdict.BOUND_ENTANGLED
        assert v.entangled_evidence is EntangledEvidence.NEGATIVITY_CUT
        assert len(v.negativity_cut.group_a) in (1, 3)
        assert len(v.undistillable.cover) == 6
        for (k, l), c in v.undistillable.cover.items():
            assert c.separates(k, l)
            assert len(c.group_a) == 2

    def test_upb(self):
        v = certify_bound_entangled(states.upb_state(), family_hint="upb")
        assert v.verdict is Verdict.BOUND_ENTANGLED
        assert v.entangled_evidence is EntangledEvidence.UPB_CONSTRUCTION

    def test_upb_without_hint(self):
        v = certify_bound_entangled(states.upb_state())
        assert v.entangled_evidence is EntangledEvidence.ASSERTED_ONLY
        assert v.verdict is Verdict.NO_ENTANGLEMENT_DETECTED

    def test_abls_asserted_only(self):
        v = certify_bound_entangled(states.abls(ABLSParams(2, 3, 5)))
        assert v.entangled_evidence is EntangledEvidence.ASSERTED_ONLY
        assert v.verdict is Verdict.NO_ENTANGLEMENT_DETECTED

    def test_ghz_distillable_possible(self):
        v = certify_bound_entangled(projector(states.ghz(3)))
        assert v.verdict is Verdict.DISTILLABLE_POSSIBLE

    def test_maximally_mixed(self):
        v = certify_bound_entangled(states.maximally_mixed(3))
        assert v.verdict is Verdict.NO_ENTANGLEMENT_DETECTED
        assert v.negativity_cut is None

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_llk(self, n):
        assert certify_bound_entangled(states.llk_state(n, 1 / (n - 1))).verdict is Verdict.BOUND_ENTANGLED

    @pytest.mark.parametrize("x", [0.05, 0.2, 1 / 3])
    def test_chi3(self, x):
        assert certify_bound_entangled(states.chi3(x)).verdict is Verdict.BOUND_ENTANGLED

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_dur(self, n):
        for x in (0.5 / (n + 1), 1 / (n + 1)):
            assert certify_bound_entangled(states.dur_state(n, x)).verdict is Verdict.BOUND_ENTANGLED

    def test_dict(self):
        d = certify_bound_entangled(states.chi3(1 / 3)).to_dict()
        assert d["verdict"] == "bound_entangled"
        assert d["negativity_cut"] == [1]


class TestDepolarize:
    def test_endpoints(self):
        rho = states.smolin_bell()
        np.testing.assert_array_equal(depolarize(rho, 0.0), rho)
        np.testing.assert_allclose(depolarize(rho, 1.0), states.maximally_mixed(4), atol=1e-15)

    def test_smolin_intermediate(self):
        val = negativity(depolarize(states.smolin_bell(), 0.1), cut(4, 1))
        assert 0 < val < 1

    @pytest.mark.parametrize("eps", [-0.1, 1.5])
    def test_range(self, eps):
        with pytest.raises(ValueError):
            depolarize(states.smolin_bell(), eps)

    @pytest.mark.parametrize(
        "rho",
        [states.smolin_bell(), states.dur_state(4, 0.6), states.chi3(1 / 3), states.llk_state(4, 1 / 3)],
        ids=["smolin", "dur", "chi3", "llk"],
    )
    def test_never_increases_negativity(self, rho):
        n = rho.shape[0].bit_length() - 1
        grid = np.linspace(0, 1, 21)
        for c in all_bipartitions(n):
            vals = [v for _, v in negativity_sweep(rho, c, grid)]
            assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


class TestNoiseThreshold:
    def test_werner(self):
        res = noise_threshold(projector(states.ghz(2)), Bipartition(2, 1), tol=1e-6)
        assert res.width <= 1e-6
        assert res.eps == pytest.approx(2 / 3, abs=1e-6)

    def test_smolin_against_grid(self):
        rho = states.smolin_bell()
        res = noise_threshold(rho, cut(4, 1), tol=1e-6)
        assert 0 < res.eps < 1
        assert res.width <= 1e-6
        for eps, ev in werner_ppt_grid(rho, [1], points=201):
            if eps < res.lower:
                assert ev < 0
            elif eps > res.upper:
                assert ev >= -1e-10

    def test_dur_balanced_cut(self):
        res = noise_threshold(states.dur_state(4, 0.5), cut(4, 1, 2))
        assert res.eps == pytest.approx(0.8, abs=1e-6)

    def test_ppt_cut_rejected(self):
        with pytest.raises(ValueError):
            noise_threshold(states.smolin_bell(), cut(4, 1, 2))


class TestGeometricMeasure:
    def test_ghz4(self):
        psi = states.ghz(4)
        res = geometric_measure_pure(psi)
        assert res.max_overlap_sq == pytest.approx(0.5, abs=1e-6)
        assert res.max_overlap_sq >= product_angle_grid_max(psi) - 1e-12

    def test_product(self):
        assert geometric_measure_pure(ket("00")).max_overlap_sq == pytest.approx(1.0, abs=1e-12)

    def test_bell(self):
        res = geometric_measure_pure(states.ghz(2))
        assert res.max_overlap_sq == pytest.approx(0.5, abs=1e-9)
        assert res.geometric_measure == pytest.approx(0.5, abs=1e-9)

    def test_witness_attains_value(self):
        psi = states.g_state(3, 2)
        res = geometric_measure_pure(psi)
        assert abs(np.vdot(tensor(*res.factors), psi)) ** 2 == pytest.approx(res.max_overlap_sq, abs=1e-12)

    def test_deterministic(self):
        rng = np.random.default_rng(1)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi /= np.linalg.norm(psi)
        a = geometric_measure_pure(psi, seed=4)
        b = geometric_measure_pure(psi, seed=4)
        assert a.max_overlap_sq == b.max_overlap_sq
        assert a.history == b.history

    @settings(max_examples=20, deadline=None)
    @given(st.integers(2, 4), st.integers(0, 2**32 - 1))
    def test_bounds_and_monotone(self, n, seed):
        rng = np.random.default_rng(seed)
        psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        psi /= np.linalg.norm(psi)
        res = geometric_measure_pure(psi, restarts=3, iterations=50, seed=seed % 1000)
        assert 0 < res.max_overlap_sq <= 1
        assert all(b >= a - 1e-12 for a, b in zip(res.history, res.history[1:]))
        assert res.max_overlap_sq >= res.history[0] - 1e-12

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            geometric_measure_pure(np.array([1, 1, 0, 0], dtype=complex))


def test_pair_cover_matches_enumeration_for_smolin():
    ppt = ppt_profile(states.smolin_bell()).ppt_cuts
    for k, l in itertools.combinations(range(1, 5), 2):
        assert any(c.separates(k, l) for c in ppt)
