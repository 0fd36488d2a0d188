import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from boxdisc import linalg, states
from boxdisc.discrimination import (
    Povm,
    Subspace,
    helstrom,
    jordan_bases,
    outcome_probs,
    singlet_weight_scan,
    unambiguous_eval,
    unambiguous_subspace_povm,
    validate_povm,
)

seeds = st.integers(0, 2**32 - 1)


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def projective_pair():
    p_sym, p_anti = states.sym_antisym_projectors((0, 1), 2)
    return Povm({"identify-2": p_sym, "fail": p_anti})


class TestPovmValidation:
    def test_projective_pair_is_valid(self):
        report = validate_povm(projective_pair())
        assert report.valid
        assert report.completeness <= 1e-10
        assert all(v >= -1e-10 for v in report.min_eigenvalue.values())

    def test_incomplete_set_flagged(self):
        report = validate_povm(Povm({"only": np.eye(2) * 0.5}))
        assert not report.valid and report.completeness == pytest.approx(0.5)

    def test_negative_element_flagged(self):
        report = validate_povm(
            Povm({"neg": np.diag([1.5, 1.0]), "rest": np.diag([-0.5, 0.0])})
        )
        assert not report.valid
        assert report.min_eigenvalue["rest"] == pytest.approx(-0.5)

    def test_non_hermitian_flagged(self):
        e = np.array([[0.5, 0.1], [0.0, 0.5]])
        report = validate_povm(Povm({"a": e, "b": np.eye(2) - e}))
        assert not report.valid and report.hermiticity["a"] == pytest.approx(0.1)

    def test_mixed_dims_rejected(self):
        with pytest.raises(ValueError):
            Povm({"a": np.eye(2), "b": np.eye(4)})

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Povm({})


class TestOutcomeProbs:
    def test_sums_to_one(self):
        probs = outcome_probs(projective_pair(), np.eye(4) / 4)
        assert probs["identify-2"] == pytest.approx(0.75, abs=1e-12)
        assert probs["fail"] == pytest.approx(0.25, abs=1e-12)

    def test_dim_mismatch_rejected(self):
        with pytest.raises(ValueError):
            outcome_probs(projective_pair(), np.eye(2) / 2)

    def test_unnormalized_state_rejected(self):
        with pytest.raises(ValueError):
            outcome_probs(projective_pair(), np.eye(4))


class TestHelstrom:
    def test_identical_states_give_coin_flip(self):
        rho = np.eye(2) / 2
        assert helstrom(rho, rho).p_error == pytest.approx(0.5, abs=1e-12)

    def test_orthogonal_pure_states_are_free(self):
        r1 = states.density(states.ket("0"))
        r2 = states.density(states.ket("1"))
        assert helstrom(r1, r2).p_error <= 1e-12

    def test_singlet_vs_maximally_mixed(self):
        _, p_anti = states.sym_antisym_projectors((0, 1), 2)
        res = helstrom(p_anti, np.eye(4) / 4)
        assert res.p_error == pytest.approx(1 / 8, abs=1e-12)

    def test_eigenvalues_descending(self):
        rng = np.random.default_rng(2)
        res = helstrom(random_density(rng, 4), random_density(rng, 4))
        assert np.all(np.diff(res.eigenvalues) <= 1e-12)

    def test_kernel_assigned_to_higher_prior(self):
        rho = np.eye(2) / 2
        # Identical states: the whole spectrum is kernel. Guessing the
        # higher-prior state errs exactly with the lower prior.
        res = helstrom(rho, rho, 0.3, 0.7)
        probs1 = outcome_probs(res.optimal_projectors, rho)
        assert probs1["guess-2"] == pytest.approx(1.0, abs=1e-12)
        assert res.p_error == pytest.approx(0.3, abs=1e-12)

    def test_priors_must_be_normalized(self):
        rho = np.eye(2) / 2
        with pytest.raises(ValueError):
            helstrom(rho, rho, 0.5, 0.6)

    @given(seeds, st.floats(0.05, 0.95))
    @settings(max_examples=60)
    def test_error_bounds_and_projector_consistency(self, seed, p1):
        rng = np.random.default_rng(seed)
        r1 = random_density(rng, 4)
        r2 = random_density(rng, 4)
        res = helstrom(r1, r2, p1, 1.0 - p1)
        assert -1e-12 <= res.p_error <= min(p1, 1.0 - p1) + 1e-12
        probs1 = outcome_probs(res.optimal_projectors, r1)
        probs2 = outcome_probs(res.optimal_projectors, r2)
        achieved = p1 * probs1["guess-2"] + (1.0 - p1) * probs2["guess-1"]
        assert abs(achieved - res.p_error) <= 1e-10

    @given(seeds)
    @settings(max_examples=40)
    def test_swap_symmetric_for_equal_priors(self, seed):
        rng = np.random.default_rng(seed)
        r1 = random_density(rng, 4)
        r2 = random_density(rng, 4)
        assert abs(helstrom(r1, r2).p_error - helstrom(r2, r1).p_error) <= 1e-12


class TestSingletWeightScan:
    def test_matches_closed_form_on_grid(self):
        rows = singlet_weight_scan([i / 10 for i in range(11)])
        for row in rows:
            assert abs(row.trace_norm - row.closed_form) <= 1e-10

    def test_error_lowest_for_pure_singlet(self):
        rows = singlet_weight_scan([0.0, 0.25, 0.5, 1.0])
        assert rows[0].p_error == pytest.approx(3 / 8, abs=1e-12)
        assert rows[1].p_error == pytest.approx(0.5, abs=1e-12)  # states coincide
        assert rows[-1].p_error == pytest.approx(1 / 8, abs=1e-12)
        assert rows[-1].p_error == min(r.p_error for r in rows)

    def test_rejects_weight_outside_unit_interval(self):
        with pytest.raises(ValueError):
            singlet_weight_scan([1.5])


class TestUnambiguousEval:
    def test_one_reference_numbers(self):
        _, p_anti = states.sym_antisym_projectors((0, 1), 2)
        res = unambiguous_eval(
            projective_pair(),
            [p_anti, np.eye(4) / 4],
            (0.5, 0.5),
            {"identify-2": 1},
        )
        assert res.p_success == pytest.approx(3 / 8, abs=1e-12)
        assert res.per_state_success[0] == 0.0
        assert res.per_state_success[1] == pytest.approx(3 / 4, abs=1e-12)
        assert res.cross_talk <= 1e-12
        assert res.failure_prob == pytest.approx(5 / 8, abs=1e-12)
        assert res.p_success + res.failure_prob == pytest.approx(1.0, abs=1e-10)

    def test_two_unmapped_elements_rejected(self):
        povm = Povm({"a": np.eye(2) * 0.5, "b": np.eye(2) * 0.25, "c": np.eye(2) * 0.25})
        with pytest.raises(ValueError):
            unambiguous_eval(povm, [np.eye(2) / 2] * 2, (0.5, 0.5), {"a": 0})

    def test_unknown_mapping_label_rejected(self):
        with pytest.raises(ValueError):
            unambiguous_eval(
                projective_pair(), [np.eye(4) / 4] * 2, (0.5, 0.5), {"nope": 0}
            )

    def test_bad_state_index_rejected(self):
        with pytest.raises(ValueError):
            unambiguous_eval(
                projective_pair(), [np.eye(4) / 4] * 2, (0.5, 0.5), {"identify-2": 5}
            )

    def test_bad_priors_rejected(self):
        with pytest.raises(ValueError):
            unambiguous_eval(
                projective_pair(), [np.eye(4) / 4] * 2, (0.9, 0.5), {"identify-2": 1}
            )


def one_dim_subspace(vec):
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return Subspace(v.size, v[:, None])


class TestJordanBases:
    def test_orthogonal_lines(self):
        s1 = one_dim_subspace([1, 0])
        s2 = one_dim_subspace([0, 1])
        (u, v, c), = jordan_bases(s1, s2)
        assert c == pytest.approx(0.0, abs=1e-12)

    def test_identical_lines(self):
        s = one_dim_subspace([1, 1])
        (u, v, c), = jordan_bases(s, s)
        assert c == pytest.approx(1.0, abs=1e-12)

    @given(st.floats(0.05, np.pi / 2 - 0.05))
    def test_plane_angle_recovered(self, angle):
        s1 = one_dim_subspace([1, 0])
        s2 = one_dim_subspace([np.cos(angle), np.sin(angle)])
        (_, _, c), = jordan_bases(s1, s2)
        assert c == pytest.approx(np.cos(angle), abs=1e-12)

    def test_cosines_descending_and_vectors_paired(self):
        rng = np.random.default_rng(8)
        a = np.linalg.qr(rng.normal(size=(8, 3)) + 1j * rng.normal(size=(8, 3)))[0]
        b = np.linalg.qr(rng.normal(size=(8, 3)) + 1j * rng.normal(size=(8, 3)))[0]
        pairs = jordan_bases(Subspace(8, a), Subspace(8, b))
        cosines = [c for _, _, c in pairs]
        assert all(x >= y - 1e-12 for x, y in zip(cosines, cosines[1:]))
        for i, (u, v, c) in enumerate(pairs):
            assert abs(abs(np.vdot(u, v)) - c) <= 1e-10
            for j, (u2, v2, _) in enumerate(pairs):
                if i != j:
                    assert abs(np.vdot(u, v2)) <= 1e-10

    def test_ambient_mismatch_rejected(self):
        with pytest.raises(ValueError):
            jordan_bases(one_dim_subspace([1, 0]), one_dim_subspace([1, 0, 0, 0]))

    def test_branch_triples_share_exactly_one_direction(self):
        # Three-dimensional pieces of the two four-wire supports: each triple
        # holds one branch vector, one bare product state and one triplet
        # product. Exactly one principal pair is shared (cosine 1).
        e0, e1 = states.ket("0"), states.ket("1")

        def first_branch(core, flag):
            vec = np.kron(core, np.kron(e0, flag))
            return linalg.permute_qubits(vec, (0, 2, 1, 3))

        def second_branch(core, flag):
            vec = np.kron(core, np.kron(e0, flag))
            return linalg.permute_qubits(vec, (2, 0, 1, 3))

        u_cols = np.column_stack(
            [
                (2 / np.sqrt(5)) * first_branch(states.bell("psi-"), e0 + 0.5 * e1),
                states.ket("0101"),
                first_branch(states.bell("psi+"), e1),
            ]
        )
        v_cols = np.column_stack(
            [
                (2 / np.sqrt(5)) * second_branch(states.bell("psi-"), e1 + 0.5 * e0),
                states.ket("1000"),
                second_branch(states.bell("psi+"), e0),
            ]
        )
        pairs = jordan_bases(Subspace(16, u_cols), Subspace(16, v_cols))
        cosines = [c for _, _, c in pairs]
        assert sum(1 for c in cosines if c >= 1 - 1e-9) == 1
        assert all(c < 1 - 1e-6 for c in cosines[1:])


class TestUnambiguousSubspacePovm:
    def test_orthogonal_lines_identified_with_certainty(self):
        povm = unambiguous_subspace_povm(
            one_dim_subspace([1, 0]), one_dim_subspace([0, 1])
        )
        assert validate_povm(povm).valid
        assert np.trace(povm.elements["identify-1"]) == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(povm.elements["fail"])) <= 1e-12

    @given(st.floats(0.1, 1.4))
    @settings(max_examples=30)
    def test_pair_weight_matches_closed_form(self, angle):
        c = np.cos(angle)
        povm = unambiguous_subspace_povm(
            one_dim_subspace([1, 0]), one_dim_subspace([np.cos(angle), np.sin(angle)])
        )
        # Each identification element is w times a rank-one projector.
        w = float(np.real(np.trace(povm.elements["identify-1"])))
        assert w == pytest.approx(1.0 / (1.0 + c), abs=1e-9)
        assert validate_povm(povm).valid

    @given(st.floats(0.1, 1.4))
    @settings(max_examples=30)
    def test_annihilates_opposing_line(self, angle):
        s1 = one_dim_subspace([1, 0])
        s2 = one_dim_subspace([np.cos(angle), np.sin(angle)])
        povm = unambiguous_subspace_povm(s1, s2)
        assert np.max(np.abs(povm.elements["identify-1"] @ s2.basis)) <= 1e-9
        assert np.max(np.abs(povm.elements["identify-2"] @ s1.basis)) <= 1e-9

    def test_shared_direction_dropped(self):
        s = one_dim_subspace([1, 1])
        with pytest.warns(UserWarning):
            povm = unambiguous_subspace_povm(s, s)
        assert np.max(np.abs(povm.elements["identify-1"])) == 0.0
        assert np.max(np.abs(povm.elements["identify-2"])) == 0.0

    def test_contained_support_warns_but_builds(self):
        inner = one_dim_subspace([1, 0, 0])
        outer = Subspace(3, np.eye(3)[:, :2])
        with pytest.warns(UserWarning, match="never be identified"):
            povm = unambiguous_subspace_povm(inner, outer)
        assert validate_povm(povm).valid
        assert np.max(np.abs(povm.elements["identify-1"])) == 0.0
        # The outer support still has a direction orthogonal to the inner one.
        assert np.trace(povm.elements["identify-2"]) == pytest.approx(1.0, abs=1e-9)

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_random_subspaces_yield_valid_unambiguous_povm(self, seed):
        rng = np.random.default_rng(seed)
        a = np.linalg.qr(rng.normal(size=(8, 3)) + 1j * rng.normal(size=(8, 3)))[0]
        b = np.linalg.qr(rng.normal(size=(8, 2)) + 1j * rng.normal(size=(8, 2)))[0]
        s1, s2 = Subspace(8, a), Subspace(8, b)
        cosines = [c for _, _, c in jordan_bases(s1, s2)]
        assume(all(c < 1 - 1e-6 for c in cosines))
        povm = unambiguous_subspace_povm(s1, s2)
        assert validate_povm(povm).valid
        assert np.max(np.abs(povm.elements["identify-1"] @ s2.basis)) <= 1e-9
        assert np.max(np.abs(povm.elements["identify-2"] @ s1.basis)) <= 1e-9
