import numpy as np
import pytest

from localglauber import (
    ChainConfig,
    Graph,
    ResourceLimitError,
    StateSpace,
    ValidationError,
    build_transition_matrix,
    check_absorption,
    check_detailed_balance,
    check_irreducibility,
    check_row_stochastic,
    check_uniform_stationary,
    cycle_automorphisms,
    draw_round_randomness,
    enumerate_proper_colorings,
    exact_mixing_time,
    generate,
    improper_mass_curve,
    local_glauber_step,
    stationary_uniform,
    symmetry_reduced_starts,
    tv_curve,
    tv_distance,
)
from localglauber.dynamics import apply_proposals


def chromatic_cycle(n, q):
    return (q - 1) ** n + (-1) ** n * (q - 1)


class TestEnumeration:
    def test_triangle_chromatic_polynomial(self):
        _, count = enumerate_proper_colorings(generate("complete", n=3), 5)
        assert count == 5 * 4 * 3  # q(q-1)(q-2) = 60

    def test_cycle_chromatic_polynomial(self):
        _, count = enumerate_proper_colorings(generate("cycle", n=4), 3)
        assert count == chromatic_cycle(4, 3) == 18

    def test_edgeless_graph_all_states_proper(self):
        _, count = enumerate_proper_colorings(Graph(3, []), 2)
        assert count == 8

    def test_enumeration_budget_enforced(self):
        with pytest.raises(ResourceLimitError):
            StateSpace(generate("path", n=13), 5)  # 5^13 states > 2^24

    def test_index_round_trip(self):
        space = StateSpace(generate("cycle", n=4), 3)
        for idx in (0, 17, 80, 42):
            assert space.index_of(space.coloring_of(idx)) == idx
        assert space.index_of([0, 0, 0, 0]) == 0


class TestTransitionMatrix:
    def test_single_node_by_hand(self):
        # The node flips iff marked (prob 1/2) and proposes the other color
        # (prob 1/2): off-diagonal mass is exactly 1/4.
        P = build_transition_matrix(Graph(1, []), ChainConfig(q=2, gamma=0.5))
        assert np.allclose(P, [[0.75, 0.25], [0.25, 0.75]], atol=1e-15)

    @pytest.mark.parametrize("family,n", [("complete", 3), ("path", 3), ("cycle", 4)])
    def test_rows_sum_to_one(self, family, n):
        g = generate(family, n=n)
        P = build_transition_matrix(g, ChainConfig(q=5, gamma=0.3))
        assert check_row_stochastic(P).passed

    def test_matrix_entry_cap(self):
        with pytest.raises(ResourceLimitError):
            build_transition_matrix(generate("cycle", n=6), ChainConfig(q=5, gamma=0.3))

    def test_matches_apply_proposals_per_combo(self):
        # The vectorized builder and the dynamics step must implement the
        # same deterministic map (state, marking, proposals) -> state.
        rng = np.random.default_rng(5)
        g = generate("erdos_renyi", n=5, p=0.5, seed=1)
        space = StateSpace(g, 3)
        for enforce in (True, False):
            P = build_transition_matrix(
                g, ChainConfig(q=3, gamma=0.4), enforce_reversibility_condition=enforce
            )
            for _ in range(300):
                s = int(rng.integers(space.size))
                marked = rng.random(5) < 0.5
                proposal = rng.integers(0, 3, 5)
                out, _ = apply_proposals(
                    g, space.coloring_of(s), marked, proposal,
                    enforce_reversibility_condition=enforce,
                )
                assert P[s, space.index_of(out)] > 0.0


class TestStationarityChecks:
    @pytest.mark.parametrize("gamma", [0.2, 0.5, 0.8])
    def test_triangle_detailed_balance(self, gamma):
        g = generate("complete", n=3)
        P = build_transition_matrix(g, ChainConfig(q=5, gamma=gamma))
        assert check_detailed_balance(P, StateSpace(g, 5)).passed

    @pytest.mark.parametrize("family,n", [("path", 3), ("cycle", 4)])
    def test_uniform_stationary(self, family, n):
        g = generate(family, n=n)
        P = build_transition_matrix(g, ChainConfig(q=5, gamma=0.3))
        assert check_uniform_stationary(P, StateSpace(g, 5)).passed

    @pytest.mark.parametrize("family,n", [("path", 3), ("cycle", 4)])
    def test_corrupted_rule_breaks_detailed_balance(self, family, n):
        # Regression guard: dropping the reversibility condition must be
        # caught by the detailed-balance check on path/cycle instances.
        g = generate(family, n=n)
        P = build_transition_matrix(
            g, ChainConfig(q=5, gamma=0.5), enforce_reversibility_condition=False
        )
        report = check_detailed_balance(P, StateSpace(g, 5))
        assert not report.passed
        assert report.max_error > 1e-6

    def test_corrupted_rule_invisible_on_complete_graphs(self):
        # On K_n every accepted simultaneous move uses colors fresh to the
        # whole graph, so swapping old and new colors is an involution that
        # maps the forward transition to its reverse: detailed balance holds
        # even without the reversibility condition. The guard above must
        # therefore use non-complete instances.
        g = generate("complete", n=3)
        P = build_transition_matrix(
            g, ChainConfig(q=5, gamma=0.5), enforce_reversibility_condition=False
        )
        assert check_detailed_balance(P, StateSpace(g, 5)).max_error == 0.0

    def test_absorption_exact_zero(self):
        g = generate("cycle", n=4)
        P = build_transition_matrix(g, ChainConfig(q=5, gamma=0.5))
        assert check_absorption(P, StateSpace(g, 5)).passed

    def test_irreducibility_reported(self):
        g = generate("path", n=3)
        P = build_transition_matrix(g, ChainConfig(q=5, gamma=0.3))
        assert check_irreducibility(P, StateSpace(g, 5)).passed

    def test_improper_mass_decays_monotonically(self):
        g = generate("cycle", n=4)
        space = StateSpace(g, 3)
        P = build_transition_matrix(g, ChainConfig(q=3, gamma=0.4))
        masses = improper_mass_curve(P, space, start_index=0, rounds=120)
        assert masses[0] == 1.0  # all-zeros start is improper
        assert np.all(np.diff(masses) <= 1e-15)
        assert masses[-1] < 1e-3


class TestMonteCarloAgainstExact:
    def test_one_step_frequencies_within_five_sigma(self):
        g = generate("path", n=3)
        q, gamma = 3, 0.5
        space = StateSpace(g, q)
        P = build_transition_matrix(g, ChainConfig(q=q, gamma=gamma))
        cfg = ChainConfig(q=q, gamma=gamma, seed=2024)
        start = 5
        x0 = space.coloring_of(start)
        trials = 100_000
        counts = np.zeros(space.size)
        for t in range(trials):
            rr = draw_round_randomness(cfg, g.node_count, t)
            counts[space.index_of(local_glauber_step(g, x0, rr))] += 1
        freq = counts / trials
        row = P[start]
        assert np.all(counts[row == 0.0] == 0)
        sigma = np.sqrt(row * (1 - row) / trials)
        mask = row > 0
        assert np.all(np.abs(freq[mask] - row[mask]) <= 5 * sigma[mask])


class TestTVDistance:
    def test_identical_zero(self):
        mu = np.full(4, 0.25)
        assert tv_distance(mu, mu) == 0.0

    def test_disjoint_supports_one(self):
        assert tv_distance([1.0, 0.0], [0.0, 1.0]) == 1.0

    def test_worked_half(self):
        assert tv_distance([1.0, 0.0], [0.5, 0.5]) == 0.5

    def test_validation(self):
        with pytest.raises(ValidationError):
            tv_distance([1.0, 0.0], [0.5, 0.5, 0.0])
        with pytest.raises(ValidationError):
            tv_distance([0.9, 0.0], [0.5, 0.5])


class TestMixingTime:
    def test_eps_one_is_zero_rounds(self):
        g = Graph(1, [])
        P = build_transition_matrix(g, ChainConfig(q=2, gamma=0.5))
        assert exact_mixing_time(P, StateSpace(g, 2), eps=1.0).rounds == 0

    def test_two_state_closed_form(self):
        # TV from either start halves each round from 1/2:
        # smallest t with 0.5^(t+1) <= 0.01 is 6.
        g = Graph(1, [])
        P = build_transition_matrix(g, ChainConfig(q=2, gamma=0.5))
        assert exact_mixing_time(P, StateSpace(g, 2), eps=0.01).rounds == 6

    def test_max_tv_nonincreasing(self):
        g = generate("cycle", n=4)
        P = build_transition_matrix(g, ChainConfig(q=5, gamma=0.4))
        curve = tv_curve(P, StateSpace(g, 5), max_rounds=60)
        assert np.all(np.diff(curve.max_tv) <= 1e-12)

    def test_exceeded_reported_not_raised(self):
        g = generate("cycle", n=4)
        P = build_transition_matrix(g, ChainConfig(q=5, gamma=0.4))
        res = exact_mixing_time(P, StateSpace(g, 5), eps=0.01, max_rounds=3)
        assert res.exceeded and res.rounds is None

    def test_geometric_tail_on_triangle(self):
        # Log-dependence probe: with mu the uniform-proper target, the gap
        # between mixing times at eps and eps/e is constant in eps.
        g = generate("complete", n=3)
        space = StateSpace(g, 5)
        P = build_transition_matrix(g, ChainConfig(q=5, gamma=0.5))
        e = float(np.e)
        taus = [exact_mixing_time(P, space, eps).rounds for eps in (0.25, 0.25 / e, 0.25 / e**2)]
        assert taus[0] <= taus[1] <= taus[2]
        assert abs((taus[2] - taus[1]) - (taus[1] - taus[0])) <= 1


class TestSymmetryReduction:
    @pytest.mark.parametrize("n,q", [(4, 3), (5, 3)])
    def test_reduced_starts_reproduce_full_max(self, n, q):
        g = generate("cycle", n=n)
        space = StateSpace(g, q)
        P = build_transition_matrix(g, ChainConfig(q=q, gamma=0.35))
        reps = symmetry_reduced_starts(space, cycle_automorphisms(n))
        assert len(reps) < space.size
        full = tv_curve(P, space, max_rounds=30)
        reduced = tv_curve(P, space, starts=reps, max_rounds=30)
        assert np.allclose(full.max_tv, reduced.max_tv, atol=1e-13)

    def test_uniform_target_requires_proper_states(self):
        g = generate("complete", n=3)
        with pytest.raises(ValidationError):
            stationary_uniform(StateSpace(g, 2))  # K3 has no proper 2-coloring
