"""
Tests de la chaîne exacte : évolution, marginales, loi stationnaire, mélange, domination linéaire
"""

import itertools

import numpy as np
import pytest

from conftest import dense_oracle_matrix, oracle_mixing_time, random_graph, random_params
from sirsnet.core.errors import ExactModeCapError, ParameterError, SlowMixingError, SupportExplosionError
from sirsnet.graph import Graph, generate
from sirsnet.models import (
    ChainDistribution, TransitionOperator, Variant, all_infected_code, encode_state, evolve, marginals,
    mixing_time, stationary_distribution, tv_distance, verify_linear_domination,
)
from sirsnet.models.exact_chain import decode_states
from sirsnet.models.meanfield import mixing_time_bound


def test_state_codes():
    """Test du codage base 3 (nœud 0 en poids faible)"""
    assert encode_state([0, 1, 2]) == 0 + 3 + 18
    assert decode_states(np.array([21]), 3).tolist() == [[0, 1, 2]]
    assert all_infected_code(3) == 13
    with pytest.raises(ParameterError):
        encode_state([3])


def test_exact_cap(make_params):
    """Test du plafond du mode exact et du conseil Monte Carlo"""
    with pytest.raises(ExactModeCapError) as excinfo:
        TransitionOperator(generate("path", 11), make_params())
    assert "mc run" in str(excinfo.value)


def test_all_susceptible_is_absorbing(path3, make_params):
    """Test de tout-S : point absorbant en SIRS"""
    mu = evolve(path3, make_params(beta=0.9), ChainDistribution.point_mass(3, 0), 7)
    assert mu.as_dict() == {0: 1.0}


def test_single_node_step(make_params):
    """Test de n=1 depuis I : {I: 0.6, R: 0.4}"""
    g = Graph.from_edges(1, [])
    mu = evolve(g, make_params(delta=0.4, gamma=0.3), ChainDistribution.point_mass(1, 1), 1)
    assert mu.prob(1) == pytest.approx(0.6, abs=1e-15)
    assert mu.prob(2) == pytest.approx(0.4, abs=1e-15)


@pytest.mark.parametrize("variant", list(Variant))
def test_evolve_matches_dense_oracle(variant, rng):
    """Test de l'évolution (n ≤ 4, 10 pas) contre la puissance de matrice dense"""
    for n in (1, 2, 3, 4):
        g = random_graph(rng, n, p=0.7)
        params = random_params(rng, variant)
        P = dense_oracle_matrix(g, params)
        start = int(rng.integers(3 ** n))
        mu = ChainDistribution.point_mass(n, start)
        vec = mu.to_dense()
        for _ in range(10):
            mu = evolve(g, params, mu, 1, prune_tol=0.0)
            vec = vec @ P
            np.testing.assert_allclose(mu.to_dense(), vec, rtol=0, atol=1e-12)


def test_path2_three_steps_from_all_infected(make_params):
    """Test du chemin à 2 nœuds, 3 pas depuis (I, I)"""
    g = generate("path", 2)
    params = make_params(beta=0.5, delta=0.4, gamma=0.3)
    P = dense_oracle_matrix(g, params)
    expected = np.linalg.matrix_power(P, 3)[all_infected_code(2)]
    mu = evolve(g, params, ChainDistribution.point_mass(2, all_infected_code(2)), 3, prune_tol=0.0)
    np.testing.assert_allclose(mu.to_dense(), expected, rtol=0, atol=1e-12)


def test_full_matrix_switch_matches_expansion(make_params):
    """Test du passage à la matrice complète : mêmes résultats qu'à la volée"""
    g = generate("cycle", 5)
    params = make_params(beta=0.4, delta=0.3, gamma=0.2)
    mu0 = ChainDistribution.point_mass(5, all_infected_code(5))
    eager = TransitionOperator(g, params, dense_switch_fraction=0.0)
    lazy = TransitionOperator(g, params, dense_switch_fraction=1.0)
    a = evolve(g, params, mu0, 6, operator=eager, prune_tol=0.0)
    b = evolve(g, params, mu0, 6, operator=lazy, prune_tol=0.0)
    np.testing.assert_allclose(a.to_dense(), b.to_dense(), rtol=0, atol=1e-13)


def test_support_explosion(make_params):
    """Test du dépassement du budget mémoire avec le pas atteint"""
    g = generate("complete", 6)
    params = make_params(beta=0.5, delta=0.5, gamma=0.5)
    with pytest.raises(SupportExplosionError) as excinfo:
        evolve(g, params, ChainDistribution.point_mass(6, all_infected_code(6)), 5, memory_budget=50)
    assert excinfo.value.step == 1


def test_pruned_mass_is_recorded(make_params):
    """Test de l'élagage : masse élaguée tracée, total renormalisé"""
    g = generate("path", 4)
    params = make_params(beta=0.01, delta=0.01, gamma=0.01)
    mu = evolve(g, params, ChainDistribution.point_mass(4, all_infected_code(4)), 4, prune_tol=1e-6)
    assert len(mu.pruned_mass) == 4
    assert sum(mu.pruned_mass) > 0.0
    assert mu.total() == pytest.approx(1.0, abs=1e-12)


def test_marginals_examples():
    """Test des marginales : sélection des chiffres"""
    mu = ChainDistribution.from_mapping(1, {0: 0.2, 1: 0.5, 2: 0.3})
    marg = marginals(mu)
    assert marg.p_r.tolist() == pytest.approx([0.3])
    assert marg.p_i.tolist() == pytest.approx([0.5])
    full = marginals(ChainDistribution.point_mass(3, all_infected_code(3)))
    assert full.p_i.tolist() == [1.0, 1.0, 1.0]
    assert full.p_r.tolist() == [0.0, 0.0, 0.0]


def test_stationary_forms(make_params):
    """Test des lois stationnaires en forme close"""
    assert stationary_distribution(generate("path", 3), make_params()).as_dict() == {0: 1.0}
    siv = make_params(gamma=0.3, theta=0.1, variant=Variant.SIV_INFECTION_DOMINANT)
    one = stationary_distribution(Graph.from_edges(1, []), siv)
    assert one.prob(0) == pytest.approx(0.75)
    assert one.prob(2) == pytest.approx(0.25)
    two = stationary_distribution(generate("path", 2), siv)
    expected = {0: 0.5625, 2: 0.1875, 6: 0.1875, 8: 0.0625}
    for code, p in expected.items():
        assert two.prob(code) == pytest.approx(p, abs=1e-15)
    with pytest.raises(ParameterError):
        stationary_distribution(generate("path", 2), make_params(gamma=0.0))


def test_sirs_chain_reaches_all_susceptible(rng, make_params):
    """Test de la convergence SIRS sous-critique vers tout-S depuis 10 départs"""
    g = generate("cycle", 5)
    params = make_params(beta=0.1, delta=0.6, gamma=0.5)
    pi = stationary_distribution(g, params)
    for _ in range(10):
        mu = ChainDistribution.point_mass(5, int(rng.integers(3 ** 5)))
        mu = evolve(g, params, mu, 150)
        assert tv_distance(mu, pi) < 1e-6


@pytest.mark.parametrize("variant", [Variant.SIV_INFECTION_DOMINANT, Variant.SIV_VACCINATION_DOMINANT])
def test_siv_chain_reaches_product_form(variant, make_params):
    """Test de la convergence SIV vers la loi produit"""
    g = generate("path", 4)
    params = make_params(beta=0.2, delta=0.6, gamma=0.4, theta=0.3, variant=variant)
    pi = stationary_distribution(g, params)
    mu = evolve(g, params, ChainDistribution.point_mass(4, all_infected_code(4)), 200)
    assert tv_distance(mu, pi) < 1e-6


def test_tv_distance_examples():
    """Test des exemples de distance en variation totale"""
    a = ChainDistribution.from_mapping(1, {0: 0.6, 1: 0.4})
    b = ChainDistribution.point_mass(1, 0)
    assert tv_distance(a, a) == 0.0
    assert tv_distance(b, ChainDistribution.point_mass(1, 2)) == 1.0
    assert tv_distance(a, b) == pytest.approx(0.4)


def test_mixing_time_single_node_matches_oracle(make_params):
    """Test de t_mix sur n=1 contre la chaîne dense 3x3"""
    g = Graph.from_edges(1, [])
    params = make_params(beta=0.3, delta=0.9, gamma=0.9)
    assert mixing_time(g, params, 0.25) == oracle_mixing_time(g, params, 0.25)


def test_mixing_time_path3_matches_oracle(path3, make_params):
    """Test de t_mix sur le chemin à 3 nœuds contre l'oracle dense"""
    params = make_params(beta=0.05, delta=0.9, gamma=0.5)
    assert mixing_time(path3, params, 0.25) == oracle_mixing_time(path3, params, 0.25)


def test_mixing_time_edge_cases(path3, make_params):
    """Test de ε ≥ 1, de la monotonie en ε et du budget épuisé"""
    params = make_params(beta=0.05, delta=0.9, gamma=0.5)
    assert mixing_time(path3, params, 1.0) == 0
    assert mixing_time(path3, params, 0.99) <= mixing_time(path3, params, 0.25)
    with pytest.raises(ParameterError):
        mixing_time(path3, params, 0.0)
    slow = make_params(beta=0.9, delta=0.05, gamma=0.9)
    with pytest.raises(SlowMixingError) as excinfo:
        mixing_time(generate("complete", 4), slow, 1e-3, max_steps=5)
    assert excinfo.value.steps == 5


def test_mixing_time_below_bound_subcritical(make_params):
    """Test de t_mix(0.25) ≤ borne sur n ∈ {2..8} en régime sous-critique"""
    params = make_params(beta=0.05, delta=0.6, gamma=0.5)
    for n in range(2, 9):
        g = generate("path", n)
        assert mixing_time(g, params, 0.25) <= mixing_time_bound(g, params, 0.25)


@pytest.mark.parametrize("variant", list(Variant))
def test_linear_domination_random_triples(variant, rng):
    """Test de p_I(t+1) ≤ borne linéaire sur des triplets aléatoires (n ≤ 6, 50 pas)"""
    for _ in range(34):
        n = int(rng.integers(1, 7))
        g = random_graph(rng, n, p=0.6)
        params = random_params(rng, variant)
        start = ChainDistribution.point_mass(n, int(rng.integers(3 ** n)))
        report = verify_linear_domination(g, params, start, 50)
        assert report.min_slack >= -1e-10
        assert report.passed
        if variant is Variant.SIRS:
            assert min(report.min_slack_r_per_step) >= -1e-10


def test_linear_domination_without_infection(complete4, make_params):
    """Test de β = 0 : la borne est atteinte exactement"""
    params = make_params(beta=0.0, delta=0.3, gamma=0.4)
    start = ChainDistribution.point_mass(4, encode_state([1, 0, 1, 2]))
    report = verify_linear_domination(complete4, params, start, 20)
    assert max(abs(s) for s in report.min_slack_per_step) <= 1e-12


def test_linear_domination_full_vaccination(complete4, make_params):
    """Test de θ = 1 en vaccination-dominante : décroissance exacte par (1-δ)"""
    params = make_params(beta=0.7, delta=0.3, gamma=0.4, theta=1.0, variant=Variant.SIV_VACCINATION_DOMINANT)
    start = ChainDistribution.point_mass(4, encode_state([1, 0, 1, 0]))
    report = verify_linear_domination(complete4, params, start, 20)
    assert max(abs(s) for s in report.min_slack_per_step) <= 1e-12


def test_distribution_csv_round_trip(path3, make_params):
    """Test de l'aller-retour CSV d'une distribution"""
    mu = evolve(path3, make_params(), ChainDistribution.point_mass(3, all_infected_code(3)), 3)
    again = ChainDistribution.from_csv(mu.to_csv(), 3)
    assert np.array_equal(again.codes, mu.codes)
    assert np.array_equal(again.probs, mu.probs)


@pytest.mark.parametrize("variant", [Variant.SIV_INFECTION_DOMINANT, Variant.SIV_VACCINATION_DOMINANT])
def test_siv_infection_free_states_stay_infection_free(variant, complete4, rng):
    """Test de la fermeture des états sans I en SIV : aucune ligne n'y crée d'infecté"""
    params = random_params(rng, variant)
    operator = TransitionOperator(complete4, params)
    for digits in itertools.product((0, 2), repeat=4):
        row = operator.row(encode_state(digits))
        assert row.total() == pytest.approx(1.0, abs=1e-12)
        assert not np.any(decode_states(row.codes, 4) == 1)


def test_tv_distance_is_a_metric(rng):
    """Test de la symétrie et de l'inégalité triangulaire sur des triplets tirés"""
    def random_distribution() -> ChainDistribution:
        codes = rng.choice(27, size=int(rng.integers(1, 28)), replace=False)
        weights = rng.random(codes.size) + 1e-3
        return ChainDistribution.from_mapping(3, dict(zip(codes.tolist(), (weights / weights.sum()).tolist())))

    for _ in range(200):
        a, b, c = random_distribution(), random_distribution(), random_distribution()
        assert tv_distance(a, b) == pytest.approx(tv_distance(b, a), abs=1e-12)
        assert tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12


@pytest.mark.parametrize("variant", [Variant.SIV_INFECTION_DOMINANT, Variant.SIV_VACCINATION_DOMINANT])
def test_siv_stationary_marginals(variant, make_params):
    """Test des marginales de la loi produit : p_R = θ/(γ+θ), p_I = 0"""
    params = make_params(gamma=0.3, theta=0.2, variant=variant)
    marg = marginals(stationary_distribution(generate("path", 4), params))
    np.testing.assert_allclose(marg.p_r, np.full(4, 0.2 / 0.5), rtol=0, atol=1e-12)
    np.testing.assert_allclose(marg.p_i, np.zeros(4), rtol=0, atol=0)


def test_marginals_match_enumeration(rng):
    """Test des marginales d'une loi aléatoire sur n=3 contre l'énumération des 27 états"""
    weights = rng.random(27)
    mu = ChainDistribution.from_mapping(3, dict(enumerate((weights / weights.sum()).tolist())))
    expected_r, expected_i = np.zeros(3), np.zeros(3)
    for code, state in enumerate(itertools.product(range(3), repeat=3)):
        digits = state[::-1]
        for i in range(3):
            if digits[i] == 2:
                expected_r[i] += mu.prob(code)
            elif digits[i] == 1:
                expected_i[i] += mu.prob(code)
    marg = marginals(mu)
    np.testing.assert_allclose(marg.p_r, expected_r, rtol=0, atol=1e-14)
    np.testing.assert_allclose(marg.p_i, expected_i, rtol=0, atol=1e-14)


def test_pruned_mass_bounded_per_step(make_params):
    """Test de la masse élaguée à chaque pas : au plus prune_tol par état écarté"""
    g = generate("path", 4)
    params = make_params(beta=0.05, delta=0.05, gamma=0.05)
    prune_tol = 1e-5
    mu = ChainDistribution.point_mass(4, all_infected_code(4))
    for _ in range(6):
        nxt = evolve(g, params, mu, 1, prune_tol=prune_tol)
        dropped = 3 ** 4 - nxt.support
        assert 0.0 <= nxt.pruned_mass[-1] <= prune_tol * dropped
        mu = nxt
    assert sum(mu.pruned_mass) > 0.0
