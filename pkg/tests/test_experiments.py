"""
Tests des expériences : balayage du seuil, comparaison des couches, croissance du temps de mélange
"""

import csv
import io
import json

import numpy as np
import pytest

from conftest import dense_oracle_matrix
from sirsnet.core.config import config
from sirsnet.core.errors import DomainError, ParameterError
from sirsnet.experiments import (
    ExperimentSpec, LayerComparison, MixingScaling, ThresholdSweep, fit_decay_rate, runner,
)
from sirsnet.experiments.mixing_scaling import SLOW_MIXING
from sirsnet.graph import generate
from sirsnet.models import EpidemicParams, NodeProbs, decode_states, step_nonlinear


def make_spec(**fields) -> ExperimentSpec:
    base = {
        'name': "essai",
        'kind': "threshold_sweep",
        'graph': "complete:10",
        'grid': {'beta': [0.0], 'delta': [0.5], 'gamma': [0.5]},
        'layers': ["meanfield"],
        'horizon': 50,
        'replicas': 4,
        'plots': False,
    }
    base.update(fields)
    return ExperimentSpec.model_validate(base)


def read_rows(path) -> list:
    with open(path, encoding="utf-8") as f:
        return list(csv.DictReader(f))


# ----------------------------------------------------------------------
# Description d'expérience

def test_spec_validation():
    """Test des règles de la description JSON"""
    with pytest.raises(ValueError):
        make_spec(grid={'beta': [0.1], 'target_ratio': [1.0]})
    with pytest.raises(ValueError):
        make_spec(kind="mixing_scaling")
    with pytest.raises(ValueError):
        make_spec(sizes=[2, 3], graph="complete:5")
    with pytest.raises(ParameterError):
        make_spec(grid={'beta': [1.5]})


def test_grid_expansion():
    """Test de l'expansion : SIRS ne garde que θ = 0, ratios cibles résolus avec λ_max"""
    spec = make_spec(grid={'target_ratio': [0.5, 2.0], 'delta': [0.4], 'gamma': [0.5],
                           'theta': [0.0, 0.3], 'variants': ["sirs", "siv_vd"]})
    points = spec.expand(lambda_max=4.0)
    assert len(points) == 2 + 4
    sirs = [p for p in points if p.params.variant.value == "sirs"]
    assert [p.params.beta for p in sirs] == [0.5 * 0.4 / 4.0, 2.0 * 0.4 / 4.0]
    assert spec.expand(lambda_max=None) == []
    with pytest.raises(ParameterError):
        make_spec(grid={'target_ratio': [50.0]}).expand(lambda_max=1.0)


def test_spec_hash_stable():
    assert make_spec().sha256() == make_spec().sha256()
    assert make_spec().sha256() != make_spec(seed=1).sha256()


# ----------------------------------------------------------------------
# Balayage du seuil

def test_fit_decay_rate():
    """Test de l'ajustement exponentiel et des courbes trop courtes"""
    curve = 3.0 * 0.7 ** np.arange(120)
    assert fit_decay_rate(curve, 10, 100) == pytest.approx(np.log(0.7), abs=1e-10)
    assert np.isnan(fit_decay_rate(np.zeros(50), 10, 40))


def test_sweep_without_infection_decays_at_recovery_rate(tmp_path):
    """Test de β = 0 : taux ajusté = log(1-δ)"""
    result = ThresholdSweep().start(make_spec(), output_dir=str(tmp_path))
    rows = read_rows(result.files['table'])
    assert len(rows) == 1
    assert float(rows[0]['decay_rate_fit']) == pytest.approx(np.log(0.5), abs=1e-6)
    assert rows[0]['regime'] == "subcritical"
    assert float(rows[0]['endemic_level_mf']) == 0.0
    assert rows[0]['error'] == ""


def test_sweep_subcritical_decay_below_linear_norm(tmp_path):
    """Test du ratio 0.8 : taux ajusté ≤ log‖M‖₂ + 0.05"""
    spec = make_spec(graph="er:200:0.05", grid={'target_ratio': [0.8], 'delta': [0.5], 'gamma': [0.5]},
                     init="all_infected")
    rows = read_rows(ThresholdSweep().start(spec, output_dir=str(tmp_path)).files['table'])
    row = rows[0]
    assert float(row['ratio']) == pytest.approx(0.8, abs=1e-6)
    assert float(row['target_ratio']) == 0.8
    assert float(row['decay_rate_fit']) <= float(row['log_norm_M']) + 0.05


def test_sweep_vaccination_flips_regime(tmp_path):
    """Test du changement de régime vaccination-dominante quand θ augmente"""
    spec = make_spec(grid={'target_ratio': [1.5], 'delta': [0.5], 'gamma': [0.5],
                           'theta': [0.0, 0.5], 'variants': ["siv_vd"]})
    rows = read_rows(ThresholdSweep().start(spec, output_dir=str(tmp_path)).files['table'])
    by_theta = {float(r['theta']): r for r in rows}
    assert by_theta[0.0]['regime'] == "supercritical"
    assert float(by_theta[0.0]['endemic_level_mf']) > 0.0
    assert by_theta[0.5]['regime'] == "subcritical"
    assert float(by_theta[0.5]['ratio']) == pytest.approx(0.75, abs=1e-6)


def test_sweep_reports_fixed_point_outcome(tmp_path):
    """Test de la colonne mf_outcome : convergé au-dessus du seuil, sans maladie en dessous"""
    spec = make_spec(grid={'beta': [0.0, 0.2], 'delta': [0.5], 'gamma': [0.5]})
    rows = read_rows(ThresholdSweep().start(spec, output_dir=str(tmp_path)).files['table'])
    assert [r['mf_outcome'] for r in rows] == ["disease_free", "converged"]
    assert float(rows[1]['endemic_level_mf']) > 0.0


def test_sweep_unconverged_level_is_nan(tmp_path, monkeypatch):
    """Test d'un point fixe non convergé : niveau endémique NaN et issue recopiée"""
    from sirsnet.experiments import threshold_sweep
    from sirsnet.models.meanfield import FixedPointOutcome, FixedPointResult

    def cycling(g, params, **kwargs):
        return FixedPointResult(np.full(g.n, 0.3), np.full(g.n, 0.3), float("inf"),
                                FixedPointOutcome.CYCLE_DETECTED, period=2)

    monkeypatch.setattr(threshold_sweep, "endemic_fixed_point", cycling)
    spec = make_spec(grid={'beta': [0.2], 'delta': [0.5], 'gamma': [0.5]})
    result = ThresholdSweep().start(spec, output_dir=str(tmp_path))
    row = read_rows(result.files['table'])[0]
    assert row['mf_outcome'] == "cycle_detected"
    assert np.isnan(float(row['endemic_level_mf']))
    assert row['error'] == ""


def test_sweep_rerun_is_byte_identical(tmp_path):
    """Test de la reproductibilité octet par octet de la table"""
    spec = make_spec(graph="er:60:0.1", grid={'beta': [0.05, 0.2], 'delta': [0.3], 'gamma': [0.3]},
                     layers=["meanfield", "montecarlo"], seed=4)
    first = ThresholdSweep().start(spec, output_dir=str(tmp_path / "a"))
    second = ThresholdSweep().start(spec, output_dir=str(tmp_path / "b"), jobs=2)
    assert (tmp_path / "a" / "essai.csv").read_bytes() == (tmp_path / "b" / "essai.csv").read_bytes()
    assert first.rows[0]['mc_survival_fraction'] == second.rows[0]['mc_survival_fraction']


def test_sweep_records_point_errors(tmp_path, monkeypatch):
    """Test de la capture d'une erreur par point sans interrompre le balayage"""
    from sirsnet.experiments import threshold_sweep

    real = threshold_sweep.ensemble

    def failing(g, params, *args, **kwargs):
        if params.beta > 0.1:
            raise DomainError("point refusé")
        return real(g, params, *args, **kwargs)

    monkeypatch.setattr(threshold_sweep, "ensemble", failing)
    spec = make_spec(grid={'beta': [0.05, 0.2], 'delta': [0.5], 'gamma': [0.5]}, layers=["montecarlo"])
    experiment = ThresholdSweep()
    result = experiment.start(spec, output_dir=str(tmp_path))
    assert result.failed_points == 1
    assert not result.success
    rows = read_rows(result.files['table'])
    assert rows[0]['error'] == ""
    assert rows[1]['error'] == "point refusé"
    assert rows[1]['beta'] == "0.2"


def test_metadata_file(tmp_path):
    """Test des métadonnées écrites à côté de la table"""
    result = ThresholdSweep().start(make_spec(plots=True), output_dir=str(tmp_path))
    meta = json.loads((tmp_path / "essai.meta.json").read_text(encoding="utf-8"))
    assert meta['kind'] == "threshold_sweep"
    assert meta['spec_sha256'] == make_spec(plots=True).sha256()
    assert {'sirsnet', 'numpy', 'scipy', 'python'} <= set(meta['versions'])
    assert meta['decay_fit_window'] == [config.decay_fit_start, config.decay_fit_stop]
    assert (tmp_path / "essai.svg").exists()
    assert 'plot' in result.files


@pytest.mark.slow
def test_desk_scale_supercritical_survival(tmp_path):
    """Test de ER(500, 0.02) au ratio 1.5 : survie des répliques et niveau endémique"""
    spec = make_spec(graph="er:500:0.02", grid={'target_ratio': [1.5], 'delta': [0.5], 'gamma': [0.5]},
                     layers=["meanfield", "montecarlo"], horizon=2000, replicas=20,
                     init="fraction:0.1")
    row = ThresholdSweep().start(spec, output_dir=str(tmp_path)).rows[0]
    assert row['mc_survival_fraction'] >= 18 / 20
    level = row['endemic_level_mf']
    assert level > 0.0
    assert abs(row['mc_mean_infected_late'] - level) <= 0.3 * level


# ----------------------------------------------------------------------
# Comparaison des couches

def layer_spec(**fields) -> ExperimentSpec:
    values = {'kind': "layer_comparison", 'graph': "complete:3", 'layers': ["exact", "meanfield", "linear"],
              'horizon': 20, 'init': "all_infected",
              'grid': {'beta': [0.3], 'delta': [0.4], 'gamma': [0.3]}}
    values.update(fields)
    return make_spec(**values)


def test_layers_agree_at_start(tmp_path):
    """Test de l'écart nul à t = 0"""
    result = LayerComparison().start(layer_spec(), output_dir=str(tmp_path))
    first = result.rows[0]
    assert first['t'] == 0
    assert first['discrepancy_meanfield'] == 0.0
    assert first['discrepancy_linear'] == 0.0
    assert len(result.rows) == 21


def test_layers_agree_without_infection(tmp_path):
    """Test de β = 0 : les nœuds sont indépendants, l'écart reste nul"""
    spec = layer_spec(graph="path:4", grid={'beta': [0.0], 'delta': [0.4], 'gamma': [0.3]})
    rows = LayerComparison().start(spec, output_dir=str(tmp_path)).rows
    assert max(r['discrepancy_meanfield'] for r in rows) <= 1e-10
    assert max(r['discrepancy_meanfield_r'] for r in rows) <= 1e-10


def test_layer_discrepancy_matches_dense_pipeline(tmp_path):
    """Test du triangle à t = 20 contre la chaîne dense et le champ moyen recalculés"""
    rows = LayerComparison().start(layer_spec(), output_dir=str(tmp_path)).rows
    g = generate("complete", 3)
    params = EpidemicParams.build(beta=0.3, delta=0.4, gamma=0.3)
    P = dense_oracle_matrix(g, params)
    mu = np.zeros(27)
    mu[13] = 1.0
    mf = NodeProbs.uniform(3, 0.0, 1.0)
    for _ in range(20):
        mu = mu @ P
        mf = step_nonlinear(g, params, mf)
    digits = decode_states(np.arange(27), 3)
    p_i = (mu[:, None] * (digits == 1)).sum(axis=0)
    expected = float(np.max(np.abs(p_i - mf.p_i)))
    assert rows[20]['discrepancy_meanfield'] == pytest.approx(expected, abs=1e-9)


def test_layer_comparison_respects_cap(tmp_path):
    from sirsnet.core.errors import ExactModeCapError
    with pytest.raises(ExactModeCapError):
        LayerComparison().start(layer_spec(graph="complete:11"), output_dir=str(tmp_path))


# ----------------------------------------------------------------------
# Croissance du temps de mélange

def mixing_spec(**fields) -> ExperimentSpec:
    values = {'kind': "mixing_scaling", 'graph': "path:{n}", 'sizes': [2, 3, 4, 5, 6, 7, 8],
              'epsilons': [0.25], 'grid': {'beta': [0.05], 'delta': [0.6], 'gamma': [0.5]}}
    values.update(fields)
    return make_spec(**values)


def test_mixing_within_bound(tmp_path):
    """Test de t_mix ≤ borne pour n = 2..8 sous le seuil"""
    rows = MixingScaling().start(mixing_spec(), output_dir=str(tmp_path)).rows
    assert [r['n'] for r in rows] == [2, 3, 4, 5, 6, 7, 8]
    for row in rows:
        assert row['status'] == "ok"
        assert row['within_bound'] is True
        assert row['t_mix'] <= row['bound']


def test_mixing_slow_status(tmp_path, monkeypatch):
    """Test d'un budget de pas épuisé : statut signalé, pas d'extrapolation"""
    monkeypatch.setattr(config, "mixing_max_steps", 5)
    spec = mixing_spec(sizes=[3], epsilons=[0.01],
                       grid={'beta': [0.9], 'delta': [0.05], 'gamma': [0.5]})
    result = MixingScaling().start(spec, output_dir=str(tmp_path))
    row = result.rows[0]
    assert row['status'] == SLOW_MIXING
    assert row['t_mix'] is None
    assert row['bound'] == float("inf")
    assert read_rows(result.files['table'])[0]['t_mix'] == ""


def test_mixing_requires_explicit_beta(tmp_path):
    spec = mixing_spec(grid={'target_ratio': [0.5], 'delta': [0.6], 'gamma': [0.5]})
    with pytest.raises(ParameterError):
        MixingScaling().start(spec, output_dir=str(tmp_path))


# ----------------------------------------------------------------------
# Lanceur

def test_runner_registry_and_file(tmp_path):
    """Test du registre et de l'exécution depuis un fichier JSON"""
    assert set(runner.registry) == {"threshold_sweep", "layer_comparison", "mixing_scaling"}
    path = tmp_path / "spec.json"
    path.write_text(make_spec().model_dump_json(), encoding="utf-8")
    before = len(runner.history)
    result = runner.run_file(str(path), output_dir=str(tmp_path / "out"))
    assert result.success
    assert len(runner.history) == before + 1
    assert (tmp_path / "out" / "essai.csv").exists()


@pytest.mark.parametrize("name", ["threshold_sweep", "layer_comparison", "mixing_scaling"])
def test_sample_configs_are_valid(name):
    """Test des descriptions fournies dans configs/"""
    from pathlib import Path
    spec = ExperimentSpec.from_file(str(Path(__file__).resolve().parent.parent / "configs" / f"{name}.json"))
    assert spec.kind == name
