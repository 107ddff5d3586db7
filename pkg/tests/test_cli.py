"""
Tests de la CLI : sorties, fichiers, codes de sortie
"""

import json
import re

import pytest
from typer.testing import CliRunner

from conftest import oracle_mixing_time
from sirsnet import __version__
from sirsnet.cli import app, dispatch
from sirsnet.graph import generate
from sirsnet.models import EpidemicParams

cli = CliRunner()

RATES = ["--beta", "0.2", "--delta", "0.5", "--gamma", "0.5"]


def test_version():
    result = cli.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_threshold_complete_graph(tmp_path):
    """Test de K_10, β=0.2, δ=0.5 : ratio 3.6 surcritique"""
    out = tmp_path / "seuil.json"
    result = cli.invoke(app, ["threshold", "--graph", "complete:10", *RATES, "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert "ratio = 3.6 ; régime : supercritical" in result.output
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report['ratio_global'] == pytest.approx(3.6, abs=1e-9)
    assert report['regime'] == "supercritical"
    assert 'mixing_bound' in report


def test_threshold_from_config_file(tmp_path):
    """Test du fichier --config et de la priorité des options"""
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({
        'graph': "complete:10",
        'grid': {'beta': [0.05], 'delta': [0.5], 'gamma': [0.5]},
    }), encoding="utf-8")
    from_file = cli.invoke(app, ["threshold", "-c", str(cfg)])
    assert from_file.exit_code == 0, from_file.output
    assert "régime : subcritical" in from_file.output
    overridden = cli.invoke(app, ["threshold", "-c", str(cfg), "--beta", "0.2"])
    assert "ratio = 3.6 ; régime : supercritical" in overridden.output


@pytest.mark.parametrize("args", [
    ["threshold", *RATES],
    ["threshold", "--graph", "complete:4", "--edge-list", "absent.txt", *RATES],
    ["threshold", "--graph", "complete:4", "--delta", "0.5", "--gamma", "0.5"],
    ["threshold", "--graph", "complete:4", "--frobnicate", *RATES],
    ["threshold", "--edge-list", "absent.txt", *RATES],
])
def test_usage_errors_exit_2(args):
    """Test des erreurs d'usage : code 2"""
    assert cli.invoke(app, args).exit_code == 2


@pytest.mark.parametrize("args", [
    ["exact", "evolve", "--graph", "complete:11", *RATES],
    ["meanfield", "fixed-point", "--graph", "complete:4", "--beta", "0.05", "--delta", "0.5", "--gamma", "0.5"],
    ["threshold", "--graph", "complete:4", "--beta", "1.5", "--delta", "0.5", "--gamma", "0.5"],
    ["graph", "info", "--graph", "er:0:0.5"],
])
def test_domain_errors_exit_1(args):
    """Test des erreurs de domaine : code 1 et message"""
    result = cli.invoke(app, args)
    assert result.exit_code == 1
    assert "Error" in result.output


def test_dispatch_exit_codes(capsys):
    """Test des codes retournés par dispatch"""
    assert dispatch(["--version"]) == 0
    assert dispatch(["threshold", "--graph", "complete:4", *RATES]) == 0
    assert dispatch(["threshold", *RATES]) == 2
    assert dispatch(["exact", "stationary", "--graph", "complete:11", *RATES]) == 1
    assert dispatch(["exact", "mixing-time", "--graph", "complete:11", *RATES]) == 1


def test_exact_mixing_time_matches_oracle(tmp_path):
    """Test de t_mix sur le chemin à 3 nœuds contre l'oracle dense"""
    out = tmp_path / "tmix.json"
    result = cli.invoke(app, ["exact", "mixing-time", "--graph", "path:3", "--beta", "0.05",
                              "--delta", "0.9", "--gamma", "0.5", "--eps", "0.25", "-o", str(out)])
    assert result.exit_code == 0, result.output
    params = EpidemicParams.build(beta=0.05, delta=0.9, gamma=0.5)
    expected = oracle_mixing_time(generate("path", 3), params, 0.25)
    assert int(re.search(r"t_mix = (\d+)", result.output).group(1)) == expected
    assert json.loads(out.read_text(encoding="utf-8"))['t_mix'] == expected


def test_exact_evolve_and_stationary(tmp_path):
    """Test des distributions écrites state_code,probability"""
    dist = tmp_path / "mu.csv"
    result = cli.invoke(app, ["exact", "evolve", "--graph", "path:3", *RATES, "--steps", "4", "-o", str(dist)])
    assert result.exit_code == 0, result.output
    lines = dist.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "state_code,probability"
    total = sum(float(line.split(",")[1]) for line in lines[1:])
    assert total == pytest.approx(1.0, abs=1e-12)

    pi = tmp_path / "pi.csv"
    result = cli.invoke(app, ["exact", "stationary", "--graph", "path:3", *RATES, "-o", str(pi)])
    assert result.exit_code == 0
    assert pi.read_text(encoding="utf-8").splitlines()[1:] == ["0,1.0"]


def test_exact_verify_domination(tmp_path):
    out = tmp_path / "dom.json"
    result = cli.invoke(app, ["exact", "verify-domination", "--graph", "star:4", *RATES,
                              "--steps", "10", "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert json.loads(out.read_text(encoding="utf-8"))['passed'] is True


def test_mc_run_is_reproducible(tmp_path):
    """Test de deux exécutions de même graine : fichiers identiques octet par octet"""
    args = ["mc", "run", "--graph", "er:100:0.05", "--graph-seed", "2", "--beta", "0.3",
            "--delta", "0.2", "--gamma", "0.1", "--horizon", "60", "--seed", "7", "--init", "fraction:0.1"]
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.invoke(app, [*args, "-o", str(first)]).exit_code == 0
    assert cli.invoke(app, [*args, "-o", str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text(encoding="utf-8").startswith("t,num_S,num_I,num_R\n")


def test_mc_ensemble(tmp_path):
    agg, reps = tmp_path / "agg.csv", tmp_path / "reps.csv"
    result = cli.invoke(app, ["mc", "ensemble", "--graph", "cycle:30", *RATES, "--runs", "5",
                              "--horizon", "20", "--jobs", "1", "--seed", "3",
                              "-o", str(agg), "--replicas-output", str(reps)])
    assert result.exit_code == 0, result.output
    assert len(agg.read_text(encoding="utf-8").splitlines()) == 22
    assert reps.read_text(encoding="utf-8").startswith("replica,t,num_S,num_I,num_R\n")


def test_meanfield_commands(tmp_path):
    traj = tmp_path / "mf.csv"
    result = cli.invoke(app, ["meanfield", "run", "--graph", "complete:10", *RATES, "--steps", "30",
                              "-o", str(traj)])
    assert result.exit_code == 0, result.output
    assert len(traj.read_text(encoding="utf-8").splitlines()) == 32

    fp = tmp_path / "fp.json"
    result = cli.invoke(app, ["meanfield", "fixed-point", "--graph", "complete:10", *RATES, "--starts", "3", "--jobs", "1",
                              "-o", str(fp)])
    assert result.exit_code == 0, result.output
    payload = json.loads(fp.read_text(encoding="utf-8"))
    assert payload['outcome'] == "converged"
    assert payload['uniqueness']['agree'] is True


def test_graph_gen_and_info(tmp_path):
    """Test de la génération puis de la relecture d'une liste d'arêtes"""
    edges = tmp_path / "k4.txt"
    result = cli.invoke(app, ["graph", "gen", "complete:4", "-o", str(edges)])
    assert result.exit_code == 0
    assert edges.read_text(encoding="utf-8") == generate("complete", 4).to_edge_list()

    echoed = cli.invoke(app, ["graph", "gen", "path:3"])
    assert "0 1" in echoed.output and "1 2" in echoed.output

    info = tmp_path / "info.json"
    result = cli.invoke(app, ["graph", "info", "--edge-list", str(edges), "-o", str(info)])
    assert result.exit_code == 0, result.output
    summary = json.loads(info.read_text(encoding="utf-8"))
    assert summary['n'] == 4
    assert summary['edges'] == 6
    assert summary['lambda_max'] == pytest.approx(3.0, abs=1e-9)


def test_experiment_command(tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps({
        'name': "cli_sweep",
        'kind': "threshold_sweep",
        'graph': "complete:8",
        'grid': {'beta': [0.05, 0.3], 'delta': [0.5], 'gamma': [0.5]},
        'layers': ["meanfield"],
        'plots': False,
    }), encoding="utf-8")
    result = cli.invoke(app, ["experiment", str(spec), "-o", str(tmp_path / "out"), "--jobs", "1"])
    assert result.exit_code == 0, result.output
    rows = (tmp_path / "out" / "cli_sweep.csv").read_text(encoding="utf-8").splitlines()
    assert len(rows) == 3

    bad = tmp_path / "bad.json"
    bad.write_text("{\"name\": \"x\"}", encoding="utf-8")
    assert cli.invoke(app, ["experiment", str(bad)]).exit_code == 2
    assert cli.invoke(app, ["experiment", str(tmp_path / "absent.json")]).exit_code == 2


def test_config_command(tmp_path):
    """Test de l'affichage, de la sauvegarde et de la relecture des réglages"""
    from sirsnet.core.config import config

    saved = tmp_path / "reglages.json"
    result = cli.invoke(app, ["config", "--save", str(saved)])
    assert result.exit_code == 0, result.output
    assert "Plafond mode exact" in result.output
    data = json.loads(saved.read_text(encoding="utf-8"))
    assert data['exact_max_nodes'] == config.exact_max_nodes

    data['mixing_max_steps'] = 4321
    saved.write_text(json.dumps(data), encoding="utf-8")
    shown = cli.invoke(app, ["config", "--file", str(saved)])
    assert shown.exit_code == 0, shown.output
    assert "4321 pas" in shown.output
