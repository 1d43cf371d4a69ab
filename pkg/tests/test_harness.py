"""Suites, config validation, CSV determinism, and the CLI surface."""

import filecmp
import json

import numpy as np
import pytest

from ffenergy.cli import main
from ffenergy.errors import BadArgument, ConfigError
from ffenergy.field import build_field
from ffenergy.harness import (ExperimentConfig, VerificationRecord, emit_csv,
                              run_experiment, run_suite, verify_lemma_prodsum,
                              verify_lemma_rich, verify_union_energy)
from ffenergy.ratfunc import ratfunc
from ffenergy.sets import field_set, random_subset, subset_for_params

CFG = ExperimentConfig(trials=4, seed=99)


def test_config_rejects_unknown_key():
    with pytest.raises(ConfigError, match="bogus"):
        ExperimentConfig.from_dict({"bogus": 1})
    with pytest.raises(ConfigError, match="trials"):
        ExperimentConfig.from_dict({"trials": "many"})
    with pytest.raises(ConfigError, match="sets"):
        ExperimentConfig.from_dict({"sets": [1, 2]})
    cfg = ExperimentConfig.from_dict({"suite": "ratfunc", "seed": 5})
    assert cfg.suite == "ratfunc" and cfg.seed == 5


def test_config_from_json(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"suite": "ratfunc", "trials": 3,
                                "output": str(tmp_path / "out.csv")}))
    cfg = ExperimentConfig.from_json(str(path))
    records, failed = run_experiment(cfg)
    assert failed == 0 and records
    assert (tmp_path / "out.csv").exists()
    bad = tmp_path / "bad.json"
    bad.write_text("[1,2]")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json(str(bad))


def test_run_suite_unknown_name():
    with pytest.raises(ConfigError, match="nosuch"):
        run_suite("nosuch", CFG)


@pytest.mark.parametrize("name", ["field-axioms", "characters",
                                  "energy-oracle", "ratfunc", "extraction",
                                  "partition", "charsum-bounds", "lemmas",
                                  "constructions"])
def test_suites_pass(name):
    records = run_suite(name, CFG)
    assert records
    assert all(r.passed for r in records), \
        [r.instance for r in records if not r.passed]


def test_emit_csv_shape(tmp_path):
    path = str(tmp_path / "x.csv")
    emit_csv([], path)
    assert open(path).read() == "suite,instance,lhs,rhs,ratio,pass,runtime_ms\n"
    rec = VerificationRecord("s", "i", 1.0, 2.0, 0.5, True, 3.25)
    emit_csv([rec], path)
    lines = open(path).read().splitlines()
    assert len(lines) == 2
    assert lines[1] == "s,i,1,2,0.5,true,0"
    emit_csv([rec], path, timing=True)
    assert open(path).read().splitlines()[1] == "s,i,1,2,0.5,true,3.25"


def test_csv_rerun_byte_identical(tmp_path):
    cfg = ExperimentConfig(suite="energy-oracle", trials=4, seed=7,
                           output=str(tmp_path / "a.csv"))
    run_experiment(cfg)
    cfg2 = ExperimentConfig(suite="energy-oracle", trials=4, seed=7,
                            output=str(tmp_path / "b.csv"))
    run_experiment(cfg2)
    assert filecmp.cmp(str(tmp_path / "a.csv"), str(tmp_path / "b.csv"),
                       shallow=False)


def test_verify_lemma_prodsum_exact():
    ctx = build_field(5)
    full = field_set(ctx)
    fsq = ratfunc(ctx, [0, 0, 1])
    rec = verify_lemma_prodsum(ctx, full, full, full, full, fsq)
    assert rec.lhs == 0.0  # J = 125 = WXYZ/q exactly
    empty = subset_for_params(ctx.params, [])
    rec = verify_lemma_prodsum(ctx, full, full, empty, full, fsq)
    assert "J=0" in rec.instance


def test_verify_lemma_rich_edges(ctx101):
    f = ratfunc(ctx101, [1], [0, 1])
    A = random_subset(ctx101, 30, 1)
    S = A
    U = subset_for_params(ctx101.params, [])
    rec = verify_lemma_rich(ctx101, A, S, U, 1, f, tau=1e9)
    assert rec.lhs == 0  # tau beyond U^2 leaves nothing rich
    with pytest.raises(BadArgument):
        verify_lemma_rich(ctx101, A, S, A, 10 ** 6, f, tau=1e9)


def test_verify_union_energy_cases(ctx101):
    single = [random_subset(ctx101, 25, 3)]
    rec = verify_union_energy(ctx101, single)
    assert rec.passed
    assert rec.lhs == pytest.approx(rec.rhs, rel=1e-12)  # n = 1 is equality
    a = subset_for_params(ctx101.params, [1])
    b = subset_for_params(ctx101.params, [2])
    rec = verify_union_energy(ctx101, [a, b])
    assert rec.passed
    with pytest.raises(BadArgument):
        verify_union_energy(ctx101, [a, a])


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["field", "--p", "7"]) == 0
    assert main(["energy", "--p", "17", "--set", "interval:0,4"]) == 0
    out = capsys.readouterr().out
    assert "E(U)   = 44" in out
    assert main(["verify", "--suite", "nosuch"]) == 2
    assert main(["verify", "--suite", "ratfunc", "--trials", "4",
                 "--out", str(tmp_path / "r.csv")]) == 0
    assert (tmp_path / "r.csv").exists()
    assert main(["energy", "--p", "17", "--set", "bogus:1"]) == 2
    assert main(["decompose", "--p", "101", "--set", "rand:30,5",
                 "--fn", "1/0,1"]) == 0
    assert main(["charsum", "--p", "101", "--kind", "S", "--sets",
                 "rand:10,1", "rand:10,2", "rand:10,3"]) == 0


def test_cli_experiment(tmp_path, capsys):
    cfg = {"suite": "ratfunc", "trials": 3,
           "output": str(tmp_path / "e.csv")}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert main(["experiment", "--config", str(path)]) == 0
    assert (tmp_path / "e.csv").exists()
    assert main(["experiment", "--config", str(tmp_path / "missing.json")]) == 2


def test_failed_record_exit_code(monkeypatch, tmp_path):
    """A failing hard record must drive a nonzero CLI exit."""
    import ffenergy.cli as cli_mod

    def fake_run(name, cfg=None):
        return [VerificationRecord("s", "i", 1.0, 0.0, np.inf, False, 0.0)]

    monkeypatch.setattr(cli_mod, "run_suite", fake_run)
    assert cli_mod.main(["verify", "--suite", "anything"]) == 1
