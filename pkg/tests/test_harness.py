import csv
import io
import json
import math

import numpy as np
import pytest

from boxlab.errors import ConfigError
from boxlab.harness import (
    ExperimentConfig,
    ResultTable,
    audit_violations,
    box_threshold,
    ff_box_threshold_sweep,
    inequality_audit,
    parse_float_list,
    parse_int_list,
    run_experiment,
    scaling_fit,
    sharpness_sweep,
    trilinear_scaling,
)


def cfg(name, seed=7, **params):
    return ExperimentConfig(name, params, seed)


def test_config_requires_params_and_seed():
    with pytest.raises(ConfigError):
        cfg("box-sweep", p="7")
    with pytest.raises(ConfigError):
        ExperimentConfig("audit", {"p": "7", "d": "1", "trials": 1}, None)
    with pytest.raises(ConfigError):
        run_experiment(cfg("nonsense"))


def test_config_hash_stable_and_sensitive():
    a = cfg("audit", p="7", d="1", trials=3)
    assert a.hash() == cfg("audit", p="7", d="1", trials=3).hash()
    assert a.hash() != cfg("audit", seed=8, p="7", d="1", trials=3).hash()
    assert len(a.hash()) == 16


def test_result_table_formats(tmp_path):
    t = ResultTable(["name", "value", "flag"])
    t.add('say "hi", twice', 0.5, True)
    t.footer = {"seed": "1"}
    text = t.to_csv()
    assert text.endswith("# seed: 1\r\n")
    rows = list(csv.reader(io.StringIO(t.body_csv())))
    assert rows == [["name", "value", "flag"], ['say "hi", twice', "0.5", "true"]]
    mirror = json.loads(t.to_json())
    assert mirror["columns"] == t.columns and mirror["rows"][0][0] == 'say "hi", twice'
    with pytest.raises(ValueError):
        t.add(1, 2)
    t.write(tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_bytes() == text.encode()


def test_parsers():
    assert parse_int_list("328:332") == [328, 329, 330, 331, 332]
    assert parse_int_list("2,4, 8") == [2, 4, 8]
    assert parse_float_list("2^-4,0.5") == [1 / 16, 0.5]


def test_scaling_fit_examples():
    eps = [2.0**-k for k in range(4, 10)]
    assert abs(scaling_fit([(e, e) for e in eps]) - 1.0) < 1e-9
    assert abs(scaling_fit([(e, e * e) for e in eps]) - 2.0) < 1e-9
    assert abs(scaling_fit([(e, 0.3) for e in eps])) < 1e-9
    with pytest.raises(ValueError):
        scaling_fit([(0.1, 0.0), (0.2, 1.0), (0.3, 1.0)])
    with pytest.raises(ValueError):
        scaling_fit([(0.1, 1.0), (0.2, 1.0)])


def test_threshold_formula():
    assert math.ceil(box_threshold(331)) == 330
    assert box_threshold(331) <= 331
    assert abs(box_threshold(13) - 29.1) < 0.1
    # first non-vacuous prime
    from boxlab.ff import is_prime

    first = next(p for p in range(3, 1000, 2) if is_prime(p) and box_threshold(p) <= p)
    assert first == 331


def test_box_sweep_small_prime_is_flagged_vacuous():
    t = ff_box_threshold_sweep(cfg("box-sweep", p="13", sizes="10:13", samples=5))
    assert not any(t.column("nonvacuous")) and not any(t.column("asserted"))
    assert set(t.column("p_mod4")) == {1}


def test_box_sweep_exhaustive_p7():
    t = ff_box_threshold_sweep(cfg("box-sweep", p="7", sizes="all", samples=1, mode="exhaustive"))
    assert t.column("trials") == [math.comb(7, m) for m in range(8)]
    # 0 is never a box value for p = 3 mod 4, so no size gives the whole field
    assert set(t.column("full_count")) == {0}
    assert t.column("min_full_size") == [None] * 8
    nz = t.column("nonzero_fraction")
    assert nz[4:] == [1.0] * 4 and nz[3] < 1.0


def test_box_sweep_exhaustive_p5():
    t = ff_box_threshold_sweep(cfg("box-sweep", p="5", sizes="all", samples=1, mode="exhaustive"))
    assert t.column("full_fraction") == [0, 0, 0, 0, 1.0, 1.0]
    assert set(t.column("min_full_size")) == {4}


def test_box_sweep_exhaustive_cap():
    with pytest.raises(ConfigError):
        ff_box_threshold_sweep(cfg("box-sweep", p="17", sizes="all", samples=1, mode="exhaustive"))


def test_box_sweep_monotone_and_deterministic():
    c = cfg("box-sweep", p="7,11,13", sizes="2:13", samples=30)
    a, b = ff_box_threshold_sweep(c), ff_box_threshold_sweep(c)
    assert a.body_csv() == b.body_csv()
    for p in (7, 11, 13):
        f = [r[a.columns.index("full_fraction")] for r in a.rows if r[0] == p]
        g = [r[a.columns.index("nonzero_fraction")] for r in a.rows if r[0] == p]
        assert f == sorted(f) and g == sorted(g)


def test_sharpness_examples():
    t = sharpness_sweep(cfg("sharpness", s=0.4, q="2,4,8,16,32"))
    slope = t.column("slope")[0]
    assert abs(slope - (2 - 1 / 0.4)) <= 0.3
    t6 = sharpness_sweep(cfg("sharpness", s=0.6, q="2,4,8,16,32"))
    assert t6.column("slope")[0] >= -0.1
    with pytest.raises(ConfigError):
        sharpness_sweep(cfg("sharpness", s=0.4, q="8"))
    with pytest.raises(ConfigError):
        sharpness_sweep(cfg("sharpness", s=0.4, q="8,4"))


def test_trilinear_table():
    t = trilinear_scaling(cfg("trilinear", s=0.84, n=9, t=1.0, eps="2^-3,2^-4,2^-5,2^-6"))
    assert t.column("eps") == [2.0**-k for k in range(3, 7)]
    m = t.column("mass")
    assert m == sorted(m, reverse=True)


def test_audit_empty_and_small():
    t = inequality_audit(cfg("audit", p="7", d="1", trials=0))
    assert t.rows == [] and t.footer
    t = inequality_audit(cfg("audit", p="7,11", d="1,2", trials=10, nu2_trials=10))
    assert audit_violations(t) == 0
    ws = [r for r in t.rows if r[0] == "weil_salie"]
    assert all(r[5] <= 1.0 for r in ws)


def test_audit_records_unasserted_failures_for_p13():
    t = inequality_audit(cfg("audit", p="13", d="2", trials=5, nu2_trials=5))
    row = {r[0]: r for r in t.rows}
    assert row["weil_salie_t0"][4] == 1 and not row["weil_salie_t0"][6]
    assert audit_violations(t) == 0


@pytest.mark.parametrize("name,params", [
    ("box-sweep", {"p": "7,11", "sizes": "3:6", "samples": 10}),
    ("box-sweep", {"p": "5", "sizes": "all", "samples": 1, "mode": "exhaustive"}),
    ("sharpness", {"s": 0.4, "q": "2,4,8"}),
    ("trilinear", {"s": 0.84, "n": 8, "t": 1.0, "eps": "2^-3,2^-4,2^-5"}),
    ("audit", {"p": "7", "d": "1,2", "trials": 5, "nu2_trials": 5}),
])
def test_every_experiment_is_deterministic(name, params, tmp_path):
    c = ExperimentConfig(name, params, seed=99, out=str(tmp_path / "a.csv"))
    first = run_experiment(c).body_csv()
    second = run_experiment(ExperimentConfig(name, params, seed=99)).body_csv()
    assert first == second
    assert (tmp_path / "a.csv").read_bytes().decode().startswith(first)

