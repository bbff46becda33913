import json
import subprocess
import sys
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from bsdlab import __version__
from bsdlab.cli import main
from bsdlab.experiments import (
    ExperimentSpec,
    convergence_study,
    default_spec,
    list_experiments,
    run_all,
    run_experiment,
)
from bsdlab.report import CSV_HEADER, Report, dumps_json, read_report, write_report

LABEL_PREFIXES = ("Thm", "Lemma", "Prop", "Remark")


def test_registry_contents():
    listing = list_experiments()
    names = [n for n, _, _ in listing]
    labels = dict((n, s) for n, s, _ in listing)
    assert len(names) >= 8
    assert labels["thm61_hua_eigen"] == "Thm 6.1"
    assert labels["prop83_disk"] == "Prop 8.3"
    assert all(s.startswith(LABEL_PREFIXES) for s in labels.values())
    assert names == [n for n, _, _ in list_experiments()]  # stable ordering
    for n in ("thm72_radial", "prop83_mc", "lemma84_tube", "fk_dual_cauchy", "remark51_hprime", "typeone_k1"):
        assert n in names


def test_run_examples():
    rep = run_experiment(default_spec("thm61_hua_eigen", s=0.7, nu=4.0))
    assert rep.passed and rep.rel_err <= 1e-5
    assert rep.version == __version__ and rep.statement == "Thm 6.1"
    rep = run_experiment(default_spec("prop83_disk", nu=6.0, delta=1))
    assert rep.passed and rep.abs_err <= 1e-8
    assert rep.s == pytest.approx((1 + 1 - 6) / 1)


def test_unregistered_name():
    with pytest.raises(KeyError, match="unregistered experiment"):
        run_experiment(ExperimentSpec("thm99"))
    with pytest.raises(KeyError, match="unregistered experiment"):
        default_spec("thm99")


def test_invalid_regime_quotes_precondition():
    with pytest.raises(ValueError, match=r"sigma = n/r \+ delta - nu"):
        run_experiment(default_spec("prop83_disk", s=0.5))
    with pytest.raises(ValueError, match="tube"):
        run_experiment(default_spec("thm61_hua_eigen", b=1))


@pytest.mark.parametrize("field,value", [("step", 1.0), ("order", 3), ("samples", 1), ("nodes", 2),
                                         ("tol", 0.0), ("seed", -1), ("seed", 2**64), ("delta", -1)])
def test_spec_ranges(field, value):
    with pytest.raises(ValueError):
        replace(default_spec("thm61_hua_eigen"), **{field: value})


def test_failing_tolerance_is_reported_not_raised():
    rep = run_experiment(default_spec("thm61_hua_eigen", tol=1e-14))
    assert not rep.passed and rep.rel_err > 1e-14
    assert len(rep.details) == 5


def test_fd_sweep_slope():
    res = convergence_study(default_spec("thm61_hua_eigen"), "step", [1e-2, 5e-3, 2.5e-3])
    assert abs(res.slope - 4) <= 0.5
    res = convergence_study(default_spec("thm61_hua_eigen", order=2), "step", [1e-2, 5e-3, 2.5e-3])
    assert abs(res.slope - 2) <= 0.5


def test_mc_sweep_slope():
    res = convergence_study(default_spec("prop83_mc"), "samples", [1e3, 1e4, 1e5])
    assert abs(res.slope + 0.5) <= 0.15
    assert [r.config["samples"] for r in res.reports] == [1000, 10000, 100000]


def test_single_point_sweep():
    res = convergence_study(default_spec("thm61_hua_eigen"), "step", [1e-3])
    assert len(res.reports) == 1 and res.slope is None


def test_unsupported_sweep():
    with pytest.raises(ValueError, match="unsupported sweep"):
        convergence_study(default_spec("prop83_disk"), "samples", [10, 100])


def test_reports_byte_identical(tmp_path):
    spec = default_spec("prop83_mc", samples=20_000)
    for fmt in ("json", "csv"):
        a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        write_report(run_experiment(spec), a, fmt)
        write_report(run_experiment(spec), b, fmt)
        assert a.read_bytes() == b.read_bytes()


def test_csv_header(tmp_path):
    path = tmp_path / "r.csv"
    write_report([run_experiment(default_spec("prop83_disk"))], path, "csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[0] == ("name,r,b,s_re,s_im,nu,delta,computed_re,computed_im,expected_re,expected_im,"
                        "abs_err,rel_err,stderr,pass,runtime_ms,seed")
    assert lines[1].split(",")[0] == "prop83_disk"


def test_json_round_trip(tmp_path):
    reports = [run_experiment(default_spec(n)) for n in ("prop83_disk", "kernel_covariance", "remark51_hprime")]
    path = tmp_path / "r.json"
    write_report(reports, path, "json")
    back = read_report(path)
    assert [r.to_dict() for r in back] == [r.to_dict() for r in reports]
    assert back[0].computed == reports[0].computed


def test_timing_only_when_requested(tmp_path):
    rep = run_experiment(default_spec("prop83_disk"))
    assert rep.runtime_ms is not None and rep.runtime_ms >= 0
    assert rep.to_dict()["runtime_ms"] is None
    assert rep.to_dict(timing=True)["runtime_ms"] == rep.runtime_ms


def test_bad_format(tmp_path):
    with pytest.raises(ValueError):
        write_report(run_experiment(default_spec("prop83_disk")), tmp_path / "x", "xml")
    with pytest.raises(OSError):
        write_report(run_experiment(default_spec("prop83_disk")), tmp_path / "missing" / "x.json", "json")


finite = st.floats(allow_nan=False, allow_infinity=False)


@given(finite, finite, finite, st.booleans(), st.integers(0, 2**64 - 1), st.one_of(st.none(), finite))
def test_report_serialisation_lossless(a, b, c, ok, seed, se):
    rep = Report("x", "Thm 0", 2, 1, complex(a, b), c, 1, complex(b, c), complex(c, a), "t", abs(a), abs(b),
                 se, ok, seed, "0", details=[{"v": complex(a, c), "k": [a, b]}])
    text = dumps_json(rep.to_dict())
    assert Report.from_dict(json.loads(text)).to_dict() == rep.to_dict()
    assert dumps_json(json.loads(text)) == text


def test_isolation_any_order():
    names = ["prop83_disk", "kernel_covariance", "lemma84_tube", "shilov_sampler"]
    fwd = {r.name: dumps_json(r.to_dict()) for r in run_all(names, workers=1)}
    rev = {r.name: dumps_json(r.to_dict()) for r in run_all(names[::-1], workers=3)}
    assert fwd == rev


# ---------------------------------------------------------------- CLI


def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "thm61_hua_eigen" in out and "Prop 8.3" in out


def test_cli_run_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["run", "prop83_disk", "--nu", "6", "--delta", "2", "--nodes", "256", "--out", str(out)])
    assert code == 0
    rep = read_report(out)[0]
    assert rep.delta == 2 and rep.config["nodes"] == 256 and rep.passed
    assert "PASS prop83_disk" in capsys.readouterr().err


def test_cli_run_complex_s_and_csv(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["run", "thm61_hua_eigen", "--s", "0.4,0.2", "--seed", "7", "--format", "csv", "--out", str(out)]) == 0
    row = out.read_text().splitlines()[1].split(",")
    assert float(row[3]) == 0.4 and float(row[4]) == 0.2 and row[-1] == "7"


def test_cli_exit_codes(capsys):
    assert main(["run", "thm61_hua_eigen", "--tol", "1e-15"]) == 1
    assert main(["run", "no_such"]) == 2
    assert "unregistered experiment" in capsys.readouterr().err
    assert main(["run", "prop83_disk", "--s", "0.3"]) == 2


def test_cli_sweep(capsys):
    code = main(["sweep", "thm61_hua_eigen", "--param", "step", "--values", "1e-2,5e-3,2.5e-3"])
    assert code == 0
    err = capsys.readouterr().err
    assert "fitted log-log slope: 4.0" in err
    main(["sweep", "thm61_hua_eigen", "--param", "step", "--values", "1e-3"])
    assert "slope: absent" in capsys.readouterr().err


def test_cli_all(tmp_path, monkeypatch):
    monkeypatch.setenv("BSDLAB_THREADS", "2")
    code = main(["all", "--out", str(tmp_path)])
    reports = {p.stem: read_report(p)[0] for p in tmp_path.glob("*.json")}
    assert set(reports) == {n for n, _, _ in list_experiments()}
    assert code == (0 if all(r.passed for r in reports.values()) else 1)
    assert (tmp_path / "summary.csv").read_text().startswith("name,r,b,")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bsdlab", "list"], capture_output=True, text=True, check=True)
    assert "lemma84_tube" in proc.stdout
