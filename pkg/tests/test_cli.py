import json
import pytest
from freeboundary.cli.main import main, EXIT_PASS, EXIT_CONFIG, EXIT_CHECK, EXIT_CONVERGENCE
from freeboundary.cli.commands import COMMANDS
from freeboundary.cli.config import COMMAND_DEFAULTS, resolve_config, RunConfig
from freeboundary.symbol import SweepGrid
from freeboundary.cli.artifacts import plain
from freeboundary.core import ConfigError, TruncationNotConverged, PRESETS


def run(tmp_path, *argv):
    return main(list(argv) + ["--out", str(tmp_path)])


def read_csv(path):
    lines = path.read_text().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    rows = [l.split(",") for l in lines if not l.startswith("#")]
    return (comments, rows[0], rows[1:])


def test_k_profile(tmp_path):
    code = run(tmp_path, "k-profile", "--rays", "3", "--per-decade", "2", "--param", "mu1=0.5", "--param", "mu2=0.5")
    assert code == EXIT_PASS
    (comments, header, rows) = read_csv(tmp_path/"k-profile.csv")
    assert comments[0] == "# schema_version=1"
    assert comments[1].startswith("# config=")
    assert header == ["angle", "abs_z", "k_re", "k_im", "zk_re", "zk_im"]
    assert float(rows[0][1]) == pytest.approx(1e-6)
    assert float(rows[0][2]) == pytest.approx(0.5, rel=1e-4)
    doc = json.loads((tmp_path/"k-profile.json").read_text())
    assert doc["schema_version"] == 1
    assert doc["pass"] is True
    assert doc["config"]["params"]["mu1"] == 0.5


def test_k_profile_needs_a_ray(tmp_path):
    assert run(tmp_path, "k-profile", "--rays", "0") == EXIT_CONFIG


def test_bad_parameters(tmp_path):
    assert run(tmp_path, "k-profile", "--param", "sigma=0") == EXIT_CONFIG
    assert run(tmp_path, "k-profile", "--preset", "nonsense") == EXIT_CONFIG
    assert run(tmp_path, "k-profile", "--threads", "0") == EXIT_CONFIG


def test_outputs_are_deterministic(tmp_path):
    (a, b) = (tmp_path/"a", tmp_path/"b")
    for out in (a, b):
        assert run(out, "k-profile", "--rays", "2", "--per-decade", "1", "--seed", "7") == EXIT_PASS
    for name in ("k-profile.csv", "k-profile.json"):
        assert (a/name).read_bytes() == (b/name).read_bytes()


def test_dispersion(tmp_path):
    assert run(tmp_path, "dispersion", "--tau-grid", "0.25,0.5,1.5") == EXIT_PASS
    (_, header, rows) = read_csv(tmp_path/"dispersion.csv")
    assert header == ["tau", "lambda_star", "zero_count", "inviscid_rate"]
    assert [r[2] for r in rows] == ["1", "1", "0"]
    assert rows[2][1] == "" and rows[2][3] == ""


def test_dispersion_empty_grid(tmp_path):
    assert run(tmp_path, "dispersion", "--tau-grid", "") == EXIT_CONFIG


def test_verify_bounds_stable(tmp_path):
    path = tmp_path/"bounds.json"
    path.write_text(json.dumps({"preset": "stable", "options": {"tau_min": 1e-2, "tau_max": 1e2, "lambda_max": 1e2}}))
    assert run(tmp_path, "verify-bounds", "--config", str(path), "--per-decade", "1", "--points") == EXIT_PASS
    (_, header, rows) = read_csv(tmp_path/"verify-bounds.csv")
    assert header[6:] == ["k_re", "k_im", "s_re", "s_im", "ratio"]
    assert all(float(r[-1]) > 0 for r in rows)
    doc = json.loads((tmp_path/"verify-bounds.json").read_text())
    assert doc["upper_violations"] == 0
    assert doc["lambda0"] == 1e-3


def test_mode_response(tmp_path):
    assert run(tmp_path, "mode-response", "--tau", "0.5") == EXIT_PASS
    doc = json.loads((tmp_path/"mode-response.json").read_text())
    assert doc["checks"] == {"initial": True, "rate": True}


def test_mode_response_stable(tmp_path):
    assert run(tmp_path, "mode-response", "--preset", "stable", "--tau", "1.0") == EXIT_PASS
    doc = json.loads((tmp_path/"mode-response.json").read_text())
    assert doc["checks"] == {"initial": True, "bounded": True, "decays": True}


def test_kernel_check(tmp_path):
    assert run(tmp_path, "kernel-check", "--kernels", "F2,G5,Hb", "--no-jvp") == EXIT_PASS
    (_, header, rows) = read_csv(tmp_path/"kernel-check.csv")
    assert [r[0] for r in rows] == ["F2", "G5", "Hb"]
    assert all(r[header.index("pass")] == "true" for r in rows)


def test_kernel_check_unknown_kernel(tmp_path):
    assert run(tmp_path, "kernel-check", "--kernels", "F9") == EXIT_CONFIG


@pytest.mark.slow
def test_norms(tmp_path):
    assert run(tmp_path, "norms", "--m", "128") == EXIT_PASS
    doc = json.loads((tmp_path/"norms.json").read_text())
    assert set(doc) >= {"seminorms", "riesz", "hardy", "extension", "partition"}
    defects = doc["seminorms"]["homogeneity"]
    assert all(0 < d <= 1e-3 for d in defects.values())


def test_non_convergence_exit_code(tmp_path, monkeypatch):
    def failing(config):
        raise TruncationNotConverged("poisson_seminorm: widening the t-range changed the value")
    monkeypatch.setitem(COMMANDS, "norms", failing)
    assert run(tmp_path, "norms") == EXIT_CONVERGENCE


def test_failed_check_exit_code(tmp_path, monkeypatch):
    monkeypatch.setitem(COMMANDS, "norms", lambda config: False)
    assert run(tmp_path, "norms") == EXIT_CHECK


def test_verify_bounds_defaults_use_full_grid():
    defaults = COMMAND_DEFAULTS["verify-bounds"]
    grid = SweepGrid()
    for name in ("eta", "beta", "delta", "lambda_max", "tau_min", "tau_max", "per_decade", "n_rays", "n_zeta"):
        assert defaults[name] == getattr(grid, name)
    assert COMMAND_DEFAULTS["k-profile"]["zk_inf_tol"] == 1e-3


def test_config_precedence(tmp_path):
    path = tmp_path/"run.json"
    path.write_text(json.dumps({"preset": "stable", "seed": 3, "options": {"rays": 2, "per_decade": 4}}))
    config = resolve_config("k-profile", config_path=path, options={"rays": 5})
    assert config.params == PRESETS["stable"]
    assert config.seed == 3
    assert config.options["rays"] == 5
    assert config.options["per_decade"] == 4
    assert "out" not in config.to_dict()


def test_config_errors(tmp_path):
    path = tmp_path/"run.json"
    path.write_text(json.dumps({"flavour": 1}))
    with pytest.raises(ConfigError):
        resolve_config("k-profile", config_path=path)
    with pytest.raises(ConfigError):
        resolve_config("k-profile", options={"tau": 1.0})
    with pytest.raises(ConfigError):
        resolve_config("k-profile", config_path=tmp_path/"missing.json")
    with pytest.raises(ConfigError):
        resolve_config("plot")


def test_plain():
    import numpy as np
    assert plain({"a": np.float64(1.5), "b": np.array([1, 2]), "c": float("nan"), "d": np.bool_(True)}) == \
        {"a": 1.5, "b": [1, 2], "c": None, "d": True}
    assert plain(1 + 2j) == {"re": 1.0, "im": 2.0}
    assert RunConfig("norms").to_dict()["params"] == PRESETS["rt"].to_dict()
