import json

import pytest

from halphen.cli import (
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_RESIDUAL,
    EXIT_USAGE,
    main,
    parse_complex,
    parse_state,
    parse_triple,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_parse_helpers():
    assert parse_complex("1.5,-2") == 1.5 - 2j
    assert parse_complex("3") == 3 + 0j
    assert parse_triple("1,2,3") == (1.0, 2.0, 3.0)
    assert parse_state("1,0,2,0,3,0") == (1 + 0j, 2 + 0j, 3 + 0j)
    for fn, bad in ((parse_complex, "a,b"), (parse_triple, "1,2"), (parse_state, "1,2,3")):
        with pytest.raises(Exception):
            fn(bad)


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "ramanujan", "--order", "not-a-number"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["no-such-group"])
    assert exc.value.code == EXIT_USAGE


def test_invalid_config_values_are_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "chazy", "--tol", "-1"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["verify", "chazy", "--order", "-5"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["verify", "gauss-manin", "--samples", "0"])
    assert exc.value.code == EXIT_USAGE


def test_verify_ramanujan(capsys):
    code, report = run_json(capsys, "verify", "ramanujan", "--order", "30")
    assert code == EXIT_OK
    assert report["ok"] is True
    assert report["results"]["series_residuals_zero"] is True
    assert report["results"]["conjugacy_exact_zero"] is True
    assert report["version"]
    assert report["config"]["order"] == 30


def test_verify_gauss_manin_seeded(capsys):
    code, report = run_json(capsys, "verify", "gauss-manin", "--samples", "100", "--seed", "7")
    assert code == EXIT_OK
    assert report["results"]["all_exact"] is True
    assert report["results"]["samples_checked"] == 100


def test_verify_darboux(capsys):
    code, report = run_json(capsys, "verify", "darboux", "--samples", "25")
    assert code == EXIT_OK
    assert report["results"]["all_exact"] is True


def test_verify_chazy(capsys):
    code, report = run_json(capsys, "verify", "chazy", "--order", "30")
    assert code == EXIT_OK
    assert report["results"]["series_residual_zero"] is True


def test_series_eisenstein_listing(capsys):
    code, report = run_json(capsys, "series", "eisenstein", "--k", "2", "--order", "3")
    assert code == EXIT_OK
    assert report["results"]["variable"] == "q"
    assert report["results"]["series"]["terms"] == [
        [0, "1/1"], [1, "-24/1"], [2, "-72/1"], [3, "-96/1"]
    ]


def test_series_theta_listing(capsys):
    code, report = run_json(capsys, "series", "theta", "--which", "2", "--order", "30")
    assert code == EXIT_OK
    assert report["results"]["series"]["terms"] == [[1, "2/1"], [9, "2/1"], [25, "2/1"]]


def test_dh_theta(capsys):
    code, report = run_json(capsys, "dh", "theta", "--tau", "0,1.5")
    assert code == EXIT_OK
    assert report["results"]["ode_residual"] < 1e-6


def test_dh_integrate_csv_default(capsys):
    code, out = run(capsys, "dh", "integrate", "--t0", "0,1.2", "--t1", "0,2", "--tol", "1e-10")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0].startswith("tau_re,tau_im,t1_re")
    assert len(lines) > 3


def test_dh_integrate_json_endpoint_matches_theta(capsys):
    code, report = run_json(
        capsys, "dh", "integrate", "--t0", "0,1.2", "--t1", "0,2",
        "--tol", "1e-10", "--format", "json",
    )
    assert code == EXIT_OK
    from halphen.dh import dh_theta_solution

    want = dh_theta_solution(2j)
    got = report["results"]["endpoint"]["state"]
    for pair, ref in zip(got, want):
        assert abs(complex(pair[0], pair[1]) - ref) < 1e-8


def test_dh_integrate_blowup_exit_code(capsys):
    code, _ = run(
        capsys, "dh", "integrate", "--t0", "0,1", "--t1", "2,1",
        "--initial", "1,0,1,0,1,0",
    )
    assert code == EXIT_NUMERIC


def test_bianchi_flow_csv(capsys):
    code, out = run(
        capsys, "bianchi", "flow", "--t0", "0.7", "--t1", "1.2",
        "--initial", "1.0,0.5,0.25", "--tol", "1e-9",
    )
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "t,omega1_re,omega1_im,omega2_re,omega2_im,omega3_re,omega3_im,err_est"


def test_bianchi_flat_family_csv_and_gate(capsys):
    code, out = run(capsys, "bianchi", "flat-family", "--q0", "0.3", "--steps", "5")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0].endswith("residual,F")
    assert len(lines) == 6
    assert "np." not in out  # cells must be plain float reprs


def test_bianchi_verify_constraint_flat_family(capsys):
    code, report = run_json(capsys, "bianchi", "verify-constraint", "--t", "1.0", "--q0", "0.3")
    assert code == EXIT_OK
    assert report["results"]["constraint_satisfied"] is True
    assert report["results"]["quadratic_scaling_ok"] is True
    assert report["results"]["theta_prefactors_ok"] is True


def test_bianchi_verify_constraint_generic_violation(capsys):
    code, report = run_json(
        capsys, "bianchi", "verify-constraint", "--t", "1.0", "--omega", "1,2,3"
    )
    assert code == EXIT_RESIDUAL
    assert report["results"]["constraint_satisfied"] is False


def test_frobenius_wdvv(capsys):
    code, report = run_json(capsys, "frobenius", "wdvv", "--tau", "0,1")
    assert code == EXIT_OK
    assert report["results"]["wdvv_residual"] < 1e-8


def test_frobenius_chazy(capsys):
    code, report = run_json(capsys, "frobenius", "chazy", "--order", "20")
    assert code == EXIT_OK
    assert report["command"] == "frobenius chazy"


def test_frobenius_cubic(capsys):
    code, report = run_json(capsys, "frobenius", "cubic", "--tau", "0,1.2")
    assert code == EXIT_OK
    assert report["results"]["root_set_distance"] < 1e-8


def test_reports_are_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    for out in (out1, out2):
        code = main(
            ["verify", "gauss-manin", "--samples", "20", "--seed", "7", "--out", str(out)]
        )
        capsys.readouterr()
        assert code == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()


def test_csv_rejected_for_non_tabular(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "darboux", "--format", "csv"])
    assert exc.value.code == EXIT_USAGE


def test_out_file_and_summary_line(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, stdout = run(
        capsys, "verify", "chazy", "--order", "10", "--out", str(out)
    )
    assert code == EXIT_OK
    assert "wrote" in stdout
    assert json.loads(out.read_text())["ok"] is True
