from fractions import Fraction

import pytest

from tinpower.cli import main
from tinpower.topology import extremal_grid, extremal_small, format_topology, parse_topology


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def topology_file(tmp_path, topology, name="net.txt"):
    path = tmp_path / name
    path.write_text(format_topology(topology))
    return str(path)


def test_gen_small_round_trips(capsys):
    code, out, err = run(capsys, "gen", "--small", "5")
    assert code == 0 and err == ""
    assert parse_topology(out) == extremal_small(5)


def test_gen_grid_to_file(tmp_path, capsys):
    target = tmp_path / "g.txt"
    code, out, _ = run(capsys, "gen", "--grid", "3", "-o", str(target))
    assert code == 0 and out == ""
    assert parse_topology(target.read_text()) == extremal_grid(3)


def test_gen_rejects_unknown_size(capsys):
    code, _, err = run(capsys, "gen", "--small", "9")
    assert code == 1
    assert err.startswith("error: --small")


def test_eval_prints_per_user_lines(tmp_path, capsys):
    path = topology_file(tmp_path, extremal_small(5))
    code, out, _ = run(capsys, "eval", "-t", path, "-r", "0 0 -1 -2 -2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "user 1: 2"
    assert lines[2] == "user 3: 1"
    assert lines[-1] == "sum: 9"


def test_opc_reports_witness(tmp_path, capsys):
    path = topology_file(tmp_path, extremal_small(3))
    code, out, _ = run(capsys, "opc", "-t", path)
    assert code == 0
    lines = dict(line.split(": ", 1) for line in out.splitlines())
    assert lines["value"] == "3"
    assert lines["allocation"] == "0 0 -1"
    assert lines["active_set"] == "1 2 3"


def test_opc_all_optima_lists_supports(tmp_path, capsys):
    path = topology_file(tmp_path, extremal_small(4))
    code, out, _ = run(capsys, "opc", "-t", path, "--all-optima")
    assert code == 0
    assert "optimal_sets:" in out
    assert "  1 2 3 4" in out.splitlines()


def test_bpc_value_and_sets(tmp_path, capsys):
    path = topology_file(tmp_path, extremal_small(6))
    code, out, _ = run(capsys, "bpc", "-t", path)
    assert code == 0
    assert out.splitlines()[0] == "value: 16"


def test_bpc_rate_prints_float(tmp_path, capsys):
    path = topology_file(tmp_path, extremal_small(3))
    code, out, _ = run(capsys, "bpc", "-t", path, "--rate", "30")
    assert code == 0
    value = float(out.splitlines()[0].split(": ")[1])
    assert value > 0


def test_bounds_small_k_certificate_line(tmp_path, capsys):
    path = topology_file(tmp_path, extremal_small(5))
    code, out, _ = run(capsys, "bounds", "-t", path)
    assert code == 0
    assert out.splitlines()[-1] == "certificate: 9/4"
    assert "aggregate: 36" in out


def test_bounds_square_chain(tmp_path, capsys):
    path = topology_file(tmp_path, extremal_grid(2))
    code, out, _ = run(capsys, "bounds", "-t", path, "--square", "2")
    assert code == 0
    lines = out.splitlines()
    assert "chain: 8 <= 9 <= 10" in lines
    assert lines[-1] == "certificate: true"


def test_ratesim_stdout_csv(capsys):
    code, out, _ = run(
        capsys, "ratesim", "--grid", "2", "--pmin", "0", "--pmax", "20",
        "--step", "10",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p_db,r_sigma_proxy,r_sigma_bpc,gain"
    assert len(lines) == 4
    assert lines[1].startswith("0,")


def test_ratesim_writes_csv_and_figure(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out, _ = run(
        capsys, "ratesim", "--grid", "2", "--pmin", "0", "--pmax", "40",
        "--step", "20", "-o", str(target),
    )
    assert code == 0
    assert target.exists()
    figure = tmp_path / "out.png"
    assert figure.exists()
    assert f"wrote {target}" in out
    assert f"wrote {figure}" in out


def test_ratesim_rejects_bad_range(capsys):
    code, _, err = run(
        capsys, "ratesim", "--grid", "2", "--pmin", "10", "--pmax", "0",
        "--step", "5",
    )
    assert code == 1
    assert "smaller than" in err


def test_search_deterministic_output(capsys):
    argv = ["search", "-k", "2", "--budget", "60", "--seed", "9"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "best_ratio: 1" in out1
    assert "envelope_ok: true" in out1


def test_missing_topology_file(capsys):
    code, _, err = run(capsys, "eval", "-t", "/nonexistent/net.txt", "-r", "0")
    assert code == 1
    assert err.startswith("error: -t")


def test_malformed_allocation(tmp_path, capsys):
    path = topology_file(tmp_path, extremal_small(3))
    code, _, err = run(capsys, "eval", "-t", path, "-r", "0 0 huh")
    assert code == 1
    assert "entry 3" in err


def test_unknown_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
