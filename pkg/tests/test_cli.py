import json

import pytest

from wgc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    lines = text.strip().splitlines()
    head = lines[0].split(",")
    return [dict(zip(head, line.split(","))) for line in lines[1:]]


# -------------------------------------------------------------------- enum

@pytest.mark.parametrize("category, k, rows", [("nc2", 6, 5), ("p", 4, 15), ("nc2", 0, 1),
                                               ("peven", 6, 31), ("p2", 6, 15)])
def test_enum_row_counts(capsys, category, k, rows):
    code, out, _ = run(capsys, "enum", category, "-k", str(k), "--format", "csv")
    assert code == 0
    assert len(csv_rows(out)) == rows


def test_enum_pretty_header(capsys):
    code, out, _ = run(capsys, "enum", "nc2", "-k", "6")
    assert code == 0
    assert out.splitlines()[0].startswith("5 partitions")
    assert "16|25|34" in out


def test_enum_empty_partition(capsys):
    _, out, _ = run(capsys, "enum", "nc2", "-k", "0", "--format", "json")
    data = json.loads(out)
    assert len(data["rows"]) == 1


def test_enum_colored_word(capsys):
    _, out, _ = run(capsys, "enum", "u+", "--word", "ooxx", "--format", "csv")
    assert len(csv_rows(out)) == 1


# --------------------------------------------------------------- integrate

def test_integrate_orthogonal_group(capsys):
    code, out, _ = run(capsys, "integrate", "o", "-N", "5", "--word", "oooo",
                       "--i", "1111", "--j", "1111")
    assert code == 0
    assert out.split()[0] == "3/35"


def test_integrate_free_sphere(capsys):
    _, out, _ = run(capsys, "integrate", "o+", "-N", "4", "--sphere", "--word", "oooo",
                    "--i", "1111")
    assert out.split()[0] == "1/10"


def test_integrate_character(capsys):
    _, out, _ = run(capsys, "integrate", "o", "-N", "3", "--char", "-s", "3", "--word", "oo")
    assert out.split()[0] == "1"


def test_integrate_json_schema(capsys):
    _, out, _ = run(capsys, "integrate", "o", "-N", "5", "--word", "oooo", "--i", "1111",
                    "--j", "1111", "--format", "json")
    data = json.loads(out)
    assert data["category"] == "p2" and data["N"] == 5 and data["word"] == "oooo"
    assert data["value"] == "3/35"
    assert data["matrix_index"] == ["12|34", "13|24", "14|23"]


def test_float_adds_but_never_replaces(capsys):
    _, out, _ = run(capsys, "integrate", "o", "-N", "5", "--word", "oooo", "--i", "1111",
                    "--j", "1111", "--format", "json", "--float")
    data = json.loads(out)
    assert data["value"] == "3/35"
    assert abs(float(data["float"]) - 3 / 35) < 1e-12


def test_float_column_in_csv(capsys):
    _, out, _ = run(capsys, "sweep", "sphere", "o", "--N", "3..4", "--k", "4", "--format", "csv",
                    "--float")
    rows = csv_rows(out)
    assert rows[0]["value"] == "1/5"
    assert abs(float(rows[0]["value_float"]) - 0.2) < 1e-12


# -------------------------------------------------------------- gram / W

def test_gram_and_weingarten_dump(capsys):
    _, out, _ = run(capsys, "gram", "nc2", "-N", "2", "-k", "4", "--format", "csv")
    assert [r["12|34"] for r in csv_rows(out)] == ["4", "2"]
    _, out, _ = run(capsys, "weingarten", "nc2", "-N", "2", "-k", "4", "--format", "csv")
    assert [r["12|34"] for r in csv_rows(out)] == ["1/3", "-1/6"]


# ------------------------------------------------------------------- laws

def test_law_table(capsys):
    _, out, _ = run(capsys, "law", "semicircle:t=1", "-k", "6", "--format", "csv")
    assert [r["moment"] for r in csv_rows(out)] == ["1", "0", "1", "0", "2", "0", "5"]


def test_law_cumulants(capsys):
    _, out, _ = run(capsys, "law", "poisson:t=2", "-k", "4", "--cumulants", "classical",
                    "--format", "csv")
    assert [r["classical_cumulant"] for r in csv_rows(out)][1:] == ["2"] * 4


def test_bp(capsys):
    code, out, _ = run(capsys, "bp", "gaussian:t=1", "semicircle:t=1", "-k", "6",
                       "--format", "csv")
    assert code == 0
    assert all(r["equal"] == "True" for r in csv_rows(out))
    _, out, _ = run(capsys, "bp", "gaussian:t=1", "free-poisson:t=1", "-k", "3",
                    "--format", "csv")
    assert [r["equal"] for r in csv_rows(out)] == ["False", "True", "False"]


# ----------------------------------------------------------------- sweeps

def test_sweep_char_row_order_and_limits(capsys):
    _, out, _ = run(capsys, "sweep", "char", "o+", "--t", "1", "--k", "2..8", "--N", "4..8",
                    "--format", "csv")
    rows = csv_rows(out)
    assert [(int(r["N"]), int(r["k"])) for r in rows] == \
        [(N, k) for N in range(4, 9) for k in range(2, 9)]
    last = {int(r["k"]): r["value"] for r in rows if r["N"] == "8"}
    assert [last[k] for k in (2, 4, 6, 8)] == ["1", "2", "5", "14"]
    assert all(r["value"] == r["limit"] for r in rows)


def test_sweep_sphere_column(capsys):
    _, out, _ = run(capsys, "sweep", "sphere", "o", "--N", "3..6", "--k", "4", "--format", "csv")
    assert [r["value"] for r in csv_rows(out)] == ["1/5", "1/8", "3/35", "1/16"]


def test_sweep_hypergeom(capsys):
    _, out, _ = run(capsys, "sweep", "hypergeom", "--n", "2..4", "--k", "1..5", "--format", "csv")
    rows = csv_rows(out)
    assert len(rows) == 15
    assert all(r["lhs"] == r["rhs"] and r["equal"] == "True" for r in rows)


# ----------------------------------------------------------------- verify

def test_verify_core(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "core", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert all("seconds" in c for c in data["checks"])


def test_verify_laws(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "laws", "--max-k", "8")
    assert code == 0


def test_verify_hyperspherical_reports_offset(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hyperspherical", "--N", "3..4",
                       "--l", "1..2", "--format", "json")
    data = json.loads(out)
    assert code == 4 and not data["passed"]
    assert data["checks"][0]["details"]


# ------------------------------------------------------------- exit codes

def test_usage_errors(capsys):
    assert main(["enum", "q2", "-k", "4"]) == 1
    assert main(["integrate", "o"]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["sweep", "char", "o", "--N", "4..x", "--k", "2"]) == 1
    capsys.readouterr()


def test_bound_exceeded(capsys):
    assert main(["enum", "p2", "-k", "16"]) == 2
    assert main(["enum", "nc2", "-k", "6", "--max-points", "4"]) == 2
    assert "bound" in capsys.readouterr().err


def test_bound_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("WGC_MAX_POINTS", "4")
    assert main(["enum", "nc2", "-k", "6"]) == 2
    capsys.readouterr()


def test_singular_gram(capsys):
    code, _, err = run(capsys, "integrate", "o", "-N", "1", "-k", "4", "--i", "1111")
    assert code == 3
    assert "12|34" in err and "13|24" in err


def test_pseudo_mode_avoids_singularity(capsys):
    code, out, _ = run(capsys, "integrate", "o", "-N", "1", "-k", "4", "--i", "1111",
                       "--mode", "pseudo")
    assert code == 0 and out.split()[0] == "1"


# ----------------------------------------------------- config, out, determinism

def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep defaults\nN = 3..4\nk = 4\nformat = csv\n")
    _, out, _ = run(capsys, "sweep", "sphere", "o", "--config", str(cfg))
    assert [r["value"] for r in csv_rows(out)] == ["1/5", "1/8"]
    _, out, _ = run(capsys, "sweep", "sphere", "o", "--config", str(cfg), "--N", "5")
    assert [r["value"] for r in csv_rows(out)] == ["3/35"]


def test_out_file(capsys, tmp_path):
    target = tmp_path / "table.csv"
    assert main(["enum", "nc2", "-k", "6", "--format", "csv", "--out", str(target)]) == 0
    assert len(csv_rows(target.read_text(encoding="utf-8"))) == 5
    capsys.readouterr()


@pytest.mark.parametrize("argv", [
    ["enum", "peven", "-k", "6", "--format", "json"],
    ["sweep", "hypergeom", "--n", "2..3", "--k", "1..3", "--format", "csv", "--float"],
    ["weingarten", "p2", "-N", "4", "-k", "4"],
])
def test_byte_identical_reruns(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
