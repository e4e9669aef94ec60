import csv
import io

import pytest

from vizchain.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, emit, main
from vizchain.graph import read_colouring, write_colouring, write_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def field(out, name):
    for line in out.splitlines():
        parts = line.split()
        if parts and parts[0] == name:
            return parts[1]
    raise KeyError(name)


def test_color_complete_four(capsys, tmp_path):
    out_file = tmp_path / "c.txt"
    code, out, _ = run(capsys, "color", "--gen", "complete", "4", "--mode", "strict-local",
                       "--out", str(out_file))
    assert code == EXIT_OK
    assert int(field(out, "max_colour")) <= 4
    assert field(out, "violations") == "0"
    cols = read_colouring(out_file)
    assert len(cols) == 6 and set(cols.values()) <= {1, 2, 3, 4}


def test_color_path_uses_two_colours(capsys):
    code, out, _ = run(capsys, "color", "--gen", "path", "10")
    assert code == EXIT_OK and field(out, "colours_used") == "2"


@pytest.mark.parametrize("engine", ["fast", "reference"])
def test_color_is_deterministic(capsys, tmp_path, engine):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for dest in (a, b):
        code, _, _ = run(capsys, "color", "--gen", "gnp", "500", "0.05", "--seed", "7",
                         "--engine", engine, "--out", str(dest))
        assert code == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_engines_write_identical_colourings(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(capsys, "color", "--gen", "gnp", "120", "0.2", "--seed", "3", "--out", str(a))
    run(capsys, "color", "--gen", "gnp", "120", "0.2", "--seed", "3", "--engine", "reference", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_color_plain_and_csv(capsys):
    code, out, _ = run(capsys, "color", "--gen", "gnp", "60", "0.2", "--seed", "1", "--mode", "plain",
                       "--format", "csv")
    assert code == EXIT_OK
    row = next(csv.DictReader(io.StringIO(out)))
    assert int(row["max_colour"]) <= int(row["delta"]) + 1


def test_color_reports_potential(capsys):
    code, out, _ = run(capsys, "color", "--gen", "gnp", "60", "0.5", "--seed", "22")
    assert code == EXIT_OK
    assert int(field(out, "phi_max")) <= int(field(out, "phi_bound"))


def test_color_needs_one_input(capsys):
    code, _, err = run(capsys, "color")
    assert code == EXIT_USAGE and "exactly one" in err
    code, _, err = run(capsys, "color", "missing-file.txt")
    assert code == EXIT_USAGE


def test_verify_clean_and_dirty(capsys, tmp_path):
    gfile, cfile = tmp_path / "g.txt", tmp_path / "c.txt"
    write_graph(gfile, 3, [(0, 1), (1, 2)])
    write_colouring(cfile, [(0, 1), (1, 2)])
    code, _, _ = run(capsys, "verify", str(gfile), str(cfile), "--strict-local", "--complete")
    assert code == EXIT_OK
    write_colouring(cfile, [(0, 1), (1, 1)])
    code, out, _ = run(capsys, "verify", str(gfile), str(cfile))
    assert code == EXIT_VIOLATION
    assert "Properness edge=0-1 colour=1" in out
    write_colouring(cfile, [(0, 5)])
    code, out, _ = run(capsys, "verify", str(gfile), str(cfile), "--strict-local", "--complete")
    assert code == EXIT_VIOLATION
    assert "StrictLocality edge=0-1 colour=5" in out and "edge left uncoloured" in out
    write_colouring(cfile, [(9, 1)])
    code, _, err = run(capsys, "verify", str(gfile), str(cfile))
    assert code == EXIT_USAGE and "unknown edge" in err


def test_census_reports_within_bound(capsys):
    code, out, _ = run(capsys, "census", "--gen", "gnp", "40", "0.2", "--seed", "0", "--format", "csv")
    assert code == EXIT_OK
    row = next(csv.DictReader(io.StringIO(out)))
    assert int(row["max_membership"]) <= int(row["bound_4delta2"])
    assert float(row["max_density"]) <= float(row["half_delta"])


def test_bench_prints_one_row_per_size(capsys):
    code, out, _ = run(capsys, "bench", "--mode", "strict-local", "--sizes", "100,200,400,800",
                       "--repeats", "1", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["n"]) for r in rows] == [100, 200, 400, 800]


def test_bench_rejects_bad_sizes(capsys):
    code, _, _ = run(capsys, "bench", "--sizes", "10,x")
    assert code == EXIT_USAGE


def test_dynamic_insert_then_delete_everything(capsys, tmp_path):
    stream = tmp_path / "s.txt"
    edges = [(u, v) for u in range(8) for v in range(u + 1, 8)]
    stream.write_text("".join(f"+ {u} {v}\n" for u, v in edges) + "".join(f"- {u} {v}\n" for u, v in edges))
    code, out, _ = run(capsys, "dynamic", "--stream", str(stream), "--verify-every", "1", "--eps", "1/2")
    assert code == EXIT_OK
    assert field(out, "final_m") == "0" and field(out, "verify_violations") == "0"
    assert field(out, "adaptivity_violations") == "0"


def test_dynamic_per_update_rows_respect_recourse(capsys):
    code, out, _ = run(capsys, "dynamic", "--gen-stream", "random", "30", "400", "--seed", "2",
                       "--per-update", "--format", "csv", "--eps", "1")
    assert code == EXIT_OK
    lines = out.splitlines()
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[:401]))))
    assert len(rows) == 400
    assert all(int(r["uncoloured"]) <= 1 + 2 * 2 for r in rows)
    assert all(int(r["max_colour"]) <= int(r["ceiling"]) for r in rows)


def test_dynamic_ramp_tracks_the_degree(capsys, tmp_path):
    fig = tmp_path / "ramp.png"
    code, out, _ = run(capsys, "dynamic", "--gen-stream", "ramp", "100", "60", "5", "--seed", "1",
                       "--plot", str(fig))
    assert code == EXIT_OK and fig.stat().st_size > 0
    assert int(field(out, "final_max_colour")) <= int(field(out, "final_ceiling"))


def test_dynamic_missing_edge_is_a_line_numbered_error(capsys, tmp_path):
    stream = tmp_path / "s.txt"
    stream.write_text("+ 0 1\n- 1 2\n")
    code, _, err = run(capsys, "dynamic", "--stream", str(stream))
    assert code == EXIT_USAGE and ":2:" in err


def test_dynamic_rejects_bad_eps():
    with pytest.raises(SystemExit):
        main(["dynamic", "--gen-stream", "random", "5", "5", "--eps", "2"])


def test_gen_graph_and_stream(capsys, tmp_path):
    gfile, sfile = tmp_path / "g.txt", tmp_path / "s.txt"
    assert run(capsys, "gen", "gnp", "20", "0.3", "--seed", "1", "-o", str(gfile))[0] == EXIT_OK
    code, out, _ = run(capsys, "color", str(gfile))
    assert code == EXIT_OK and field(out, "n") == "20"
    assert run(capsys, "gen", "stream-random", "10", "30", "--seed", "1", "-o", str(sfile))[0] == EXIT_OK
    assert len(sfile.read_text().splitlines()) == 30
    assert run(capsys, "gen", "bogus", "3")[0] == EXIT_USAGE


def test_emit_table_layout():
    buf = io.StringIO()
    emit([{"n": 1, "t": 0.5}, {"n": 20, "t": 0.25}], "text", buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].split() == ["n", "t"] and len(lines) == 3
