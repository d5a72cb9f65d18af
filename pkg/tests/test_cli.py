import json

import pytest

from zuklab.cli import main


def read_envelope(path):
    with open(path) as fh:
        return json.load(fh)


def test_sample_is_byte_deterministic(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for out in (a, b):
        rc = main(
            ["sample", "--model", "mplus", "--m", "30", "--rho", "0.01", "--seed", "9", "--out", str(out)]
        )
        assert rc == 0
    ea, eb = read_envelope(a), read_envelope(b)
    assert ea["sha256"] == eb["sha256"]
    assert ea["payload"] == eb["payload"]
    assert ea["payload"]["presentation"]["positive_only"] is True


def test_sample_density_small_enumeration(tmp_path):
    out = tmp_path / "p.json"
    rc = main(
        ["sample", "--model", "density", "--k", "2", "--l", "6", "--d", "0.5", "--seed", "1", "--out", str(out)]
    )
    assert rc == 0
    env = read_envelope(out)
    assert env["payload"]["relator_count"] == 27
    assert len(env["payload"]["presentation"]["relators"]) == 27


def test_sample_missing_model_param_is_usage_error(capsys):
    rc = main(["sample", "--model", "mplus", "--rho", "0.01"])
    assert rc == 2
    assert "error" in capsys.readouterr().err.lower()


def test_unknown_choices_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--lemma", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--model", "nope"])
    assert exc.value.code == 2


def test_certify_sampled_pass(capsys):
    rc = main(["certify", "--model", "mplus", "--m", "3", "--rho", "1.0", "--seed", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "verdict PASS" in out


def test_certify_file_fail_exits_one(tmp_path, capsys):
    pfile = tmp_path / "empty.json"
    pfile.write_text(json.dumps({"alphabet": 3, "positive_only": True, "relators": []}))
    rc = main(["certify", "--in", str(pfile)])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out


def test_certify_unreadable_input_exits_two(tmp_path, capsys):
    rc = main(["certify", "--in", str(tmp_path / "missing.json")])
    assert rc == 2
    assert "error" in capsys.readouterr().err.lower()


def test_certify_emit_bounds(capsys):
    rc = main(["certify", "--emit-bounds", "--k", "2", "--l", "300", "--d", "0.4"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "4.69" in out
    assert "38039.1" in out


def test_certify_emit_bounds_vacuous_exits_one(capsys):
    rc = main(["certify", "--emit-bounds", "--k", "2", "--l", "30", "--d", "0.4"])
    assert rc == 1
    assert "VACUOUS" in capsys.readouterr().out


def test_verify_cos_writes_report_files(tmp_path, capsys):
    out = tmp_path / "cos.json"
    rc = main(["verify", "--lemma", "cos", "--trials", "6", "--seed", "4", "--out", str(out)])
    assert rc == 0
    assert out.exists()
    assert (tmp_path / "cos.csv").exists()
    assert (tmp_path / "cos.png").exists()
    env = read_envelope(out)
    assert env["payload"]["report"]["passed"] is True
    assert "fraction_holding 1" in capsys.readouterr().out


def test_verify_no_plot_skips_figure(tmp_path):
    out = tmp_path / "cos.json"
    rc = main(
        ["verify", "--lemma", "cos", "--trials", "4", "--seed", "4", "--out", str(out), "--no-plot"]
    )
    assert rc == 0
    assert not (tmp_path / "cos.png").exists()
    assert (tmp_path / "cos.csv").exists()


def test_verify_vacuous_er_exits_one(tmp_path):
    out = tmp_path / "er.json"
    rc = main(
        ["verify", "--lemma", "er", "--n", "100", "--rho", "0.05", "--trials", "3", "--seed", "4", "--out", str(out), "--no-plot"]
    )
    assert rc == 1
    env = read_envelope(out)
    assert env["payload"]["report"]["passed"] is False


def test_verify_report_sha_thread_invariant(tmp_path):
    shas = []
    for threads in ("1", "4"):
        out = tmp_path / f"u{threads}.json"
        rc = main(
            ["verify", "--lemma", "union", "--trials", "6", "--seed", "11", "--threads", threads, "--out", str(out), "--no-plot"]
        )
        assert rc == 0
        env = read_envelope(out)
        shas.append(env["sha256"])
        assert env["threads"] == int(threads)
    assert shas[0] == shas[1]


def test_spectrum_from_edge_list(tmp_path, capsys):
    text = "vertices 6\n" + "\n".join(
        f"{u} {v} 1" for u, v in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]
    )
    gfile = tmp_path / "c6.txt"
    gfile.write_text(text + "\n")
    out = tmp_path / "spec.json"
    rc = main(["spectrum", "--in", str(gfile), "--out", str(out), "--no-plot"])
    assert rc == 0
    rep = read_envelope(out)["payload"]["report"]
    assert rep["lambda2"] == pytest.approx(0.5, abs=1e-9)
    assert rep["lambda_bipartite"] == pytest.approx(0.5, abs=1e-9)


def test_spectrum_from_presentation_writes_png(tmp_path):
    pfile = tmp_path / "p.json"
    main(["sample", "--model", "mplus", "--m", "3", "--rho", "1.0", "--seed", "2", "--out", str(pfile)])
    out = tmp_path / "spec.json"
    rc = main(["spectrum", "--in", str(pfile), "--out", str(out)])
    assert rc == 0
    rep = read_envelope(out)["payload"]["report"]
    assert rep["lambda_bipartite"] == pytest.approx(0.0, abs=1e-9)
    assert (tmp_path / "spec.png").exists()


def test_link_reports_layer_counts(tmp_path):
    pfile = tmp_path / "p.json"
    main(["sample", "--model", "mplus", "--m", "8", "--rho", "0.05", "--seed", "3", "--out", str(pfile)])
    out = tmp_path / "link.json"
    rc = main(["link", "--in", str(pfile), "--out", str(out)])
    assert rc == 0
    payload = read_envelope(out)["payload"]
    rels = read_envelope(pfile)["payload"]["relator_count"]
    assert payload["total_multiplicity"] == 3 * rels
    assert payload["m"] == 8
    assert len(payload["labels"]) == 16


def test_sweep_writes_grid_outputs(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = main(
        ["sweep", "--model", "mplus", "--m", "100,200", "--trials-per-m", "4", "--seed", "5", "--out", str(out)]
    )
    assert rc in (0, 1)
    assert out.exists()
    assert (tmp_path / "sweep.json").exists()
    assert (tmp_path / "sweep.png").exists()
    stdout = capsys.readouterr().out
    assert "slope" in stdout
    header = out.read_text().splitlines()[0]
    assert header.split(",")[:2] == ["m", "mean_lambda2"]
