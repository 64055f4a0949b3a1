"""End-to-end tests of the command-line interface."""

import argparse
import json

import numpy as np
import pytest

import gsis
from gsis.cli import _parse_int_list, _parse_range, main
from gsis.io import load_matrix_csv, save_matrix_csv


def _run(*argv):
    return main(list(argv))


def _json(path):
    return json.loads(path.read_text())


# ---------------------------------------------------------------------------
# argument helpers


def test_parse_helpers():
    assert _parse_int_list("1,3,5") == [1, 3, 5]
    assert _parse_int_list("7") == [7]
    assert _parse_range("2:5") == [2, 3, 4, 5]
    assert _parse_range("4") == [4]
    assert _parse_range("1,9") == [1, 9]
    with pytest.raises(argparse.ArgumentTypeError):
        _parse_range("5:2")


def test_graph_source_is_required(tmp_path):
    with pytest.raises(SystemExit):
        _run("graph", "export", "--out", str(tmp_path))
    with pytest.raises(SystemExit):
        _run("graph", "export", "--circulant", "10", "--out", str(tmp_path))
    edge_file = tmp_path / "g.txt"
    gsis.write_edge_list(gsis.path_graph(3), edge_file)
    with pytest.raises(SystemExit):
        _run(
            "graph",
            "export",
            "--graph",
            str(edge_file),
            "--circulant",
            "10",
            "--q",
            "1",
            "--out",
            str(tmp_path),
        )


# ---------------------------------------------------------------------------
# graph export


def test_graph_export_circulant(tmp_path, capsys):
    out = tmp_path / "out"
    assert _run("graph", "export", "--circulant", "12", "--q", "1,3", "--out", str(out)) == 0
    meta = _json(out / "decomposition.json")
    assert meta["n_vertices"] == 12 and meta["n_shifts"] == 2
    basis = load_matrix_csv(out / "decomposition_basis.csv")
    assert basis.shape == (12, 12)
    assert np.allclose(basis.T @ basis, np.eye(12), atol=1e-12)
    shift0 = load_matrix_csv(out / "shift_0.csv")
    _, shifts = gsis.build_circulant(12, [1, 3])
    assert np.allclose(shift0, shifts[0].matrix, atol=1e-15)
    assert "n_vertices=12" in capsys.readouterr().out


def test_graph_export_edge_list(tmp_path):
    edge_file = tmp_path / "g.txt"
    gsis.write_edge_list(gsis.path_graph(4), edge_file)
    out = tmp_path / "out"
    assert _run(
        "graph",
        "export",
        "--graph",
        str(edge_file),
        "--shift-kind",
        "adjacency",
        "--out",
        str(out),
    ) == 0
    shift0 = load_matrix_csv(out / "shift_0.csv")
    graph = gsis.path_graph(4)
    assert np.array_equal(shift0, gsis.build_standard_shifts(graph, "adjacency").matrix)


# ---------------------------------------------------------------------------
# spaces


def test_space_bandlimited(tmp_path):
    out = tmp_path / "out"
    assert _run(
        "space",
        "bandlimited",
        "--circulant",
        "12",
        "--q",
        "1",
        "--omega",
        "0:4",
        "--out",
        str(out),
    ) == 0
    meta = _json(out / "space.json")
    assert meta["dim"] == 5 and meta["omega"] == [0, 1, 2, 3, 4]
    basis = load_matrix_csv(out / "space_basis.csv")
    assert basis.shape == (12, 5)


def test_space_gsis_from_delta(tmp_path):
    out = tmp_path / "out"
    assert _run(
        "space",
        "gsis",
        "--circulant",
        "12",
        "--q",
        "1",
        "--delta",
        "6",
        "--out",
        str(out),
    ) == 0
    meta = _json(out / "space.json")
    # the delta at one vertex of a cycle generates every even signal
    assert meta["dim"] == 7


def test_space_bounds_matches_library(tmp_path, capsys):
    out = tmp_path / "out"
    assert _run(
        "space",
        "bounds",
        "--circulant",
        "12",
        "--q",
        "1",
        "--omega",
        "0,1",
        "--frame-level",
        "2",
        "--out",
        str(out),
    ) == 0
    payload = _json(out / "bounds.json")
    _, shifts = gsis.build_circulant(12, [1])
    decomp = gsis.diagonalize_simultaneously(shifts, seed=0)
    gen = gsis.canonical_generator(decomp, [0, 1], seed=0)
    r_lo, r_hi = gsis.riesz_bounds(decomp, gen.combined_shift, gen.generator, [0, 1])
    f_lo, f_hi = gsis.frame_bounds(decomp, gen.generator, 2)
    assert payload["riesz_bounds"] == pytest.approx([r_lo, r_hi], rel=1e-12)
    assert payload["frame_bounds"] == pytest.approx([f_lo, f_hi], rel=1e-12)
    assert payload["frame_level"] == 2
    assert '"riesz_bounds"' in capsys.readouterr().out


def test_space_bounds_requires_omega_or_generator(tmp_path):
    with pytest.raises(SystemExit):
        _run("space", "bounds", "--circulant", "12", "--q", "1", "--out", str(tmp_path))


def test_space_uncertainty(tmp_path, capsys):
    out = tmp_path / "out"
    assert _run(
        "space",
        "uncertainty",
        "--circulant",
        "13",
        "--q",
        "1",
        "--delta",
        "6",
        "--out",
        str(out),
    ) == 0
    payload = _json(out / "uncertainty.json")
    assert payload["support_size"] == 1
    assert payload["space_dim"] == 7
    assert payload["holds"] is True
    assert payload["support_size"] * payload["space_dim"] >= payload["lower_bound"]


# ---------------------------------------------------------------------------
# kernels


def test_kernel_make(tmp_path):
    out = tmp_path / "out"
    assert _run(
        "kernel",
        "make",
        "--circulant",
        "10",
        "--q",
        "1",
        "--family",
        "diffusion",
        "--param",
        "sigma=1.0",
        "--out",
        str(out),
    ) == 0
    meta = _json(out / "kernel.json")
    assert meta["family"] == "diffusion"
    assert meta["params"] == {"sigma": 1.0}
    mat = load_matrix_csv(out / "kernel_matrix.csv")
    assert np.allclose(mat, mat.T)
    assert np.all(np.linalg.eigvalsh(mat) > 0)


def test_kernel_make_bad_param_syntax(tmp_path):
    with pytest.raises(SystemExit):
        _run(
            "kernel",
            "make",
            "--circulant",
            "10",
            "--q",
            "1",
            "--family",
            "diffusion",
            "--param",
            "sigma",
            "--out",
            str(tmp_path),
        )


def test_kernel_make_missing_param_exits_2(tmp_path):
    code = _run(
        "kernel",
        "make",
        "--circulant",
        "10",
        "--q",
        "1",
        "--family",
        "diffusion",
        "--out",
        str(tmp_path),
    )
    assert code == 2


# ---------------------------------------------------------------------------
# sampling schemes


def test_sample_subset(tmp_path):
    out = tmp_path / "out"
    assert _run(
        "sample", "subset", "--circulant", "10", "--q", "1", "--w", "2:5", "--out", str(out)
    ) == 0
    meta = _json(out / "scheme.json")
    assert meta["provenance"] == "subset"
    assert meta["vertices"] == [2, 3, 4, 5]
    assert meta["n_samples"] == 4


def test_sample_dynamic(tmp_path):
    out = tmp_path / "out"
    assert _run(
        "sample",
        "dynamic",
        "--circulant",
        "10",
        "--q",
        "1",
        "--i0",
        "0",
        "--k",
        "3",
        "--out",
        str(out),
    ) == 0
    meta = _json(out / "scheme.json")
    assert meta["provenance"] == "dynamic"
    assert meta["initial_vertex"] == 0 and meta["n_snapshots"] == 3
    mat = load_matrix_csv(out / "scheme_matrix.csv")
    assert mat.shape == (3, 10)
    assert np.array_equal(mat[0], np.eye(10)[0])


# ---------------------------------------------------------------------------
# reconstruction


def test_reconstruct_direct_roundtrip(tmp_path):
    _, shifts = gsis.build_circulant(12, [1])
    decomp = gsis.diagonalize_simultaneously(shifts, seed=0)
    rng = np.random.default_rng(71)
    x = decomp.basis[:, [0, 1, 2]] @ rng.standard_normal(3)
    y_file = tmp_path / "y.csv"
    save_matrix_csv(y_file, x[:7])
    out = tmp_path / "out"
    assert _run(
        "reconstruct",
        "direct",
        "--circulant",
        "12",
        "--q",
        "1",
        "--w",
        "0:6",
        "--omega",
        "0:2",
        "--y",
        str(y_file),
        "--out",
        str(out),
    ) == 0
    signal = load_matrix_csv(out / "reconstruction_signal.csv").reshape(-1)
    assert np.allclose(signal, x, atol=1e-9)
    obs = _json(out / "observation.json")
    assert obs["n_samples"] == 7


def test_reconstruct_krylov_roundtrip(tmp_path):
    _, shifts = gsis.build_circulant(12, [1])
    decomp = gsis.diagonalize_simultaneously(shifts, seed=0)
    phi = np.zeros(12)
    phi[6] = 1.0
    space = gsis.gsis_from_generators(shifts, decomp, [phi])
    rng = np.random.default_rng(72)
    x = space.basis @ rng.standard_normal(space.dim)
    window = list(range(0, 7))
    y_file = tmp_path / "y.csv"
    save_matrix_csv(y_file, x[window])
    out = tmp_path / "out"
    assert _run(
        "reconstruct",
        "krylov",
        "--circulant",
        "12",
        "--q",
        "1",
        "--w",
        "0:6",
        "--delta-gen",
        "6",
        "--y",
        str(y_file),
        "--out",
        str(out),
    ) == 0
    signal = load_matrix_csv(out / "reconstruction_signal.csv").reshape(-1)
    assert np.allclose(signal, x, atol=1e-8)
    meta = _json(out / "reconstruction.json")
    assert meta["dims_trace"][-1] == space.dim
    assert meta["final_residual_norm"] <= 1e-9


def test_reconstruct_krylov_delta_is_a_threshold(tmp_path):
    y_file = tmp_path / "y.csv"
    save_matrix_csv(y_file, np.ones(7))
    out = tmp_path / "out"
    assert _run(
        "reconstruct",
        "krylov",
        "--circulant",
        "12",
        "--q",
        "1",
        "--w",
        "3:9",
        "--delta-gen",
        "6",
        "--delta",
        "100.0",
        "--y",
        str(y_file),
        "--out",
        str(out),
    ) == 0
    meta = _json(out / "reconstruction.json")
    # a huge stopping threshold halts the growth immediately
    assert meta["depth"] == 0


def test_reconstruct_requires_scheme_and_generator(tmp_path):
    y_file = tmp_path / "y.csv"
    save_matrix_csv(y_file, np.ones(3))
    with pytest.raises(SystemExit):
        _run(
            "reconstruct",
            "krylov",
            "--circulant",
            "12",
            "--q",
            "1",
            "--delta-gen",
            "6",
            "--y",
            str(y_file),
        )
    with pytest.raises(SystemExit):
        _run(
            "reconstruct",
            "krylov",
            "--circulant",
            "12",
            "--q",
            "1",
            "--w",
            "0:2",
            "--y",
            str(y_file),
        )
    with pytest.raises(SystemExit):
        _run(
            "reconstruct",
            "direct",
            "--circulant",
            "12",
            "--q",
            "1",
            "--w",
            "0:2",
            "--y",
            str(y_file),
        )


def test_cli_errors_exit_2(tmp_path, capsys):
    code = _run(
        "space",
        "bandlimited",
        "--circulant",
        "10",
        "--q",
        "1",
        "--omega",
        "99",
        "--out",
        str(tmp_path),
    )
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")
    # one sample cannot determine a five-dimensional space
    y_file = tmp_path / "y.csv"
    save_matrix_csv(y_file, np.ones(1))
    code = _run(
        "reconstruct",
        "direct",
        "--circulant",
        "10",
        "--q",
        "1",
        "--w",
        "0",
        "--omega",
        "0:4",
        "--y",
        str(y_file),
        "--out",
        str(tmp_path),
    )
    assert code == 2


# ---------------------------------------------------------------------------
# sweeps


def test_experiment_cli_tiny_grid(tmp_path):
    out = tmp_path / "out"
    assert _run(
        "experiment",
        "damped-cosine",
        "--sigma",
        "0.05",
        "--trials",
        "2",
        "--p-range",
        "4,9",
        "--level-range",
        "2:3",
        "--seed",
        "11",
        "--out",
        str(out),
    ) == 0
    meta = _json(out / "metrics.json")
    assert meta["config"]["p_values"] == [4, 9]
    assert meta["config"]["levels"] == [2, 3]
    assert np.asarray(meta["grids"]["re_raw"]).shape == (2, 2)
    table = gsis.run_circulant_experiment(
        gsis.ExperimentConfig(
            sigma=0.05, trials=2, p_values=(4, 9), levels=(2, 3), seed=11
        )
    )
    assert np.allclose(meta["grids"]["re_raw"], table.re_raw, rtol=0, atol=1e-15)
    text = (out / "metrics.csv").read_text().splitlines()
    assert text[0] == "level,p,metric,value"
    assert len(text) == 1 + 2 * 2 * 4


def test_model_compare_cli(tmp_path):
    signals = tmp_path / "signals.csv"
    header = ",".join(str(i) for i in range(12))
    row1 = ["0.0"] * 12
    row1[3] = "2.0"
    row2 = ["0.1"] * 12
    row2[8] = "-3.0"
    signals.write_text(f"{header}\n{','.join(row1)}\n{','.join(row2)}\n")
    out = tmp_path / "out"
    assert _run(
        "model-compare",
        "--circulant",
        "12",
        "--q",
        "1",
        "--signals",
        str(signals),
        "--generators",
        "adaptive:2",
        "--levels",
        "0:2",
        "--out",
        str(out),
    ) == 0
    meta = _json(out / "model_comparison.json")
    assert meta["levels"] == [0, 1, 2]
    assert meta["rule"] == "adaptive"
    assert np.asarray(meta["f_krylov"]).shape == (2, 3)
    assert (out / "model_comparison.csv").exists()


def test_model_compare_cli_validation(tmp_path):
    signals = tmp_path / "signals.csv"
    signals.write_text("")
    with pytest.raises(SystemExit):
        _run(
            "model-compare",
            "--circulant",
            "12",
            "--q",
            "1",
            "--signals",
            str(signals),
            "--out",
            str(tmp_path),
        )
    header = ",".join(str(i) for i in range(12))
    signals.write_text(f"{header}\n" + ",".join(["1.0"] * 12) + "\n")
    with pytest.raises(SystemExit):
        _run(
            "model-compare",
            "--circulant",
            "12",
            "--q",
            "1",
            "--signals",
            str(signals),
            "--generators",
            "sideways:2",
            "--out",
            str(tmp_path),
        )
