import numpy as np
import pytest

from dyngraph_dp.bench import (CSV_HEADER, RunConfig, StreamModel, format_csv, format_matrix,
                               format_sidecar, format_sweep, loglog_slope, parse_csv, parse_matrix,
                               parse_sidecar, parse_summary, random_sequence, run_experiment, sweep)
from dyngraph_dp.bench.cli import main
from dyngraph_dp.exact_stats import DEGREE_LIST, EDGES, TRIANGLES
from dyngraph_dp.graph_stream import StreamFormatError, UpdateKind, read_sequence, validate, write_sequence
from dyngraph_dp.reductions import (InnerProductInstance, builtin_gadgets, figure_instance,
                                    innerproduct_to_f, submatrix_to_triangles)
from dyngraph_dp.reductions import FIGURE_A, FIGURE_B, FIGURE_Y


class TestGenerators:
    def test_parse(self):
        assert StreamModel.parse("capped:3") == StreamModel("capped", 3)
        assert str(StreamModel.parse("insert:0.7")) == "insert:0.7"
        for bad in ("capped:0", "insert:2", "uniform:1", "zipf"):
            with pytest.raises(ValueError):
                StreamModel.parse(bad)

    def test_uniform_valid(self):
        for seed in range(1000):
            assert validate(random_sequence(5, 40, "uniform", seed)) is None

    def test_capped(self):
        for seed in range(50):
            seq = random_sequence(8, 200, "capped:1", seed)
            assert validate(seq) is None
            assert max(g.max_degree for g in seq.graphs()) <= 1

    def test_insert_only(self):
        seq = random_sequence(6, 40, "insert:1.0", 3)
        sizes = [len(g.edges()) for g in seq.graphs()]
        assert sizes == sorted(sizes) and sizes[-1] == 15
        assert all(u.kind is not UpdateKind.DELETE for u in seq.updates)

    def test_delete_only_is_noops(self):
        seq = random_sequence(4, 10, "insert:0.0", 0)
        assert all(u.is_noop for u in seq.updates)

    def test_reproducible(self):
        assert random_sequence(7, 50, "uniform", 9) == random_sequence(7, 50, "uniform", 9)

    def test_rejects_tiny(self):
        with pytest.raises(ValueError):
            random_sequence(1, 5)


class TestHarness:
    def test_zero_noise_zero_error(self):
        seq = random_sequence(8, 64, "uniform", 1)
        for mech, stat in [("recompute", EDGES), ("degree-list", DEGREE_LIST), ("triangle", TRIANGLES)]:
            cfg = RunConfig(mech, stat, noise="none", delta=1e-5 if mech == "triangle" else 0.0,
                            block=1 if mech == "recompute" else None, trials=2)
            res = run_experiment(cfg, seq)
            assert res.max_errors.tolist() == [0.0, 0.0]

    def test_csv_rerun_identical(self):
        seq = random_sequence(8, 40, "uniform", 2)
        cfg = RunConfig("recompute", TRIANGLES, trials=3, seed=11)
        a = format_csv(run_experiment(cfg, seq))
        b = format_csv(run_experiment(cfg, seq))
        assert a == b and a.startswith(CSV_HEADER + "\n")
        c = format_csv(run_experiment(RunConfig("recompute", TRIANGLES, trials=3, seed=12), seq))
        assert a != c

    def test_parallel_matches_serial(self):
        seq = random_sequence(6, 30, "uniform", 2)
        cfg = RunConfig("recompute", EDGES, trials=3, seed=5)
        par = RunConfig("recompute", EDGES, trials=3, seed=5, jobs=2)
        assert format_csv(run_experiment(cfg, seq)) == format_csv(run_experiment(par, seq))

    def test_summary_matches_rows(self):
        seq = random_sequence(8, 50, "uniform", 3)
        cfg = RunConfig("recompute", EDGES, trials=5, seed=1)
        text = format_csv(run_experiment(cfg, seq))
        rows = parse_csv(text)
        summary = parse_summary(text)
        maxes = []
        for trial, recs in rows.items():
            assert [t for t, *_ in recs] == list(range(1, 51))
            m = max(abs(float(rel) - float(ex)) for _, ex, rel, _ in recs)
            assert summary[f"trial={trial}"] == m == max(e for *_, e in recs)
            maxes.append(m)
        assert summary["max_error_quantile"] == float(np.quantile(maxes, 0.95, method="inverted_cdf"))

    def test_vector_cells(self):
        seq = random_sequence(4, 8, "uniform", 0)
        quiet = format_csv(run_experiment(RunConfig("degree-list", DEGREE_LIST, noise="none"), seq))
        assert quiet.splitlines()[1].split(",")[2:4] == ["-", "-"]
        loud = format_csv(run_experiment(RunConfig("degree-list", DEGREE_LIST, noise="none", verbose=True), seq))
        assert len(loud.splitlines()[1].split(",")[2].split(";")) == 4

    def test_clamp(self):
        seq = random_sequence(4, 20, "uniform", 0)
        res = run_experiment(RunConfig("recompute", EDGES, eps=0.01, block=1, clamp=True, trials=2), seq)
        for rec in res.records:
            assert all(0 <= r <= 6 for r in rec.released)

    def test_invalid_sequence(self):
        from dyngraph_dp.graph_stream import Update, UpdateSequence
        bad = UpdateSequence(3, (Update.delete(0, 1),))
        with pytest.raises(ValueError):
            run_experiment(RunConfig("baseline", EDGES), bad)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            RunConfig("recompute", EDGES, trials=0)
        with pytest.raises(ValueError):
            RunConfig("recompute", EDGES, beta=1.5)
        with pytest.raises(ValueError):
            RunConfig("recompute", EDGES, eps=-1)

    def test_single_point_sweep(self):
        cfg = RunConfig("triangle-restricted", TRIANGLES, delta=1e-5, trials=4, seed=3)
        (pt,) = sweep(cfg, [64], [16], [3], [1.0], seq_seed=7)
        seq = random_sequence(16, 64, "capped:3", 7)
        res = run_experiment(RunConfig("triangle-restricted", TRIANGLES, delta=1e-5, trials=4, seed=3,
                                       deg_bound=3), seq)
        assert pt.quantile == res.quantile()
        assert pt.mean_max_error == float(res.max_errors.mean())
        text = format_sweep(cfg, [pt])
        assert text.splitlines()[0].startswith("T,N,D,eps")
        assert text.splitlines()[1].startswith("64,16,3,1.0,")

    def test_loglog_slope(self):
        xs = [1, 2, 4, 8]
        assert loglog_slope(xs, [3 * x ** 0.5 for x in xs]) == pytest.approx(0.5)


class TestTextIO:
    def test_matrix_round_trip(self):
        m = np.array([[0, 1, 1], [1, 0, 0]])
        assert (parse_matrix(format_matrix(m)) == m).all()
        for bad in ("", "2 2\n0 1\n", "1 2\n0 2\n", "x\n"):
            with pytest.raises(StreamFormatError):
                parse_matrix(bad)

    def test_sidecar_round_trip(self):
        outs = [submatrix_to_triangles(figure_instance()),
                innerproduct_to_f(InnerProductInstance([1, 0, 1], [[1, 1, 1]]), builtin_gadgets()["neg-d1"])]
        for out in outs:
            back = parse_sidecar(format_sidecar(out), out.seq)
            assert back.query_times == out.query_times and back.scale == out.scale
            assert back.stat == out.stat and back.sign == out.sign and back.relation == out.relation
            assert back.baseline_time == out.baseline_time and back.answers == out.answers


def _write(path, text):
    path.write_text(text)
    return str(path)


class TestCli:
    def test_validate(self, tmp_path, capsys):
        seq = random_sequence(5, 20, "uniform", 0)
        good = tmp_path / "good.txt"
        write_sequence(seq, good)
        assert main(["validate", str(good)]) == 0
        bad = _write(tmp_path / "bad.txt", "3 1\n- 0 1\n")
        assert main(["validate", bad]) == 1
        assert main(["validate", str(tmp_path / "missing.txt")]) == 2
        assert "valid N=5 T=20" in capsys.readouterr().out

    def test_run_and_decode(self, tmp_path, capsys):
        Y = _write(tmp_path / "Y.txt", format_matrix(FIGURE_Y))
        a = _write(tmp_path / "a.txt", format_matrix([FIGURE_A]))
        b = _write(tmp_path / "b.txt", format_matrix([FIGURE_B]))
        seq = str(tmp_path / "s.txt")
        assert main(["reduce", "submatrix", "--Y", Y, "--a", a, "--b", b, "--w", "5", "--out", seq]) == 0
        assert read_sequence(seq).horizon == 96
        assert main(["verify-reduction", "--seq", seq, "--queries", seq + ".queries"]) == 0
        assert main(["verify-reduction", "--seq", seq, "--queries", seq + ".queries", "--expected", "2"]) == 1
        csv = str(tmp_path / "run.csv")
        assert main(["run", "--input", seq, "--mech", "triangle-restricted", "--delta", "1e-5",
                     "--deg-bound", "13", "--noise", "none", "--out", csv]) == 0
        capsys.readouterr()
        assert main(["decode", "--seq", seq, "--queries", seq + ".queries", "--released", csv]) == 0
        assert capsys.readouterr().out.strip() == "1 1.0"

    def test_run_random_stdout(self, capsys):
        assert main(["run", "--random", "6,16", "--stat", "edges", "--trials", "2"]) == 0
        out = capsys.readouterr().out
        assert out.startswith(CSV_HEADER) and "# quantile=0.95" in out
        assert len(parse_csv(out)) == 2

    def test_run_needs_input(self):
        with pytest.raises(SystemExit):
            main(["run"])

    def test_sweep(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--T", "16,32", "--N", "8", "--D", "2", "--eps-grid", "1,2",
                     "--mech", "triangle-restricted", "--delta", "1e-5", "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 5

    @pytest.mark.parametrize("kind,extra", [("marginals", ["--gadget", "cc"]), ("marginals-od", []),
                                            ("marginals-triangles", ["--w", "2"]), ("marginals-edges", [])])
    def test_reduce_marginals(self, tmp_path, kind, extra):
        Y = _write(tmp_path / "Y.txt", format_matrix([[1, 0], [1, 1], [0, 1]]))
        seq = str(tmp_path / "s.txt")
        assert main(["reduce", kind, "--Y", Y, "--out", seq, *extra]) == 0
        assert main(["verify-reduction", "--seq", seq, "--queries", seq + ".queries",
                     "--expected", "2,2"]) == 0

    def test_reduce_inner_product_lifted_and_padded(self, tmp_path):
        Y = _write(tmp_path / "y.txt", format_matrix([[1, 0, 1]]))
        q = _write(tmp_path / "q.txt", format_matrix([[1, 1, 1], [0, 1, 0]]))
        seq = str(tmp_path / "s.txt")
        assert main(["reduce", "inner-product", "--Y", Y, "--q", q, "--gadget", "neg-d1", "--tau", "3",
                     "--pad-nodes", "40", "--pad-steps", "200", "--out", seq]) == 0
        s = read_sequence(seq)
        assert (s.num_nodes, s.horizon) == (40, 200)
        assert main(["verify-reduction", "--seq", seq, "--queries", seq + ".queries", "--expected", "2,0"]) == 0

    def test_reduce_bounded_and_sibling(self, tmp_path):
        Y = _write(tmp_path / "Y.txt", format_matrix(FIGURE_Y))
        Y2m = np.array(FIGURE_Y)
        Y2m[2, 3] ^= 1
        Y2 = _write(tmp_path / "Y2.txt", format_matrix(Y2m))
        a = _write(tmp_path / "a.txt", format_matrix([FIGURE_A]))
        b = _write(tmp_path / "b.txt", format_matrix([FIGURE_B]))
        s1, s2 = str(tmp_path / "s1.txt"), str(tmp_path / "s2.txt")
        common = ["--a", a, "--b", b, "--w", "5", "--block", "2"]
        assert main(["reduce", "submatrix-bounded", "--Y", Y, "--out", s1, *common]) == 0
        assert main(["reduce", "submatrix-bounded", "--Y", Y2, "--out", s2, *common]) == 0
        assert read_sequence(s1).horizon == 176
        assert main(["verify-reduction", "--seq", s1, "--queries", s1 + ".queries", "--sibling", s2]) == 0

    def test_bad_matrix_exit_code(self, tmp_path):
        Y = _write(tmp_path / "Y.txt", "2 2\n0 1\n")
        assert main(["reduce", "marginals-edges", "--Y", Y, "--out", str(tmp_path / "s.txt")]) == 2
