import json

import pytest

from polyhopf.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCommands:
    def test_dissections(self, capsys):
        code, out, _ = call(capsys, "dissections", "--polygon", "1,2,3")
        assert code == 0
        assert out.split() == ["{}", "{1->2}", "{2->3}", "{3->1}"]

    def test_dissections_json(self, capsys):
        code, out, _ = call(capsys, "dissections", "--polygon", "1,2,3,4", "--format", "json")
        data = json.loads(out)
        assert code == 0 and data["schema"] == "1" and data["count"] == 21

    def test_lambda_json(self, capsys):
        code, out, _ = call(capsys, "lambda", "--rule", "phi2", "--polygon", "a,b,c", "--format", "json")
        data = json.loads(out)
        assert code == 0 and data["schema"] == "1"
        assert len(data["terms"]) == 4
        assert {"coeff": "1", "term": "a,b,c"} in data["terms"]

    def test_labels_are_opaque(self, capsys):
        code, out, _ = call(capsys, "lambda", "--rule", "phi4", "--polygon", "10,2,x")
        assert code == 0 and "10,2,x" in out

    def test_boundary(self, capsys):
        code, out, _ = call(capsys, "boundary", "--rule", "phi2", "--polygon", "a,b", "--format", "json")
        assert code == 0 and json.loads(out)["terms"] == []

    def test_tree(self, capsys):
        code, out, _ = call(capsys, "tree", "--rule", "phi2", "--polygon", "1,2,3",
                            "--dissection", "{1->2}", "--format", "json")
        data = json.loads(out)
        assert code == 0 and len(data["labels"]) == 2 and len(data["edges"]) == 1

    def test_tree_rejects_bad_dissection(self, capsys):
        code, _, err = call(capsys, "tree", "--rule", "phi2", "--polygon", "1,2,3", "--dissection", "{1->3}")
        assert code == 2 and err

    def test_eval(self, capsys):
        code, out, _ = call(capsys, "eval", "--args", "4,2,1", "--depth", "200", "--tol", "1e-8")
        data = json.loads(out)
        assert code == 0 and set(data) == {"schema", "value", "tail_bound"}
        assert data["tail_bound"] < 1e-8

    def test_eval_divergent(self, capsys):
        code, _, err = call(capsys, "eval", "--args", "1,2")
        assert code == 2 and "diverges" in err


class TestVerify:
    def test_holds(self, capsys):
        code, out, _ = call(capsys, "verify", "--identity", "relate", "--polygon", "a,b,c")
        assert code == 0 and "holds" in out

    def test_fails(self, capsys):
        code, out, _ = call(capsys, "verify", "--identity", "fv_ofv", "--polygon", "1,2,3")
        assert code == 1 and "FAILS" in out

    def test_json(self, capsys):
        code, out, _ = call(capsys, "verify", "--identity", "redif", "--polygon", "1,2,3", "--format", "json")
        data = json.loads(out)
        assert code == 0 and data["schema"] == "1" and data["holds"] is True

    def test_weight_out_of_range(self, capsys):
        code, _, _ = call(capsys, "verify", "--identity", "fv_ofv", "--polygon", "1,2")
        assert code == 2


class TestUsage:
    @pytest.mark.parametrize("argv", [
        [],
        ["bogus"],
        ["lambda", "--rule", "phi9", "--polygon", "a,b"],
        ["lambda", "--polygon", "a,b"],
        ["dissections", "--polygon", "a,b", "--nope"],
        ["verify-all", "--max-weight", "0"],
        ["verify-all", "--min-weight", "3", "--max-weight", "2"],
    ])
    def test_exit_two(self, capsys, argv):
        code, _, err = call(capsys, *argv)
        assert code == 2 and "error" in err

    def test_bad_thread_count(self, capsys, monkeypatch):
        monkeypatch.setenv("POLYHOPF_THREADS", "zero")
        code, _, _ = call(capsys, "verify-all", "--max-weight", "2")
        assert code == 2


class TestVerifyAll:
    ARGS = ("verify-all", "--max-weight", "3", "--random", "2", "--format", "json")

    def test_deterministic_across_worker_counts(self, capsys, monkeypatch):
        outs = []
        for threads in ("1", "2", "1"):
            monkeypatch.setenv("POLYHOPF_THREADS", threads)
            code, out, _ = call(capsys, *self.ARGS)
            outs.append((code, out))
        assert outs[0] == outs[1] == outs[2]

    def test_summary(self, capsys, monkeypatch):
        monkeypatch.setenv("POLYHOPF_THREADS", "1")
        code, out, _ = call(capsys, *self.ARGS)
        lines = [json.loads(x) for x in out.splitlines()]
        summary = lines[-1]["summary"]
        assert summary["total"] == len(lines) - 1
        assert all("millis" not in x for x in lines[:-1])
        # the first-vertex / rotated relation is reported as failing
        assert summary["failed"] > 0 and code == 1
        assert {f.split()[0] for f in summary["failures"]} == {"fv_ofv"}

    def test_timings_flag(self, capsys, monkeypatch):
        monkeypatch.setenv("POLYHOPF_THREADS", "1")
        _, out, _ = call(capsys, "verify-all", "--max-weight", "2", "--format", "json", "--timings")
        assert "millis" in json.loads(out.splitlines()[0])

    def test_text(self, capsys, monkeypatch):
        monkeypatch.setenv("POLYHOPF_THREADS", "1")
        _, out, _ = call(capsys, "verify-all", "--max-weight", "2")
        assert "checks hold" in out
