import hashlib
import io
import json
import subprocess
import sys

import pytest

from freesum.cli import main
from freesum.polytope import Location, Polytope, contains

T2_DOC = {"ambient_dim": 3, "vertices": [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"], ["1", "1", "2"]]}
SEG_DOC = {"ambient_dim": 1, "vertices": [["-1"], ["1"]]}
SQUARE_DOC = {"ambient_dim": 2, "vertices": [["-1", "-1"], ["1", "-1"], ["-1", "1"], ["1", "1"]]}
TRI_DOC = {"ambient_dim": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return _write


@pytest.fixture
def diagnostics(caplog):
    # pytest captures log records before they reach stderr
    caplog.set_level("WARNING", logger="freesum")
    return caplog


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


class TestSubcommands:
    def test_volume(self, capsys, write):
        code, doc, _ = run(capsys, "volume", write("t2.json", T2_DOC))
        assert code == 0 and doc == {"vol": "1/3", "normalized_vol": "2"}

    @pytest.mark.parametrize("cmd", ["ehrhart", "hstar"])
    def test_ehrhart(self, capsys, write, cmd):
        code, doc, _ = run(capsys, cmd, write("t2.json", T2_DOC))
        assert code == 0
        assert doc["h_star"] == [1, 0, 1]
        assert doc["ehrhart"] == ["1", "5/3", "1", "1/3"]
        assert doc["volume_check"] == "2"

    def test_dual(self, capsys, write):
        code, doc, _ = run(capsys, "dual", write("sq.json", SQUARE_DOC))
        assert code == 0
        assert {tuple(v) for v in doc["vertices"]} == {("1", "0"), ("-1", "0"), ("0", "1"), ("0", "-1")}

    def test_reflexive(self, capsys, write):
        assert run(capsys, "reflexive", write("sq.json", SQUARE_DOC))[1] == {"reflexive": True}
        assert run(capsys, "reflexive", write("t2.json", T2_DOC))[1] == {"reflexive": False}

    def test_freesum(self, capsys, write):
        s = write("seg.json", SEG_DOC)
        code, doc, _ = run(capsys, "freesum", s, s)
        assert code == 0 and doc["ambient_dim"] == 2 and doc["is_free_sum"]
        assert len(doc["vertices"]) == 4

    def test_minksum(self, capsys, write):
        code, doc, _ = run(capsys, "minksum", write("sq.json", SQUARE_DOC), write("tri.json", TRI_DOC))
        assert code == 0 and len(doc["vertices"]) == 5

    def test_mixedvol(self, capsys, write):
        unit_square = {"ambient_dim": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]}
        code, doc, _ = run(capsys, "mixedvol", write("u.json", unit_square), write("tri.json", TRI_DOC))
        assert code == 0 and doc == {"mixed_volume": "2"}

    def test_mixedvol_accepts_segments(self, capsys, write):
        a = write("a.json", {"ambient_dim": 2, "vertices": [["0", "0"], ["1", "0"]]})
        b = write("b.json", {"ambient_dim": 2, "vertices": [["0", "0"], ["0", "1"]]})
        assert run(capsys, "mixedvol", a, b)[1] == {"mixed_volume": "1"}

    def test_mixedvol_count_mismatch(self, capsys, write):
        assert run(capsys, "mixedvol", write("tri.json", TRI_DOC))[0] == 3

    def test_verify_product(self, capsys, write):
        t = write("t2.json", T2_DOC)
        code, doc, _ = run(capsys, "verify-product", t, t)
        assert code == 0 and doc["vol_sum"] == "4" and doc["holds"]
        assert all(doc["preconditions"].values())

    def test_verify_product_counterexample(self, capsys, write):
        p = write("p.json", {"ambient_dim": 1, "vertices": [["3"], ["4"]]})
        q = write("q.json", {"ambient_dim": 1, "vertices": [["0"], ["1"]]})
        code, doc, _ = run(capsys, "verify-product", p, q)
        assert code == 0 and doc["vol_sum"] == "4" and not doc["holds"]
        assert not doc["preconditions"]["p_contains_origin"]

    def test_braun(self, capsys, write):
        code, doc, _ = run(capsys, "braun", write("sq.json", SQUARE_DOC), write("seg.json", SEG_DOC))
        assert code == 0 and doc["equal"] and doc["hypotheses_met"]
        assert doc["direct"] == [1, 3, 3, 1] or doc["direct"] == doc["product"]

    def test_braun_warns(self, capsys, write, diagnostics):
        t = write("t2.json", T2_DOC)
        code, doc, err = run(capsys, "braun", t, t)
        assert code == 0 and not doc["equal"] and "hypotheses not met" in diagnostics.text

    def test_check_conditions_and_certify(self, capsys, write):
        supports = {"supports": [[["3", "0"], ["4", "0"]], [["0", "0"], ["0", "1"]]]}
        path = write("s.json", supports)
        code, doc, _ = run(capsys, "check-conditions", path)
        assert code == 0 and not doc["certificate_passes"]
        code, doc, _ = run(capsys, "certify", path)
        assert code == 0 and doc == {"certificate_passes": False, "mv": "1", "vol": "4", "equal": False}

    def test_certify_reads_exported_system(self, capsys, write, tmp_path):
        t = write("t2.json", T2_DOC)
        code, doc, _ = run(capsys, "bkk-export", "--seed", "9", t, t)
        assert code == 0
        system = write("sys.json", doc)
        code, doc, _ = run(capsys, "certify", system)
        assert code == 0 and doc["certificate_passes"] and doc["mv"] == doc["vol"] == "4"

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(TRI_DOC)))
        code, doc, _ = run(capsys, "volume", "-")
        assert code == 0 and doc["normalized_vol"] == "1"

    def test_pretty_output(self, capsys, write):
        main(["volume", "--output", "pretty", write("t2.json", T2_DOC)])
        assert "\n  " in capsys.readouterr().out


class TestParsing:
    def test_round_trip(self, capsys, write):
        code, doc, _ = run(capsys, "dual", write("sq.json", SQUARE_DOC))
        code, again, _ = run(capsys, "dual", write("dual.json", doc))
        assert {tuple(v) for v in again["vertices"]} == {tuple(v) for v in SQUARE_DOC["vertices"]}

    def test_duplicates_warn(self, capsys, write, diagnostics):
        doc = {"ambient_dim": 2, "vertices": TRI_DOC["vertices"] + [["0", "0"]]}
        code, out, err = run(capsys, "volume", write("dup.json", doc))
        assert code == 0 and out["normalized_vol"] == "1" and "duplicate" in diagnostics.text

    def test_parse_error_position(self, capsys, write, diagnostics):
        code, _, err = run(capsys, "volume", write("bad.json", '{"ambient_dim": 2,\n  "vertices": [[1, 2],]}'))
        assert code == 2 and "line 2" in diagnostics.text

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "volume", str(tmp_path / "nope.json"))[0] == 2

    @pytest.mark.parametrize("doc, fragment", [
        ({"ambient_dim": 2, "vertices": [["0", "0"], ["1/0", "0"], ["0", "1"]]}, "vertex 1"),
        ({"ambient_dim": 2, "vertices": [["0", "0"], ["1", "0", "0"], ["0", "1"]]}, "vertex 1"),
        ({"ambient_dim": 0, "vertices": []}, "ambient_dim"),
    ])
    def test_validation_errors(self, capsys, write, doc, fragment, diagnostics):
        code, _, err = run(capsys, "volume", write("bad.json", doc))
        assert code == 3 and fragment in diagnostics.text

    def test_lower_dimensional(self, capsys, write):
        doc = {"ambient_dim": 2, "vertices": [["0", "0"], ["1", "1"], ["2", "2"]]}
        assert run(capsys, "volume", write("flat.json", doc))[0] == 3

    def test_unbounded_dual(self, capsys, write):
        assert run(capsys, "dual", write("tri.json", TRI_DOC))[0] == 4

    def test_dimension_guard(self, capsys, write):
        doc = {"ambient_dim": 9, "vertices": [[str(int(i == j)) for j in range(9)] for i in range(10)]}
        assert run(capsys, "volume", write("big.json", doc))[0] == 4

    def test_budget_guard(self, capsys, write):
        assert run(capsys, "ehrhart", "--max-points", "3", write("t2.json", T2_DOC))[0] == 4

    def test_rational_ehrhart_rejected(self, capsys, write):
        doc = {"ambient_dim": 1, "vertices": [["0"], ["1/2"]]}
        assert run(capsys, "ehrhart", write("half.json", doc))[0] == 3

    def test_bad_seed(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gen-random", "--dim", "2", "--seed", "-1"])
        assert exc.value.code == 2


class TestDeterminism:
    def test_gen_random(self, capsys):
        a = run(capsys, "gen-random", "--dim", "3", "--seed", "42")
        b = run(capsys, "gen-random", "--dim", "3", "--seed", "42")
        assert a == b and a[1]["seed"] == 42

    def test_gen_random_dim1_contains_zero(self, capsys):
        for seed in range(5):
            _, doc, _ = run(capsys, "gen-random", "--dim", "1", "--seed", str(seed))
            xs = [int(v[0]) for v in doc["vertices"]]
            assert min(xs) <= 0 <= max(xs)

    @pytest.mark.parametrize("seed", range(5))
    def test_boundary_mode(self, capsys, seed):
        _, doc, _ = run(capsys, "gen-random", "--dim", "3", "--origin-mode", "boundary", "--seed", str(seed))
        P = Polytope([tuple(int(c) for c in v) for v in doc["vertices"]])
        assert contains(P, (0, 0, 0)) is Location.BOUNDARY

    def test_gen_random_invalid_spec(self, capsys):
        assert run(capsys, "gen-random", "--dim", "7")[0] == 3

    def test_bkk_export_hash(self, write):
        t = write("t2.json", T2_DOC)
        cmd = [sys.executable, "-m", "freesum", "bkk-export", "--seed", "2024", t, t]
        digests = {hashlib.sha256(subprocess.run(cmd, capture_output=True, check=True).stdout).hexdigest()
                   for _ in range(2)}
        assert len(digests) == 1


class TestSelftest:
    def test_one_trial_passes(self, capsys):
        code, doc, _ = run(capsys, "selftest", "--trials", "1", "--seed", "5")
        assert code == 0 and doc["ok"]
        assert all(s["passed"] == 1 for s in doc["suites"].values())

    def test_deterministic(self, capsys):
        a = run(capsys, "selftest", "--trials", "1", "--seed", "6")[1]
        b = run(capsys, "selftest", "--trials", "1", "--seed", "6")[1]
        a.pop("runtime_seconds"), b.pop("runtime_seconds")
        assert a == b

    def test_injected_fault_is_caught(self, capsys):
        code, doc, _ = run(capsys, "selftest", "--trials", "1", "--inject-fault", "flip-volume")
        assert code == 5 and not doc["ok"]
        assert doc["suites"]["product_formula"]["failed"] == 1

    def test_zero_trials(self, capsys):
        assert run(capsys, "selftest", "--trials", "0")[0] == 3
