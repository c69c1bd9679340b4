import json
import os
import subprocess
import sys

import pytest

from cpfskein.cli import fraction_from_json, main

HEAVY = "1 2 3 4 1 2 3 4 -1 -2 -3 -4 1 2 -3 4 1 -2 3 4 1 2 3 -4 2 -3 1 4 -2 3"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_process(*argv, stdin=None, env=None):
    full_env = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "cpfskein.cli", *argv], input=stdin,
                          capture_output=True, text=True, env=full_env, timeout=120)


class TestCompute:
    def test_hopf(self, capsys):
        code, out, _ = run(capsys, "compute", "--strands", "2", "--word", "1 1", "--colors", "a b")
        assert code == 0 and out == "1\n"

    def test_trefoil_with_alexander(self, capsys):
        code, out, _ = run(capsys, "compute", "--strands", "2", "--word", "1 1 1", "--colors", "a a",
                           "--alexander", "--uncolored")
        assert code == 0
        assert out.splitlines() == [
            "(t_a^2 - 1 + t_a^-2)/(t_a - t_a^-1)",
            "alexander: s - 1 + s^-1",
            "uncolored: (t^2 - 1 + t^-2)/(t - t^-1)",
        ]

    def test_not_closable(self, capsys):
        code, _, err = run(capsys, "compute", "--strands", "2", "--word", "1", "--colors", "a b")
        assert code == 2 and "not closable" in err

    @pytest.mark.parametrize("argv", [
        ["compute", "--strands", "2", "--word", "1 x", "--colors", "a b"],
        ["compute", "--strands", "2", "--word", "2", "--colors", "a b"],
        ["compute", "--strands", "2", "--word", "1 1", "--colors", "a"],
        ["compute", "--strands", "2"],
    ])
    def test_parse_errors(self, capsys, argv):
        code, _, _ = run(capsys, *argv)
        assert code == 3

    def test_unknown_flag_exits_3(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["compute", "--nonsense"])
        assert exc.value.code == 3

    def test_oracle_flag(self, capsys):
        code, out, _ = run(capsys, "compute", "--strands", "3", "--word", "1 -2 1 -2", "--colors", "a a a",
                           "--oracle")
        assert code == 0 and "oracle: agrees up to a unit; normalised equal" in out

    def test_json_round_trip(self, capsys):
        for word, colors in [("1 1 1", "a a"), ("1 1 2 2", "a b c"), ("1 2 1 2 1 2", "a b c"), ("", "a b")]:
            n = len(colors.split())
            code, out, _ = run(capsys, "compute", "--strands", str(n), "--word", word, "--colors", colors,
                               "--format", "json")
            assert code == 0
            data = json.loads(out)
            value, names = fraction_from_json(data["cpf_json"])
            assert value.to_str([f"t_{c}" for c in names]) == data["cpf"]

    def test_deterministic(self):
        argv = ["compute", "--strands", "3", "--word", "1 -2 1 -2 2", "--colors", "a a a", "--format", "json"]
        first = run_process(*argv)
        second = run_process(*argv)
        assert first.returncode == 0
        assert first.stdout == second.stdout

    def test_timeout(self):
        proc = run_process("compute", "--strands", "5", "--word", HEAVY, "--colors", "a a a a a",
                           "--timeout", "0.05")
        assert proc.returncode == 5


class TestBatch:
    def test_order_preserved(self):
        items = [
            {"strands": 3, "word": "1 -2 1 -2", "colors": ["a", "a", "a"], "outputs": ["alexander"]},
            {"strands": 2, "word": "1 1", "colors": ["a", "b"]},
            {"strands": 2, "word": "1 1 1", "colors": "a a"},
        ]
        proc = run_process("compute", "--batch", "-", stdin=json.dumps({"items": items, "seed": 0}),
                           env={"CPF_THREADS": "3"})
        assert proc.returncode == 0
        out = json.loads(proc.stdout)
        assert [r["cpf"] for r in out] == [
            "(-t_a^2 + 3 - t_a^-2)/(t_a - t_a^-1)", "1", "(t_a^2 - 1 + t_a^-2)/(t_a - t_a^-1)"
        ]
        assert out[0]["alexander"] == "-s + 3 - s^-1"

    def test_validated_before_running(self):
        items = [{"strands": 2, "word": "1 1", "colors": ["a", "b"]},
                 {"strands": 2, "word": "1", "colors": ["a", "b"]}]
        proc = run_process("compute", "--batch", "-", stdin=json.dumps(items))
        assert proc.returncode == 2 and proc.stdout == ""

    def test_limits(self):
        job = {"items": [{"strands": 3, "word": "1 1", "colors": "a a b"}], "limits": {"max_strands": 2}}
        proc = run_process("compute", "--batch", "-", stdin=json.dumps(job))
        assert proc.returncode == 3

    def test_bad_json(self):
        assert run_process("compute", "--batch", "-", stdin="{nope").returncode == 3


class TestOracleAndVerify:
    def test_oracle_command(self, capsys):
        code, out, _ = run(capsys, "oracle", "--strands", "2", "--word", "1 1", "--colors", "a b")
        assert code == 0
        assert out.splitlines()[-1].startswith("unit: ")

    @pytest.mark.parametrize("suite", ["identities", "table1"])
    def test_fixed_suites(self, capsys, suite):
        code, out, _ = run(capsys, "verify", "--suite", suite)
        assert code == 0 and "checks passed" in out

    def test_seeded_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "invariance", "--trials", "10", "--seed", "42",
                           "--max-strands", "4", "--max-length", "10")
        assert code == 0
        assert out.strip().endswith("invariance: 40/40 checks passed")

    def test_verbose_lists_checks(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "knots", "--trials", "2", "--verbose")
        assert code == 0 and out.count("PASS ") == 1 + 2 * 4

    def test_bad_suite(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--suite", "nope"])
        assert exc.value.code == 3
