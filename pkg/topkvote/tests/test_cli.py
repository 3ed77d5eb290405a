import json
import logging
import os
import random

import pytest

from common.config import load_run_config
from common.errors import NoExactMethod, TooLarge
from common.models import QueryKind, QueryResult, QuerySpec, ScoringRule, TiePolicy
from helpers import build
from solver import cli
from solver.dispatch import (
    METHOD_FLOWS,
    METHOD_ORACLE,
    METHOD_SCORESPACE,
    emit_result,
    error_record,
    exit_code,
    run_query,
)
from solver.instance_io import parse_instance_file, write_instance_file
from solver.oracle import oracle_query


@pytest.fixture(autouse=True)
def _reset_logger():
    yield
    logger = logging.getLogger("topkvote")
    for h in list(logger.handlers):
        logger.removeHandler(h)
        h.close()


def _cfg(**kw):
    return load_run_config(env={}, **kw)


@pytest.fixture
def borda4():
    return build(
        ("a", "b", "c", "d"),
        ScoringRule.borda(),
        [([("a", "b"), ("c", "d")], 2), ([("d", "a")], 1), ([], 1)],
    )


@pytest.fixture
def veto4():
    return build(("a", "b", "c", "d"), ScoringRule.veto(), [([("a", "b")], 2), ([("c", "d")], 1)])


@pytest.fixture
def instance_file(tmp_path, abc_plurality):
    path = tmp_path / "abc.json"
    write_instance_file(abc_plurality, str(path))
    return str(path)


class TestRouting:

    def test_ntw_borda_uses_scorespace(self, borda4):
        q = QuerySpec(QueryKind.NTW, candidate=0, k=2)
        res = run_query(borda4, q, _cfg())
        assert res.method == METHOD_SCORESPACE
        assert res.answer == oracle_query(borda4, q, 10 ** 6)[0]

    def test_ptw_borda_falls_back_to_oracle(self, borda4):
        q = QuerySpec(QueryKind.PTW, candidate=3, k=2)
        res = run_query(borda4, q, _cfg())
        assert res.method == METHOD_ORACLE
        with pytest.raises(NoExactMethod):
            run_query(borda4, q, _cfg(method="exact"))

    def test_condorcet_borda_falls_back_to_oracle(self, borda4):
        for kind in (QueryKind.CONDORCET_NEC, QueryKind.CONDORCET_POS):
            q = QuerySpec(kind, members={0, 1}, k=2)
            res = run_query(borda4, q, _cfg())
            assert res.method == METHOD_ORACLE
            assert res.answer == oracle_query(borda4, q, 10 ** 6)[0]
            with pytest.raises(NoExactMethod):
                run_query(borda4, q, _cfg(method="exact"))

    def test_ptw_veto_uses_flows(self, veto4):
        res = run_query(veto4, QuerySpec(QueryKind.PTW, candidate=1, k=3), _cfg())
        assert res.method == METHOD_FLOWS
        assert res.answer is True
        assert res.witness is not None

    def test_ntw_beyond_max_k_uses_oracle(self, veto4):
        res = run_query(veto4, QuerySpec(QueryKind.NTW, candidate=1, k=3), _cfg(max_k=2))
        assert res.method == METHOD_ORACLE

    def test_space_ceiling_falls_back(self, borda4):
        q = QuerySpec(QueryKind.NTW, candidate=0, k=2)
        res = run_query(borda4, q, _cfg(max_points=1))
        assert res.method == METHOD_ORACLE
        assert res.notes and "fallback" in res.notes[0]
        assert res.answer == run_query(borda4, q, _cfg()).answer

    def test_oracle_cap(self, borda4):
        with pytest.raises(TooLarge):
            run_query(borda4, QuerySpec(QueryKind.NTW, candidate=0, k=2), _cfg(method="oracle", cap=2))

    @pytest.mark.parametrize("q, method", [
        (QuerySpec(QueryKind.NW, candidate=0), METHOD_SCORESPACE),
        (QuerySpec(QueryKind.NTS, members={0, 2}, k=2), METHOD_SCORESPACE),
        (QuerySpec(QueryKind.PW, candidate=2), METHOD_FLOWS),
        (QuerySpec(QueryKind.PTS, members={0, 2}, k=2), METHOD_FLOWS),
        (QuerySpec(QueryKind.CONDORCET_POS, members={2}, k=1), METHOD_FLOWS),
        (QuerySpec(QueryKind.CONDORCET_NEC, members={0, 1}, k=2), METHOD_FLOWS),
    ])
    def test_other_routes(self, veto4, q, method):
        res = run_query(veto4, q, _cfg())
        assert res.method == method
        assert res.answer == oracle_query(veto4, q, 10 ** 6)[0]

    def test_exact_matches_oracle_on_corpus(self, plu_veto_corpus, mixed_corpus):
        rng = random.Random(12)
        for inst in plu_veto_corpus[:30] + mixed_corpus[:30]:
            for kind in QueryKind:
                if kind.about_set:
                    k = rng.randint(1, inst.m)
                    q = QuerySpec(kind, members=rng.sample(range(inst.m), k), k=k,
                                  policy=rng.choice(list(TiePolicy)))
                else:
                    k = 1 if kind in (QueryKind.NW, QueryKind.PW) else rng.randint(1, inst.m)
                    q = QuerySpec(kind, candidate=rng.randrange(inst.m), k=k,
                                  policy=rng.choice(list(TiePolicy)))
                try:
                    exact = run_query(inst, q, _cfg(method="exact"))
                except NoExactMethod:
                    continue
                assert exact.answer == run_query(inst, q, _cfg(method="oracle")).answer, (inst, q)


class TestRecords:

    def test_exit_codes(self):
        assert exit_code(True) == 0
        assert exit_code(False) == 1
        assert exit_code(None) == 2

    def test_error_record(self):
        rec = error_record(TooLarge("too many"))
        assert rec == {"answer": None, "error": {"type": "TooLarge", "message": "too many"}}

    def test_emit_result(self, tmp_path, abc_plurality):
        res = run_query(abc_plurality, QuerySpec(QueryKind.PW, candidate=2), _cfg())
        path = tmp_path / "res.json"
        assert emit_result(res, abc_plurality, str(path)) == 0
        rec = json.loads(path.read_text(encoding="utf-8"))
        assert rec["answer"] is True
        assert rec["method"] == METHOD_FLOWS
        assert isinstance(rec["elapsed_ms"], int)
        assert sum(row["mult"] for row in rec["witness"]) == 3
        assert all(sorted(row["order"]) == ["a", "b", "c"] for row in rec["witness"])

    def test_necessary_true_has_no_witness(self, abc_plurality):
        res = QueryResult(answer=True, method=METHOD_SCORESPACE)
        assert "witness" not in res.to_dict(abc_plurality)


class TestMain:

    def test_query_to_stdout(self, instance_file, capsys):
        code = cli.main(["query", instance_file, "--query", "pw", "--candidate", "c"])
        rec = json.loads(capsys.readouterr().out)
        assert code == 0
        assert rec["answer"] is True and "witness" in rec

    def test_false_answer_exit_code(self, instance_file, tmp_path):
        out = tmp_path / "r.json"
        code = cli.main(["query", instance_file, "--query", "ptw", "--candidate", "b", "--k", "1",
                         "--method", "oracle", "--output", str(out)])
        assert code == 1
        assert json.loads(out.read_text(encoding="utf-8"))["method"] == METHOD_ORACLE

    def test_set_query(self, instance_file, capsys):
        code = cli.main(["query", instance_file, "--query", "pts", "--set", "b,c", "--tie-policy", "some"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["answer"] is True

    @pytest.mark.parametrize("argv", [
        ["--query", "pw", "--candidate", "zed"],
        ["--query", "pw"],
        ["--query", "nts", "--set", "a,b", "--k", "1"],
        ["--query", "ntw", "--candidate", "a", "--method", "oracle", "--cap", "3"],
        ["--query", "ntw", "--candidate", "a", "--cap", "0"],
    ])
    def test_errors_exit_2(self, instance_file, capsys, argv):
        code = cli.main(["query", instance_file] + argv)
        rec = json.loads(capsys.readouterr().out)
        assert code == 2
        assert rec["answer"] is None and rec["error"]["type"]

    def test_missing_instance(self, tmp_path, capsys):
        code = cli.main(["query", str(tmp_path / "none.json"), "--query", "nw", "--candidate", "a"])
        assert code == 2
        assert json.loads(capsys.readouterr().out)["error"]["type"] == "IoError"

    def test_env_cap(self, instance_file, capsys, monkeypatch):
        monkeypatch.setenv("TOPKVOTE_ORACLE_CAP", "3")
        code = cli.main(["query", instance_file, "--query", "nw", "--candidate", "a", "--method", "oracle"])
        assert code == 2
        assert json.loads(capsys.readouterr().out)["error"]["type"] == "TooLarge"

    def test_log_file_under_out(self, instance_file, tmp_path, capsys):
        cli.main(["--out", str(tmp_path / "run"), "query", instance_file, "--query", "nw", "--candidate", "a"])
        out = capsys.readouterr()
        log = tmp_path / "run" / "logs" / "topkvote.log"
        assert "[query] nw" in log.read_text(encoding="utf-8")
        assert "[query] nw" in out.err
        json.loads(out.out)


class TestGen:

    def test_x3c_plurality_round_trip(self, tmp_path, capsys):
        path = tmp_path / "x3c.json"
        assert cli.main(["gen", "--family", "x3c-plurality", "--edges", "0,1,2", "--output", str(path)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["output"] == str(path)
        assert summary["source_answer"] is True
        assert summary["query"] == "--query ntw --k 1 --tie-policy given --candidate c*"
        inst = parse_instance_file(str(path))
        assert inst.m == 2 and inst.n == 6
        code = cli.main(["query", str(path)] + summary["query"].split())
        assert code == 1

    def test_domset(self, tmp_path, capsys):
        path = tmp_path / "g.json"
        argv = ["gen", "--family", "domset", "--vertices", "3", "--edges", "0-1,1-2", "--budget", "1",
                "--output", str(path)]
        assert cli.main(argv) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["source_answer"] is True
        assert cli.main(["query", str(path)] + summary["query"].split()) == 0

    def test_random_is_seeded(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        cli.main(["gen", "--family", "random", "--seed", "5", "--output", str(a)])
        cli.main(["gen", "--family", "random", "--seed", "5", "--output", str(b)])
        capsys.readouterr()
        assert a.read_text(encoding="utf-8") == b.read_text(encoding="utf-8")

    def test_reverse_and_embed(self, instance_file, tmp_path, capsys):
        rev = tmp_path / "rev.json"
        assert cli.main(["gen", "--family", "reverse", "--instance", instance_file, "--output", str(rev)]) == 0
        assert parse_instance_file(str(rev)).rule == ScoringRule.veto()
        capsys.readouterr()
        emb = tmp_path / "emb.json"
        assert cli.main(["gen", "--family", "pw-embed", "--instance", instance_file, "--candidate", "c",
                         "--k", "2", "--output", str(emb)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["m"] == 4
        assert summary["query"].startswith("--query ptw --k 2")
        assert cli.main(["query", str(emb)] + summary["query"].split()) == 0

    def test_pw_embed_needs_a_pure_rule(self, tmp_path, capsys):
        src = tmp_path / "custom.json"
        write_instance_file(build(("a", "b", "c"), ScoringRule.custom((2, 1, 0)), [([], 1)]), str(src))
        code = cli.main(["gen", "--family", "pw-embed", "--instance", str(src), "--candidate", "a",
                         "--output", str(tmp_path / "out.json")])
        assert code == 2
        assert json.loads(capsys.readouterr().out)["error"]["type"] == "NotStronglyPure"

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_random_x3c_borda(self, seed, tmp_path, capsys):
        path = tmp_path / "borda.json"
        assert cli.main(["gen", "--family", "x3c-borda", "--seed", str(seed), "--output", str(path)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["source_answer"] is not None
        assert summary["query"].startswith("--query ntw")

    def test_back_to_back_default_outputs(self, tmp_path, capsys):
        argv = ["--out", str(tmp_path), "gen", "--family", "random", "--seed", "1"]
        assert cli.main(argv) == 0
        first = json.loads(capsys.readouterr().out)["output"]
        assert cli.main(argv) == 0
        second = json.loads(capsys.readouterr().out)["output"]
        assert first != second
        assert os.path.exists(first) and os.path.exists(second)
        assert "_s1" in os.path.basename(first)

    def test_default_output_dir(self, tmp_path, capsys):
        assert cli.main(["--out", str(tmp_path), "gen", "--family", "random", "--seed", "1"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["output"].startswith(str(tmp_path / "instances"))
