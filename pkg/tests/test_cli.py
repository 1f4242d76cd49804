import json

import pytest

import normforge
from normforge.cli import run

GOLD = "gr8\tgreat\nu\tyou\nok\tok\n\n"
PERFECT = "gr8\tgreat\nu\tyou\nok\tok\n\n"
LAI_PRED = "gr8\tgr8\nu\tu\nok\tok\n\n"


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestEvaluate:
    def test_perfect(self, tmp_path, capsys):
        gold = write(tmp_path / "gold.tsv", GOLD)
        pred = write(tmp_path / "pred.tsv", PERFECT)
        assert run(["evaluate", "--gold", gold, "--pred", pred]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result == {"accuracy": 1.0, "err": 1.0}

    def test_leave_as_is(self, tmp_path, capsys):
        gold = write(tmp_path / "gold.tsv", GOLD)
        pred = write(tmp_path / "pred.tsv", LAI_PRED)
        assert run(["evaluate", "--gold", gold, "--pred", pred]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["accuracy"] == pytest.approx(1 / 3)
        assert result["err"] == pytest.approx(0.0)

    def test_err_null_when_undefined(self, tmp_path, capsys):
        gold = write(tmp_path / "gold.tsv", "ok\tok\n\n")
        pred = write(tmp_path / "pred.tsv", "ok\tok\n\n")
        assert run(["evaluate", "--gold", gold, "--pred", pred]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result == {"accuracy": 1.0, "err": None}

    def test_token_count_mismatch_is_data_error(self, tmp_path, capsys):
        gold = write(tmp_path / "gold.tsv", GOLD)
        pred = write(tmp_path / "pred.tsv", "gr8\tgreat\n\n")
        assert run(["evaluate", "--gold", gold, "--pred", pred]) == 2
        assert "index" in capsys.readouterr().err

    def test_malformed_tsv_is_data_error(self, tmp_path, capsys):
        gold = write(tmp_path / "gold.tsv", "no tab here\n\n")
        pred = write(tmp_path / "pred.tsv", PERFECT)
        assert run(["evaluate", "--gold", gold, "--pred", pred]) == 2
        assert "line 1" in capsys.readouterr().err


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        assert run(["frobnicate"]) == 1
        assert "normforge:" in capsys.readouterr().err

    def test_missing_required_option(self, capsys):
        assert run(["evaluate"]) == 1

    def test_missing_input_file(self, tmp_path, capsys):
        pred = write(tmp_path / "pred.tsv", PERFECT)
        assert run(["evaluate", "--gold", str(tmp_path / "nope.tsv"), "--pred", pred]) == 1
        assert "no such file" in capsys.readouterr().err

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run(["--version"])
        assert excinfo.value.code == 0
        assert normforge.__version__ in capsys.readouterr().out


class TestManifest:
    def test_written_to_stderr(self, tmp_path, capsys):
        gold = write(tmp_path / "gold.tsv", GOLD)
        run(["evaluate", "--gold", gold, "--pred", gold])
        manifest = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert manifest["subcommand"] == "evaluate"
        assert manifest["version"] == normforge.__version__
        assert gold in manifest["input_digests"]
        assert len(manifest["input_digests"][gold]) == 64
        assert manifest["wall_time_s"] >= 0

    def test_written_to_file(self, tmp_path):
        gold = write(tmp_path / "gold.tsv", GOLD)
        manifest_path = tmp_path / "manifest.json"
        run(["--manifest", str(manifest_path), "evaluate", "--gold", gold, "--pred", gold])
        manifest = json.loads(manifest_path.read_text())
        assert manifest["subcommand"] == "evaluate"

    def test_records_seed(self, tmp_path, capsys):
        from normforge.noise_profile import NoiseProfile, save_profile

        profile = tmp_path / "p.json"
        profile.write_bytes(save_profile(NoiseProfile("en")))
        clean = write(tmp_path / "clean.txt", "hello world\n")
        out = tmp_path / "out.tsv"
        run([
            "synthesize", "--profile", str(profile), "--seed", "42",
            "-i", clean, "-o", str(out),
        ])
        manifest = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert manifest["seed"] == 42


class TestPipelines:
    def test_split_partitions(self, tmp_path):
        corpus_text = "".join(f"w{i}\tw{i}\n\n" for i in range(10))
        src = write(tmp_path / "all.tsv", corpus_text)
        train, dev = tmp_path / "train.tsv", tmp_path / "dev.tsv"
        assert run([
            "split", "-i", src, "--dev-fraction", "0.1", "--seed", "1",
            "--train-output", str(train), "--dev-output", str(dev),
        ]) == 0
        train_lines = [l for l in train.read_text().splitlines() if l]
        dev_lines = [l for l in dev.read_text().splitlines() if l]
        assert len(train_lines) == 9 and len(dev_lines) == 1
        assert sorted(train_lines + dev_lines) == sorted(
            l for l in corpus_text.splitlines() if l
        )

    def test_summarize(self, tmp_path, capsys):
        src = write(tmp_path / "c.tsv", GOLD)
        assert run(["summarize", "-i", src, "--language", "en"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["word_count"] == 3
        assert summary["pct_normalized"] == pytest.approx(2 / 3)

    def test_mfr(self, tmp_path):
        train = write(tmp_path / "train.tsv", "u\tyou\nu\tyou\nu\tu\n\n")
        evaluation = write(tmp_path / "eval.tsv", "u\tu\nnew\tnew\n\n")
        out = tmp_path / "pred.tsv"
        assert run(["mfr", "--train", train, "-i", evaluation, "-o", str(out)]) == 0
        assert out.read_text() == "u\tyou\nnew\tnew\n\n"

    def test_estimate_then_synthesize(self, tmp_path, capsys):
        corpus_text = "dont\tdon't\ndont\tdon't\n\ndon't\tdon't\n\n"
        src = write(tmp_path / "c.tsv", corpus_text)
        profile_path = tmp_path / "profile.json"
        assert run([
            "estimate", "-i", src, "--language", "en", "-o", str(profile_path)
        ]) == 0
        profile = json.loads(profile_path.read_text())
        assert profile["rule_probs"]["strip_apostrophe"] == pytest.approx(2 / 3)

        clean = write(tmp_path / "clean.txt", "don't stop\n")
        out = tmp_path / "noisy.tsv"
        assert run([
            "synthesize", "--profile", str(profile_path), "-i", clean,
            "--seed", "0", "-o", str(out),
        ]) == 0
        norms = [line.split("\t")[1] for line in out.read_text().splitlines() if line]
        assert " ".join(n for n in norms if n) == "don't stop"

    def test_profile_dir_env(self, tmp_path, capsys, monkeypatch):
        from normforge.noise_profile import NoiseProfile, save_profile

        profile_dir = tmp_path / "profiles"
        profile_dir.mkdir()
        (profile_dir / "en.json").write_bytes(save_profile(NoiseProfile("en")))
        monkeypatch.setenv("NORMFORGE_PROFILE_DIR", str(profile_dir))
        clean = write(tmp_path / "clean.txt", "hello\n")
        assert run(["synthesize", "--profile", "en.json", "-i", clean, "-o", "-"]) == 0
        assert "hello\thello" in capsys.readouterr().out

    def test_ensemble(self, tmp_path, capsys):
        ref = write(tmp_path / "ref.tsv", "u\tu\n\n")
        a = write(
            tmp_path / "a.jsonl",
            json.dumps({"i": 0, "c": [["you", -0.51], ["u", -0.92]]}) + "\n",
        )
        b = write(
            tmp_path / "b.jsonl",
            json.dumps({"i": 0, "c": [["u", -0.36], ["you", -1.2]]}) + "\n",
        )
        out = tmp_path / "out.tsv"
        assert run(["ensemble", a, b, "--ref", ref, "--out", str(out)]) == 0
        assert out.read_text() == "u\tu\n\n"

    def test_make_word_examples(self, tmp_path, capsys):
        src = write(tmp_path / "c.tsv", "hw\thow\nr\tare\n\n")
        assert run(["make-examples", "--mode", "word", "-i", src, "-o", "-"]) == 0
        lines = [l for l in capsys.readouterr().out.splitlines() if l]
        assert len(lines) == 2
        first = json.loads(lines[0])
        assert first["input"] == "<extra_id_0>hw<extra_id_1> r"
        assert first["target"] == "how"

    def test_tokenize_tsv(self, tmp_path, capsys):
        src = write(
            tmp_path / "dump.txt",
            "Hello there, this line is definitely long enough to keep.\n",
        )
        assert run(["tokenize", "-i", src, "--tsv", "-o", "-"]) == 0
        out = capsys.readouterr().out
        assert "Hello\tHello\n" in out
        assert ",\t,\n" in out
