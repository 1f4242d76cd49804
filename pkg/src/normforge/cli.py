"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error.  Metrics go to stdout
as JSON, data to files or stdout; diagnostics and the run manifest go to
stderr (or --manifest FILE).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time

import normforge
from normforge import corpus, corrupt, metrics, noise_profile, seq2seq, twokenize

PROFILE_DIR_ENV = "NORMFORGE_PROFILE_DIR"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise UsageError(message)


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    with open(path, "rb") as f:
        return f.read()


def _write_output(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as f:
            f.write(data)


def _resolve_profile_path(path: str) -> str:
    if os.path.sep not in path and not os.path.exists(path):
        base = os.environ.get(PROFILE_DIR_ENV)
        if base:
            candidate = os.path.join(base, path)
            if os.path.exists(candidate):
                return candidate
    return path


class Manifest:
    def __init__(self, subcommand: str, args: argparse.Namespace):
        self.start = time.monotonic()
        options = {
            k: v for k, v in sorted(vars(args).items()) if k not in ("func", "manifest")
        }
        self.doc = {
            "subcommand": subcommand,
            "options": options,
            "input_digests": {},
            "seed": options.get("seed"),
            "version": normforge.__version__,
        }

    def record_input(self, path: str, data: bytes) -> None:
        self.doc["input_digests"][path] = hashlib.sha256(data).hexdigest()

    def emit(self, path: str | None) -> None:
        self.doc["wall_time_s"] = round(time.monotonic() - self.start, 6)
        line = json.dumps(self.doc, ensure_ascii=False)
        if path:
            with open(path, "w", encoding="utf-8") as f:
                f.write(line + "\n")
        else:
            print(line, file=sys.stderr)


def _iter_input_lines(path: str, manifest: Manifest):
    data = _read_input(path)
    manifest.record_input(path, data)
    return data.splitlines(keepends=False)


def _load_dataset(path: str, language: str, manifest: Manifest) -> corpus.Dataset:
    data = _read_input(path)
    manifest.record_input(path, data)
    return corpus.parse_dataset(data, language)


def cmd_clean(args, manifest: Manifest) -> int:
    data = _read_input(args.input)
    manifest.record_input(args.input, data)
    stats = twokenize.CleanStats()
    lines = twokenize.clean_lines(data.splitlines(), stats)
    _write_output(args.output, ("".join(line + "\n" for line in lines)).encode("utf-8"))
    print(
        f"kept={stats.kept} dropped_short={stats.dropped_short} "
        f"dropped_colon={stats.dropped_colon} invalid_utf8={stats.dropped_invalid_utf8}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_tokenize(args, manifest: Manifest) -> int:
    data = _read_input(args.input)
    manifest.record_input(args.input, data)
    out: list[str] = []
    for tokens in twokenize.tokenize_stream(data.splitlines()):
        if args.tsv:
            out.extend(f"{t}\t{t}\n" for t in tokens)
            out.append("\n")
        else:
            out.append(" ".join(tokens) + "\n")
    _write_output(args.output, "".join(out).encode("utf-8"))
    return EXIT_OK


def cmd_estimate(args, manifest: Manifest) -> int:
    dataset = _load_dataset(args.input, args.language, manifest)
    config = noise_profile.EstimationConfig(min_count=args.min_count)
    profile = noise_profile.estimate_profile(dataset, config)
    _write_output(args.output, noise_profile.save_profile(profile))
    return EXIT_OK


def cmd_synthesize(args, manifest: Manifest) -> int:
    profile_path = _resolve_profile_path(args.profile)
    profile_bytes = _read_input(profile_path)
    manifest.record_input(profile_path, profile_bytes)
    profile = noise_profile.load_profile(profile_bytes)
    data = _read_input(args.input)
    manifest.record_input(args.input, data)
    clean = (line.split(" ") for line in data.decode("utf-8").splitlines() if line)
    config = corrupt.CorruptionConfig(seed=args.seed, threads=args.threads)
    sentences = corrupt.synthesize(clean, profile, config)
    dataset = corpus.Dataset(profile.language, tuple(sentences))
    _write_output(args.output, corpus.serialize_dataset(dataset))
    return EXIT_OK


def cmd_make_examples(args, manifest: Manifest) -> int:
    config = seq2seq.EncodingConfig()
    if args.mode == "word":
        dataset = _load_dataset(args.input, args.language, manifest)
        examples = (
            example
            for sentence in dataset.sentences
            for example in seq2seq.build_word_examples(sentence, config)
        )
    else:
        data = _read_input(args.input)
        manifest.record_input(args.input, data)
        rng = random.Random(args.seed)
        examples = (
            seq2seq.build_span_mask_example(line, rng, config=config)
            for line in data.decode("utf-8").splitlines()
            if len(line) >= 2
        )
    if args.mix:
        mix_data = _read_input(args.mix)
        manifest.record_input(args.mix, mix_data)
        synthetic = seq2seq.read_examples_jsonl(mix_data.decode("utf-8").splitlines())
        examples = seq2seq.mix_streams(examples, synthetic, args.seed)
    lines = seq2seq.write_examples_jsonl(examples, with_ids=args.ids, config=config)
    _write_output(args.output, ("".join(line + "\n" for line in lines)).encode("utf-8"))
    return EXIT_OK


def cmd_split(args, manifest: Manifest) -> int:
    dataset = _load_dataset(args.input, args.language, manifest)
    train, dev = corpus.split_dataset(dataset, args.dev_fraction, args.seed)
    _write_output(args.train_output, corpus.serialize_dataset(train))
    _write_output(args.dev_output, corpus.serialize_dataset(dev))
    return EXIT_OK


def cmd_mfr(args, manifest: Manifest) -> int:
    train = _load_dataset(args.train, args.language, manifest)
    evaluation = _load_dataset(args.input, args.language, manifest)
    model = metrics.mfr_train(train)
    pred = metrics.mfr_predict(model, evaluation)
    _write_output(
        args.output,
        corpus.serialize_dataset(metrics.predictions_to_dataset(evaluation, pred)),
    )
    return EXIT_OK


def cmd_evaluate(args, manifest: Manifest) -> int:
    gold = _load_dataset(args.gold, args.language, manifest)
    pred_dataset = _load_dataset(args.pred, args.language, manifest)
    pred = metrics.predictions_from_dataset(pred_dataset)
    accuracy = metrics.word_accuracy(gold, pred, caseless=args.caseless)
    result = {"accuracy": accuracy}
    try:
        result["err"] = metrics.err(gold, pred, caseless=args.caseless)
    except metrics.EvaluationError:
        result["err"] = None
    print(json.dumps(result))
    return EXIT_OK


def cmd_ensemble(args, manifest: Manifest) -> int:
    reference = _load_dataset(args.ref, args.language, manifest)
    candidate_sets = []
    for path in args.candidates:
        data = _read_input(path)
        manifest.record_input(path, data)
        candidate_sets.append(
            metrics.read_candidates_jsonl(data.decode("utf-8").splitlines())
        )
    pred = metrics.ensemble(candidate_sets, k=args.k)
    _write_output(
        args.out,
        corpus.serialize_dataset(metrics.predictions_to_dataset(reference, pred)),
    )
    return EXIT_OK


def cmd_summarize(args, manifest: Manifest) -> int:
    dataset = _load_dataset(args.input, args.language, manifest)
    print(corpus.summarize(dataset).to_json())
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="normforge", description=__doc__)
    parser.add_argument("--version", action="version", version=normforge.__version__)
    parser.add_argument("--manifest", help="write the run manifest to this file")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, language=True, output=True):
        if language:
            p.add_argument("--language", default="und")
        if output:
            p.add_argument("--output", "-o", default="-")

    p = sub.add_parser("clean", help="filter raw dump lines")
    p.add_argument("--input", "-i", default="-")
    common(p, language=False)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("tokenize", help="clean, segment and tokenize dump text")
    p.add_argument("--input", "-i", default="-")
    p.add_argument("--tsv", action="store_true", help="emit corpus TSV with norm = raw")
    common(p, language=False)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("estimate", help="estimate a noise profile from a corpus")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--min-count", type=int, default=2)
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("synthesize", help="corrupt clean tokenized text")
    p.add_argument("--profile", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--input", "-i", default="-")
    common(p, language=False)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("make-examples", help="build seq2seq JSONL examples")
    p.add_argument("--mode", choices=("word", "span"), required=True)
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--ids", action="store_true", help="include encoded id arrays")
    p.add_argument("--mix", help="synthetic JSONL to mix in 1:1")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_make_examples)

    p = sub.add_parser("split", help="sentence-level train/dev split")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--dev-fraction", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-output", required=True)
    p.add_argument("--dev-output", required=True)
    common(p, output=False)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("mfr", help="most-frequent-replacement baseline")
    p.add_argument("--train", required=True)
    p.add_argument("--input", "-i", required=True)
    common(p)
    p.set_defaults(func=cmd_mfr)

    p = sub.add_parser("evaluate", help="accuracy and ERR of predictions")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--caseless", action="store_true")
    common(p, output=False)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ensemble", help="aggregate candidate files")
    p.add_argument("candidates", nargs="+")
    p.add_argument("--ref", required=True, help="reference TSV supplying raw tokens")
    p.add_argument("--out", default="-")
    p.add_argument("-k", type=int, default=16)
    common(p, output=False)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("summarize", help="corpus summary as JSON")
    p.add_argument("--input", "-i", required=True)
    common(p, output=False)
    p.set_defaults(func=cmd_summarize)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"normforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    manifest = Manifest(args.subcommand, args)
    try:
        code = args.func(args, manifest)
    except UsageError as exc:
        print(f"normforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        corpus.CorpusFormatError,
        noise_profile.ProfileError,
        metrics.EvaluationError,
        seq2seq.SentinelCollisionError,
        ValueError,
        OSError,
    ) as exc:
        print(f"normforge: {exc}", file=sys.stderr)
        return EXIT_DATA
    manifest.emit(args.manifest)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
