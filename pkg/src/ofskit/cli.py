"""Command-line front end.

Commands compose into a reproducible batch pipeline:

    ofskit ingest corpus.txt --alphabet inventory.alphabet
    ofskit instantiate proto.ofsp corpus.txt --alphabet inventory.alphabet -o model.ofs
    ofskit stats model.ofs
    ofskit generalise model.ofs --tau 0.18 -o merged.ofs
    ofskit clustertree model.ofs --grid 0.1:1.0:0.1
    ofskit count model.ofs -k 1..3
    ofskit check model.ofs "s t r ae p s"
    ofskit enumerate model.ofs --max-k 2

Exit codes: 0 success (rejected corpus lines are not a failure), 1 usage
error, 2 data or format error, 3 internal invariant failure.  Commands are
deterministic: identical inputs give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .analysis import (
    class_stats,
    count_report,
    enumerate_derivations,
    intersection_table,
)
from .automaton import compile_model
from .corpus import AlphabetSpec, read_corpus, rejects_tsv, tokenize
from .derivations import parse as parse_word
from .errors import InvalidModel, OfsError
from .fileformat import load_model, load_prototype, serialize_model
from .generalise import dendrogram, generalise, similarity_matrix, sweep
from .instantiate import instantiate
from .model import EmptyModel
from .reports import (
    counts_text,
    counts_tsv,
    dendrogram_dot,
    dendrogram_text,
    intersections_text,
    intersections_tsv,
    stats_text,
    stats_tsv,
    sweep_tsv,
)

USAGE_ERROR, DATA_ERROR, INTERNAL_ERROR = 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_tau(text: str) -> Fraction:
    try:
        tau = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"cannot read threshold {text!r}") from None
    if not (0 < tau <= 1):
        raise _UsageError(f"threshold must be in (0, 1], got {text}")
    return tau


def _parse_round(text: str | None) -> int | None:
    if text is None:
        return None
    if not text.startswith("sim:"):
        raise _UsageError("--round expects the form sim:<places>")
    try:
        places = int(text[len("sim:"):])
    except ValueError:
        raise _UsageError("--round expects the form sim:<places>") from None
    if places < 1:
        raise _UsageError("--round places must be positive")
    return places


def _parse_grid(text: str) -> list[Fraction]:
    if ":" in text:
        bits = text.split(":")
        if len(bits) != 3:
            raise _UsageError("--grid expects start:stop:step or a comma list")
        start, stop, step = (Fraction(b) for b in bits)
        if step <= 0:
            raise _UsageError("grid step must be positive")
        taus = []
        tau = start
        while tau <= stop:
            taus.append(tau)
            tau += step
    else:
        taus = [Fraction(b) for b in text.split(",") if b.strip()]
    if not taus:
        raise _UsageError("empty threshold grid")
    for tau in taus:
        if not (0 < tau <= 1):
            raise _UsageError(f"grid value {tau} outside (0, 1]")
    return taus


def _parse_ks(text: str) -> list[int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError:
            raise _UsageError(f"cannot read slot range {text!r}") from None
        if lo_i < 1 or hi_i < lo_i:
            raise _UsageError(f"bad slot range {text!r}")
        return list(range(lo_i, hi_i + 1))
    try:
        k = int(text)
    except ValueError:
        raise _UsageError(f"cannot read slot count {text!r}") from None
    if k < 1:
        raise _UsageError("slot count must be positive")
    return [k]


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(args, inputs: list, params: dict, out_path=None) -> None:
    target = getattr(args, "manifest", None)
    if target is None and out_path is not None:
        target = str(out_path) + ".manifest.json"
    if target is None:
        return
    manifest = {
        "command": args.command,
        "inputs": {str(p): _digest(p) for p in inputs},
        "parameters": {k: str(v) for k, v in sorted(params.items())},
        "version": __version__,
    }
    text = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    Path(target).write_text(text, encoding="utf-8")


def _load_alphabet(args) -> AlphabetSpec:
    if not args.alphabet:
        raise _UsageError("this command needs --alphabet")
    return AlphabetSpec.load(args.alphabet)


def _load_valid_model(path):
    model = load_model(path)
    from .model import validate_model

    violations = validate_model(model)
    if violations:
        raise InvalidModel(violations, message=f"{path} is not a valid model")
    return model


# --------------------------------------------------------------------------
# Commands.

def cmd_ingest(args, out) -> int:
    alphabet = _load_alphabet(args)
    words, rejects = read_corpus(args.corpus, alphabet,
                                 require_stress=args.require_stress,
                                 spaced=args.spaced)
    lines = "".join(w.to_text() + "\n" for w in words)
    if args.output:
        Path(args.output).write_text(lines, encoding="utf-8")
    else:
        out.write(lines)
    if args.rejects:
        Path(args.rejects).write_text(rejects_tsv(rejects), encoding="utf-8")
    print(f"accepted {len(words)} word(s), rejected {len(rejects)} line(s)", file=sys.stderr)
    _write_manifest(args, [args.corpus, args.alphabet],
                    {"require_stress": args.require_stress, "spaced": args.spaced},
                    args.output)
    return 0


def cmd_instantiate(args, out) -> int:
    alphabet = _load_alphabet(args)
    proto = load_prototype(args.prototype, classes=alphabet.class_table)
    words, rejects = read_corpus(args.corpus, alphabet,
                                 require_stress=args.require_stress,
                                 spaced=args.spaced)
    model = instantiate(proto, words)
    if isinstance(model, EmptyModel):
        raise OfsError("instantiation produced the empty model; nothing to write")
    text = serialize_model(model)
    Path(args.output).write_text(text, encoding="utf-8")
    for rule in sorted(model.level0_rules, key=lambda r: r.name.label):
        print(f"{rule.name.label}\t{len(rule.rhs)}", file=sys.stderr)
    print(f"wrote {args.output} ({len(words)} word(s), {len(rejects)} reject(s))", file=sys.stderr)
    _write_manifest(args, [args.prototype, args.corpus, args.alphabet],
                    {"require_stress": args.require_stress, "spaced": args.spaced},
                    args.output)
    return 0


def cmd_stats(args, out) -> int:
    model = _load_valid_model(args.model)
    stats = class_stats(model)
    table = intersection_table(model)
    if args.format == "tsv":
        out.write(stats_tsv(stats))
        out.write("\n")
        out.write(intersections_tsv(table, round_sim=args.round_sim))
    else:
        out.write(stats_text(stats))
        out.write("\n")
        out.write(intersections_text(table, round_sim=args.round_sim))
    _write_manifest(args, [args.model], {"format": args.format})
    return 0


def cmd_generalise(args, out) -> int:
    model = _load_valid_model(args.model)
    tau = _parse_tau(args.tau)
    merged, records = generalise(model, tau)
    Path(args.output).write_text(serialize_model(merged), encoding="utf-8")
    for record in records:
        members = ", ".join(sorted(n.label for n in record.members))
        print(f"merged [{members}] -> {record.new_name.label} (level {record.new_name.level})",
              file=sys.stderr)
    print(f"wrote {args.output} ({len(records)} merge(s) at tau {tau})", file=sys.stderr)
    _write_manifest(args, [args.model], {"tau": tau}, args.output)
    return 0


def cmd_clustertree(args, out) -> int:
    model = _load_valid_model(args.model)
    matrix = similarity_matrix(model)
    tree = dendrogram(matrix)
    if args.format == "tsv":
        out.write(sweep_tsv(sweep(matrix, _parse_grid(args.grid))))
    elif args.format == "dot":
        out.write(dendrogram_dot(tree, round_sim=args.round_sim))
    else:
        out.write(dendrogram_text(tree, round_sim=args.round_sim))
    _write_manifest(args, [args.model], {"format": args.format, "grid": args.grid})
    return 0


def cmd_count(args, out) -> int:
    model = _load_valid_model(args.model)
    ks = _parse_ks(args.k)
    report = count_report(model, ks, distinct=args.distinct)
    out.write(counts_tsv(report) if args.format == "tsv" else counts_text(report))
    _write_manifest(args, [args.model], {"k": args.k, "distinct": args.distinct})
    return 0


def _word_tokens(args, word_text: str) -> list[str]:
    if args.alphabet:
        alphabet = AlphabetSpec.load(args.alphabet)
        tokens = tokenize(word_text, alphabet, spaced=" " in word_text.strip())
        return [t for t in tokens if t not in ("-", "'")]
    return word_text.split()


def cmd_check(args, out) -> int:
    model = _load_valid_model(args.model)
    word = _word_tokens(args, args.word)
    automaton = compile_model(model)
    if automaton.accepts(word):
        derivation = parse_word(model, word)
        if derivation is None:
            raise AssertionError("automaton accepted but the parser found no derivation")
        out.write(f"accepted\t{derivation.bracket()}\n")
    else:
        out.write("rejected\n")
    _write_manifest(args, [args.model], {"word": args.word})
    return 0


def _leaf_count(derivation) -> int:
    if derivation.leaf is not None:
        return 1
    return sum(_leaf_count(c) for c in derivation.children)


def cmd_enumerate(args, out) -> int:
    model = _load_valid_model(args.model)
    if args.max_k < 0:
        raise _UsageError("--max-k must be non-negative")
    count = 0
    for word, derivation in enumerate_derivations(model, args.max_k):
        text = " ".join(word) if word else "."
        out.write(f"{_leaf_count(derivation)}\t{text}\t{derivation.bracket()}\n")
        count += 1
    print(f"{count} derivation(s) with up to {args.max_k} leaf slot(s)", file=sys.stderr)
    _write_manifest(args, [args.model], {"max_k": args.max_k})
    return 0


# --------------------------------------------------------------------------
# Wiring.

def build_parser() -> _Parser:
    parser = _Parser(prog="ofskit", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"ofskit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, needs_alphabet=False, formats=("text", "tsv")):
        p.add_argument("--alphabet", help="alphabet/class file" + (" (required)" if needs_alphabet else ""))
        p.add_argument("--round", dest="round_spec", default=None,
                       help="display rounding, e.g. sim:2")
        p.add_argument("--require-stress", action=argparse.BooleanOptionalAction, default=True,
                       help="keep only lines with exactly one stress marker")
        p.add_argument("--spaced", action="store_true",
                       help="corpus lines are whitespace-separated tokens")
        p.add_argument("--format", choices=formats, default="text")
        p.add_argument("--manifest", help="write a run manifest to this path")

    p = sub.add_parser("ingest", help="tokenize and filter a word list")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", help="write the normalized corpus here (default stdout)")
    p.add_argument("--rejects", help="write the reject log (TSV) here")
    common(p, needs_alphabet=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("instantiate", help="fill a prototype's level-0 sets from a corpus")
    p.add_argument("prototype")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    common(p, needs_alphabet=True)
    p.set_defaults(func=cmd_instantiate)

    p = sub.add_parser("stats", help="class sizes, unique membership, intersections")
    p.add_argument("model")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("generalise", help="merge similar level-0 sets at a threshold")
    p.add_argument("model")
    p.add_argument("--tau", required=True, help="threshold in (0, 1]; decimals or fractions like 7/37")
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=cmd_generalise)

    p = sub.add_parser("clustertree", help="dendrogram over the similarity matrix")
    p.add_argument("model")
    p.add_argument("--grid", default="0.1:1.0:0.1",
                   help="thresholds for --format tsv sweeps (start:stop:step or comma list)")
    common(p, formats=("text", "tsv", "dot"))
    p.set_defaults(func=cmd_clustertree)

    p = sub.add_parser("count", help="count derivations by leaf slots")
    p.add_argument("model")
    p.add_argument("-k", required=True, help="slot count or range like 1..3")
    p.add_argument("--distinct", action="store_true",
                   help="also count distinct strings (determinizes; budget via OFSKIT_STATE_BUDGET)")
    common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("check", help="test membership of a word and print a derivation")
    p.add_argument("model")
    p.add_argument("word", help="space-separated tokens, or a transcription when --alphabet is given")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="list every derivation up to a slot bound")
    p.add_argument("model")
    p.add_argument("--max-k", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_enumerate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.round_sim = _parse_round(args.round_spec)
        return args.func(args, sys.stdout)
    except _UsageError as exc:
        print(f"ofskit: usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (OfsError, OSError) as exc:
        print(f"ofskit: error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except AssertionError as exc:
        print(f"ofskit: internal invariant failure: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
