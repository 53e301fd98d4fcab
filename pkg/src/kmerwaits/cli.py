"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 computation error. All output is
TSV (or plain k-mer lines for pcm-extract) and deterministic byte-for-byte
for a fixed invocation, whatever the worker count.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import chain as chainmod
from . import fit as fitmod
from . import pcm as pcmmod
from . import periodicity as permod
from .seqmodel import KMer, default_params, load_params, parse_kmer, validate_model

MAX_CLI_K = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _params_from(args):
    if getattr(args, "params", None):
        try:
            return load_params(args.params)
        except OSError as exc:
            raise UsageError(f"cannot read parameter file: {exc}") from None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return default_params()


def _kmer_from(text: str) -> KMer:
    try:
        b = parse_kmer(text.upper())
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if b.k > MAX_CLI_K:
        raise UsageError(f"k-mer longer than {MAX_CLI_K}")
    return b


def _collect_words(args) -> list[KMer]:
    texts = list(args.kmers)
    if args.file:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                for line in fh:
                    word = line.split("#", 1)[0].strip()
                    if word:
                        texts.append(word)
        except OSError as exc:
            raise UsageError(f"cannot read word file: {exc}") from None
    if not texts:
        raise UsageError("no k-mers given (positional arguments or --file)")
    return [_kmer_from(t) for t in texts]


def _int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers") from None


def cmd_validate(args, out) -> int:
    params = _params_from(args)
    report = validate_model(params)
    print("check\tseverity\tdetail", file=out)
    for f in report.findings:
        print(f"{f.check}\t{f.severity}\t{f.detail}", file=out)
    return 0 if report.ok else 2


def cmd_waittime(args, out) -> int:
    b = _kmer_from(args.kmer)
    if args.length < b.k:
        raise UsageError("pattern longer than sequence")
    params = _params_from(args)
    p = chainmod.emergence_probability_for(b, params, args.length)
    e = chainmod.expected_waiting_time(p)
    print(_header(args), file=out)
    print(chainmod.format_tsv_row(b.text, b.k, args.length, p, e, "-",
                                  args.years_per_generation), file=out)
    return 0


def _header(args) -> str:
    header = chainmod.TSV_HEADER
    if getattr(args, "years_per_generation", None) is not None:
        header += "\tE_Tn_years"
    return header


def cmd_scan(args, out) -> int:
    if not 1 <= args.k <= 12:
        raise UsageError("scan supports k between 1 and 12")
    if args.length < args.k:
        raise UsageError("pattern longer than sequence")
    params = _params_from(args)
    rows = chainmod.scan_all(args.k, args.length, params, jobs=args.jobs)
    lines = [_header(args)]
    lines += [
        chainmod.format_tsv_row(r.kmer, r.k, r.n, r.probability,
                                r.waiting_generations, r.rank,
                                args.years_per_generation)
        for r in rows
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_periods(args, out) -> int:
    words = _collect_words(args)
    print("kmer\tk\tmin_period\tperiod_set", file=out)
    for w in words:
        periods = sorted(permod.period_set(w))
        p0 = permod.minimal_period(w)
        print("{}\t{}\t{}\t{}".format(
            w.text, w.k,
            "-" if p0 is None else p0,
            ",".join(str(p) for p in periods) if periods else "-",
        ), file=out)
    return 0


def cmd_profile(args, out) -> int:
    words = _collect_words(args)
    if len({w.k for w in words}) != 1:
        raise UsageError("profile needs words of equal length")
    prof = permod.profile(words)
    print("class\tcount\tproportion", file=out)
    for cls in prof.classes():
        count = prof.counts[cls]
        print(f"{permod.class_label(cls)}\t{count}\t{count / prof.total:.6f}",
              file=out)
    return 0


def cmd_enrich(args, out) -> int:
    values = _int_list(args.table, "--table")
    if len(values) != 4:
        raise UsageError("--table expects four values: a,b,c,d")
    try:
        table = permod.ContingencyTable2x2(*values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    p = permod.fisher_greater(table)
    print("a\tb\tc\td\tp_greater", file=out)
    print(f"{table.a}\t{table.b}\t{table.c}\t{table.d}\t{p:.6e}", file=out)
    return 0


def cmd_pcm_extract(args, out) -> int:
    all_words = []
    for path in args.pfm:
        try:
            matrix = pcmmod.load_pcm(path)
        except OSError as exc:
            raise UsageError(f"cannot read PCM file: {exc}") from None
        except ValueError as exc:
            raise UsageError(f"{path}: {exc}") from None
        best = pcmmod.max_score(matrix)
        print(f"# max_score={best} threshold={args.theta * best:g}", file=out)
        words = pcmmod.extract_kmers(matrix, args.theta)
        for w in words:
            print(w.text, file=out)
        all_words.extend(w.text for w in words)
    if len(args.pfm) > 1:
        print(f"# kmers_raw={len(all_words)} kmers_distinct={len(set(all_words))}",
              file=out)
    return 0


def cmd_fit(args, out) -> int:
    b = _kmer_from(args.kmer)
    anchors = _int_list(args.anchors, "--anchors")
    if len(anchors) != 2 or anchors[0] == anchors[1]:
        raise UsageError("--anchors expects two distinct lengths N1,N2")
    evals = _int_list(args.eval, "--eval")
    if min(anchors + evals) < b.k:
        raise UsageError("pattern longer than sequence")
    params = _params_from(args)
    c = chainmod.chain_for(b, params)
    model = fitmod.fit_two_anchors(
        (anchors[0], chainmod.emergence_probability(c, anchors[0])),
        (anchors[1], chainmod.emergence_probability(c, anchors[1])),
    )
    print("n\tp_pred\tp_direct\trel_err\tE_T_pred", file=out)
    for n in evals:
        p_pred, e_pred = fitmod.predict(model, n)
        p_direct = chainmod.emergence_probability(c, n)
        rel = abs(p_pred - p_direct) / p_direct
        print(f"{n}\t{p_pred:.8e}\t{p_direct:.8e}\t{rel:.3e}\t{e_pred:.3f}",
              file=out)
    return 0


def _default_jobs() -> int:
    env = os.environ.get("KMERWAITS_JOBS", "")
    if env.strip().isdigit() and int(env) >= 1:
        return int(env)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kmerwaits",
                     description="Waiting times for k-mer emergence under the "
                                 "M0 substitution model")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, help="check model parameters")
    p.add_argument("--params", help="parameter file (default: built-in estimates)")

    p = add("waittime", cmd_waittime, help="waiting time for one k-mer")
    p.add_argument("--kmer", required=True)
    p.add_argument("--length", type=int, required=True, help="sequence length n")
    p.add_argument("--params")
    p.add_argument("--years-per-generation", type=float, nargs="?", const=20.0,
                   default=None, help="append a calendar-years column")

    p = add("scan", cmd_scan, help="waiting times for all k-mers of length k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--params")
    p.add_argument("--out", help="write the table to a file instead of stdout")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--years-per-generation", type=float, nargs="?", const=20.0,
                   default=None)

    p = add("periods", cmd_periods, help="period set and minimal period")
    p.add_argument("kmers", nargs="*")
    p.add_argument("--file", help="read k-mers from a file, one per line")

    p = add("profile", cmd_profile, help="periodicity class profile of a word set")
    p.add_argument("kmers", nargs="*")
    p.add_argument("--file")

    p = add("enrich", cmd_enrich, help="one-sided Fisher exact test")
    p.add_argument("--table", required=True, help="a,b,c,d counts")

    p = add("pcm-extract", cmd_pcm_extract, help="k-mers above a PCM score threshold")
    p.add_argument("--pfm", action="append", required=True,
                   help="PCM file (repeatable)")
    p.add_argument("--theta", type=float, default=0.95)

    p = add("fit", cmd_fit, help="two-anchor linear fit of the emergence probability")
    p.add_argument("--kmer", required=True)
    p.add_argument("--anchors", required=True, help="N1,N2")
    p.add_argument("--eval", required=True, help="N3[,N4,...]")
    p.add_argument("--params")

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args, sys.stdout)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
