"""Command-line surface binding all operations into reproducible invocations.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 external
service error. No subcommand leaves a partial output file behind: files are
written to a temporary sibling and atomically renamed.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import harness
from .aligners import AlignerServiceClient, LexicalAligner, DEFAULT_SIM_THRESHOLD
from .editops import corpus_wer, doc_similarity, edit_align
from .errors import DataError, ServiceError
from .mwer import mwer_segment
from .pipeline import ResegJob, xl_resegment, xlr_resegment
from .refine import BoundaryDecision
from .textseg import NormalizationMode, read_segmented, read_stream, write_segmented

ENDPOINT_ENV_VAR = "RESEGEVAL_ALIGNER_ENDPOINT"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write_text_atomic(path: Path, text: str) -> None:
    fd, tmp_name = tempfile.mkstemp(prefix=path.name + ".", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _mode(args: argparse.Namespace) -> NormalizationMode:
    return NormalizationMode.from_str(args.mode)


def _make_aligner(args: argparse.Namespace):
    if args.aligner == "lexical":
        return LexicalAligner(sim_threshold=args.sim_threshold)
    endpoint = args.endpoint or os.environ.get(ENDPOINT_ENV_VAR)
    if not endpoint:
        raise DataError(
            f"service aligner selected but no endpoint given (use --endpoint or ${ENDPOINT_ENV_VAR})"
        )
    return AlignerServiceClient.from_endpoint(endpoint)


def _decisions_tsv(decisions: Sequence[BoundaryDecision]) -> str:
    lines = ["boundary_index\told_split\tnew_split\tcross_before\tcross_after"]
    for d in decisions:
        lines.append(
            f"{d.boundary_index}\t{d.old_split}\t{d.new_split}"
            f"\t{d.cross_count_before}\t{d.cross_count_after}"
        )
    return "".join(line + "\n" for line in lines)


def _batch_paths(inputs: Sequence[Path], output: Path) -> list[tuple[list[Path], Path]]:
    """Pair matching filenames across input directories with output paths."""
    names = sorted(p.name for p in inputs[0].iterdir() if p.is_file())
    if not names:
        raise DataError(f"{inputs[0]}: no input files found")
    jobs = []
    for name in names:
        group = [d / name for d in inputs]
        for p in group[1:]:
            if not p.is_file():
                raise DataError(f"{p}: missing counterpart for {name}")
        jobs.append((group, output / name))
    output.mkdir(parents=True, exist_ok=True)
    return jobs


def _run_batchable(args: argparse.Namespace, inputs: list[Path], out: Path,
                   run_one: Callable[[list[Path], Path], None]) -> int:
    """Run over single files, or over matching files when inputs are directories."""
    dir_flags = [p.is_dir() for p in inputs]
    if any(dir_flags):
        if not all(dir_flags):
            raise DataError("either all inputs are files or all are directories")
        jobs = _batch_paths(inputs, out)
        with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
            futures = [pool.submit(run_one, group, dst) for group, dst in jobs]
            for future in futures:
                future.result()
        return 0
    run_one(inputs, out)
    return 0


def _cmd_wer(args: argparse.Namespace) -> int:
    mode = _mode(args)
    ref = read_segmented(args.ref, mode, args.char_level)
    hyp = read_segmented(args.hyp, mode, args.char_level)
    wer = corpus_wer(ref, hyp)
    subs = ins = dels = correct = 0
    for rseg, hseg in zip(ref.segments, hyp.segments):
        summary, _ = edit_align(rseg, hseg)
        subs += summary.substitutions
        ins += summary.insertions
        dels += summary.deletions
        correct += summary.correct
    print("wer\tsubstitutions\tinsertions\tdeletions\tcorrect\tref_len")
    print(f"{wer:.6f}\t{subs}\t{ins}\t{dels}\t{correct}\t{subs + dels + correct}")
    return 0


def _cmd_segment(args: argparse.Namespace) -> int:
    mode = _mode(args)

    def run_one(paths: list[Path], dst: Path) -> None:
        hyp_path, ref_path = paths
        stream = read_stream(hyp_path, mode, args.char_level)
        ref = read_segmented(ref_path, mode, args.char_level)
        write_segmented(mwer_segment(stream, ref).resegmented, dst)

    return _run_batchable(args, [Path(args.hyp), Path(args.ref)], Path(args.out), run_one)


def _cmd_resegment_xl(args: argparse.Namespace) -> int:
    mode = _mode(args)

    def run_one(paths: list[Path], dst: Path) -> None:
        asr_path, bt_path = paths
        stream = tuple(read_stream(asr_path, mode, args.char_level))
        bt = read_segmented(bt_path, mode, args.char_level)
        job = ResegJob(asr_stream=stream, bt=bt, ref_translation=bt, mode=mode)
        write_segmented(xl_resegment(job), dst)

    return _run_batchable(args, [Path(args.asr), Path(args.bt)], Path(args.out), run_one)


def _cmd_resegment_xlr(args: argparse.Namespace) -> int:
    mode = _mode(args)
    decisions_log = Path(args.decisions_log) if args.decisions_log else None

    def run_one(paths: list[Path], dst: Path) -> None:
        asr_path, bt_path, ref_path = paths
        stream = tuple(read_stream(asr_path, mode, args.char_level))
        bt = read_segmented(bt_path, mode, args.char_level)
        ref = read_segmented(ref_path, mode, args.char_level)
        aligner = _make_aligner(args)
        try:
            job = ResegJob(
                asr_stream=stream, bt=bt, ref_translation=ref, aligner=aligner, mode=mode
            )
            refined, decisions = xlr_resegment(job)
        finally:
            if isinstance(aligner, AlignerServiceClient):
                aligner.close()
        write_segmented(refined, dst)
        if decisions_log is not None:
            log_path = decisions_log / dst.name if decisions_log.is_dir() else decisions_log
            _write_text_atomic(log_path, _decisions_tsv(decisions))

    return _run_batchable(
        args, [Path(args.asr), Path(args.bt), Path(args.ref)], Path(args.out), run_one
    )


def _cmd_correlate(args: argparse.Namespace) -> int:
    synth = harness.read_scores(args.synthetic)
    manual = harness.read_scores(args.manual)
    if len(synth) != len(manual):
        raise DataError(
            f"score files differ in line count: {args.synthetic} has {len(synth)}, "
            f"{args.manual} has {len(manual)}"
        )
    if args.shuffled is None:
        print("pearson")
        print(f"{harness.pearson(synth, manual):.6f}")
        return 0
    shuffled = harness.read_scores(args.shuffled)
    if len(shuffled) != len(manual):
        raise DataError(
            f"score files differ in line count: {args.shuffled} has {len(shuffled)}, "
            f"{args.manual} has {len(manual)}"
        )
    report = harness.correlation_report(manual, synth, shuffled, r_upper=args.r_upper)
    print("r_synth\tr_shuff\tr_upper\tgap_recovery_pct")
    print(
        f"{report.r_synth:.6f}\t{report.r_shuff:.6f}"
        f"\t{report.r_upper:.6f}\t{report.gap_recovery_pct:.6f}"
    )
    return 0


def _cmd_shuffle(args: argparse.Namespace) -> int:
    mode = _mode(args)
    doc = read_segmented(args.input, mode, args.char_level)
    write_segmented(harness.shuffle_segments(doc, args.seed), Path(args.out))
    return 0


def _cmd_random_split(args: argparse.Namespace) -> int:
    mode = _mode(args)
    stream = read_stream(args.input, mode, args.char_level)
    doc = harness.random_split(stream, args.seed, min_len=args.min_len, max_len=args.max_len)
    write_segmented(doc, Path(args.out))
    return 0


def _cmd_recommend(args: argparse.Namespace) -> int:
    print(harness.recommend_source(args.wer, threshold=args.threshold).value)
    return 0


def _cmd_count_wins(args: argparse.Namespace) -> int:
    records = harness.read_win_records(args.records)
    table = harness.count_wins(records, threshold=args.threshold)
    lines = ["bucket\tasr_wins\tbt_wins\tties"]
    lines.append(f"wer<={table.threshold:.6f}\t{table.asr_wins_le}\t{table.bt_wins_le}\t{table.ties_le}")
    lines.append(f"wer>{table.threshold:.6f}\t{table.asr_wins_gt}\t{table.bt_wins_gt}\t{table.ties_gt}")
    lines.append(f"total\t{table.asr_wins}\t{table.bt_wins}\t{table.ties}")
    text = "".join(line + "\n" for line in lines)
    if args.out:
        _write_text_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_cosine_doc(args: argparse.Namespace) -> int:
    mode = _mode(args)
    src = read_segmented(args.src, mode, args.char_level)
    tgt = read_segmented(args.tgt, mode, args.char_level)
    endpoint = args.endpoint or os.environ.get(ENDPOINT_ENV_VAR)
    if not endpoint:
        raise DataError(
            f"no embedding endpoint given (use --endpoint or ${ENDPOINT_ENV_VAR})"
        )
    with AlignerServiceClient.from_endpoint(endpoint) as client:
        similarity = doc_similarity(src, tgt, client)
    print(f"{similarity:.6f}")
    return 0


def _add_mode_flags(parser: argparse.ArgumentParser, default: str) -> None:
    parser.add_argument("--mode", choices=["np", "wp"], default=default,
                        help=f"text normalization mode (default: {default})")
    parser.add_argument("--char-level", action="store_true",
                        help="treat every non-space character as a token")


def _add_jobs_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel workers when inputs are directories (default: 1)")


def _add_aligner_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--aligner", choices=["lexical", "service"], default="lexical",
                        help="word aligner for the refinement stage (default: lexical)")
    parser.add_argument("--sim-threshold", type=float, default=DEFAULT_SIM_THRESHOLD,
                        help="similarity threshold for the lexical aligner")
    parser.add_argument("--endpoint", default=None,
                        help=f"aligner service endpoint (cmd:... or tcp:host:port; default ${ENDPOINT_ENV_VAR})")


def _build_parser() -> _Parser:
    parser = _Parser(prog="resegeval",
                     description="Cross-lingual re-segmentation and metric meta-evaluation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wer", parents=[], help="corpus WER of a hypothesis against a reference")
    p.add_argument("ref")
    p.add_argument("hyp")
    _add_mode_flags(p, default="np")
    p.set_defaults(func=_cmd_wer)

    p = sub.add_parser("segment", help="minimum-WER re-segmentation of a hypothesis stream")
    p.add_argument("hyp", help="hypothesis stream file (or directory)")
    p.add_argument("ref", help="segmented reference file (or directory)")
    p.add_argument("out", help="output segmented file (or directory)")
    _add_mode_flags(p, default="wp")
    _add_jobs_flag(p)
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("resegment-xl", help="cross-lingual re-segmentation via back-translation")
    p.add_argument("asr", help="source-language stream file (or directory)")
    p.add_argument("bt", help="segmented back-translation file (or directory)")
    p.add_argument("out", help="output segmented file (or directory)")
    _add_mode_flags(p, default="wp")
    _add_jobs_flag(p)
    p.set_defaults(func=_cmd_resegment_xl)

    p = sub.add_parser("resegment-xlr",
                       help="cross-lingual re-segmentation with boundary refinement")
    p.add_argument("asr", help="source-language stream file (or directory)")
    p.add_argument("bt", help="segmented back-translation file (or directory)")
    p.add_argument("ref", help="segmented reference translation file (or directory)")
    p.add_argument("out", help="output segmented file (or directory)")
    p.add_argument("--decisions-log", default=None,
                   help="write per-boundary decisions as TSV to this path (or directory)")
    _add_mode_flags(p, default="wp")
    _add_aligner_flags(p)
    _add_jobs_flag(p)
    p.set_defaults(func=_cmd_resegment_xlr)

    p = sub.add_parser("correlate", help="Pearson correlation between two score files")
    p.add_argument("synthetic", help="synthetic-source score file")
    p.add_argument("manual", help="manual-source score file")
    p.add_argument("--shuffled", default=None, help="shuffled-source score file (enables gap recovery)")
    p.add_argument("--r-upper", type=float, default=1.0, help="upper correlation bound (default 1.0)")
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("shuffle", help="randomly permute the segments of a document")
    p.add_argument("input")
    p.add_argument("out")
    p.add_argument("--seed", type=int, default=0)
    _add_mode_flags(p, default="wp")
    p.set_defaults(func=_cmd_shuffle)

    p = sub.add_parser("random-split", help="split a token stream into random-length segments")
    p.add_argument("input")
    p.add_argument("out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-len", type=int, default=5)
    p.add_argument("--max-len", type=int, default=100)
    _add_mode_flags(p, default="wp")
    p.set_defaults(func=_cmd_random_split)

    p = sub.add_parser("recommend", help="recommend a synthetic source type for a given ASR WER")
    p.add_argument("wer", type=float)
    p.add_argument("--threshold", type=float, default=harness.DEFAULT_WER_THRESHOLD)
    p.set_defaults(func=_cmd_recommend)

    p = sub.add_parser("count-wins", help="aggregate ASR-vs-BT win records into a bucketed table")
    p.add_argument("records", help="tab-separated win records with a header row")
    p.add_argument("--threshold", type=float, default=harness.DEFAULT_WER_THRESHOLD)
    p.add_argument("--out", default=None, help="write the table here instead of stdout")
    p.set_defaults(func=_cmd_count_wins)

    p = sub.add_parser("cosine-doc", help="mean per-segment embedding similarity of two documents")
    p.add_argument("src")
    p.add_argument("tgt")
    p.add_argument("--endpoint", default=None,
                   help=f"embedding service endpoint (default ${ENDPOINT_ENV_VAR})")
    _add_mode_flags(p, default="wp")
    p.set_defaults(func=_cmd_cosine_doc)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"resegeval: error: {exc}", file=sys.stderr)
        return 2
    except ServiceError as exc:
        print(f"resegeval: service error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"resegeval: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
