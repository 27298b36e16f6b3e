"""Single command-line entry point exposing the pipeline stages as subcommands.

Configuration precedence is flags > config file (--config, JSON) > defaults;
the defaults encode the reference protocol constants (20 runs, 5 folds, 10
trials, 3 epochs, beam 5, 50 warm-up steps). Every subcommand persists its
resolved configuration next to its outputs and refuses to overwrite existing
outputs unless --force is given; `evaluate` instead resumes from whatever
cells already exist. The work directory can also come from SUFFGEN_WORK_DIR.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

logger = logging.getLogger(__name__)

DEFAULTS = {
    "seed": 0,
    "runs": 20,
    "folds": 5,
    "trials": 10,
    "generator_variant": "supervised",
    "generator_model": "tiny-char",
    "classifier_model": "trigram",
    "jobs": 1,
    "alpha_level": "ordinal",
}

WORK_DIR_ENV = "SUFFGEN_WORK_DIR"


class StageError(RuntimeError):
    """A pipeline stage failed; carries the message for structured reporting."""


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    parser = _build_parser()
    args = parser.parse_args(argv)
    settings = _resolve_settings(args)
    try:
        return args.handler(args, settings)
    except StageError as exc:
        print(f"error[stage]: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # domain errors become structured stage failures
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="suffgen",
        description="Conclusion infilling and sufficiency classification pipeline",
    )
    parser.add_argument("--config", type=Path, default=None, help="JSON file with default settings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-corpus", help="parse essays, attach labels, build pairs and folds")
    p.add_argument("--essays", type=Path, required=True, help="directory of .txt/.ann essay pairs")
    p.add_argument("--labels", type=Path, required=True, help="tab-separated sufficiency label table")
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--folds", type=int, default=None)
    p.add_argument("--essay-column", default="essay_id")
    p.add_argument("--text-column", default="argument_text")
    p.add_argument("--label-column", default="label")
    p.add_argument("--force", action="store_true")
    p.set_defaults(handler=_cmd_build_corpus)

    p = sub.add_parser("train-generator", help="train or bind one denoiser per (run, fold)")
    p.add_argument("--pairs", type=Path, required=True)
    p.add_argument("--folds", type=Path, required=True)
    p.add_argument("--variant", choices=("unsupervised", "supervised"), required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--model", default=None, help="denoiser spec: tiny-char or pretrained:<path>")
    p.add_argument("--runs", type=int, default=None, help="limit to the first N runs of the fold plan")
    p.add_argument("--force", action="store_true")
    p.set_defaults(handler=_cmd_train_generator)

    p = sub.add_parser("generate", help="decode test-fold pairs with the trained models")
    p.add_argument("--model", type=Path, required=True, help="train-generator output directory")
    p.add_argument("--pairs", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(handler=_cmd_generate)

    p = sub.add_parser("train-classifier", help="train one classifier cell (run, fold, variant)")
    p.add_argument("--arguments", type=Path, required=True)
    p.add_argument("--generated", type=Path, default=None)
    p.add_argument("--variant", required=True)
    p.add_argument("--folds", type=Path, required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--run", type=int, default=1)
    p.add_argument("--fold", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--model", default=None, help="encoder spec: trigram or pretrained:<path>")
    p.add_argument("--generator-run", type=int, default=1)
    p.add_argument("--force", action="store_true")
    p.set_defaults(handler=_cmd_train_classifier)

    p = sub.add_parser("predict", help="classify serialized variant inputs with a trained model")
    p.add_argument("--model", type=Path, required=True, help="train-classifier output directory")
    p.add_argument("--inputs", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("evaluate", help="run the (variant x run x fold) matrix and aggregate")
    p.add_argument("--matrix", type=Path, default=None, help="JSON matrix definition")
    p.add_argument("--corpus", type=Path, required=True, help="build-corpus output directory")
    p.add_argument("--generated", type=Path, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--desk-scale", action="store_true", help="shrink to 2 runs / 2 trials")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("analyze-annotations", help="agreement and majority analysis of ratings")
    p.add_argument("--records", type=Path, required=True)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--level", choices=("nominal", "ordinal", "interval"), default=None)
    p.add_argument("--force", action="store_true")
    p.set_defaults(handler=_cmd_analyze_annotations)

    p = sub.add_parser("report", help="render reports from an evaluate output directory")
    p.add_argument("--in", dest="in_dir", type=Path, required=True)
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(handler=_cmd_report)

    return parser


def _resolve_settings(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path is not None:
        settings.update(json.loads(Path(config_path).read_text()))
    return settings


def _setting(args: argparse.Namespace, settings: dict, flag: str, key: str | None = None):
    value = getattr(args, flag, None)
    return value if value is not None else settings[key or flag]


def _default_out(args: argparse.Namespace, stage: str) -> Path:
    if getattr(args, "out", None) is not None:
        return args.out
    work = os.environ.get(WORK_DIR_ENV)
    if work:
        return Path(work) / stage
    raise StageError(f"--out not given and {WORK_DIR_ENV} is not set")


def _ensure_fresh(path: Path, force: bool) -> None:
    if path.exists() and not force:
        raise StageError(f"{path} already exists; pass --force to overwrite")


def _write_config(out_dir: Path, payload: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(json.dumps(payload, indent=2, sort_keys=True))


# --- subcommand handlers ---


def _cmd_build_corpus(args: argparse.Namespace, settings: dict) -> int:
    from suffgen.corpus.build import build_corpus, write_arguments, write_folds, write_pairs
    from suffgen.harness.reporting import render_stats_block

    out = _default_out(args, "corpus")
    for name in ("arguments.jsonl", "pairs.jsonl", "folds.jsonl", "stats.json"):
        _ensure_fresh(out / name, args.force)
    seed = _setting(args, settings, "seed")
    runs = _setting(args, settings, "runs")
    folds = _setting(args, settings, "folds")

    build = build_corpus(
        args.essays,
        args.labels,
        runs=runs,
        folds=folds,
        seed=seed,
        essay_column=args.essay_column,
        text_column=args.text_column,
        label_column=args.label_column,
    )
    out.mkdir(parents=True, exist_ok=True)
    write_arguments(out / "arguments.jsonl", build.arguments)
    write_pairs(out / "pairs.jsonl", build.pairs)
    write_folds(out / "folds.jsonl", build.fold_plans)
    (out / "stats.json").write_text(
        json.dumps(
            {"statistics": build.statistics.as_dict(), "discrepancies": list(build.discrepancies)},
            indent=2,
            sort_keys=True,
        )
    )
    _write_config(
        out,
        {
            "command": "build-corpus",
            "essays": str(args.essays),
            "labels": str(args.labels),
            "seed": seed,
            "runs": runs,
            "folds": folds,
        },
    )
    print(render_stats_block(build.statistics, build.discrepancies), end="")
    return 0


def _cmd_train_generator(args: argparse.Namespace, settings: dict) -> int:
    from suffgen.corpus.build import read_folds, read_pairs
    from suffgen.harness.generation import run_generator_training

    out = _default_out(args, "generator")
    _ensure_fresh(out / "manifest.jsonl", args.force)
    seed = _setting(args, settings, "seed")
    trials = _setting(args, settings, "trials")
    model_spec = _setting(args, settings, "model", "generator_model")

    pairs = read_pairs(args.pairs)
    fold_plans = read_folds(args.folds)
    run_generator_training(
        pairs,
        fold_plans,
        variant=args.variant,
        n_trials=trials,
        seed=seed,
        out_dir=out,
        model_spec=model_spec,
        runs_limit=args.runs,
    )
    print(f"trained generator models under {out}")
    return 0


def _cmd_generate(args: argparse.Namespace, settings: dict) -> int:
    from suffgen.corpus.build import read_pairs
    from suffgen.harness.generation import run_generation
    from suffgen.harness.reporting import score_generated

    _ensure_fresh(args.out, args.force)
    pairs = read_pairs(args.pairs)
    generated = run_generation(args.model, pairs, args.out)
    metrics = score_generated(generated, {p.pair_id: p.conclusion for p in pairs})
    metrics_path = Path(str(args.out) + ".metrics.json")
    metrics_path.write_text(json.dumps(metrics, indent=2, sort_keys=True))
    fallback = sum(1 for g in generated if g.extraction_fallback)
    print(f"generated {len(generated)} conclusions ({fallback} extraction fallbacks) -> {args.out}")
    return 0


def _load_generated_lookup(
    generated_path: Path | None, pairs, run_index: int, variant: str | None = None
) -> dict[str, str]:
    if generated_path is None:
        return {}
    from suffgen.harness.generation import (
        GENERATED_SCHEMA,
        generated_from_record,
        primary_generated_lookup,
    )
    from suffgen.records import read_records

    generated = [generated_from_record(r) for r in read_records(generated_path, GENERATED_SCHEMA)]
    return primary_generated_lookup(generated, pairs, run_index, variant=variant)


def _cmd_train_classifier(args: argparse.Namespace, settings: dict) -> int:
    from suffgen.classifier.models import make_encoder
    from suffgen.classifier.training import ClassifierSearchSpace, hyperparameter_trials_clf
    from suffgen.classifier.variants import VariantKind, variant_input_to_record
    from suffgen.corpus.build import read_arguments, read_folds, read_pairs
    from suffgen.harness.matrix import build_cell_inputs
    from suffgen.records import write_records
    from suffgen.seeding import derive_seed

    out = _default_out(args, "classifier")
    _ensure_fresh(out / "config.json", args.force)
    seed = _setting(args, settings, "seed")
    trials = _setting(args, settings, "trials")
    model_spec = _setting(args, settings, "model", "classifier_model")
    variant = VariantKind(args.variant)

    arguments = read_arguments(args.arguments)
    fold_plans = read_folds(args.folds)
    plan = next(
        (p for p in fold_plans if p.run_index == args.run and p.fold_index == args.fold), None
    )
    if plan is None:
        raise StageError(f"fold plan has no run {args.run} fold {args.fold}")

    generated_lookup = {}
    if args.generated is not None:
        pairs_path = args.arguments.parent / "pairs.jsonl"
        if not pairs_path.exists():
            raise StageError(f"need {pairs_path} to resolve primary conclusions")
        generated_lookup = _load_generated_lookup(
            args.generated, read_pairs(pairs_path), args.generator_run
        )

    train, val, test = build_cell_inputs(arguments, plan, generated_lookup, variant)
    cell_seed = derive_seed(seed, "cell", variant.value, args.run, args.fold)
    config, trained, trial_log = hyperparameter_trials_clf(
        ClassifierSearchSpace(),
        train,
        val,
        model_factory=lambda s: make_encoder(model_spec, s),
        n_trials=trials,
        seed=cell_seed,
    )
    out.mkdir(parents=True, exist_ok=True)
    trained.model.save(out / ("model" if model_spec.startswith("pretrained:") else "model.pt"))
    for split, inputs in (("train", train), ("val", val), ("test", test)):
        write_records(
            out / f"inputs-{split}.jsonl",
            "variant-inputs/v1",
            (variant_input_to_record(vi) for vi in inputs),
        )
    write_records(
        out / "trials.jsonl",
        "clf-trials/v1",
        (
            {
                "config": t.config.as_dict(),
                "val_macro_f1": t.val_macro_f1,
                "selected_epoch": t.selected_epoch,
            }
            for t in trial_log
        ),
    )
    _write_config(
        out,
        {
            "command": "train-classifier",
            "variant": variant.value,
            "run": args.run,
            "fold": args.fold,
            "seed": seed,
            "trials": trials,
            "model_spec": model_spec,
            "best_config": config.as_dict(),
            "selected_epoch": trained.selected_epoch,
        },
    )
    print(f"trained {variant.value} classifier (selected epoch {trained.selected_epoch}) -> {out}")
    return 0


def _cmd_predict(args: argparse.Namespace, settings: dict) -> int:
    from suffgen.classifier.models import TrigramHashClassifier
    from suffgen.classifier.training import TrainedClassifier, predict, prediction_to_record
    from suffgen.classifier.variants import VariantKind, variant_input_from_record
    from suffgen.records import read_records, write_records

    _ensure_fresh(args.out, args.force)
    config = json.loads((args.model / "config.json").read_text())
    if config.get("model_spec", "trigram").startswith("pretrained:"):
        from suffgen.classifier.pretrained import PretrainedEncoderClassifier

        model = PretrainedEncoderClassifier.load(args.model / "model")
    else:
        model = TrigramHashClassifier.load(args.model / "model.pt")
    trained = TrainedClassifier(
        model=model,
        kind=VariantKind(config["variant"]),
        selected_epoch=config.get("selected_epoch", 0),
        epoch_val_f1=(),
    )
    inputs = [
        variant_input_from_record(r) for r in read_records(args.inputs, "variant-inputs/v1")
    ]
    predictions = predict(trained, inputs)
    write_records(args.out, "predictions/v1", (prediction_to_record(p) for p in predictions))
    print(f"wrote {len(predictions)} predictions -> {args.out}")
    return 0


def _cmd_evaluate(args: argparse.Namespace, settings: dict) -> int:
    from suffgen.classifier.variants import GENERATED_KINDS, VariantKind
    from suffgen.corpus.build import read_arguments, read_folds, read_pairs
    from suffgen.harness.matrix import ExperimentMatrix, run_matrix
    from suffgen.harness.reporting import render_assessment_table, significance_table
    from suffgen.records import write_records

    out = _default_out(args, "evaluate")
    seed = _setting(args, settings, "seed")
    jobs = _setting(args, settings, "jobs")

    if args.matrix is not None:
        matrix = ExperimentMatrix.from_dict(json.loads(args.matrix.read_text()))
    else:
        matrix = ExperimentMatrix(
            variants=tuple(VariantKind),
            runs=settings["runs"],
            folds=settings["folds"],
            trials_per_fold=settings["trials"],
            seed=seed,
            generator_variant=settings["generator_variant"],
        )
    if args.desk_scale:
        matrix = ExperimentMatrix.from_dict(
            {
                **matrix.as_dict(),
                "runs": min(2, matrix.runs),
                "trials_per_fold": min(2, matrix.trials_per_fold),
                "model_spec": "trigram",
            }
        )

    arguments = read_arguments(args.corpus / "arguments.jsonl")
    fold_plans = read_folds(args.corpus / "folds.jsonl")
    pairs = read_pairs(args.corpus / "pairs.jsonl")
    needs_generated = any(v in GENERATED_KINDS for v in matrix.variants)
    if needs_generated and args.generated is None:
        raise StageError("matrix includes generated-bearing variants; pass --generated")
    generated_lookup = _load_generated_lookup(
        args.generated, pairs, matrix.generator_run, matrix.generator_variant
    )
    if needs_generated and not generated_lookup:
        raise StageError(
            f"no {matrix.generator_variant!r} conclusions from generation run "
            f"{matrix.generator_run} in {args.generated}"
        )

    aggregates = run_matrix(matrix, arguments, fold_plans, generated_lookup, out, n_jobs=jobs)
    significance = significance_table(aggregates)

    write_records(out / "aggregates.jsonl", "aggregates/v1", (a.as_dict() for a in aggregates))
    (out / "significance.json").write_text(
        json.dumps([s.as_dict() for s in significance], indent=2, sort_keys=True)
    )
    stats_path = args.corpus / "stats.json"
    if stats_path.exists():
        (out / "stats.json").write_text(stats_path.read_text())
    if args.generated is not None:
        sidecar = Path(str(args.generated) + ".metrics.json")
        if sidecar.exists():
            (out / "gen-metrics.json").write_text(sidecar.read_text())
    _write_config(out, {"command": "evaluate", "matrix": matrix.as_dict(), "jobs": jobs})

    scale_note = f"models={matrix.model_spec}, runs={matrix.runs}, trials={matrix.trials_per_fold}"
    if args.desk_scale or matrix.model_spec == "trigram":
        scale_note += " (desk-scale stand-ins; reference constants are full-scale)"
    table = render_assessment_table(aggregates, significance, scale_note=scale_note)
    (out / "report.txt").write_text(table)
    print(table, end="")
    return 0


def _cmd_analyze_annotations(args: argparse.Namespace, settings: dict) -> int:
    from suffgen.metrics.agreement import (
        APPROACHES,
        QUESTIONS,
        UndefinedAlpha,
        annotation_from_record,
        krippendorff_alpha,
        majority_and_rank,
    )
    from suffgen.records import read_records

    level = _setting(args, settings, "level", "alpha_level")
    records = [
        annotation_from_record(r) for r in read_records(args.records, "annotations/v1")
    ]
    summaries = majority_and_rank(records)

    lines = [
        f"annotation analysis (alpha level: {level})",
        "",
        f"{'question':<9} {'approach':<14} {'alpha':>7} {'majority':>9} "
        f"{'1':>4} {'2':>4} {'3':>4} {'4':>4} {'5':>4} {'score':>7} {'rank':>6}",
    ]
    payload = []
    for question in QUESTIONS:
        for approach in APPROACHES:
            if (question, approach) not in summaries:
                continue
            summary = summaries[(question, approach)]
            group = [r for r in records if r.question == question and r.approach == approach]
            try:
                alpha = krippendorff_alpha(group, level=level)
                alpha_text = f"{alpha:7.2f}"
            except UndefinedAlpha:
                alpha, alpha_text = None, "  undef"
            dist = summary.score_distribution
            lines.append(
                f"{question:<9} {approach:<14} {alpha_text} {summary.majority_rate:>8.0%} "
                f"{dist.get(1, 0):>4} {dist.get(2, 0):>4} {dist.get(3, 0):>4} "
                f"{dist.get(4, 0):>4} {dist.get(5, 0):>4} "
                f"{summary.mean_score:>7.2f} {summary.mean_rank:>6.2f}"
            )
            payload.append({"alpha": alpha, "alpha_level": level, **summary.as_dict()})
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        _ensure_fresh(args.out, args.force)
        args.out.write_text(json.dumps(payload, indent=2, sort_keys=True))
    print(text, end="")
    return 0


def _cmd_report(args: argparse.Namespace, settings: dict) -> int:
    from suffgen.harness.matrix import AggregateResult
    from suffgen.harness.reporting import (
        render_assessment_table,
        render_generation_table,
        render_stats_block,
        significance_table,
    )
    from suffgen.corpus.arguments import CorpusStatistics
    from suffgen.records import read_records

    in_dir = args.in_dir
    aggregates_path = in_dir / "aggregates.jsonl"
    sections: list[str] = []
    if args.format == "records":
        if not aggregates_path.exists():
            raise StageError(f"{aggregates_path} not found")
        print(aggregates_path.read_text(), end="")
        return 0

    stats_path = in_dir / "stats.json"
    if stats_path.exists():
        payload = json.loads(stats_path.read_text())
        sections.append(
            render_stats_block(CorpusStatistics(**payload["statistics"]), payload["discrepancies"])
        )
    metrics_path = in_dir / "gen-metrics.json"
    if metrics_path.exists():
        sections.append(render_generation_table(json.loads(metrics_path.read_text())))
    if aggregates_path.exists():
        aggregates = [
            AggregateResult.from_dict(r) for r in read_records(aggregates_path, "aggregates/v1")
        ]
        config_path = in_dir / "config.json"
        scale_note = ""
        if config_path.exists():
            matrix = json.loads(config_path.read_text()).get("matrix", {})
            scale_note = (
                f"models={matrix.get('model_spec', '?')}, runs={matrix.get('runs', '?')}, "
                f"trials={matrix.get('trials_per_fold', '?')}"
            )
        sections.append(render_assessment_table(aggregates, significance_table(aggregates), scale_note))
    if not sections:
        sections.append(f"nothing to report under {in_dir}\n")
    print("\n".join(sections), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
