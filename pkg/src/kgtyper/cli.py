"""Command-line entry point.

Subcommands mirror the pipeline stages; every flag with a long name can be
overridden by an environment variable ``KGTYPER_<NAME>`` (dashes become
underscores, e.g. ``KGTYPER_DIM=200``). Precedence: explicit flag, then
environment, then built-in default.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .cnn import CnnConfig, CnnModel, train_cnn
from .corpus import build_vocabulary, read_corpus, triples_to_corpus, write_corpus
from .embeddings import (
    NGramConfig,
    TrainingConfig,
    build_cooccurrence,
    load_embeddings,
    save_embeddings,
    train_cbow,
    train_fasttext,
    train_glove,
)
from .errors import DataError, KgTyperError, NumericalError, StageError
from .evaluation import (
    accuracy,
    align_predictions,
    build_dataset,
    external_overlap,
    hits_at_k,
    most_specific_class,
    read_label_map,
    read_labels,
    read_rankings,
    split,
    write_labels,
    write_rankings,
)
from .graph import DEFAULT_ROOTS, KnowledgeGraph, build_hierarchy
from .ntriples import RDF_TYPE, ParseStats, parse_ntriples_file, write_ntriples
from .pipeline import TRAINERS, PipelineConfig, run_pipeline
from .similarity import build_class_vectors, fine_grained_candidates, similarity_rank
from .synth import generate_synthetic_kg

logger = logging.getLogger(__name__)

ENV_PREFIX = "KGTYPER_"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

_TRUE_WORDS = frozenset({"1", "true", "yes", "on"})
_FALSE_WORDS = frozenset({"0", "false", "no", "off"})


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage by default; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_bool(raw: str, env_name: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in _TRUE_WORDS:
        return True
    if lowered in _FALSE_WORDS:
        return False
    raise ValueError(f"{env_name}: expected a boolean, got {raw!r}")


def _env_name(flag: str) -> str:
    return ENV_PREFIX + flag.lstrip("-").replace("-", "_").upper()


def _opt(parser: argparse.ArgumentParser, flag: str, **kwargs) -> None:
    """add_argument with the default overridable from the environment."""
    env_name = _env_name(flag)
    raw = os.environ.get(env_name)
    if raw is not None:
        if kwargs.get("action") in ("store_true", "store_false"):
            kwargs["default"] = _parse_bool(raw, env_name)
        elif kwargs.get("action") == "append":
            kwargs["default"] = raw.split(os.pathsep)
        else:
            convert = kwargs.get("type", str)
            try:
                kwargs["default"] = convert(raw)
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{env_name}: cannot parse {raw!r}") from exc
        kwargs.pop("required", None)
    parser.add_argument(flag, **kwargs)


def _add_roots(parser: argparse.ArgumentParser) -> None:
    _opt(
        parser,
        "--root",
        action="append",
        default=None,
        metavar="IRI",
        help="hierarchy root class (repeatable; default owl:Thing and dbo:Agent)",
    )


def _roots(args) -> tuple[str, ...]:
    return tuple(args.root) if getattr(args, "root", None) else tuple(sorted(DEFAULT_ROOTS))


def _load_graph(args, path: Path) -> tuple[KnowledgeGraph, object, ParseStats]:
    stats = ParseStats()
    kg = KnowledgeGraph.from_triples(
        parse_ntriples_file(path, strict=args.strict, stats=stats)
    )
    hierarchy = build_hierarchy(kg, roots=_roots(args))
    return kg, hierarchy, stats


# ---------------------------------------------------------------- handlers


def _cmd_ingest(args) -> int:
    kg, hierarchy, stats = _load_graph(args, args.infile)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            write_ntriples(kg.triples, handle)
    if args.stats:
        subjects = {t.subject.value for t in kg.triples}
        entities = {s for s in subjects if s not in kg.classes()}
        print(f"triples\t{kg.num_triples}")
        print(f"entities\t{len(entities)}")
        print(f"classes\t{len(kg.classes())}")
        print(f"parse_errors\t{stats.skipped}")
    return EXIT_OK


def _cmd_corpus(args) -> int:
    kg, _, _ = _load_graph(args, args.infile)
    exclude = frozenset() if args.keep_type_triples else frozenset({RDF_TYPE})
    build = triples_to_corpus(kg, exclude_predicates=exclude)
    write_corpus(args.out, build.sentences)
    print(f"sentences\t{len(build.sentences)}")
    print(f"skipped_literal_objects\t{build.skipped_literals}")
    print(f"skipped_excluded_predicates\t{build.skipped_excluded}")
    return EXIT_OK


def _training_config(args) -> TrainingConfig:
    return TrainingConfig(
        dimension=args.dim,
        window=args.window,
        epochs=args.epochs,
        initial_learning_rate=args.lr,
        negative_samples=args.negative,
        seed=args.seed,
    )


def _cmd_train_embeddings(args) -> int:
    corpus = read_corpus(args.infile)
    vocabulary = build_vocabulary(corpus, min_count=args.min_count)
    config = _training_config(args)
    if args.model == "word2vec":
        model = train_cbow(corpus, vocabulary, config)
    elif args.model == "fasttext":
        ngram = NGramConfig(n_min=args.n_min, n_max=args.n_max, bucket_count=args.buckets)
        model = train_fasttext(corpus, vocabulary, config, ngram)
    else:
        cooccurrence = build_cooccurrence(corpus, vocabulary, config.window)
        model = train_glove(cooccurrence, vocabulary, config, args.x_max, args.alpha)
    save_embeddings(model, args.out)
    print(f"saved\t{len(vocabulary)}\tvectors\tdim\t{config.dimension}\t{args.out}")
    return EXIT_OK


def _cmd_build_dataset(args) -> int:
    kg, hierarchy, _ = _load_graph(args, args.infile)
    dataset = build_dataset(
        kg, hierarchy, args.num_classes, args.entities_per_class, args.seed
    )
    dataset = split(dataset, args.train_fraction, args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_labels(out_dir / "dataset.tsv", dataset.examples)
    write_labels(out_dir / "train.tsv", dataset.train_examples())
    write_labels(out_dir / "test.tsv", dataset.test_examples())
    print(f"classes\t{len(dataset.classes)}")
    print(f"train\t{len(dataset.train_ids)}")
    print(f"test\t{len(dataset.test_ids)}")
    return EXIT_OK


def _cmd_train_classifier(args) -> int:
    embeddings = load_embeddings(args.vectors)
    examples = read_labels(args.dataset)
    config = CnnConfig(
        hidden_units=args.hidden,
        batch_size=args.batch_size,
        epochs=args.epochs,
        learning_rate=args.lr,
        seed=args.seed,
    )
    model = train_cnn(examples, embeddings, config)
    model.save(args.out)
    final_loss = model.epoch_losses[-1] if model.epoch_losses else float("nan")
    print(f"classes\t{len(model.classes)}")
    print(f"final_epoch_loss\t{final_loss:.6f}")
    print(f"model\t{args.out}")
    return EXIT_OK


def _cmd_predict(args) -> int:
    embeddings = load_embeddings(args.vectors)
    rows: list = []
    if args.method == "cnn":
        if args.model is None:
            raise ValueError("--model is required with --method cnn")
        model = CnnModel.load(args.model)
        for entity in args.entity:
            if entity not in embeddings:
                raise DataError(f"no vector for entity {entity}")
            rows.append(model.predict(entity, embeddings.vector_of(entity)))
    else:
        if args.infile is None or args.train is None:
            raise ValueError("--in and --train are required with --method similarity")
        kg, hierarchy, _ = _load_graph(args, args.infile)
        members: dict[str, list[str]] = {}
        for member, class_iri in read_labels(args.train):
            members.setdefault(class_iri, []).append(member)
        class_vectors = build_class_vectors(members, embeddings)
        for entity in args.entity:
            coarse = most_specific_class(kg.type_assertions.get(entity, ()), hierarchy)
            if coarse is None:
                raise DataError(f"no type assertion for entity {entity}")
            candidates = fine_grained_candidates(hierarchy, coarse) & set(class_vectors)
            if not candidates:
                raise DataError(f"no candidate class has a class vector for {entity}")
            rows.append(similarity_rank(entity, candidates, class_vectors, embeddings))

    if args.out is not None:
        write_rankings(args.out, rows, top_k=args.top_k)
    else:
        for prediction in rows:
            for class_iri, score in prediction.top_k(args.top_k):
                print(f"{prediction.entity}\t{class_iri}\t{score:.6f}")
    return EXIT_OK


def _parse_metric_names(raw: str) -> list[str]:
    names = [token.strip() for token in raw.split(",") if token.strip()]
    if not names:
        raise ValueError("--metrics must name at least one metric")
    for name in names:
        if name != "accuracy" and not name.startswith("hits@"):
            raise ValueError(f"unknown metric {name!r}")
        if name.startswith("hits@"):
            k = name[len("hits@") :]
            if not k.isdigit() or int(k) < 1:
                raise ValueError(f"unknown metric {name!r}")
    return names


def _cmd_evaluate(args) -> int:
    gold = read_label_map(args.gold)
    predictions = align_predictions(gold, read_rankings(args.predictions))
    values: dict[str, float] = {}
    for name in _parse_metric_names(args.metrics):
        if name == "accuracy":
            values[name] = accuracy(predictions, gold)
        else:
            values[name] = hits_at_k(predictions, gold, int(name[len("hits@") :]))
    for name, value in values.items():
        print(f"{name}\t{value:.4f}")
    if args.json is not None:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(values, handle, sort_keys=True, indent=2)
            handle.write("\n")
    return EXIT_OK


def _cmd_compare_external(args) -> int:
    gold = read_label_map(args.dataset)
    external = read_label_map(args.external)
    report = external_overlap(gold, external)
    inter_pct = 100.0 * report.intersection / report.our_entities if report.our_entities else 0.0
    match_pct = 100.0 * report.matching_types / report.intersection if report.intersection else 0.0
    print(f"our_entities\t{report.our_entities}")
    print(f"intersection\t{report.intersection}\t{inter_pct:.1f}%")
    print(f"matching_types\t{report.matching_types}\t{match_pct:.1f}%")
    return EXIT_OK


def _cmd_synth(args) -> int:
    result = generate_synthetic_kg(
        args.out_dir,
        args.num_classes,
        args.entities_per_class,
        args.predicates_per_class,
        args.noise,
        args.seed,
    )
    print(f"kg\t{result.kg_path}")
    print(f"gold\t{result.gold_path}")
    print(f"triples\t{result.num_triples}")
    print(f"entities\t{result.num_entities}")
    return EXIT_OK


def _cmd_pipeline(args) -> int:
    embedding = _training_config(args)
    cnn = CnnConfig(
        hidden_units=args.hidden,
        batch_size=args.batch_size,
        epochs=args.cnn_epochs,
        learning_rate=args.cnn_lr,
        seed=args.seed,
    )
    config = PipelineConfig(
        input_nt=args.infile,
        out_dir=args.out_dir,
        trainer=args.trainer,
        roots=_roots(args),
        strict=args.strict,
        hold_out_type_triples=not args.keep_type_triples,
        min_count=args.min_count,
        embedding=embedding,
        ngram=NGramConfig(n_min=args.n_min, n_max=args.n_max, bucket_count=args.buckets),
        x_max=args.x_max,
        alpha=args.alpha,
        cnn=cnn,
        num_classes=args.num_classes,
        entities_per_class=args.entities_per_class,
        train_fraction=args.train_fraction,
        seed=args.seed,
        resume=args.resume,
    )
    result = run_pipeline(config)
    print(result.report_text())
    print(f"metrics\t{result.paths['metrics.json']}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_embedding_options(parser: argparse.ArgumentParser) -> None:
    _opt(parser, "--dim", type=int, default=100, help="vector dimensionality")
    _opt(parser, "--window", type=int, default=2, help="context window size")
    _opt(parser, "--epochs", type=int, default=5, help="training epochs")
    _opt(parser, "--lr", type=float, default=0.05, help="initial learning rate")
    _opt(parser, "--negative", type=int, default=5, help="negative samples per position")
    _opt(parser, "--min-count", type=int, default=1, help="vocabulary frequency floor")
    _opt(parser, "--n-min", type=int, default=3, help="shortest character n-gram")
    _opt(parser, "--n-max", type=int, default=6, help="longest character n-gram")
    _opt(parser, "--buckets", type=int, default=2_000_000, help="n-gram hash buckets")
    _opt(parser, "--x-max", type=float, default=100.0, help="co-occurrence weight cap")
    _opt(parser, "--alpha", type=float, default=0.75, help="co-occurrence weight exponent")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kgtyper", description=__doc__.splitlines()[0])
    _opt(parser, "--seed", type=int, default=1, help="seed for every random component")
    strict_default = True
    env_strict = os.environ.get(_env_name("--strict"))
    env_lenient = os.environ.get(_env_name("--lenient"))
    if env_strict is not None:
        strict_default = _parse_bool(env_strict, _env_name("--strict"))
    if env_lenient is not None:
        strict_default = not _parse_bool(env_lenient, _env_name("--lenient"))
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument(
        "--strict",
        dest="strict",
        action="store_true",
        default=strict_default,
        help="fail on the first malformed input line (default)",
    )
    mode.add_argument(
        "--lenient",
        dest="strict",
        action="store_false",
        help="skip malformed input lines with a warning",
    )
    _opt(parser, "--jobs", type=int, default=1, help="worker count (stages run sequentially)")
    _opt(parser, "--verbose", action="store_true", default=False, help="log progress to stderr")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("ingest", help="parse an N-Triples dump and report graph statistics")
    _opt(p, "--in", dest="infile", type=Path, required=True, help="N-Triples input")
    _opt(p, "--out", type=Path, default=None, help="write normalized triples here")
    _opt(p, "--stats", action="store_true", default=False, help="print graph statistics")
    _add_roots(p)
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("corpus", help="serialize IRI-object triples as three-token sentences")
    _opt(p, "--in", dest="infile", type=Path, required=True, help="N-Triples input")
    _opt(p, "--out", type=Path, required=True, help="corpus output path")
    _opt(
        p,
        "--keep-type-triples",
        action="store_true",
        default=False,
        help="keep rdf:type triples in the corpus (default: held out)",
    )
    _add_roots(p)
    p.set_defaults(handler=_cmd_corpus)

    p = sub.add_parser("train-embeddings", help="train token vectors on a sentence corpus")
    _opt(p, "--model", choices=TRAINERS, default="word2vec", help="embedding trainer")
    _opt(p, "--in", dest="infile", type=Path, required=True, help="corpus input")
    _opt(p, "--out", type=Path, required=True, help="vector output path")
    _add_embedding_options(p)
    p.set_defaults(handler=_cmd_train_embeddings)

    p = sub.add_parser("build-dataset", help="sample a labeled dataset and split it 80/20")
    _opt(p, "--in", dest="infile", type=Path, required=True, help="N-Triples input")
    _opt(p, "--out-dir", type=Path, required=True, help="directory for dataset TSVs")
    _opt(p, "--num-classes", type=int, default=10, help="classes to sample")
    _opt(p, "--entities-per-class", type=int, default=50, help="entities per class")
    _opt(p, "--train-fraction", type=float, default=0.8, help="train share of each class")
    _add_roots(p)
    p.set_defaults(handler=_cmd_build_dataset)

    p = sub.add_parser("train-classifier", help="train the convolutional classifier")
    _opt(p, "--vectors", type=Path, required=True, help="trained vector file")
    _opt(p, "--dataset", type=Path, required=True, help="training labels TSV")
    _opt(p, "--out", type=Path, required=True, help="model output path")
    _opt(p, "--epochs", type=int, default=1000, help="training epochs")
    _opt(p, "--batch-size", type=int, default=32, help="mini-batch size")
    _opt(p, "--lr", type=float, default=0.01, help="learning rate")
    _opt(p, "--hidden", type=int, default=125, help="hidden layer width")
    p.set_defaults(handler=_cmd_train_classifier)

    p = sub.add_parser("predict", help="rank candidate classes for entities")
    _opt(p, "--method", choices=("cnn", "similarity"), required=True)
    _opt(p, "--entity", action="append", required=True, metavar="IRI", help="entity (repeatable)")
    _opt(p, "--vectors", type=Path, required=True, help="trained vector file")
    _opt(p, "--model", type=Path, default=None, help="classifier model (cnn method)")
    _opt(p, "--in", dest="infile", type=Path, default=None, help="N-Triples input (similarity method)")
    _opt(p, "--train", type=Path, default=None, help="training labels TSV (similarity method)")
    _opt(p, "--top-k", type=int, default=3, help="classes to print per entity")
    _opt(p, "--out", type=Path, default=None, help="write rankings here instead of stdout")
    _add_roots(p)
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("evaluate", help="score a ranking file against gold labels")
    _opt(p, "--predictions", type=Path, required=True, help="ranking TSV")
    _opt(p, "--gold", type=Path, required=True, help="gold labels TSV")
    _opt(p, "--metrics", default="accuracy,hits@1,hits@3", help="comma-separated metric names")
    _opt(p, "--json", type=Path, default=None, help="also write {metric: value} JSON here")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("compare-external", help="overlap counts against an external typing file")
    _opt(p, "--external", type=Path, required=True, help="external entity/type TSV")
    _opt(p, "--dataset", type=Path, required=True, help="our gold labels TSV")
    p.set_defaults(handler=_cmd_compare_external)

    p = sub.add_parser("synth", help="generate a synthetic knowledge graph with gold labels")
    _opt(p, "--out-dir", type=Path, required=True, help="output directory")
    _opt(p, "--num-classes", type=int, default=10)
    _opt(p, "--entities-per-class", type=int, default=50)
    _opt(p, "--predicates-per-class", type=int, default=3)
    _opt(p, "--noise", type=float, default=0.1, help="noise triple fraction in [0, 1)")
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("pipeline", help="run ingest through evaluation in one command")
    _opt(p, "--in", dest="infile", type=Path, required=True, help="N-Triples input")
    _opt(p, "--out-dir", type=Path, required=True, help="artifact directory")
    _opt(p, "--trainer", choices=TRAINERS, default="word2vec", help="embedding trainer")
    _opt(p, "--num-classes", type=int, default=10)
    _opt(p, "--entities-per-class", type=int, default=50)
    _opt(p, "--train-fraction", type=float, default=0.8)
    _add_embedding_options(p)
    _opt(p, "--cnn-epochs", type=int, default=1000, help="classifier training epochs")
    _opt(p, "--batch-size", type=int, default=32, help="classifier mini-batch size")
    _opt(p, "--cnn-lr", type=float, default=0.01, help="classifier learning rate")
    _opt(p, "--hidden", type=int, default=125, help="classifier hidden layer width")
    _opt(
        p,
        "--keep-type-triples",
        action="store_true",
        default=False,
        help="keep rdf:type triples in the corpus (default: held out)",
    )
    _opt(p, "--resume", action="store_true", default=False, help="reuse existing artifacts")
    _add_roots(p)
    p.set_defaults(handler=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse printed usage or help already
        return int(exc.code or 0)
    except ValueError as exc:
        print(f"kgtyper: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.command is None:
        print("kgtyper: error: a subcommand is required", file=sys.stderr)
        return EXIT_USAGE
    if args.jobs < 1:
        print("kgtyper: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.jobs > 1:
        logger.info("stages run sequentially; --jobs %d has no effect", args.jobs)

    try:
        return args.handler(args)
    except StageError as exc:
        print(f"kgtyper: error: {exc}", file=sys.stderr)
        if isinstance(exc.cause, NumericalError):
            return EXIT_NUMERICAL
        return EXIT_DATA
    except NumericalError as exc:
        print(f"kgtyper: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"kgtyper: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KgTyperError, OSError) as exc:
        print(f"kgtyper: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
