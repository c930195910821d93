"""Command-line surface: runs the full pipeline and writes figure/table
artifacts with deterministic names.

Outputs for a command are first written to a temporary directory and moved
into place only on success, so a failing run never leaves partial artifacts.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import shutil
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from . import analysis, classify, features, metricspace, temporal, topics
from .corpus import Corpus, group_documents, load_abbreviations, load_corpus
from .errors import ConfigError, StylochronError
from .features import FunctionWordList
from .synth import make_drift_corpus, make_period_corpus, make_topic_corpus, write_corpus

COMMANDS = ("ingest", "features", "cluster", "project", "classify", "topics", "drift", "all")
FEATURE_SETS = ("fw", "content", "style", "topics")

_DATA_DIR = Path(__file__).parent / "data"


@dataclass
class RunConfig:
    corpus_root: str = str(_DATA_DIR / "sample_corpus")
    manifest_path: str = str(_DATA_DIR / "sample_corpus" / "manifest.csv")
    function_word_path: str = str(_DATA_DIR / "function_words_ro.txt")
    lemma_lexicon_path: str = ""
    abbreviation_path: str = ""
    batch_size: int = 10
    linkage: str = "average"
    normalized_distance: bool = False
    min_doc_count: int = 2
    max_vocab_size: int = 5000
    svm_c: float = 1.0
    svm_epochs: int = 100
    lda_k: int = 3
    lda_alpha: float = 0.0  # 0 means the 50/K default
    lda_beta: float = 0.01
    lda_iterations: int = 1000
    window: int = 10
    min_side: int = 5
    n_permutations: int = 10000
    reference_year: int = 1990
    seed: int = 0
    output_dir: str = "stylochron_out"

    def to_file(self, path: str | Path) -> None:
        lines = [f"{f.name} = {getattr(self, f.name)}" for f in dataclasses.fields(self)]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        cfg = cls()
        valid = {f.name: f.type for f in dataclasses.fields(cls)}
        types = {f.name: type(getattr(cfg, f.name)) for f in dataclasses.fields(cls)}
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), 1
        ):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in valid:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            typ = types[key]
            try:
                if typ is bool:
                    if value not in ("True", "False", "true", "false"):
                        raise ValueError(value)
                    parsed = value in ("True", "true")
                else:
                    parsed = typ(value)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
            setattr(cfg, key, parsed)
        return cfg


def max_threads() -> int:
    """Parallelism cap, via STYLOCHRON_THREADS (default: cpu count)."""
    raw = os.environ.get("STYLOCHRON_THREADS", "")
    if raw.isdigit() and int(raw) >= 1:
        return int(raw)
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# pipeline pieces


class Pipeline:
    """Lazily computed, cached pipeline state for one configuration."""

    def __init__(self, config: RunConfig):
        self.config = config
        self._cache: dict[str, object] = {}

    def fw_list(self) -> FunctionWordList:
        if "fw" not in self._cache:
            self._cache["fw"] = features.load_function_words(self.config.function_word_path)
        return self._cache["fw"]  # type: ignore[return-value]

    def lemmatizer(self) -> dict[str, str] | None:
        if self.config.lemma_lexicon_path:
            return features.load_lemma_lexicon(self.config.lemma_lexicon_path)
        return None

    def corpus(self) -> Corpus:
        if "corpus" not in self._cache:
            abbrevs = (
                load_abbreviations(self.config.abbreviation_path)
                if self.config.abbreviation_path
                else frozenset()
            )
            self._cache["corpus"] = load_corpus(
                self.config.manifest_path, self.config.corpus_root, abbrevs
            )
        return self._cache["corpus"]  # type: ignore[return-value]

    def grouped(self) -> Corpus:
        if "grouped" not in self._cache:
            self._cache["grouped"] = group_documents(self.corpus(), self.config.batch_size)
        return self._cache["grouped"]  # type: ignore[return-value]

    def vocab(self, corpus: Corpus) -> tuple[str, ...]:
        key = f"vocab:{id(corpus)}"
        if key not in self._cache:
            self._cache[key] = features.build_content_vocab(
                corpus, self.fw_list(), self.config.min_doc_count, self.config.max_vocab_size
            )
        return self._cache[key]  # type: ignore[return-value]

    def vectors(self, corpus: Corpus, space: str) -> list[features.FeatureVector]:
        fw = self.fw_list()
        if space == "fw":
            return [features.function_word_vector(d, fw) for d in corpus]
        if space == "content":
            vocab = self.vocab(corpus)
            return [features.content_word_vector(d, fw, vocab) for d in corpus]
        if space == "style":
            lemmatizer = self.lemmatizer()
            return [features.style_vector(d, lemmatizer) for d in corpus]
        if space == "topics":
            return topics.topic_feature_vectors(self.topic_model())
        raise ConfigError(f"unknown feature set {space!r}")

    def topic_model(self) -> topics.TopicModel:
        if "lda" not in self._cache:
            cfg = self.config
            corpus = self.corpus()
            self._cache["lda"] = topics.fit_lda(
                corpus,
                self.vocab(corpus),
                K=cfg.lda_k,
                alpha=cfg.lda_alpha or None,
                beta=cfg.lda_beta,
                iterations=cfg.lda_iterations,
                seed=cfg.seed,
            )
        return self._cache["lda"]  # type: ignore[return-value]


_SPACE_FILENAME = {"fw": "functionwords", "content": "content", "style": "style", "topics": "topics"}


def _write_ingest(pipe: Pipeline, out: Path) -> None:
    with open(out / "corpus_summary.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("doc_id,year,volume,period,tokens,sentences\n")
        for d in pipe.corpus():
            fh.write(f"{d.doc_id},{d.year},{d.volume},{d.period},{d.n_tokens},{d.n_sentences}\n")


def _write_features(pipe: Pipeline, out: Path) -> None:
    for space in ("fw", "content", "style"):
        vecs = pipe.vectors(pipe.corpus(), space)
        features.write_feature_matrix(out / f"features_{_SPACE_FILENAME[space]}.csv", vecs)


def _write_cluster(pipe: Pipeline, out: Path) -> None:
    cfg = pipe.config
    grouped = pipe.grouped()
    periods = {d.doc_id: d.period for d in grouped}
    for space, name in (("fw", "style"), ("content", "content")):
        vecs = pipe.vectors(grouped, space)
        dm = metricspace.distance_matrix(vecs, normalized=cfg.normalized_distance)
        metricspace.write_distance_matrix(out / f"distance_{name}.csv", dm)
        dend = analysis.hierarchical_cluster(dm, cfg.linkage)
        (out / f"dendrogram_{name}.newick").write_text(
            analysis.to_newick(dend) + "\n", encoding="utf-8"
        )
        (out / f"dendrogram_{name}.json").write_text(
            analysis.to_merge_json(dend) + "\n", encoding="utf-8"
        )
        (out / f"dendrogram_{name}.svg").write_text(
            analysis.dendrogram_svg(dend, periods) + "\n", encoding="utf-8"
        )


def _write_project(pipe: Pipeline, out: Path) -> None:
    grouped = pipe.grouped()
    volumes = {d.doc_id: d.volume for d in grouped}
    periods = {d.doc_id: d.period for d in grouped}
    for space, name in (("fw", "style"), ("content", "content")):
        proj = analysis.pca_project(pipe.vectors(grouped, space))
        analysis.write_projection_csv(out / f"projection_{name}.csv", proj, volumes, periods)
        (out / f"projection_{name}.svg").write_text(
            analysis.scatter_svg(proj, volumes, periods) + "\n", encoding="utf-8"
        )


def _write_topics(pipe: Pipeline, out: Path) -> None:
    model = pipe.topic_model()
    (out / "topics.json").write_text(topics.topics_json(model) + "\n", encoding="utf-8")
    topics.write_topic_features_csv(out / "topic_features.csv", model)


def _write_classify(
    pipe: Pipeline, out: Path, target: str | None = None, feature_sets=None
) -> None:
    cfg = pipe.config
    corpus = pipe.corpus()
    targets = (target,) if target else ("period", "volume")
    plans = {"period": FEATURE_SETS, "volume": ("fw", "content")}
    for tgt in targets:
        labels = [getattr(d, tgt) for d in corpus]
        for space in feature_sets or plans[tgt]:
            vecs = pipe.vectors(corpus, space)
            report = classify.loo_evaluate(
                vecs,
                labels,
                target=tgt,
                C=cfg.svm_c,
                epochs=cfg.svm_epochs,
                seed=cfg.seed,
                standardize=(space == "style"),
            )
            stem = f"{tgt}_{_SPACE_FILENAME[space]}"
            (out / f"eval_{stem}.json").write_text(
                classify.report_json(report) + "\n", encoding="utf-8"
            )
            classify.write_fold_predictions(out / f"folds_{stem}.csv", report)


def _write_drift(pipe: Pipeline, out: Path) -> None:
    cfg = pipe.config
    corpus = pipe.corpus()
    lemmatizer = pipe.lemmatizer()
    for metric in temporal.METRICS:
        report = temporal.split_scan(
            corpus,
            metric,
            min_side=cfg.min_side,
            window=cfg.window,
            n_permutations=cfg.n_permutations,
            seed=cfg.seed,
            lemmatizer=lemmatizer,
        )
        name = {"ari": "ari"}.get(metric, metric)
        temporal.write_drift_csv(out / f"drift_{name}.csv", report)
        (out / f"drift_{name}.svg").write_text(
            temporal.drift_svg(report, cfg.reference_year) + "\n", encoding="utf-8"
        )


_STEPS = {
    "ingest": _write_ingest,
    "features": _write_features,
    "cluster": _write_cluster,
    "project": _write_project,
    "topics": _write_topics,
    "classify": _write_classify,
    "drift": _write_drift,
}


def run_pipeline(config: RunConfig, command: str, target: str | None = None,
                 feature_sets=None) -> None:
    """Run one pipeline command, writing artifacts atomically to output_dir."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    pipe = Pipeline(config)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    steps = list(_STEPS) if command == "all" else [command]
    tmp = Path(tempfile.mkdtemp(prefix=".stylochron_", dir=out_dir.parent))
    try:
        for step in steps:
            try:
                if step == "classify":
                    _write_classify(pipe, tmp, target=target, feature_sets=feature_sets)
                else:
                    _STEPS[step](pipe, tmp)
            except StylochronError as exc:
                raise StylochronError(f"{step}: {exc}") from exc
        for item in sorted(tmp.iterdir()):
            os.replace(item, out_dir / item.name)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stylochron",
        description="Corpus stylometry pipeline: features, clustering, PCA, "
        "classification, topics and temporal drift.",
    )
    parser.add_argument("command", choices=COMMANDS + ("synth",))
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--corpus", help="corpus root directory")
    parser.add_argument("--manifest", help="manifest CSV path")
    parser.add_argument("--function-words", help="function word list file")
    parser.add_argument("--target", choices=("period", "volume"))
    parser.add_argument("--features", choices=FEATURE_SETS)
    parser.add_argument("--linkage", choices=analysis.LINKAGES)
    parser.add_argument("--batch-size", type=int)
    parser.add_argument("--window", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--kind", choices=("period", "drift", "topics"),
                        default="period", help="synthetic corpus kind (synth only)")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {
        "corpus_root": args.corpus,
        "manifest_path": args.manifest,
        "function_word_path": args.function_words,
        "linkage": args.linkage,
        "batch_size": args.batch_size,
        "window": args.window,
        "seed": args.seed,
        "output_dir": args.out,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    return config


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            seed = args.seed if args.seed is not None else 0
            out = Path(args.out or f"synth_{args.kind}")
            makers = {
                "period": lambda: make_period_corpus(seed),
                "drift": lambda: make_drift_corpus(seed),
                "topics": lambda: make_topic_corpus(seed)[0],
            }
            manifest = write_corpus(makers[args.kind](), out)
            print(f"wrote synthetic corpus manifest: {manifest}")
            return 0
        config = _config_from_args(args)
        run_pipeline(
            config,
            args.command,
            target=args.target,
            feature_sets=(args.features,) if args.features else None,
        )
        return 0
    except (StylochronError, OSError, ValueError) as exc:
        print(f"stylochron: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
