"""Command-line orchestration of the analysis pipeline.

Each subcommand is a thin wrapper over a stage function; ``run-all``
chains the same stage functions, so fused and stepwise runs produce
identical artifacts.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import agreement as agree_mod
from . import gam as gam_mod
from . import regions as regions_mod
from .config import ConfigError, PipelineConfig, write_manifest
from .crossval import DEFAULT_GRIDS, grid_search, load_grid
from .diagnostics import prune_vif
from .evaluation import evaluate
from .keywords import FilterStats, SearchList, filter_corpus
from .labeling import label_corpus, read_labeled_snippets, read_snippets, \
    write_labeled_snippets, write_snippets
from .linear import TextClassifier
from .lsva import load_stopwords, lsva_compute, lsva_export
from .poitypes import CategoryMapping, PoiType, aggregate_poi, distribution, \
    write_distributions
from .records import ingest_pois, iter_reviews, join_regions, \
    load_region_assignments
from .regions import build_regions, engagement_contrast, load_covariate_table, \
    pearson, write_engagement_contrast, write_regions

LABEL_CLASSES = ("negative", "neutral", "positive", "unrelated")


def _outdir(config: PipelineConfig) -> str:
    os.makedirs(config.output_dir, exist_ok=True)
    return config.output_dir


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_pois(config: PipelineConfig) -> dict:
    pois = {}
    ingest_pois(config.pois, lambda p: pois.__setitem__(p.poi_id, p))
    if config.region_assignments:
        assignments = load_region_assignments(config.region_assignments)
        pois = {p.poi_id: p for p in join_regions(pois.values(), assignments)}
    return pois


def _poi_types(config: PipelineConfig, pois: dict) -> dict:
    mapping = CategoryMapping.from_file(config.mapping_table)
    return {pid: mapping.map_poi_type(p.categories)
            for pid, p in pois.items()}


def _classifier(config: PipelineConfig):
    if config.classifier_kind == "remote":
        from .remote import RemoteClassifier, RemoteClassifierConfig
        if not config.endpoint:
            raise ConfigError("remote classifier requires an endpoint")
        return RemoteClassifier(RemoteClassifierConfig(
            endpoint=config.endpoint, batch_size=config.remote_batch_size))
    if not config.model_file:
        raise ConfigError("native classifier requires model_file")
    return TextClassifier.load(config.model_file)


# -- stage functions ---------------------------------------------------------

def stage_filter(config: PipelineConfig) -> str:
    config.require("reviews", "search_list")
    out = _outdir(config)
    search_list = SearchList.from_file(config.search_list)
    stats = FilterStats()
    snippet_path = os.path.join(out, "snippets.jsonl")
    write_snippets(snippet_path, filter_corpus(
        iter_reviews(config.reviews), search_list, stats))
    _write_json(os.path.join(out, "filter_stats.json"), {
        "scanned": stats.scanned,
        "matched": stats.matched,
        "per_pattern": stats.per_pattern,
    })
    write_manifest(out, "filter",
                   {"reviews": config.reviews,
                    "search_list": config.search_list}, config)
    return snippet_path


def stage_agree(config: PipelineConfig) -> float:
    config.require("agreement_table")
    out = _outdir(config)
    items = []
    with open(config.agreement_table, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                items.append((obj["item_id"], obj["label_a"], obj["label_b"]))
    result = agree_mod.krippendorff_alpha(items)
    _write_json(os.path.join(out, "agreement.json"), {
        "alpha": result.alpha,
        "observed_disagreement": result.observed_disagreement,
        "expected_disagreement": result.expected_disagreement,
        "degenerate": result.degenerate,
        "n_items": len(items),
    })
    write_manifest(out, "agree",
                   {"agreement_table": config.agreement_table}, config)
    click.echo(f"alpha {result.alpha:.4f}")
    return result.alpha


def stage_train(config: PipelineConfig) -> str:
    config.require("labeled_examples")
    out = _outdir(config)
    examples = agree_mod.load_labeled_examples(config.labeled_examples)
    train, test = agree_mod.split(examples, config.split_ratio, config.seed)
    if config.grid:
        grid = load_grid(config.grid)
    else:
        grid = DEFAULT_GRIDS[config.classifier_kind]
    texts = [e.text for e in train]
    labels = [e.label.value for e in train]
    search = grid_search(config.classifier_kind, grid, config.cv_folds,
                         texts, labels, seed=config.seed)
    params = dict(search.best_params)
    params.pop("solver", None)  # tag only; the native solver is used
    clf = TextClassifier.train(config.classifier_kind, params, texts, labels,
                               seed=config.seed, idf_base=config.idf_base)
    model_path = os.path.join(out, "model.json")
    clf.save(model_path)
    with open(os.path.join(out, "test_examples.jsonl"), "w",
              encoding="utf-8") as fh:
        for e in test:
            fh.write(json.dumps({"review_id": e.review_id,
                                 "targeted_text": e.text,
                                 "label": e.label.value},
                                ensure_ascii=False) + "\n")
    _write_json(os.path.join(out, "cv_results.json"), {
        "best_params": search.best_params,
        "best_score": search.best_score,
        "results": [{"params": p, "mean_accuracy": s}
                    for p, s in search.results],
        "train_histogram": {k.value: v for k, v in
                            agree_mod.class_histogram(train).items()},
        "test_histogram": {k.value: v for k, v in
                           agree_mod.class_histogram(test).items()},
    })
    write_manifest(out, "train",
                   {"labeled_examples": config.labeled_examples}, config)
    return model_path


def stage_eval(config: PipelineConfig, examples_path: str | None = None) -> dict:
    out = _outdir(config)
    path = examples_path or os.path.join(out, "test_examples.jsonl")
    examples = agree_mod.load_labeled_examples(path)
    clf = _classifier(config)
    pred = clf.predict([e.text for e in examples])
    report = evaluate(pred, [e.label.value for e in examples],
                      classes=LABEL_CLASSES)
    payload = {
        "accuracy": report.accuracy,
        "macro_precision": report.macro_precision,
        "macro_recall": report.macro_recall,
        "macro_f1": report.macro_f1,
        "per_class": {c: {"precision": report.precision[c],
                          "recall": report.recall[c],
                          "f1": report.f1[c]} for c in report.classes},
        "confusion": [list(row) for row in report.confusion],
        "n": report.n,
    }
    _write_json(os.path.join(out, "eval_report.json"), payload)
    write_manifest(out, "eval", {"examples": path}, config)
    return payload


def stage_label(config: PipelineConfig, snippet_path: str | None = None) -> str:
    out = _outdir(config)
    path = snippet_path or os.path.join(out, "snippets.jsonl")
    clf = _classifier(config)
    counts: dict[str, int] = {}
    labeled_path = os.path.join(out, "labeled_snippets.jsonl")
    write_labeled_snippets(labeled_path, label_corpus(
        read_snippets(path), clf, counts=counts))
    _write_json(os.path.join(out, "label_counts.json"), counts)
    write_manifest(out, "label", {"snippets": path}, config)
    return labeled_path


def stage_lsva(config: PipelineConfig, labeled_path: str | None = None) -> None:
    config.require("pois", "mapping_table", "stopwords")
    out = _outdir(config)
    path = labeled_path or os.path.join(out, "labeled_snippets.jsonl")
    pois = _load_pois(config)
    poi_types = _poi_types(config, pois)
    stopwords = load_stopwords(config.stopwords)
    by_type: dict[PoiType, list] = {}
    for item in read_labeled_snippets(path):
        poi_type = poi_types.get(item.snippet.poi_id, PoiType.OTHER)
        by_type.setdefault(poi_type, []).append(item)
    for poi_type in sorted(by_type, key=lambda t: t.value):
        entries = lsva_compute(by_type[poi_type], stopwords,
                               min_total=config.lsva_min_total)
        lsva_export(entries, os.path.join(out, f"lsva_{poi_type.value}.csv"))
    write_manifest(out, "lsva",
                   {"labeled_snippets": path, "pois": config.pois,
                    "stopwords": config.stopwords,
                    "mapping_table": config.mapping_table}, config)


def stage_poi_report(config: PipelineConfig,
                     labeled_path: str | None = None) -> None:
    config.require("pois", "mapping_table")
    out = _outdir(config)
    path = labeled_path or os.path.join(out, "labeled_snippets.jsonl")
    pois = _load_pois(config)
    poi_types = _poi_types(config, pois)
    sentiments = aggregate_poi(read_labeled_snippets(path), poi_types)
    with open(os.path.join(out, "poi_sentiments.csv"), "w",
              encoding="utf-8") as fh:
        fh.write("poi_id,poi_type,n_access_reviews,mean_sentiment\n")
        for s in sentiments:
            fh.write(f"{s.poi_id},{s.poi_type.value},{s.n_access_reviews},"
                     f"{s.mean_sentiment!r}\n")
    observed = sorted({s.poi_type for s in sentiments},
                      key=lambda t: t.value)
    summaries = [distribution(sentiments, t, config.poi_min_reviews)
                 for t in observed]
    write_distributions(os.path.join(out, "poi_distributions.csv"),
                        summaries)
    write_manifest(out, "poi-report",
                   {"labeled_snippets": path, "pois": config.pois,
                    "mapping_table": config.mapping_table}, config)


def stage_geo_build(config: PipelineConfig,
                    labeled_path: str | None = None) -> str:
    config.require("pois", "region_assignments", "covariates")
    out = _outdir(config)
    path = labeled_path or os.path.join(out, "labeled_snippets.jsonl")
    pois = _load_pois(config)
    covariate_rows = load_covariate_table(config.covariates)
    regions = build_regions(read_labeled_snippets(path), pois, config.level,
                            covariate_rows,
                            min_reviews=config.region_min_reviews)
    regions_path = os.path.join(out, f"regions_{config.level}.csv")
    write_regions(regions_path, regions)
    try:
        contrast = engagement_contrast(regions, config.region_min_reviews)
        write_engagement_contrast(
            os.path.join(out, f"engagement_{config.level}.csv"), contrast)
    except ValueError:
        pass  # one-sided engagement split; contrast undefined
    included = [r for r in regions if r.included]
    correlations = {}
    if len(included) >= 3:
        y = [r.sentiment for r in included]
        for name in sorted(included[0].covariates):
            x = [r.covariates[name] for r in included]
            try:
                correlations[name] = pearson(x, y)
            except ValueError:
                continue
    _write_json(os.path.join(out, f"correlations_{config.level}.json"),
                correlations)
    write_manifest(out, "geo-build",
                   {"labeled_snippets": path, "pois": config.pois,
                    "region_assignments": config.region_assignments,
                    "covariates": config.covariates}, config)
    return regions_path


def stage_regress(config: PipelineConfig,
                  regions_path: str | None = None) -> gam_mod.GamFit:
    import numpy as np

    out = _outdir(config)
    path = regions_path or os.path.join(out, f"regions_{config.level}.csv")
    regions = regions_mod.read_regions(path)
    included = [r for r in regions if r.included and r.sentiment is not None]
    if not included:
        raise ConfigError("no included regions; lower the review threshold")
    names = sorted(included[0].covariates)
    X = np.array([[r.covariates[n] for n in names] for r in included])
    pruned = prune_vif(X, names)
    spec = gam_mod.GamSpec(covariates=pruned.kept,
                           n_marginal_basis=config.n_marginal_basis)
    fit, _ = gam_mod.fit_gam(regions, spec)
    with open(os.path.join(out, f"fit_report_{config.level}.txt"), "w",
              encoding="utf-8") as fh:
        fh.write(gam_mod.format_fit_report(fit))
    _write_json(os.path.join(out, f"fit_{config.level}.json"), {
        **fit.to_dict(),
        "vif_dropped": [[n, v if v != float("inf") else "inf"]
                        for n, v in pruned.dropped],
        "vif_final": pruned.final_vifs,
    })
    write_manifest(out, "regress", {"regions": path}, config)
    return fit


def stage_sensitivity(config: PipelineConfig,
                      regions_path: str | None = None) -> None:
    import numpy as np

    out = _outdir(config)
    path = regions_path or os.path.join(out, f"regions_{config.level}.csv")
    regions = regions_mod.read_regions(path)
    with_reviews = [r for r in regions if r.sentiment is not None]
    if not with_reviews:
        raise ConfigError("no regions with reviews")
    names = sorted(with_reviews[0].covariates)
    X = np.array([[r.covariates[n] for n in names] for r in with_reviews])
    pruned = prune_vif(X, names)
    spec = gam_mod.GamSpec(covariates=pruned.kept,
                           n_marginal_basis=config.n_marginal_basis,
                           prune_outliers=False)
    result = gam_mod.threshold_sensitivity(
        regions, spec, thresholds=config.sensitivity_thresholds)
    with open(os.path.join(out, f"sensitivity_{config.level}.csv"), "w",
              encoding="utf-8") as fh:
        coef_names = ["(Intercept)", *pruned.kept]
        fh.write("threshold,n," + ",".join(
            f'"{n}"' for n in coef_names) + "\n")
        for t, n, coefs in result.rows:
            fh.write(f"{t},{n}," + ",".join(
                repr(coefs[name]) for name in coef_names) + "\n")
    _write_json(os.path.join(out, f"sensitivity_{config.level}.json"), {
        "stability_max_delta_from_10": result.stability,
        "skipped_thresholds": result.skipped,
    })
    write_manifest(out, "sensitivity", {"regions": path}, config)


def stage_export(config: PipelineConfig,
                 regions_path: str | None = None) -> None:
    out = _outdir(config)
    path = regions_path or os.path.join(out, f"regions_{config.level}.csv")
    regions = regions_mod.read_regions(path)
    regions_mod.choropleth_export(
        regions, os.path.join(out, f"choropleth_{config.level}.csv"))
    write_manifest(out, "export", {"regions": path}, config)


def stage_run_all(config: PipelineConfig) -> None:
    snippets = stage_filter(config)
    if config.labeled_examples:
        config.model_file = stage_train(config)
        stage_eval(config)
    labeled = stage_label(config, snippets)
    stage_lsva(config, labeled)
    stage_poi_report(config, labeled)
    if config.region_assignments and config.covariates:
        regions_path = stage_geo_build(config, labeled)
        stage_regress(config, regions_path)
        stage_sensitivity(config, regions_path)
        stage_export(config, regions_path)


# -- click wiring ------------------------------------------------------------

_STAGES = {
    "filter": stage_filter,
    "agree": stage_agree,
    "train": stage_train,
    "eval": stage_eval,
    "label": stage_label,
    "lsva": stage_lsva,
    "poi-report": stage_poi_report,
    "geo-build": stage_geo_build,
    "regress": stage_regress,
    "sensitivity": stage_sensitivity,
    "export": stage_export,
    "run-all": stage_run_all,
}


@click.group()
def main() -> None:
    """Accessibility-review analytics pipeline."""


def _run(stage_name: str, config_path: str, **overrides) -> None:
    try:
        config = PipelineConfig.from_file(config_path, overrides)
        _STAGES[stage_name](config)
    except (ConfigError, gam_mod.GamError, FileNotFoundError, ValueError,
            RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


def _make_command(stage_name: str):
    @click.option("--config", "config_path", required=True,
                  type=click.Path(exists=True))
    @click.option("--seed", type=int, default=None)
    @click.option("--threshold", "region_min_reviews", type=int, default=None,
                  help="Minimum reviews per region.")
    @click.option("--classifier", "classifier_kind", default=None,
                  type=click.Choice(["logistic_regression", "sgd", "remote"]))
    @click.option("--model-file", default=None)
    @click.option("--endpoint", default=None)
    @click.option("--level", default=None,
                  type=click.Choice(["County", "CBG"]))
    @click.option("--out", "output_dir", default=None)
    def command(config_path, **overrides):
        _run(stage_name, config_path, **overrides)

    command.__name__ = stage_name.replace("-", "_")
    return main.command(name=stage_name)(command)


for _name in _STAGES:
    _make_command(_name)


if __name__ == "__main__":
    main()
