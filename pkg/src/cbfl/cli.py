"""Command-line experiment runner.

Subcommands: generate (synthetic cohort), train (one arm of the
comparison), analyze (plot-ready CSV tables from finished runs), predict
(score a cohort file with a trained bundle). Every run directory gets a
config.json echo of the fully resolved configuration; re-running from that
echo reproduces the outputs byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import autoencoder, clustering, datagen, federation, metrics, nn_core

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_DATA = 4

TASKS = ("mortality", "stay_time")
SPLITS = ("within_hospital", "by_hospital")
ARMS = ("fl", "cbfl", "centralized")

CONFIG_DEFAULTS: dict = {
    # experiment selection
    "task": "mortality",
    "split": "within_hospital",
    "arm": "fl",
    "K": 5,
    "seed": 0,
    "cohort": "cohort.csv",
    "out": "run",
    # federation
    "E1": 5,
    "E2": 1,
    "batch_size": 64,
    "max_rounds": 200,
    "patience": 10,
    "min_delta": 1e-4,
    "train_on": federation.TRAIN_ON_FULL,
    "corruption_rate": autoencoder.DEFAULT_CORRUPTION_RATE,
    "n_workers": 1,
    # generator
    "n_hospitals": 50,
    "patients_per_hospital": 560,
    "n_latent_groups": 5,
    "n_features": 1399,
    "mortality_rate": 0.05,
    "prolonged_stay_rate": 0.06,
    # splits
    "train_per": 400,
    "test_per": 160,
    "n_train_hospitals": 35,
}


class CliError(Exception):
    """Error with a machine-readable category and exit code."""

    def __init__(self, category: str, message: str, code: int):
        super().__init__(message)
        self.category = category
        self.code = code


def _fail_validation(message: str) -> CliError:
    return CliError("validation", message, EXIT_VALIDATION)


def resolve_config(config_path: str | None, overrides: dict) -> dict:
    """Defaults, then config file values, then explicit flag overrides."""
    resolved = dict(CONFIG_DEFAULTS)
    if config_path is not None:
        path = Path(config_path)
        if not path.exists():
            raise CliError("io", f"config file not found: {path}", EXIT_IO)
        try:
            loaded = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CliError("data", f"config is not valid JSON: {exc}", EXIT_DATA) from exc
        if not isinstance(loaded, dict):
            raise _fail_validation("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(CONFIG_DEFAULTS))
        if unknown:
            raise _fail_validation(f"unknown config keys: {', '.join(unknown)}")
        resolved.update(loaded)
    for key, value in overrides.items():
        if value is not None:
            resolved[key] = value
    _validate_config(resolved)
    return resolved


def _validate_config(cfg: dict) -> None:
    if cfg["task"] not in TASKS:
        raise _fail_validation(f"task must be one of {TASKS}")
    if cfg["split"] not in SPLITS:
        raise _fail_validation(f"split must be one of {SPLITS}")
    if cfg["arm"] not in ARMS:
        raise _fail_validation(f"arm must be one of {ARMS}")
    for key in ("K", "E1", "E2", "batch_size", "max_rounds", "patience", "n_workers",
                "n_hospitals", "patients_per_hospital", "n_latent_groups", "n_features",
                "train_per", "test_per", "n_train_hospitals"):
        if not isinstance(cfg[key], int) or isinstance(cfg[key], bool) or cfg[key] < 1:
            raise _fail_validation(f"{key} must be a positive integer")
    if not isinstance(cfg["seed"], int) or isinstance(cfg["seed"], bool) or cfg["seed"] < 0:
        raise _fail_validation("seed must be a non-negative integer")
    if cfg["min_delta"] < 0:
        raise _fail_validation("min_delta must be >= 0")
    if not 0.0 <= cfg["corruption_rate"] < 1.0:
        raise _fail_validation("corruption_rate must lie in [0, 1)")
    for key in ("mortality_rate", "prolonged_stay_rate"):
        if not 0.0 < cfg[key] < 1.0:
            raise _fail_validation(f"{key} must lie in (0, 1)")
    if cfg["train_on"] not in (federation.TRAIN_ON_FULL, federation.TRAIN_ON_SUBSET):
        raise _fail_validation("train_on must be full_client_data or community_subset")
    if cfg["n_latent_groups"] > cfg["n_hospitals"]:
        raise _fail_validation("n_latent_groups must not exceed n_hospitals")


def unique_run_dir(base: str | Path) -> Path:
    """Never overwrite an existing run: suffix an index instead."""
    base = Path(base)
    if not base.exists():
        return base
    index = 1
    while True:
        candidate = base.with_name(f"{base.name}-{index}")
        if not candidate.exists():
            return candidate
        index += 1


def _write_config_echo(out_dir: Path, cfg: dict) -> None:
    (out_dir / "config.json").write_text(
        json.dumps(cfg, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def cmd_generate(cfg: dict) -> Path:
    gen = datagen.GeneratorConfig(
        n_hospitals=cfg["n_hospitals"],
        patients_per_hospital=cfg["patients_per_hospital"],
        n_latent_groups=cfg["n_latent_groups"],
        n_features=cfg["n_features"],
        mortality_rate=cfg["mortality_rate"],
        prolonged_stay_rate=cfg["prolonged_stay_rate"],
        seed=cfg["seed"],
    )
    dataset = datagen.generate_cohort(gen)
    out_dir = unique_run_dir(cfg["out"])
    out_dir.mkdir(parents=True)
    _write_config_echo(out_dir, cfg)
    cohort_path = out_dir / "cohort.csv"
    datagen.save_cohort_csv(dataset, cohort_path)

    prolonged = datagen.label_prolonged_stay(dataset.unit_stay_minutes)
    n = dataset.n_patients
    deaths = int(dataset.mortality.sum())
    print(f"cohort written to {cohort_path}")
    print(f"{'patients':<38}{n:>8}")
    print(f"{'death':<38}{deaths:>8}  {deaths / n:8.2%}")
    print(f"{'alive':<38}{n - deaths:>8}  {(n - deaths) / n:8.2%}")
    print(f"{'prolonged unit stay time':<38}{int(prolonged.sum()):>8}  {prolonged.mean():8.2%}")
    tag_counts = Counter(tag for tags in dataset.diagnoses for tag in tags)
    top = ", ".join(name for name, _ in tag_counts.most_common(10))
    print(f"top 10 frequent diagnoses: {top}")
    return out_dir


def _load_cohort(cfg: dict) -> datagen.CohortDataset:
    path = Path(cfg["cohort"])
    if not path.exists():
        raise CliError("io", f"cohort file not found: {path}", EXIT_IO)
    return datagen.load_cohort_csv(path)


def _split_cohort(dataset, cfg: dict):
    if cfg["split"] == "within_hospital":
        return datagen.split_within_hospital(
            dataset, train_per=cfg["train_per"], test_per=cfg["test_per"], seed=cfg["seed"]
        )
    return datagen.split_by_hospital(
        dataset, n_train_hospitals=cfg["n_train_hospitals"], seed=cfg["seed"]
    )


def _federation_config(cfg: dict) -> federation.FederationConfig:
    return federation.FederationConfig(
        E1=cfg["E1"],
        E2=cfg["E2"],
        K=cfg["K"],
        batch_size=cfg["batch_size"],
        max_rounds=cfg["max_rounds"],
        patience=cfg["patience"],
        min_delta=cfg["min_delta"],
        seed=cfg["seed"],
        train_on=cfg["train_on"],
        corruption_rate=cfg["corruption_rate"],
        n_workers=cfg["n_workers"],
    )


def _rounds_rows(logs: list[federation.RoundLog]) -> list[list]:
    rows = []
    for log in logs:
        if log.phase != federation.PHASE_ROUND:
            label = log.phase.split(":", 1)[1]
            up = sum(m.param_count for m in log.messages if m.direction == "up")
            down = sum(m.param_count for m in log.messages if m.direction == "down")
            b_up = sum(m.byte_count for m in log.messages if m.direction == "up")
            b_down = sum(m.byte_count for m in log.messages if m.direction == "down")
            rows.append([log.round_index, log.arm, label, None, up, down, b_up, b_down])
            continue
        for model_id, model_metric in sorted(log.per_model_metrics.items()):
            stats = [0, 0, 0, 0]
            for m in log.messages:
                if m.kind == federation.KIND_MODEL and m.model_id == model_id:
                    if m.direction == "up":
                        stats[0] += m.param_count
                        stats[2] += m.byte_count
                    else:
                        stats[1] += m.param_count
                        stats[3] += m.byte_count
            rows.append(
                [log.round_index, log.arm, model_id, model_metric, stats[0], stats[1], stats[2], stats[3]]
            )
        up = sum(m.param_count for m in log.messages if m.direction == "up")
        down = sum(m.param_count for m in log.messages if m.direction == "down")
        b_up = sum(m.byte_count for m in log.messages if m.direction == "up")
        b_down = sum(m.byte_count for m in log.messages if m.direction == "down")
        rows.append([log.round_index, log.arm, "all", log.metric, up, down, b_up, b_down])
    return rows


_ROUNDS_HEADER = ["round", "arm", "model_id", "metric", "params_up", "params_down", "bytes_up", "bytes_down"]


def save_kmeans_csv(model: clustering.KMeansModel, path: Path) -> None:
    dim = model.dim
    rows = [[k, *model.centroids[k]] for k in range(model.n_clusters)]
    _write_csv(path, ["community_id", *(f"c{j}" for j in range(dim))], rows)


def load_kmeans_csv(path: Path, iterations_run: int = 0, inertia: float = 0.0) -> clustering.KMeansModel:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    if not header or header[0] != "community_id":
        raise CliError("data", f"{path} is not a centroid table", EXIT_DATA)
    centroids = np.array([[float(v) for v in row[1:]] for row in rows])
    return clustering.KMeansModel(
        centroids=centroids, iterations_run=iterations_run, inertia=inertia
    )


def save_bundle(bundle: federation.CbflBundle, out_dir: Path) -> None:
    nn_core.save_params(bundle.encoder.params, out_dir / "encoder.cbflw")
    save_kmeans_csv(bundle.kmeans, out_dir / "kmeans_centroids.csv")
    for k, model in enumerate(bundle.community_models):
        nn_core.save_params(model, out_dir / f"model_{k}.cbflw")
    (out_dir / "bundle.json").write_text(
        json.dumps(
            {
                "n_communities": bundle.kmeans.n_clusters,
                "input_dim": bundle.encoder.params.input_dim,
                "kmeans_iterations": bundle.kmeans.iterations_run,
                "kmeans_inertia": bundle.kmeans.inertia,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )


def load_bundle(run_dir: Path) -> federation.CbflBundle:
    meta_path = run_dir / "bundle.json"
    missing = [
        str(p)
        for p in (meta_path, run_dir / "encoder.cbflw", run_dir / "kmeans_centroids.csv")
        if not p.exists()
    ]
    if missing:
        raise CliError("io", f"bundle incomplete, missing: {', '.join(missing)}", EXIT_IO)
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    encoder = autoencoder.EncoderModel(nn_core.load_params(run_dir / "encoder.cbflw"))
    kmeans = load_kmeans_csv(
        run_dir / "kmeans_centroids.csv",
        iterations_run=meta.get("kmeans_iterations", 0),
        inertia=meta.get("kmeans_inertia", 0.0),
    )
    models = []
    for k in range(meta["n_communities"]):
        path = run_dir / f"model_{k}.cbflw"
        if not path.exists():
            raise CliError("io", f"bundle incomplete, missing: {path}", EXIT_IO)
        models.append(nn_core.load_params(path))
    return federation.CbflBundle(encoder=encoder, kmeans=kmeans, community_models=models)


def cmd_train(cfg: dict) -> Path:
    dataset = _load_cohort(cfg)
    train_set, test_set = _split_cohort(dataset, cfg)
    train_labels = datagen.task_labels(train_set, cfg["task"])
    test_labels = datagen.task_labels(test_set, cfg["task"])
    clients = federation.clients_from_cohort(
        train_set.features, train_labels, train_set.hospital_ids, train_set.regions
    )
    eval_x = test_set.features.astype(np.float64)
    fed_cfg = _federation_config(cfg)
    spec = federation.community_model_spec(dataset.n_features)

    out_dir = unique_run_dir(cfg["out"])
    out_dir.mkdir(parents=True)
    _write_config_echo(out_dir, cfg)

    if cfg["arm"] == "fl":
        model, logs = federation.run_fedavg(clients, spec, fed_cfg, eval_x, test_labels)
        scores = nn_core.predict(model, eval_x)[:, 0]
        nn_core.save_params(model, out_dir / "model_0.cbflw")
    elif cfg["arm"] == "centralized":
        model, logs = federation.run_centralized(clients, spec, fed_cfg, eval_x, test_labels)
        scores = nn_core.predict(model, eval_x)[:, 0]
        nn_core.save_params(model, out_dir / "model_0.cbflw")
    else:
        bundle, logs = federation.run_cbfl(clients, fed_cfg, eval_x, test_labels, model_spec=spec)
        scores, _ = federation.predict_detailed(bundle, eval_x)
        save_bundle(bundle, out_dir)

    history = [log.metric for log in logs if log.phase == federation.PHASE_ROUND]
    final = {
        "arm": cfg["arm"],
        "task": cfg["task"],
        "split": cfg["split"],
        "K": cfg["K"] if cfg["arm"] == "cbfl" else None,
        "roc_auc": metrics.roc_auc(scores, test_labels),
        "pr_auc": metrics.pr_auc(scores, test_labels),
        "rounds_to_convergence": len(history),
        "best_round": federation.best_round_index(history, fed_cfg),
        "converged": federation.check_convergence(history, fed_cfg),
        "n_train": int(train_set.n_patients),
        "n_test": int(test_set.n_patients),
        "positive_rate_train": float(np.mean(train_labels)),
        "positive_rate_test": float(np.mean(test_labels)),
        "comm": federation.ledger_report(logs).as_dict(),
    }
    _write_csv(out_dir / "rounds.csv", _ROUNDS_HEADER, _rounds_rows(logs))
    (out_dir / "final_metrics.json").write_text(
        json.dumps(final, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(
        f"{cfg['arm']} {cfg['task']} {cfg['split']}: "
        f"roc_auc={final['roc_auc']:.4f} pr_auc={final['pr_auc']:.4f} "
        f"rounds={final['rounds_to_convergence']} -> {out_dir}"
    )
    return out_dir


def _read_rounds_csv(path: Path) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def cmd_analyze(run_dirs: list[str], cohort_path: str | None, out: str) -> Path:
    runs = [Path(r) for r in run_dirs]
    missing = []
    for run in runs:
        for name in ("config.json", "rounds.csv", "final_metrics.json"):
            if not (run / name).exists():
                missing.append(str(run / name))
    if missing:
        raise CliError("io", f"missing run files: {', '.join(missing)}", EXIT_IO)

    out_dir = unique_run_dir(out)
    out_dir.mkdir(parents=True)
    for run in runs:
        run_cfg = json.loads((run / "config.json").read_text(encoding="utf-8"))
        target = out_dir / run.name
        target.mkdir()
        rows = _read_rounds_csv(run / "rounds.csv")
        curve = [
            [int(r["round"]), float(r["metric"])]
            for r in rows
            if r["model_id"] in ("all", "0") and r["metric"] != "" and int(r["round"]) >= 1
        ]
        # fl/centralized rows carry one model row per round; cbfl adds "all"
        seen = {}
        for round_index, metric in curve:
            seen[round_index] = metric
        _write_csv(
            target / "curve.csv",
            ["round", "roc_auc"],
            [[r, seen[r]] for r in sorted(seen)],
        )
        if run_cfg["arm"] == "cbfl":
            if cohort_path is None:
                cohort_file = Path(run_cfg["cohort"])
            else:
                cohort_file = Path(cohort_path)
            if not cohort_file.exists():
                raise CliError("io", f"cohort file not found: {cohort_file}", EXIT_IO)
            _analyze_cbfl_run(run, run_cfg, cohort_file, target)
    print(f"analysis written to {out_dir}")
    return out_dir


def _analyze_cbfl_run(run: Path, run_cfg: dict, cohort_file: Path, target: Path) -> None:
    bundle = load_bundle(run)
    dataset = datagen.load_cohort_csv(cohort_file)

    # hospital-level communities on the PCA plane (all hospitals in cohort)
    hospitals = dataset.hospital_list()
    means = np.stack(
        [
            autoencoder.client_mean_encoding(
                bundle.encoder, dataset.features[dataset.indices_of_hospital(int(h))].astype(np.float64)
            )
            for h in hospitals
        ]
    )
    _write_csv(
        target / "mean_encodings.csv",
        ["client_id", *(f"e{j}" for j in range(means.shape[1]))],
        [[int(h), *row] for h, row in zip(hospitals, means)],
    )
    pca = clustering.fit_pca2d(means)
    coords = clustering.project(pca, means)
    hospital_communities = clustering.assign_many(bundle.kmeans, means)
    _write_csv(
        target / "communities.csv",
        ["client_id", "community_id", "x", "y"],
        [
            [int(h), int(c), float(x), float(y)]
            for h, c, (x, y) in zip(hospitals, hospital_communities, coords)
        ],
    )

    # per-community metrics on this run's test split plus centroid distances
    _, test_set = _split_cohort(dataset, run_cfg)
    test_labels = datagen.task_labels(test_set, run_cfg["task"])
    scores, communities = federation.predict_detailed(
        bundle, test_set.features.astype(np.float64)
    )
    distances = clustering.community_distances(bundle.kmeans, pca)
    dist_rows = []
    for k in range(bundle.kmeans.n_clusters):
        members = communities == k
        try:
            community_roc = metrics.roc_auc(scores[members], test_labels[members])
        except ValueError:
            community_roc = None
        try:
            community_pr = metrics.pr_auc(scores[members], test_labels[members])
        except ValueError:
            community_pr = None
        dist_rows.append([k, int(members.sum()), community_roc, community_pr, float(distances[k])])
    _write_csv(
        target / "distances.csv",
        ["community_id", "test_size", "roc_auc", "pr_auc", "avg_distance"],
        dist_rows,
    )

    # diagnosis enrichment over the whole cohort's per-example communities
    patient_scores, patient_communities = federation.predict_detailed(
        bundle, dataset.features.astype(np.float64)
    )
    del patient_scores
    rows, _notes = metrics.enrichment(
        patient_communities,
        dataset.diagnoses,
        bundle.kmeans.n_clusters,
        datagen.DIAGNOSIS_CATEGORIES,
    )
    _write_csv(
        target / "enrichment.csv",
        ["community", "diagnosis", "overlap", "community_size", "diagnosis_total",
         "p_value", "p_adjusted", "overrepresented"],
        [
            [r.community, r.diagnosis, r.overlap, r.community_size, r.diagnosis_total,
             r.p_value, r.p_adjusted, int(r.overrepresented)]
            for r in rows
        ],
    )


def cmd_predict(bundle_dir: str, input_csv: str, out: str) -> Path:
    bundle = load_bundle(Path(bundle_dir))
    input_path = Path(input_csv)
    if not input_path.exists():
        raise CliError("io", f"input file not found: {input_path}", EXIT_IO)
    dataset = datagen.load_cohort_csv(input_path)
    if dataset.n_features != bundle.encoder.params.input_dim:
        raise _fail_validation(
            f"input has {dataset.n_features} features, bundle expects "
            f"{bundle.encoder.params.input_dim}"
        )
    scores, communities = federation.predict_detailed(
        bundle, dataset.features.astype(np.float64)
    )
    out_path = Path(out)
    with open(input_path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(lines[0] + ",community,score\n")
        for line, community, score in zip(lines[1:], communities, scores):
            fh.write(f"{line},{int(community)},{float(score)!r}\n")
    print(f"scored {dataset.n_patients} patients -> {out_path}")
    return out_path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbfl",
        description="Community-based federated learning experiments on synthetic hospital cohorts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (flat keys)")
    common.add_argument("--seed", type=int, help="experiment seed")
    common.add_argument("--out", help="output directory")

    p_gen = sub.add_parser("generate", parents=[common], help="write a synthetic cohort CSV")
    p_gen.add_argument("--n-hospitals", type=int, dest="n_hospitals")
    p_gen.add_argument("--patients-per-hospital", type=int, dest="patients_per_hospital")
    p_gen.add_argument("--n-latent-groups", type=int, dest="n_latent_groups")
    p_gen.add_argument("--n-features", type=int, dest="n_features")

    p_train = sub.add_parser("train", parents=[common], help="run one training arm")
    p_train.add_argument("--cohort", help="cohort CSV produced by generate")
    p_train.add_argument("--task", choices=TASKS)
    p_train.add_argument("--split", choices=SPLITS)
    p_train.add_argument("--arm", choices=ARMS)
    p_train.add_argument("--k", type=int, dest="K", help="number of communities (cbfl)")

    p_analyze = sub.add_parser("analyze", parents=[common], help="derive analysis tables from runs")
    p_analyze.add_argument("--run", action="append", required=True, dest="runs",
                           help="run directory (repeatable)")
    p_analyze.add_argument("--cohort", help="cohort CSV (defaults to each run's config)")

    p_predict = sub.add_parser("predict", parents=[common], help="score a cohort with a bundle")
    p_predict.add_argument("--bundle", required=True, help="cbfl run directory")
    p_predict.add_argument("--input", required=True, help="cohort-schema CSV to score")

    return parser


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "generate":
        overrides = {
            k: getattr(args, k)
            for k in ("seed", "out", "n_hospitals", "patients_per_hospital",
                      "n_latent_groups", "n_features")
        }
        cmd_generate(resolve_config(args.config, overrides))
        return EXIT_OK
    if args.command == "train":
        overrides = {
            k: getattr(args, k) for k in ("seed", "out", "cohort", "task", "split", "arm", "K")
        }
        cmd_train(resolve_config(args.config, overrides))
        return EXIT_OK
    if args.command == "analyze":
        cmd_analyze(args.runs, args.cohort, args.out or "analysis")
        return EXIT_OK
    if args.command == "predict":
        cmd_predict(args.bundle, args.input, args.out or "scored.csv")
        return EXIT_OK
    raise CliError("internal", f"unknown command {args.command}", EXIT_INTERNAL)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except CliError as exc:
        print(json.dumps({"error": exc.category, "message": str(exc)}), file=sys.stderr)
        return exc.code
    except (datagen.CohortCsvError, nn_core.WeightFormatError) as exc:
        print(json.dumps({"error": "data", "message": str(exc)}), file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(json.dumps({"error": "validation", "message": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001 - last-resort CLI boundary
        print(json.dumps({"error": "internal", "message": str(exc)}), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
