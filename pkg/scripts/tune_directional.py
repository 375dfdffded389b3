"""Dev harness: run the directional comparison on the default cohort.

Not part of the package; used to size runtimes and check the
centralized >= CBFL(K=5) >= FL ordering and rounds-vs-K trend per seed.
"""

import argparse
import json
import time

import numpy as np

from cbfl import datagen, federation, metrics, nn_core


def run_seed(seed: int, ks=(5, 15, 50), workers: int = 2, max_rounds: int = 200):
    t0 = time.perf_counter()
    cfg = datagen.GeneratorConfig(seed=seed)
    dataset = datagen.generate_cohort(cfg)
    train_set, test_set = datagen.split_within_hospital(dataset, seed=seed)
    y_train = datagen.task_labels(train_set, "mortality")
    y_test = datagen.task_labels(test_set, "mortality")
    clients = federation.clients_from_cohort(
        train_set.features, y_train, train_set.hospital_ids, train_set.regions
    )
    eval_x = test_set.features.astype(np.float64)
    spec = federation.community_model_spec(dataset.n_features)
    out = {"seed": seed, "gen_s": round(time.perf_counter() - t0, 1)}

    fed_cfg = federation.FederationConfig(seed=seed, n_workers=workers, max_rounds=max_rounds)

    t = time.perf_counter()
    w, logs = federation.run_centralized(clients, spec, fed_cfg, eval_x, y_test)
    scores = nn_core.predict(w, eval_x)[:, 0]
    out["centralized"] = {
        "roc": metrics.roc_auc(scores, y_test),
        "rounds": len(logs),
        "s": round(time.perf_counter() - t, 1),
    }

    t = time.perf_counter()
    w, logs = federation.run_fedavg(clients, spec, fed_cfg, eval_x, y_test)
    scores = nn_core.predict(w, eval_x)[:, 0]
    out["fl"] = {
        "roc": metrics.roc_auc(scores, y_test),
        "rounds": len(logs),
        "s": round(time.perf_counter() - t, 1),
    }

    t = time.perf_counter()
    encoder_round = federation.federated_encoder_round(clients, fed_cfg)
    out["encoder_s"] = round(time.perf_counter() - t, 1)

    for k in ks:
        t = time.perf_counter()
        k_cfg = federation.FederationConfig(seed=seed, K=k, n_workers=workers, max_rounds=max_rounds)
        bundle, logs = federation.run_cbfl(
            clients, k_cfg, eval_x, y_test, model_spec=spec, encoder_round=encoder_round
        )
        scores, _ = federation.predict_detailed(bundle, eval_x)
        rounds = [l for l in logs if l.phase == federation.PHASE_ROUND]
        out[f"cbfl{k}"] = {
            "roc": metrics.roc_auc(scores, y_test),
            "rounds": len(rounds),
            "s": round(time.perf_counter() - t, 1),
        }
    out["total_s"] = round(time.perf_counter() - t0, 1)
    return out


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", default="0")
    ap.add_argument("--ks", default="5,15,50")
    ap.add_argument("--workers", type=int, default=2)
    ap.add_argument("--max-rounds", type=int, default=200)
    args = ap.parse_args()
    ks = tuple(int(x) for x in args.ks.split(","))
    for s in (int(x) for x in args.seeds.split(",")):
        result = run_seed(s, ks=ks, workers=args.workers, max_rounds=args.max_rounds)
        print(json.dumps(result))
