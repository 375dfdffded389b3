"""Dev probe: per-round metric trajectories for one seed across K values."""

import sys
import time

import numpy as np

from cbfl import datagen, federation
from cbfl.federation import PHASE_ROUND, FederationConfig

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
ks = [int(x) for x in (sys.argv[2] if len(sys.argv) > 2 else "5,15,50").split(",")]

dataset = datagen.generate_cohort(datagen.GeneratorConfig(seed=seed))
train_set, test_set = datagen.split_within_hospital(dataset, seed=seed)
y_tr = datagen.task_labels(train_set, "mortality")
y_te = datagen.task_labels(test_set, "mortality")
clients = federation.clients_from_cohort(train_set.features, y_tr, train_set.hospital_ids)
eval_x = test_set.features.astype(np.float64)
spec = federation.community_model_spec(dataset.n_features)
config = FederationConfig(seed=seed)

t0 = time.perf_counter()
w, logs = federation.run_fedavg(clients, spec, config, eval_x, y_te)
hist = [l.metric for l in logs]
print(f"fl: rounds={len(hist)} best={max(hist):.4f} t={time.perf_counter()-t0:.0f}s", flush=True)
print("  traj:", " ".join(f"{m:.4f}" for m in hist), flush=True)

t1 = time.perf_counter()
enc = federation.federated_encoder_round(clients, config)
print(f"encoder done t={time.perf_counter()-t1:.0f}s", flush=True)
for k in ks:
    t1 = time.perf_counter()
    bundle, logs = federation.run_cbfl(
        clients, FederationConfig(seed=seed, K=k), eval_x, y_te, model_spec=spec, encoder_round=enc
    )
    hist = [l.metric for l in logs if l.phase == PHASE_ROUND]
    print(f"cbfl{k}: rounds={len(hist)} best={max(hist):.4f} t={time.perf_counter()-t1:.0f}s", flush=True)
    print("  traj:", " ".join(f"{m:.4f}" for m in hist), flush=True)
