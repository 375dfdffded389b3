"""Dev diagnostic: encoding-space group separation quality per seed."""

import sys

import numpy as np

from cbfl import autoencoder, clustering, datagen, federation, seeding

for seed in [int(s) for s in (sys.argv[1] if len(sys.argv) > 1 else "0,1").split(",")]:
    cfg = datagen.GeneratorConfig(seed=seed)
    ds = datagen.generate_cohort(cfg)
    groups, _ = datagen.latent_group_profiles(cfg)
    tr, te = datagen.split_within_hospital(ds, seed=seed)
    y = datagen.task_labels(tr, "mortality")
    clients = federation.clients_from_cohort(tr.features, y, tr.hospital_ids)
    fc = federation.FederationConfig(seed=seed)
    enc, _ = federation.federated_encoder_round(clients, fc)
    means = np.stack([autoencoder.client_mean_encoding(enc, c.features) for c in clients])
    km = clustering.fit_kmeans(means, 5, seeding.derive_seed(seed, seeding.KMEANS))
    hosp_comm = clustering.assign_many(km, means)
    purity = 0
    for g in range(5):
        comm_counts = np.bincount(hosp_comm[groups == g], minlength=5)
        purity += comm_counts.max()
    majority = [int(np.bincount(hosp_comm[groups == g], minlength=5).argmax()) for g in range(5)]
    conc = []
    for i, c in enumerate(clients):
        a = clustering.assign_many(km, autoencoder.encode(enc, c.features))
        conc.append(float((a == hosp_comm[i]).mean()))
    print(
        f"seed {seed}: purity {purity}/50, majority communities {majority} "
        f"(distinct={len(set(majority))}), example own-community concentration "
        f"mean {np.mean(conc):.2f} min {np.min(conc):.2f}",
        flush=True,
    )
