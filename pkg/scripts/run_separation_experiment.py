#!/usr/bin/env python3
"""End-to-end demo on synthetic clusters: generate data, fit centroids,
score with every method, and print a comparison table.

Usage: python3 scripts/run_separation_experiment.py [--seed N]
"""

import argparse

from oodscore import (
    Method,
    NcddVariant,
    ScoreConfig,
    SynthSpec,
    evaluate,
    fit_centroids,
    generate,
    score_set,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20240715)
    args = ap.parse_args()

    spec = SynthSpec(n_classes=3, dim=64, per_class_n=500, id_std=1.0,
                     separation=10.0, ood_mode="equidistant_shell",
                     ood_n=500, seed=args.seed)
    train, test_id, test_ood = generate(spec)
    model = fit_centroids(train)

    configs = [
        ("ncdd/weighted", ScoreConfig(method=Method.NCDD, variant=NcddVariant.WEIGHTED,
                                      alpha1=-1, alpha2=0)),
        ("ncdd/unweighted", ScoreConfig(method=Method.NCDD,
                                        variant=NcddVariant.UNWEIGHTED_DIFF)),
        ("ncdd/nonnearest", ScoreConfig(method=Method.NCDD,
                                        variant=NcddVariant.NONNEAREST_ONLY)),
        ("ncdd/-nearest", ScoreConfig(method=Method.NCDD,
                                      variant=NcddVariant.NEG_NEAREST_ONLY)),
        ("knn", ScoreConfig(method=Method.KNN, k=10)),
    ]
    print(f"{'method':<18} {'auroc':>9} {'fpr95':>9}")
    for name, cfg in configs:
        ids = score_set(test_id, model, cfg, train=train).scores
        oods = score_set(test_ood, model, cfg, train=train).scores
        rep = evaluate(ids, oods)
        print(f"{name:<18} {rep.auroc:>9.4f} {rep.fpr95:>9.4f}")


if __name__ == "__main__":
    main()
