"""Command-line harness.

Subcommands: fetch-data, build-views, train, ablate, sweep, verify.
Exit codes: 0 success, 1 usage/config error, 2 training divergence,
3 verification failure.
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import datasets, oracles, verify
from .config import load_dataset_from_config, parse_config
from .data import hypergraph_manifest, save_hypergraph, write_json
from .errors import ConfigError, DivergenceError, HyperGCLError, ParseError
from .train import (build_views_for_cfg, canonical_component, run_ablation,
                    run_many_seeds, sweep_global_nodes)

logger = logging.getLogger(__name__)

VIEW_FILES = {"a": "h_attribute.txt", "l": "h_local.txt", "g": "h_global.txt"}


def main(argv=None):
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DivergenceError as exc:
        print(f"training diverged: {exc}", file=sys.stderr)
        for name, value in exc.components.items():
            print(f"  {name} = {value}", file=sys.stderr)
        return 2
    except HyperGCLError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hypergcl",
        description="Multimodal hypergraph contrastive learning harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch-data", help="download and ingest a benchmark dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--root", default=None, help="override HYPERGCL_DATA_DIR")
    p.set_defaults(func=cmd_fetch_data)

    p = sub.add_parser("build-views", help="build and serialize the hypergraph views")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default="out")
    p.set_defaults(func=cmd_build_views)

    p = sub.add_parser("train", help="train over the configured seeds")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default="out")
    p.add_argument("--seed-list", default=None, help="comma-separated seeds")
    p.add_argument("--strategy", choices=["distance", "similarity"], default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("ablate", help="rerun training with components disabled")
    p.add_argument("--config", required=True)
    p.add_argument("--component", nargs="*", default=[])
    p.add_argument("--out-dir", default="out")
    p.add_argument("--seed-list", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("sweep", help="sweep the global-node count")
    p.add_argument("--config", required=True)
    p.add_argument("--ng-range", required=True,
                   help="comma list ('0,1,2') or span ('0:6')")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--seed-list", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the oracle suite")
    p.add_argument("--out", default=None, help="write the report CSV here")
    p.set_defaults(func=cmd_verify)
    return parser


def _load(args):
    run_cfg = parse_config(args.config)
    ds = load_dataset_from_config(run_cfg)
    cfg = run_cfg.train_cfg
    seeds = run_cfg.seeds
    if getattr(args, "seed_list", None):
        seeds = [int(s) for s in args.seed_list.replace(",", " ").split()]
    if getattr(args, "strategy", None):
        from dataclasses import replace
        cfg = replace(cfg, negative_strategy=args.strategy)
    return run_cfg, ds, cfg, seeds


def cmd_fetch_data(args):
    path = datasets.fetch_dataset(args.dataset, root=args.root)
    print(f"dataset ready under {path}")
    return 0


def cmd_build_views(args):
    run_cfg, ds, cfg, _ = _load(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    views = build_views_for_cfg(ds.graph, ds.features, cfg)
    for tag, h in views.items():
        save_hypergraph(h, out / VIEW_FILES[tag])
    manifest = hypergraph_manifest(list(views.values()), run_cfg.config_hash)
    write_json(out / "manifest.json", manifest)
    for key, val in sorted(manifest.items()):
        print(f"{key}: {val}")
    return 0


def cmd_train(args):
    run_cfg, ds, cfg, seeds = _load(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_many_seeds(ds.graph, ds.features, ds.labels, cfg, seeds,
                            workers=args.workers,
                            label=f"{ds.name}_{cfg.negative_strategy}")
    curves_path = _save_checkpoint(out / "checkpoint.npz", ds, cfg, seeds[0],
                                   run_cfg.config_hash, out / "curves.csv")
    payload = result.to_json_dict()
    payload["config_hash"] = run_cfg.config_hash
    payload["curves_path"] = str(curves_path)
    write_json(out / "metrics.json", payload)
    print(f"{result.label}: {result.mean:.2f}±{result.std:.2f}")
    return 0


def cmd_ablate(args):
    run_cfg, ds, cfg, seeds = _load(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.component:
        canonical_component(name)  # usage errors before any training
    rows = []
    full = run_many_seeds(ds.graph, ds.features, ds.labels, cfg, seeds,
                          workers=args.workers, label="full_model")
    rows.append(("full_model", full.mean, full.std))
    for name in args.component:
        res = run_ablation(ds.graph, ds.features, ds.labels, cfg, name, seeds,
                           workers=args.workers)
        rows.append((res.label, res.mean, res.std))
    with open(out / "ablation.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["component", "mean", "std"])
        writer.writerows(rows)
    for label, mean, std in rows:
        print(f"{label:>24}: {mean:.2f}±{std:.2f}")
    return 0


def cmd_sweep(args):
    run_cfg, ds, cfg, seeds = _load(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ng_values = _parse_ng_range(args.ng_range)
    results = sweep_global_nodes(ds.graph, ds.features, ds.labels, cfg,
                                 ng_values, seeds, workers=args.workers)
    with open(out / "sweep.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["n_g", "mean", "std"])
        for n_g, res in zip(ng_values, results):
            writer.writerow([n_g, res.mean, res.std])
    _plot_sweep(ng_values, results, out / "sweep.png")
    for n_g, res in zip(ng_values, results):
        print(f"n_g={n_g}: {res.mean:.2f}±{res.std:.2f}")
    return 0


def cmd_verify(args):
    reports = verify.verification_cases()
    if args.out:
        oracles.write_report_csv(reports, args.out)
    failed = [r for r in reports if not r.passed]
    for r in reports:
        status = "ok" if r.passed else "FAIL"
        print(f"{status:>4}  {r.case_id}  expected={r.expected:.6g} "
              f"actual={r.actual:.6g} abs_err={r.abs_err:.3g}")
    print(f"{len(reports) - len(failed)}/{len(reports)} oracle cases passed")
    return 0 if not failed else 3


def _plot_sweep(ng_values, results, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    means = [r.mean for r in results]
    stds = [r.std for r in results]
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.errorbar(ng_values, means, yerr=stds, marker="o")
    ax.set_xlabel("global node count")
    ax.set_ylabel("test accuracy (%)")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _parse_ng_range(text):
    text = text.strip()
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.replace(",", " ").split()]


def _save_checkpoint(path, ds, cfg, seed, config_hash, curves_path):
    """Train once on the first seed; persist its best parameters and the
    per-epoch loss/accuracy curves."""
    from dataclasses import replace
    from .train import train

    outcome = train(ds.graph, ds.features, ds.labels, replace(cfg, seed=seed))
    meta = {
        "format_version": 1,
        "config_hash": config_hash,
        "seed": seed,
        "best_epoch": outcome.best_epoch,
        "test_acc": outcome.test_acc,
        "shapes": {k: list(v.shape) for k, v in outcome.params.items()},
    }
    arrays = {k.replace(".", "__"): v for k, v in outcome.params.items()}
    np.savez(path, __meta__=json.dumps(meta), **arrays)
    keys = sorted(outcome.history)
    with open(curves_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["epoch"] + keys)
        for i in range(len(outcome.history["total"])):
            writer.writerow([i] + [outcome.history[k][i] for k in keys])
    return curves_path


def load_checkpoint(path):
    """Load a checkpoint; verifies array shapes against the stored header."""
    with np.load(path, allow_pickle=False) as blob:
        meta = json.loads(str(blob["__meta__"]))
        params = {k.replace("__", "."): blob[k] for k in blob.files
                  if k != "__meta__"}
    for name, shape in meta["shapes"].items():
        if name not in params or list(params[name].shape) != shape:
            raise ParseError(f"checkpoint {path}: shape mismatch for {name}")
    return params, meta


if __name__ == "__main__":
    sys.exit(main())
