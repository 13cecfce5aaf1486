"""Kappa-sweep figures from a sweep.csv (columns kappa, metric, value):
log-log scaling of the liquid total variations with kappa^1 / kappa^2
guides, and the convergence metrics of the limit comparison."""

import argparse
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ._io import read_csv, run_cli


SCALING_METRICS = (
    ("sup_tv_v_liquid", "sup TV(v; L)", 1),
    ("sup_tv_tau_liquid", "sup TV(tau; L)", 2),
    ("sup_tv_p_liquid", "sup TV(p; L)", 0),
)

CONVERGENCE_METRICS = ("v_mid_gap", "sup_tau_dev", "a_gap", "b_gap")


def _series(df, metric):
    rows = df[df["metric"] == metric].sort_values("kappa", ascending=False)
    return rows["kappa"].to_numpy(), rows["value"].to_numpy()


def plot_sweep(sweep_csv, out_dir):
    df = read_csv(sweep_csv, ("kappa", "metric", "value"))
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    fig, ax = plt.subplots(figsize=(6, 5))
    kap_ref = None
    for metric, label, order in SCALING_METRICS:
        kap, val = _series(df, metric)
        if len(kap) == 0:
            continue
        kap_ref = kap
        ax.loglog(kap, val, "o-", label=label)
    if kap_ref is not None:
        for order, style in ((1, "--"), (2, ":")):
            guide = kap_ref ** order
            guide *= 0.05 / guide[0]
            ax.loglog(kap_ref, guide, style, color="gray",
                      label=f"kappa^{order} guide")
    ax.set_xlabel("kappa")
    ax.set_ylabel("sup over t")
    ax.invert_xaxis()
    ax.legend(fontsize=8)
    ax.set_title("liquid total variation scalings")
    p = os.path.join(out_dir, "sweep_scalings.png")
    fig.tight_layout()
    fig.savefig(p, dpi=130)
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(6, 5))
    names = list(CONVERGENCE_METRICS) + sorted(
        m for m in df["metric"].unique() if m.startswith("weakstar_"))
    for metric in names:
        kap, val = _series(df, metric)
        if len(kap) == 0:
            continue
        ax.loglog(kap, np.maximum(val, 1e-300), "s-", label=metric)
    ax.set_xlabel("kappa")
    ax.set_ylabel("gap to the limit model")
    ax.invert_xaxis()
    ax.legend(fontsize=8)
    ax.set_title("zero-Mach convergence")
    p = os.path.join(out_dir, "sweep_convergence.png")
    fig.tight_layout()
    fig.savefig(p, dpi=130)
    plt.close(fig)
    paths.append(p)
    return paths


def _run(argv):
    ap = argparse.ArgumentParser(prog="plotkit-sweep")
    ap.add_argument("--sweep", required=True)
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args(argv)
    for p in plot_sweep(args.sweep, args.out_dir):
        print(p)


def main(argv=None):
    return run_cli(_run, argv)


if __name__ == "__main__":
    raise SystemExit(main())
