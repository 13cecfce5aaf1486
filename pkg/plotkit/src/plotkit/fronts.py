"""Space-time front diagram from an events.csv plus pressure profiles from a
snapshots.csv."""

import argparse

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ._io import read_csv, run_cli


LOCATION_COLORS = {
    "Gas": "tab:blue",
    "Liquid": "tab:red",
    "InterfaceLeft": "tab:green",
    "InterfaceRight": "tab:green",
    "StripEdge": "tab:orange",
}


def _interfaces(events):
    """Interface positions as seen by the ledger; the left one sits at z=0,
    the right one at z=m."""
    right = events.loc[events["location"] == "InterfaceRight", "z"]
    m = float(right.iloc[0]) if len(right) else 1.0
    return 0.0, m


def plot_fronts(events_csv, snapshots_csv, out_path):
    events = read_csv(events_csv, ("t", "z", "location", "class"))
    snaps = read_csv(snapshots_csv, ("t", "z", "p", "v", "tau"))
    z0, zm = _interfaces(events)

    fig, (ax, ax2) = plt.subplots(
        2, 1, figsize=(8, 9), height_ratios=[2, 1], sharex=True)
    for loc, grp in events.groupby("location"):
        ax.plot(grp["z"], grp["t"], ".", ms=2,
                color=LOCATION_COLORS.get(loc, "gray"), label=loc)
    for z in (z0, zm):
        ax.axvline(z, color="k", lw=0.8)
    ax.axvspan(z0, zm, color="0.92", zorder=0)
    ax.set_ylabel("t")
    ax.set_title("events in the (z, t) plane; shaded band is the liquid slab")
    if len(events):
        ax.legend(loc="upper right", fontsize=8, markerscale=4)

    times = np.unique(snaps["t"].to_numpy())
    for i, t in enumerate(times):
        row = snaps[snaps["t"] == t]
        ax2.plot(row["z"], row["p"], lw=0.9,
                 color=plt.cm.viridis(i / max(len(times) - 1, 1)),
                 label=f"t={t:g}" if len(times) <= 6 else None)
    for z in (z0, zm):
        ax2.axvline(z, color="k", lw=0.8)
    ax2.set_xlabel("z")
    ax2.set_ylabel("p")
    if len(times) <= 6:
        ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)


def _run(argv):
    ap = argparse.ArgumentParser(prog="plotkit-fronts")
    ap.add_argument("--events", required=True)
    ap.add_argument("--snapshots", required=True)
    ap.add_argument("--out", default="fronts.png")
    args = ap.parse_args(argv)
    plot_fronts(args.events, args.snapshots, args.out)
    print(args.out)


def main(argv=None):
    return run_cli(_run, argv)


if __name__ == "__main__":
    raise SystemExit(main())
