"""Deterministic report serialization and figure rendering.

Reports are wrapped in an envelope whose sha256 is computed over the
canonical JSON encoding of the payload alone (sorted keys, compact
separators).  Timestamps live outside the hashed payload so re-runs
with identical parameters and seed hash identically.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from ._version import __version__


@dataclass
class RunConfig:
    """Invocation record embedded in every report payload.

    The thread count is recorded in the envelope, not here: trial
    results merge by index, so the hashed payload must be identical
    for any thread count.
    """

    command: str
    params: dict
    seed: int | None
    threads: int = 1

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": dict(self.params),
            "seed": self.seed,
            "version": __version__,
        }


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def payload_sha256(payload: dict) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def envelope(payload: dict, threads: int | None = None) -> dict:
    env = {
        "payload": payload,
        "sha256": payload_sha256(payload),
        "created": datetime.now(timezone.utc).isoformat(),
    }
    if threads is not None:
        env["threads"] = threads
    return env


def write_json_report(path: str | Path, payload: dict, threads: int | None = None) -> str:
    """Write an enveloped report; returns the payload hash."""
    env = envelope(payload, threads=threads)
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(env, sort_keys=True, indent=2) + "\n")
    return env["sha256"]


def write_csv(path: str | Path, rows: list[list]) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        csv.writer(fh).writerows(rows)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_verify_figure(report_dict: dict, path: str | Path) -> None:
    """Per-trial measured values against the bound, skips marked."""
    plt = _pyplot()
    trials = report_dict["trials"]
    fig, ax = plt.subplots(figsize=(7, 4))
    lemma = report_dict["lemma"]
    if lemma == "mplus-link" and report_dict["notes"].get("per_m"):
        per_m = report_dict["notes"]["per_m"]
        ms = [r["m"] for r in per_m if r["mean_lambda2"] is not None]
        means = [r["mean_lambda2"] for r in per_m if r["mean_lambda2"] is not None]
        bounds = [r["bound"] for r in per_m]
        ax.loglog(ms, means, "o-", label="mean lambda2")
        ax.loglog([r["m"] for r in per_m], bounds, "s--", label="bound")
        slope = report_dict["notes"].get("slope")
        if slope is not None:
            ax.set_title(f"{lemma}: fitted slope {slope:.3f}")
        ax.set_xlabel("m")
        ax.set_ylabel("lambda2")
    else:
        xs = [t["index"] for t in trials if not t["skipped"]]
        ys = [t["measured"] for t in trials if not t["skipped"]]
        bs = [t["bound"] for t in trials if not t["skipped"]]
        ax.plot(xs, ys, "o", markersize=3, label="measured")
        ax.plot(xs, bs, "-", linewidth=1, label="bound")
        skipped = [t["index"] for t in trials if t["skipped"]]
        if skipped:
            ax.plot(skipped, [0.0] * len(skipped), "x", color="gray", label="skipped")
        ax.set_title(
            f"{lemma}: fraction holding {report_dict['fraction_holding']:.3f}"
        )
        ax.set_xlabel("trial")
        ax.set_ylabel("value")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=120)
    plt.close(fig)


def render_sweep_figure(rows: list[dict], path: str | Path) -> None:
    """Log-log sweep of mean lambda2 and bound against m."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    ms = [r["m"] for r in rows if r["mean_lambda2"] is not None]
    means = [r["mean_lambda2"] for r in rows if r["mean_lambda2"] is not None]
    ax.loglog(ms, means, "o-", label="mean lambda2")
    ax.loglog([r["m"] for r in rows], [r["bound"] for r in rows], "s--", label="bound")
    ax.set_xlabel("m")
    ax.set_ylabel("lambda2")
    ax.set_title("link spectral sweep")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=120)
    plt.close(fig)


def render_spectrum_figure(report_dict: dict, path: str | Path) -> None:
    """Sorted spectrum with the second eigenvalue highlighted."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    spectrum = report_dict.get("spectrum")
    if spectrum:
        ax.plot(range(len(spectrum)), spectrum, ".", markersize=4)
        ax.axhline(report_dict["lambda2"], color="red", linewidth=1, label="lambda2")
        lam_b = report_dict.get("lambda_bipartite")
        if lam_b is not None:
            ax.axhline(lam_b, color="green", linewidth=1, label="bipartite constant")
        ax.legend(loc="best", fontsize=8)
    else:
        ax.text(
            0.5,
            0.5,
            f"lambda2 = {report_dict['lambda2']:.6g} ({report_dict['solver']})",
            ha="center",
            va="center",
            transform=ax.transAxes,
        )
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    ax.set_title("random walk spectrum")
    fig.tight_layout()
    fig.savefig(Path(path), dpi=120)
    plt.close(fig)
