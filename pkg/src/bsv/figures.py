"""Status-panel figure for a verification report.

One row per check, colored by status; written next to the report when the
CLI is invoked with --figure.  Matplotlib's Agg backend keeps this headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Patch

STATUS_COLORS = {
    "Pass": "#2e7d32",
    "CertifiedModP": "#00838f",
    "Witnessed": "#1565c0",
    "Asserted": "#9e9e9e",
    "Fail": "#c62828",
}


def render_report_figure(report, path: str):
    checks = sorted(report.checks, key=lambda c: c.id)
    n = max(len(checks), 1)
    fig, ax = plt.subplots(figsize=(8.5, 0.28 * n + 1.6))
    for row, c in enumerate(reversed(checks)):
        ax.barh(row, 1.0, color=STATUS_COLORS.get(c.status, "#616161"), height=0.82)
        ax.text(0.012, row, c.id, va="center", ha="left", fontsize=7, color="white", family="monospace")
        ax.text(0.988, row, c.status, va="center", ha="right", fontsize=7, color="white")
    ax.set_xlim(0, 1)
    ax.set_ylim(-0.6, n - 0.4)
    ax.set_xticks([])
    ax.set_yticks([])
    title = f"{report.scenario} [{report.field}]"
    if report.obstruction and report.obstruction.get("quotient_order") is not None:
        o = report.obstruction
        title += (
            f"   |Gamma|={o['gamma_order']} |H|={o['H_order']} |H'|={o['Hprime_order']}"
            f" quotient={o['quotient_order']}"
        )
    ax.set_title(title, fontsize=9)
    handles = [
        Patch(color=col, label=st)
        for st, col in STATUS_COLORS.items()
        if any(c.status == st for c in checks)
    ]
    if handles:
        ax.legend(handles=handles, loc="lower right", fontsize=6, framealpha=0.9)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
