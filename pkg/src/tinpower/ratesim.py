"""Finite-power sweeps comparing a graded backoff against binary control.

The graded allocation reaches the asymptotic optimum on the tiered grid
networks, so its finite-power sum rate serves as a proxy for optimal
power control; the sweep tracks how the gain over binary control builds
toward the asymptotic ratio as power grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Sequence

from .bpc import solve_bpc_rate
from .gdof import sum_rate, user_rate  # noqa: F401  (user_rate re-exported)
from .power import PowerAllocation
from .topology import Topology

CSV_HEADER = "p_db,r_sigma_proxy,r_sigma_bpc,gain"


@dataclass(frozen=True)
class SweepPoint:
    p_db: float
    r_sigma_proxy: float
    r_sigma_bpc: float
    gain: float


def kk_power_allocation(m: int) -> PowerAllocation:
    """Graded backoff for the m**2-user grid: tier j backs off by j - 1.

    Under it every user lands exactly one GDoF, the full m**2 total.
    """
    if m < 1:
        raise ValueError(f"grid parameter must be positive, got m={m}")
    entries = []
    for j in range(1, m + 1):
        entries.extend([Fraction(1 - j)] * m)
    return PowerAllocation(tuple(entries))


def gain_sweep(
    topology: Topology,
    allocation: PowerAllocation,
    p_db_list: Sequence[float],
) -> tuple[SweepPoint, ...]:
    """Proxy and binary sum rates with their ratio at each power level."""
    points = []
    for p_db in p_db_list:
        proxy = sum_rate(topology, allocation, p_db)
        binary = solve_bpc_rate(topology, p_db).value
        gain = proxy / binary if binary > 0 else float("nan")
        points.append(
            SweepPoint(
                p_db=float(p_db),
                r_sigma_proxy=proxy,
                r_sigma_bpc=binary,
                gain=gain,
            )
        )
    return tuple(points)


def write_sweep_csv(points: Sequence[SweepPoint], stream: IO[str]) -> None:
    stream.write(CSV_HEADER + "\n")
    for pt in points:
        stream.write(
            f"{pt.p_db:.9g},{pt.r_sigma_proxy:.9g},{pt.r_sigma_bpc:.9g},{pt.gain:.9g}\n"
        )


def render_sweep_figure(points: Sequence[SweepPoint], path: str) -> None:
    """Plot both rates and the gain over the sweep and write an image."""
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    fig = Figure(figsize=(7.0, 4.5), dpi=150)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot()
    p = [pt.p_db for pt in points]
    ax.plot(p, [pt.r_sigma_proxy for pt in points], "r-", label="graded backoff")
    ax.plot(p, [pt.r_sigma_bpc for pt in points], "k--", label="binary control")
    ax.set_xlabel("transmit power (dB)")
    ax.set_ylabel("sum rate (bits)")
    ax.grid(True, alpha=0.3)
    ax2 = ax.twinx()
    ax2.plot(p, [pt.gain for pt in points], "b-.", label="gain")
    ax2.set_ylabel("sum-rate gain")
    lines, labels = ax.get_legend_handles_labels()
    lines2, labels2 = ax2.get_legend_handles_labels()
    ax.legend(lines + lines2, labels + labels2, loc="upper left")
    fig.tight_layout()
    fig.savefig(path)
