"""Exact GDoF power control under treating-interference-as-noise."""

from .bounds import (
    BoundCertificate,
    CertificateReport,
    bound_B,
    certificate_small_k,
    certificate_square,
    envelope_holds,
    small_k_report,
    square_families,
    square_report,
    ratio_envelope,
)
from .bpc import BpcResult, solve_bpc_gdof, solve_bpc_rate
from .gdof import GdofOutcome, sum_gdof, sum_rate, user_gdof, user_rate
from .opc import (
    OpcResult,
    is_strictly_positive_class,
    solve_opc,
    solve_opc_grid,
    subset_lp,
)
from .power import (
    OFF,
    PowerAllocation,
    binary_allocation,
    format_allocation,
    normalize_power,
    parse_allocation,
)
from .ratesim import SweepPoint, gain_sweep, kk_power_allocation, write_sweep_csv
from .search import SearchReport, local_search, random_topology, ratio
from .topology import (
    Topology,
    append_isolated_user,
    extremal_grid,
    extremal_small,
    format_topology,
    lift_cross_links,
    parse_topology,
)

__version__ = "0.1.0"

__all__ = [
    "OFF",
    "BoundCertificate",
    "BpcResult",
    "CertificateReport",
    "GdofOutcome",
    "OpcResult",
    "PowerAllocation",
    "SearchReport",
    "SweepPoint",
    "Topology",
    "append_isolated_user",
    "binary_allocation",
    "bound_B",
    "certificate_small_k",
    "certificate_square",
    "envelope_holds",
    "extremal_grid",
    "extremal_small",
    "format_allocation",
    "format_topology",
    "gain_sweep",
    "is_strictly_positive_class",
    "kk_power_allocation",
    "lift_cross_links",
    "local_search",
    "normalize_power",
    "parse_allocation",
    "parse_topology",
    "random_topology",
    "ratio",
    "small_k_report",
    "solve_bpc_gdof",
    "solve_bpc_rate",
    "solve_opc",
    "solve_opc_grid",
    "square_families",
    "square_report",
    "subset_lp",
    "sum_gdof",
    "sum_rate",
    "ratio_envelope",
    "user_gdof",
    "user_rate",
    "write_sweep_csv",
]
