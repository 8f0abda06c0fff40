"""Assignment problems on the matrix family d = R + lambda*R^T.

Exact Jonker-Volgenant solver, cycle statistics of optimal permutations,
series predictions for the cycle-weight model, weight fitting, and the
reproducible Monte Carlo harness. Everything here wraps the C++ core.
"""

from ._core import (
    Assignment,
    BruteForceResult,
    CellResult,
    CollapsePoint,
    CostMatrix,
    CycleSpectrum,
    EnsembleConfig,
    EntryDistribution,
    FigureError,
    FitError,
    FitPoint,
    FitResult,
    LongCyclePrediction,
    Permutation,
    QPair,
    RandomStream,
    RelationReport,
    RelationRow,
    ScalingReport,
    ScalingRow,
    SeriesTable,
    SpectrumEstimate,
    SweepSpec,
    ThetaEstimate,
    ValidationReport,
    ValidationRow,
    all_figure_ids,
    assignment_cost,
    brute_force,
    cell_seed,
    check_certificate,
    cost_expansion,
    decompose,
    emit_figure_data,
    fit_corrected,
    fit_uncorrected,
    load_results,
    nu_nk,
    omega_limit,
    parisi_sum,
    predicted_long_cycles,
    predicted_pk,
    relation_check,
    run_cell,
    run_sweep,
    sample_matrix,
    scaling_check,
    slope_alpha,
    solve,
    theta,
    transform_equivalence,
    validate_solver,
)

__all__ = [
    "Assignment",
    "BruteForceResult",
    "CellResult",
    "CollapsePoint",
    "CostMatrix",
    "CycleSpectrum",
    "EnsembleConfig",
    "EntryDistribution",
    "FigureError",
    "FitError",
    "FitPoint",
    "FitResult",
    "LongCyclePrediction",
    "Permutation",
    "QPair",
    "RandomStream",
    "RelationReport",
    "RelationRow",
    "ScalingReport",
    "ScalingRow",
    "SeriesTable",
    "SpectrumEstimate",
    "SweepSpec",
    "ThetaEstimate",
    "ValidationReport",
    "ValidationRow",
    "all_figure_ids",
    "assignment_cost",
    "brute_force",
    "cell_seed",
    "check_certificate",
    "cost_expansion",
    "decompose",
    "emit_figure_data",
    "fit_corrected",
    "fit_uncorrected",
    "load_results",
    "nu_nk",
    "omega_limit",
    "parisi_sum",
    "predicted_long_cycles",
    "predicted_pk",
    "relation_check",
    "run_cell",
    "run_sweep",
    "sample_matrix",
    "scaling_check",
    "slope_alpha",
    "solve",
    "theta",
    "transform_equivalence",
    "validate_solver",
]
