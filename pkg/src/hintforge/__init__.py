"""hintforge: a workbench for distribution-aware program learning.

Structured instance distributions with certified optima, measured heuristic
and exact solver pools, and three learning mechanisms (runtime-aware solver
selection, margin-based hint recovery, SAT backdoor learning) tied together
by a beam-search synthesis loop and a benchmark harness.
"""

from .backdoor import (
    BackdoorLearner,
    dpll,
    dpll_formula,
    horn_sat,
    recover_backdoor,
    salience,
    salience_profile,
    solve_with_backdoor,
)
from .erm import ErmConfig, ErmSelection, ErmSolverSelector, select_erm
from .generators import (
    ALL_FAMILIES,
    FamilySpec,
    SplitSpec,
    TargetDataset,
    generate_horn_backdoor_formula,
    generate_target,
    theorem3_samples,
)
from .harness import (
    EvalReport,
    PerturbationReport,
    aggregate_diagnostics,
    run_benchmark,
    run_perturbation_ablation,
)
from .heuristics import MeasuredSolver, RunMeasurement, catalog, run_measured
from .hints import RecoveryResult, ScoreFamily, recover_hint, sufficient_samples
from .instances import (
    CnfFormula,
    Graph,
    Instance,
    PackingLpInstance,
    PublicInstance,
    TspInstance,
    from_dimacs,
    from_json,
    relabel_graph,
    strip_to_public,
    to_dimacs,
    to_json,
)
from .oracles import OracleBudget, solve_exact
from .scoring import ScoredResult, optimality_rate, quality, verify
from .synthesis import (
    BackdoorProposer,
    Candidate,
    CandidateScore,
    CatalogProposer,
    Proposer,
    SubprocessProposer,
    TwoOptRefinerProposer,
    run_synthesis,
)

__version__ = "0.1.0"
