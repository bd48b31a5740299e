"""Beam-search synthesis over candidate (hypothesis, analysis, solver) programs.

Each round the proposer is asked for up to K candidates built from the
current beam.  A candidate's analysis runs once on the public training set
to produce its summary; its solver is then scored on train and validation
instances.  Candidates rank lexicographically by (quality, optimality,
-runtime); the beam keeps the best candidate per diversity key and fills
remaining slots by global rank.  The final answer is the archive-wide best
with its analysis re-run on the training set.  Test instances never enter
this module.
"""

from __future__ import annotations

import json
import logging
import subprocess
import time
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Optional

from .heuristics import catalog as heuristic_catalog
from .heuristics.base import DEFAULT_FAILURE_RUNTIME_MS
from .instances import Instance, PublicInstance, strip_to_public
from .rng import solver_seed, stream
from .scoring import quality

log = logging.getLogger(__name__)


class SynthesisError(RuntimeError):
    pass


ACTIONS = ("seed", "refine", "fork", "replace", "push-runtime", "push-quality")


@dataclass(frozen=True)
class Hypothesis:
    title: str
    rule_summary: str = ""
    evidence_plan: str = ""
    strategy: str = ""
    failure_modes: str = ""
    diversity_key: str = "default"


@dataclass(frozen=True)
class Candidate:
    candidate_id: str
    hypothesis: Hypothesis
    analysis: Callable  # tuple of PublicInstance -> summary
    solver: Callable  # (PublicInstance, summary, rng) -> Solution
    summary: Any = None  # set by executing analysis, exactly once per train set


@dataclass(frozen=True)
class CandidateScore:
    q_val: float
    o_val: float
    t_val_ms: float
    failed: bool = False

    def __post_init__(self):
        if self.failed and self.q_val != 0.0:
            raise SynthesisError("failed candidates must carry zero quality")

    @property
    def lex_key(self):
        return (self.q_val, self.o_val, -self.t_val_ms)


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: Candidate
    score: CandidateScore
    train_score: Optional[CandidateScore] = None
    per_instance: tuple = field(default=(), repr=False)  # (instance id, quality)


@dataclass(frozen=True)
class BeamState:
    iteration: int
    survivors: tuple  # ScoredCandidate, at most B
    archive: tuple  # every ScoredCandidate ever evaluated


@dataclass(frozen=True)
class SynthesisConfig:
    dataset_seed: int = 0
    failure_runtime_ms: float = DEFAULT_FAILURE_RUNTIME_MS
    analysis_timeout_ms: float = 60_000.0


@dataclass(frozen=True)
class ProposerContext:
    action: str
    round_index: int
    slot: int
    parent_hypothesis: Optional[Hypothesis] = None
    parent_summary: Any = None
    parent_metrics: Optional[CandidateScore] = None
    failure_cases: tuple = ()  # up to 3 public instances with lowest quality


class Proposer:
    """Candidate source.  Implementations must be deterministic for
    reproducible runs."""

    def propose(self, context: ProposerContext) -> Optional[Candidate]:
        raise NotImplementedError


def _rank_key(sc: ScoredCandidate):
    q, o, negt = sc.score.lex_key
    return (-q, -o, -negt, sc.candidate.candidate_id)


def execute_analysis(candidate: Candidate, train_public,
                     cfg: SynthesisConfig) -> Candidate:
    """Run the analysis once on the public training set.

    Exceptions or a blown timeout mark the candidate failed by leaving the
    summary as a failure sentinel.
    """
    t0 = time.monotonic()
    try:
        summary = candidate.analysis(tuple(train_public))
    except Exception as exc:
        log.info("candidate %s analysis failed: %s", candidate.candidate_id, exc)
        return replace(candidate, summary=_FAILED)
    elapsed_ms = (time.monotonic() - t0) * 1000.0
    if elapsed_ms > cfg.analysis_timeout_ms:
        log.info(
            "candidate %s analysis timed out (%.0f ms)",
            candidate.candidate_id,
            elapsed_ms,
        )
        return replace(candidate, summary=_FAILED)
    return replace(candidate, summary=summary)


class _FailureSentinel:
    def __repr__(self):
        return "<analysis failed>"


_FAILED = _FailureSentinel()


def score_candidate(candidate: Candidate, eval_set,
                    cfg: SynthesisConfig = SynthesisConfig()) -> ScoredCandidate:
    """Evaluate a candidate's solver on a list of full instances.

    Instance-level solver exceptions score that instance 0 with the failure
    runtime; other instances score normally.  A failed analysis zeroes the
    whole candidate.
    """
    eval_set = list(eval_set)
    if candidate.summary is _FAILED:
        return ScoredCandidate(
            candidate,
            CandidateScore(0.0, 0.0, cfg.failure_runtime_ms, failed=True),
        )
    if not eval_set:
        return ScoredCandidate(candidate, CandidateScore(0.0, 0.0, 0.0))
    qualities, optimals, runtimes, logs = [], [], [], []
    for inst in eval_set:
        public = strip_to_public(inst)
        rng = stream(solver_seed(cfg.dataset_seed, candidate.candidate_id, inst.id))
        t0 = time.monotonic()
        try:
            solution = candidate.solver(public, candidate.summary, rng)
            elapsed_ms = (time.monotonic() - t0) * 1000.0
            scored = quality(inst, solution)
            q, opt = scored.quality, scored.optimal
        except Exception:
            elapsed_ms = cfg.failure_runtime_ms
            q, opt = 0.0, False
        qualities.append(q)
        optimals.append(1.0 if opt else 0.0)
        runtimes.append(elapsed_ms)
        logs.append((inst.id, q))
    n = len(eval_set)
    score = CandidateScore(
        sum(qualities) / n, sum(optimals) / n, sum(runtimes) / n
    )
    return ScoredCandidate(candidate, score, per_instance=tuple(logs))


def update_beam(state: BeamState, scored, beam_width: int) -> BeamState:
    """Two-pass beam selection.

    Pass 1 keeps the per-diversity-key best, truncated to the beam width by
    rank; pass 2 fills any remaining slots by global rank.  Candidates whose
    key winner was displaced in pass 1's truncation are not re-admitted.
    """
    if beam_width < 1:
        raise SynthesisError("beam width must be at least 1")
    pool = list(state.survivors) + list(scored)
    # Deduplicate by candidate id, preferring the newest entry.
    by_id = {}
    for sc in pool:
        by_id[sc.candidate.candidate_id] = sc
    ranked = sorted(by_id.values(), key=_rank_key)
    per_key_best = {}
    for sc in ranked:
        key = sc.candidate.hypothesis.diversity_key
        if key not in per_key_best:
            per_key_best[key] = sc
    key_winners = sorted(per_key_best.values(), key=_rank_key)
    survivors = key_winners[:beam_width]
    displaced = {
        sc.candidate.candidate_id for sc in key_winners[beam_width:]
    }
    if len(survivors) < beam_width:
        kept = {sc.candidate.candidate_id for sc in survivors}
        for sc in ranked:
            if len(survivors) >= beam_width:
                break
            cid = sc.candidate.candidate_id
            if cid in kept or cid in displaced:
                continue
            survivors.append(sc)
            kept.add(cid)
        survivors.sort(key=_rank_key)
    archive = state.archive + tuple(
        sc for sc in scored
        if sc.candidate.candidate_id
        not in {a.candidate.candidate_id for a in state.archive}
    )
    return BeamState(state.iteration + 1, tuple(survivors), archive)


def _failure_cases(survivor: Optional[ScoredCandidate], val_set) -> tuple:
    if survivor is None or not survivor.per_instance:
        return ()
    worst = sorted(survivor.per_instance, key=lambda t: (t[1], t[0]))[:3]
    ids = {iid for iid, _ in worst}
    return tuple(strip_to_public(i) for i in val_set if i.id in ids)


@dataclass(frozen=True)
class SynthesisResult:
    best: ScoredCandidate
    archive: tuple
    rounds: tuple  # per-round archive-best lexicographic scores


def run_synthesis(
    proposer: Proposer,
    train_set,
    val_set,
    iterations: int = 4,
    beam_width: int = 4,
    budget_per_round: int = 8,
    cfg: SynthesisConfig = SynthesisConfig(),
) -> SynthesisResult:
    """Algorithm main loop; see the module docstring for the protocol."""
    if min(iterations, beam_width, budget_per_round) < 1:
        raise SynthesisError("R, B, K must all be at least 1")
    train_set = list(train_set)
    val_set = list(val_set)
    train_ids = {i.id for i in train_set}
    if train_ids & {i.id for i in val_set}:
        raise SynthesisError("train and validation splits must be disjoint")
    train_public = tuple(strip_to_public(i) for i in train_set)

    state = BeamState(0, (), ())
    round_bests = []
    any_candidate = False
    for r in range(iterations):
        scored_round = []
        survivors = state.survivors
        for slot in range(budget_per_round):
            if r == 0 or not survivors:
                action = "seed"
                parent = None
            else:
                action = ACTIONS[1 + (slot % (len(ACTIONS) - 1))]
                parent = survivors[slot % len(survivors)]
            context = ProposerContext(
                action=action,
                round_index=r,
                slot=slot,
                parent_hypothesis=parent.candidate.hypothesis if parent else None,
                parent_summary=parent.candidate.summary if parent else None,
                parent_metrics=parent.score if parent else None,
                failure_cases=_failure_cases(parent, val_set),
            )
            try:
                candidate = proposer.propose(context)
            except Exception as exc:
                log.info("proposer failed on round %d slot %d: %s", r, slot, exc)
                continue
            if candidate is None:
                continue
            candidate = execute_analysis(candidate, train_public, cfg)
            # Train-side evaluation is informational; ranking uses validation.
            train_sc = score_candidate(candidate, train_set, cfg)
            val_sc = score_candidate(candidate, val_set, cfg)
            scored_round.append(replace(val_sc, train_score=train_sc.score))
            any_candidate = True
        if not scored_round:
            log.info("round %d produced no candidates", r)
        state = update_beam(state, scored_round, beam_width)
        if state.archive:
            best_so_far = min(state.archive, key=_rank_key)
            round_bests.append(best_so_far.score.lex_key)
    if not any_candidate or not state.archive:
        raise SynthesisError("no candidate was ever produced")
    best = min(state.archive, key=_rank_key)
    # Re-run the winner's analysis before returning it.
    refreshed = execute_analysis(best.candidate, train_public, cfg)
    best = replace(best, candidate=refreshed)
    return SynthesisResult(best, state.archive, tuple(round_bests))


# ---------------------------------------------------------------------------
# Stub proposers


class CatalogProposer(Proposer):
    """Emits the heuristic catalog, one candidate per solver, cycling."""

    def __init__(self, problem_class: str):
        self.problem_class = problem_class
        self.solvers = heuristic_catalog(problem_class)
        self._emitted = 0

    def propose(self, context: ProposerContext) -> Optional[Candidate]:
        solver = self.solvers[self._emitted % len(self.solvers)]
        serial = self._emitted
        self._emitted += 1

        def analysis(train_public, _solver=solver):
            return {"solverId": _solver.id, "trainSize": len(train_public)}

        def solve(public: PublicInstance, summary, rng, _solver=solver):
            solution, _trace = _solver.solve(public, rng)
            return solution

        return Candidate(
            candidate_id=f"catalog-{serial:03d}-{solver.id.replace('/', '-')}",
            hypothesis=Hypothesis(
                title=f"baseline {solver.id}",
                rule_summary="apply a fixed catalog heuristic",
                strategy=context.action,
                diversity_key=solver.id,
            ),
            analysis=analysis,
            solver=solve,
        )


class BackdoorProposer(Proposer):
    """Learns a SAT backdoor from the training formulas and deploys the
    compiled solver; instances must be maxsat-class CNF payloads."""

    def __init__(self, k: int = 2):
        self.k = k
        self._emitted = 0

    def propose(self, context: ProposerContext) -> Optional[Candidate]:
        from .backdoor import recover_backdoor, solve_with_backdoor
        from .instances import Assignment

        serial = self._emitted
        self._emitted += 1
        k = self.k

        def analysis(train_public):
            formulas = [p.data for p in train_public]
            if not formulas:
                return {"backdoor": tuple(range(k))}
            return {"backdoor": recover_backdoor(formulas, k)}

        def solve(public: PublicInstance, summary, rng):
            result = solve_with_backdoor(public.data, summary["backdoor"])
            if result.satisfiable:
                return Assignment(result.model)
            return Assignment((False,) * public.data.num_vars)

        return Candidate(
            candidate_id=f"backdoor-{serial:03d}",
            hypothesis=Hypothesis(
                title=f"hidden Horn backdoor of size {k}",
                rule_summary="recover top-k salience variables, enumerate them",
                strategy=context.action,
                diversity_key="sat-backdoor",
            ),
            analysis=analysis,
            solver=solve,
        )


class TwoOptRefinerProposer(Proposer):
    """TSP candidates that mutate the 2-opt pass budget across rounds."""

    def __init__(self, budgets=(1, 2, 5, 10, 25, 50)):
        self.budgets = tuple(budgets)
        self._emitted = 0

    def propose(self, context: ProposerContext) -> Optional[Candidate]:
        from .heuristics.tsp import _dist, _nearest_neighbor_order, two_opt
        from .instances import Tour

        serial = self._emitted
        self._emitted += 1
        budget = self.budgets[serial % len(self.budgets)]

        def analysis(train_public, _budget=budget):
            return {"maxPasses": _budget}

        def solve(public: PublicInstance, summary, rng):
            dist = _dist(public)
            order, _ = two_opt(
                dist, _nearest_neighbor_order(dist), max_passes=summary["maxPasses"]
            )
            return Tour(tuple(order))

        return Candidate(
            candidate_id=f"two-opt-{serial:03d}-p{budget}",
            hypothesis=Hypothesis(
                title=f"nn + 2-opt with {budget} passes",
                rule_summary="tune the local-search budget",
                strategy=context.action,
                diversity_key=f"two-opt-p{budget}",
            ),
            analysis=analysis,
            solver=solve,
        )


# ---------------------------------------------------------------------------
# Subprocess proposer protocol (extension point)

#: Registered candidate templates for the subprocess protocol: spec id ->
#: factory(params) -> (analysis, solver) pair.
TEMPLATE_REGISTRY: dict = {}


def register_template(spec_id: str, factory: Callable) -> None:
    TEMPLATE_REGISTRY[spec_id] = factory


def _catalog_template(params):
    solvers = {s.id: s for s in heuristic_catalog(params["problemClass"])}
    solver = solvers[params["solverId"]]

    def analysis(train_public):
        return {"solverId": solver.id}

    def solve(public, summary, rng):
        solution, _ = solver.solve(public, rng)
        return solution

    return analysis, solve


def _backdoor_template(params):
    from .backdoor import recover_backdoor, solve_with_backdoor
    from .instances import Assignment

    k = int(params.get("k", 2))

    def analysis(train_public):
        formulas = [p.data for p in train_public]
        if not formulas:
            return {"backdoor": tuple(range(k))}
        return {"backdoor": recover_backdoor(formulas, k)}

    def solve(public, summary, rng):
        result = solve_with_backdoor(public.data, summary["backdoor"])
        if result.satisfiable:
            return Assignment(result.model)
        return Assignment((False,) * public.data.num_vars)

    return analysis, solve


register_template("catalog-solver", _catalog_template)
register_template("sat-backdoor", _backdoor_template)


class SubprocessProposer(Proposer):
    """Drives an external proposer over newline-delimited JSON.

    Request: {"action": ..., "context": {...}}.  Response: {"hypothesis":
    {...}, "analysisSpecId": ..., "solverSpecId": ..., "params": {...}};
    both spec ids must name the same registered template.
    """

    def __init__(self, argv):
        self.argv = list(argv)
        self._proc = None
        self._serial = 0

    def _ensure(self):
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                self.argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
            )
        return self._proc

    def propose(self, context: ProposerContext) -> Optional[Candidate]:
        proc = self._ensure()
        request = {
            "action": context.action,
            "context": {
                "round": context.round_index,
                "slot": context.slot,
                "parentHypothesis": (
                    vars(context.parent_hypothesis)
                    if context.parent_hypothesis
                    else None
                ),
                "parentMetrics": (
                    {
                        "qVal": context.parent_metrics.q_val,
                        "oVal": context.parent_metrics.o_val,
                        "tValMs": context.parent_metrics.t_val_ms,
                    }
                    if context.parent_metrics
                    else None
                ),
            },
        }
        proc.stdin.write(json.dumps(request) + "\n")
        proc.stdin.flush()
        line = proc.stdout.readline()
        if not line:
            raise SynthesisError("subprocess proposer closed its stream")
        response = json.loads(line)
        spec_id = response["analysisSpecId"]
        if response["solverSpecId"] != spec_id:
            raise SynthesisError("analysis and solver spec ids must match")
        if spec_id not in TEMPLATE_REGISTRY:
            raise SynthesisError(f"unknown template {spec_id!r}")
        analysis, solve = TEMPLATE_REGISTRY[spec_id](response.get("params", {}))
        hyp = response.get("hypothesis", {})
        serial = self._serial
        self._serial += 1
        return Candidate(
            candidate_id=f"ext-{serial:03d}-{spec_id}",
            hypothesis=Hypothesis(
                title=hyp.get("title", spec_id),
                rule_summary=hyp.get("ruleSummary", ""),
                evidence_plan=hyp.get("evidencePlan", ""),
                strategy=hyp.get("strategy", context.action),
                failure_modes=hyp.get("failureModes", ""),
                diversity_key=hyp.get("diversityKey", spec_id),
            ),
            analysis=analysis,
            solver=solve,
        )

    def close(self):
        if self._proc is not None and self._proc.poll() is None:
            self._proc.stdin.close()
            self._proc.wait(timeout=5)
