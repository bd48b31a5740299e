"""Target distribution generators.

A target is a family of structured instances at a size profile ("paper" for
benchmark scale, "desk" for oracle-verifiable scale), split into train, val,
and test sets.  Generation is byte-deterministic in the family seed.  Desk
instances are re-certified by the exact oracles at generation time; paper
instances rely on their planted certificates.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..instances import EvaluatorPart, Instance, PublicInstance, to_json
from ..oracles import OracleBudget, solve_exact
from ..rng import stream
from . import coloring as _coloring
from . import graphs as _graphs
from . import maxsat as _maxsat
from . import packing as _packing
from . import tsp as _tsp
from .maxsat import backdoor_gamma, generate_horn_backdoor_formula, theorem3_samples

SIZE_PROFILES = ("paper", "desk")

FAMILY_REGISTRY = {
    ("coloring", "ring-template"): _coloring.ring_template,
    ("coloring", "overlapping-palette"): _coloring.overlapping_palette,
    ("coloring", "separator-trap"): _coloring.separator_trap,
    ("maxsat", "community-parity"): _maxsat.community_parity,
    ("maxsat", "last-clause-signal"): _maxsat.last_clause_signal,
    ("maxsat", "latent-backdoor"): _maxsat.latent_backdoor,
    ("mis", "clique-path"): _graphs.mis_clique_path,
    ("mis", "core-fringe-trap"): _graphs.mis_core_fringe_trap,
    ("mis", "motif-bridge"): _graphs.mis_motif_bridge,
    ("mds", "gateway-hub"): _graphs.mds_gateway_hub,
    ("mds", "geometric-anchor"): _graphs.mds_geometric_anchor,
    ("mds", "star-kernel"): _graphs.mds_star_kernel,
    ("packing_lp", "block-coupled"): _packing.lp_block_coupled,
    ("packing_lp", "active-resource"): _packing.lp_active_resource,
    ("packing_lp", "single-bottleneck"): _packing.lp_single_bottleneck,
    ("mdkp", "decoy-complement"): _packing.mdkp_decoy_complement,
    ("mdkp", "latent-class"): _packing.mdkp_latent_class,
    ("mdkp", "single-resource"): _packing.mdkp_single_resource,
    ("tsp", "clustered-euclidean"): _tsp.tsp_clustered_euclidean,
    ("tsp", "latent-metric"): _tsp.tsp_latent_metric,
    ("tsp", "paired-ribbon-zigzag"): _tsp.tsp_paired_ribbon_zigzag,
}

ALL_FAMILIES = tuple(sorted(FAMILY_REGISTRY))

# Classes whose desk optima must match the oracle bit-for-bit (integers).
_EXACT_CLASSES = {"coloring", "maxsat", "mis", "mds", "mdkp"}
_REL_TOL = 1e-9


@dataclass(frozen=True)
class FamilySpec:
    problem_class: str
    family_name: str
    size_profile: str = "paper"
    family_params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if (self.problem_class, self.family_name) not in FAMILY_REGISTRY:
            raise KeyError(
                f"unknown family {self.problem_class}/{self.family_name}"
            )
        if self.size_profile not in SIZE_PROFILES:
            raise ValueError(f"unknown size profile {self.size_profile!r}")


@dataclass(frozen=True)
class SplitSpec:
    train: int = 64
    val: int = 32
    test: int = 500

    def __post_init__(self):
        if min(self.train, self.val, self.test) < 0:
            raise ValueError("split sizes must be nonnegative")


@dataclass(frozen=True)
class TargetDataset:
    spec: FamilySpec
    split: SplitSpec
    train: tuple
    val: tuple
    test: tuple
    manifest: dict

    def all_instances(self) -> tuple:
        return self.train + self.val + self.test


def _certify_desk(inst: Instance, budget: OracleBudget) -> Instance:
    value, solution = solve_exact(inst, budget)
    ev = inst.evaluator
    if ev.certification == "planted-certified":
        if inst.problem_class in _EXACT_CLASSES:
            ok = float(value) == float(ev.optimum_value)
        else:
            ok = abs(value - ev.optimum_value) <= _REL_TOL * max(
                1.0, abs(ev.optimum_value)
            )
        if not ok:
            raise AssertionError(
                f"planted optimum {ev.optimum_value} disagrees with oracle "
                f"{value} on {inst.id}"
            )
    new_ev = EvaluatorPart(
        family_id=ev.family_id,
        optimum_value=float(value),
        optimum_solution=solution,
        certification="oracle",
        hidden=dict(ev.hidden),
    )
    return Instance(inst.public, new_ev)


def generate_instance(spec: FamilySpec, split_name: str, index: int,
                      oracle_budget: OracleBudget = OracleBudget()) -> Instance:
    """Generate one instance of a target, deterministically in (spec, index)."""
    gen = FAMILY_REGISTRY[(spec.problem_class, spec.family_name)]
    rng = stream(
        spec.seed,
        "gen",
        spec.problem_class,
        spec.family_name,
        spec.size_profile,
        split_name,
        index,
    )
    payload, optimum, solution, certification, hidden = gen(rng, spec.size_profile)
    family_id = f"{spec.problem_class}/{spec.family_name}/{spec.size_profile}"
    inst_id = f"{family_id}/s{spec.seed}/{split_name}-{index:04d}"
    inst = Instance(
        PublicInstance(inst_id, spec.problem_class, payload),
        EvaluatorPart(
            family_id=family_id,
            optimum_value=float(optimum),
            optimum_solution=solution,
            certification=certification,
            hidden=hidden,
        ),
    )
    if spec.size_profile == "desk":
        inst = _certify_desk(inst, oracle_budget)
    return inst


def generate_target(spec: FamilySpec, split: SplitSpec = SplitSpec(),
                    oracle_budget: OracleBudget = OracleBudget()) -> TargetDataset:
    """Generate a full target dataset with train/val/test splits."""
    parts = {}
    for split_name, count in (
        ("train", split.train),
        ("val", split.val),
        ("test", split.test),
    ):
        parts[split_name] = tuple(
            generate_instance(spec, split_name, i, oracle_budget)
            for i in range(count)
        )
    ids = [inst.id for group in parts.values() for inst in group]
    if len(set(ids)) != len(ids):
        raise AssertionError("instance ids must be unique within a target")
    h = hashlib.sha256()
    for group in parts.values():
        for inst in group:
            h.update(to_json(inst).encode())
            h.update(b"\n")
    manifest = {
        "problemClass": spec.problem_class,
        "familyName": spec.family_name,
        "sizeProfile": spec.size_profile,
        "seed": spec.seed,
        "familyParams": dict(spec.family_params),
        "counts": {
            "train": split.train,
            "val": split.val,
            "test": split.test,
        },
        "contentHash": h.hexdigest(),
    }
    return TargetDataset(
        spec, split, parts["train"], parts["val"], parts["test"], manifest
    )


def manifest_json(ds: TargetDataset) -> str:
    return json.dumps(ds.manifest, sort_keys=True, indent=2)


__all__ = [
    "ALL_FAMILIES",
    "FAMILY_REGISTRY",
    "FamilySpec",
    "SplitSpec",
    "TargetDataset",
    "backdoor_gamma",
    "generate_horn_backdoor_formula",
    "generate_instance",
    "generate_target",
    "manifest_json",
    "theorem3_samples",
]
