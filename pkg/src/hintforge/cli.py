"""Command line interface.

Subcommands: generate, oracle, solve, select, learn-backdoor, and bench
(run / perturb / synthesize).  The HINTFORGE_SEED environment variable
overrides the default seed of any command that takes one.  Invariant
violations exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import generators
from .backdoor import dpll_formula, recover_backdoor, salience_profile, solve_with_backdoor
from .erm import ErmConfig, select_erm
from .generators import FamilySpec, SplitSpec, generate_target
from .harness import run_benchmark, run_perturbation_ablation
from .heuristics import catalog, run_measured
from .instances import from_json, to_json
from .oracles import solve_exact
from .synthesis import (
    BackdoorProposer,
    CatalogProposer,
    SubprocessProposer,
    SynthesisConfig,
    TwoOptRefinerProposer,
    run_synthesis,
)

DEFAULT_SEED = 0


def _env_seed(cli_seed):
    if cli_seed is not None:
        return cli_seed
    env = os.environ.get("HINTFORGE_SEED")
    if env is not None:
        return int(env)
    return DEFAULT_SEED


# ---------------------------------------------------------------------------
# Dataset directory IO


def write_dataset(ds, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(generators.manifest_json(ds) + "\n")
    for split_name, group in (
        ("train", ds.train),
        ("val", ds.val),
        ("test", ds.test),
    ):
        for i, inst in enumerate(group):
            path = out_dir / f"{split_name}-{i:04d}.json"
            path.write_text(to_json(inst) + "\n")


def load_split(dataset_dir: Path, split_name: str) -> list:
    manifest = json.loads((dataset_dir / "manifest.json").read_text())
    count = manifest["counts"][split_name]
    out = []
    for i in range(count):
        path = dataset_dir / f"{split_name}-{i:04d}.json"
        out.append(from_json(path.read_text()))
    return out


def load_manifest(dataset_dir: Path) -> dict:
    return json.loads((dataset_dir / "manifest.json").read_text())


# ---------------------------------------------------------------------------
# Subcommands


def cmd_generate(args) -> int:
    spec = FamilySpec(
        args.problem_class,
        args.family,
        args.profile,
        seed=_env_seed(args.seed),
    )
    split = SplitSpec(args.train, args.val, args.test)
    ds = generate_target(spec, split)
    out_dir = Path(args.out)
    write_dataset(ds, out_dir)
    print(f"wrote {split.train + split.val + split.test} instances to {out_dir}")
    print(f"contentHash {ds.manifest['contentHash']}")
    return 0


def cmd_oracle(args) -> int:
    inst = from_json(Path(args.infile).read_text())
    value, solution = solve_exact(inst)
    print(f"class     {inst.problem_class}")
    print(f"optimum   {value}")
    print(f"solution  {solution}")
    stored = inst.evaluator.optimum_value
    if inst.evaluator.certification != "planted-uncertified":
        if abs(stored - value) > 1e-9 * max(1.0, abs(stored)):
            print(
                f"INVARIANT VIOLATION: stored optimum {stored} != oracle {value}",
                file=sys.stderr,
            )
            return 1
    return 0


def _resolve_solver(problem_class: str, name: str):
    pool = catalog(problem_class)
    for solver in pool:
        if solver.id == name or solver.id.split("/", 1)[-1] == name:
            return solver
    ids = ", ".join(s.id for s in pool)
    raise SystemExit(f"unknown solver {name!r} for {problem_class}; have: {ids}")


def cmd_solve(args) -> int:
    inst = from_json(Path(args.infile).read_text())
    solver = _resolve_solver(inst.problem_class, args.solver)
    m = run_measured(solver, inst, dataset_seed=_env_seed(args.seed))
    print(f"solver    {solver.id}")
    print(f"solution  {m.solution}")
    print(f"quality   {m.scored.quality:.6f}  optimal={m.scored.optimal}")
    print(f"feasible  {m.scored.feasible}")
    print(f"runtime   {m.wall_clock_ms:.3f} ms")
    print(f"trace     {m.trace}")
    return 1 if m.crashed else 0


def cmd_select(args) -> int:
    dataset_dir = Path(args.dataset)
    sample = load_split(dataset_dir, "train")
    if not sample:
        print("empty training split", file=sys.stderr)
        return 1
    pool = catalog(args.library)
    cfg = ErmConfig(delta=args.delta, t_max_ms=args.tmax)
    selection = select_erm(pool, sample, cfg, dataset_seed=_env_seed(args.seed))
    report = {
        "selectedId": selection.selected_id,
        "n": selection.n,
        "errBound": selection.err_bound,
        "runGaps": selection.run_gaps,
        "stats": [
            {
                "solverId": s.solver_id,
                "errors": s.errors,
                "meanRuntimeMs": s.mean_runtime_ms,
            }
            for s in selection.stats
        ],
    }
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0 if selection.found else 1


def cmd_learn_backdoor(args) -> int:
    dataset_dir = Path(args.dataset)
    train = load_split(dataset_dir, "train")
    formulas = [inst.data for inst in train]
    if not formulas:
        print("empty training split", file=sys.stderr)
        return 1
    recovered = recover_backdoor(formulas, args.k)
    print(f"recovered backdoor: {list(recovered)}")

    import numpy as np

    mean_salience = np.mean([salience_profile(f) for f in formulas], axis=0)
    print("variable  meanSalience")
    for v in np.argsort(-mean_salience)[: max(args.k * 2, 8)]:
        marker = "*" if int(v) in recovered else " "
        print(f"  x{int(v) + 1:<5d} {mean_salience[v]:.4f} {marker}")

    planted = train[0].evaluator.hidden.get("backdoor")
    if planted is not None:
        # Informational: with few samples a miss is expected, not an error.
        print(f"matches planted backdoor: {tuple(sorted(planted)) == recovered}")
    else:
        print("no planted backdoor metadata available")

    t_bd = t_dpll = 0.0
    checked = 0
    for f in formulas[: args.speed_sample]:
        t0 = time.monotonic()
        res = solve_with_backdoor(f, recovered)
        t_bd += time.monotonic() - t0
        t0 = time.monotonic()
        ref, _ = dpll_formula(f)
        t_dpll += time.monotonic() - t0
        if res.satisfiable != ref:
            print(f"INVARIANT VIOLATION: verdict mismatch", file=sys.stderr)
            return 1
        checked += 1
    if checked and t_bd > 0:
        print(
            f"speedup vs dpll over {checked} formulas: {t_dpll / t_bd:.2f}x "
            f"({t_dpll * 1000 / checked:.2f} ms -> {t_bd * 1000 / checked:.2f} ms)"
        )
    return 0


def _parse_targets(arg: str, profile: str):
    if arg == "all":
        return [
            FamilySpec(cls, fam, profile)
            for cls, fam in generators.ALL_FAMILIES
        ]
    specs = []
    for token in arg.split(","):
        cls, fam = token.split("/", 1)
        specs.append(FamilySpec(cls, fam, profile))
    return specs


def cmd_bench_run(args) -> int:
    seed = _env_seed(args.seed)
    specs = [
        FamilySpec(s.problem_class, s.family_name, s.size_profile, seed=seed)
        for s in _parse_targets(args.targets, args.profile)
    ]
    split = SplitSpec(args.train, args.val, args.test)
    targets = {}
    pools = {}
    for spec in specs:
        ds = generate_target(spec, split)
        target_id = f"{spec.problem_class}/{spec.family_name}"
        targets[target_id] = list(ds.test)
        pools[target_id] = catalog(spec.problem_class)
    report = run_benchmark(
        targets, pools, repeats=args.repeats, seed=seed
    )
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
        Path(args.out).with_suffix(".csv").write_text(report.to_csv())
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def cmd_bench_perturb(args) -> int:
    seed = _env_seed(args.seed)
    cls, fam = args.target.split("/", 1)
    spec = FamilySpec(cls, fam, args.profile, seed=seed)
    ds = generate_target(spec, SplitSpec(args.train, args.val, args.test))
    solver = _resolve_solver(cls, args.solver)
    report = run_perturbation_ablation(solver, list(ds.test), seed=seed)
    print(json.dumps(report.as_dict(), sort_keys=True, indent=2))
    if report.feasibility_changed < 0 or report.feasibility_changed > 1:
        print("INVARIANT VIOLATION: feasibilityChanged outside [0,1]", file=sys.stderr)
        return 1
    return 0


def _make_proposer(name: str, problem_class: str, argv):
    if name == "catalog":
        return CatalogProposer(problem_class)
    if name == "backdoor":
        return BackdoorProposer()
    if name == "two-opt":
        return TwoOptRefinerProposer()
    if name == "subprocess":
        if not argv:
            raise SystemExit("--proposer subprocess requires --proposer-cmd")
        return SubprocessProposer(argv)
    raise SystemExit(f"unknown proposer {name!r}")


def cmd_bench_synthesize(args) -> int:
    dataset_dir = Path(args.dataset)
    manifest = load_manifest(dataset_dir)
    train = load_split(dataset_dir, "train")
    val = load_split(dataset_dir, "val")
    proposer = _make_proposer(
        args.proposer,
        manifest["problemClass"],
        args.proposer_cmd.split() if args.proposer_cmd else None,
    )
    cfg = SynthesisConfig(dataset_seed=_env_seed(args.seed))
    result = run_synthesis(
        proposer,
        train,
        val,
        iterations=args.iterations,
        beam_width=args.beam_width,
        budget_per_round=args.budget,
        cfg=cfg,
    )
    best = result.best
    print(f"best candidate: {best.candidate.candidate_id}")
    print(f"  hypothesis:   {best.candidate.hypothesis.title}")
    print(
        f"  score:        q={best.score.q_val:.4f} o={best.score.o_val:.4f} "
        f"t={best.score.t_val_ms:.2f}ms"
    )
    print(f"  archive size: {len(result.archive)}")
    for r, key in enumerate(result.rounds):
        print(f"  round {r}: best lex score {key}")
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hintforge",
        description="distribution-aware program learning workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a target dataset directory")
    p.add_argument("--class", dest="problem_class", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--profile", default="desk", choices=("paper", "desk"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--train", type=int, default=64)
    p.add_argument("--val", type=int, default=32)
    p.add_argument("--test", type=int, default=500)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("oracle", help="print the exact optimum of an instance")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("solve", help="run one heuristic on an instance")
    p.add_argument("--solver", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("select", help="runtime-aware ERM over a solver library")
    p.add_argument("--library", required=True, help="problem class of the catalog")
    p.add_argument("--dataset", required=True)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--tmax", type=float, default=10_000.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("learn-backdoor", help="recover a SAT backdoor from a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--speed-sample", type=int, default=20)
    p.set_defaults(func=cmd_learn_backdoor)

    bench = sub.add_parser("bench", help="benchmark harness commands")
    bsub = bench.add_subparsers(dest="bench_command", required=True)

    p = bsub.add_parser("run", help="evaluate the heuristic pools on targets")
    p.add_argument("--targets", default="all", help="'all' or class/family[,..]")
    p.add_argument("--profile", default="desk", choices=("paper", "desk"))
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--train", type=int, default=64)
    p.add_argument("--val", type=int, default=32)
    p.add_argument("--test", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench_run)

    p = bsub.add_parser("perturb", help="vertex relabeling ablation")
    p.add_argument("--target", required=True, help="class/family")
    p.add_argument("--solver", required=True)
    p.add_argument("--profile", default="desk", choices=("paper", "desk"))
    p.add_argument("--train", type=int, default=0)
    p.add_argument("--val", type=int, default=0)
    p.add_argument("--test", type=int, default=50)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_bench_perturb)

    p = bsub.add_parser("synthesize", help="beam-search synthesis on a dataset")
    p.add_argument("--proposer", default="catalog")
    p.add_argument("--proposer-cmd", default=None)
    p.add_argument("--dataset", required=True)
    p.add_argument("-R", "--iterations", type=int, default=4)
    p.add_argument("-B", "--beam-width", type=int, default=4)
    p.add_argument("-K", "--budget", type=int, default=8)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_bench_synthesize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except AssertionError as exc:
        print(f"INVARIANT VIOLATION: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
