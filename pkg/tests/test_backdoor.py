import pytest

from brute_force import brute_sat
from hintforge.backdoor import (
    BackdoorError,
    BackdoorLearner,
    check_model,
    dpll,
    dpll_formula,
    horn_sat,
    is_horn_clause,
    recover_backdoor,
    restrict,
    salience,
    salience_profile,
    solve_with_backdoor,
)
from hintforge.generators import generate_horn_backdoor_formula, theorem3_samples
from hintforge.instances import CnfFormula
from hintforge.rng import stream


def _random_formula(rng, num_vars, num_clauses, width=3):
    clauses = []
    for _ in range(num_clauses):
        vars_ = rng.choice(num_vars, size=width, replace=False)
        clauses.append(
            tuple(
                int(v) + 1 if rng.random() < 0.5 else -(int(v) + 1)
                for v in vars_
            )
        )
    return CnfFormula(num_vars, tuple(clauses))


# ---------------------------------------------------------------------------
# Salience


def test_is_horn_clause():
    assert is_horn_clause((-1, -2, 3))
    assert is_horn_clause((-1, -2))
    assert is_horn_clause((1,))
    assert not is_horn_clause((1, 2, -3))


def test_salience_hand_computed():
    # Two non-Horn clauses out of four; x1 appears positive in both,
    # x2 in one, x3 in none of the non-Horn clauses.
    f = CnfFormula(
        3,
        (
            (1, 2, -3),
            (1, 3, -2),
            (-1, -2, 3),
            (-1,),
        ),
    )
    profile = salience_profile(f)
    assert profile[0] == pytest.approx(2 / 4)
    assert profile[1] == pytest.approx(1 / 4)
    assert profile[2] == pytest.approx(1 / 4)
    assert salience(f, 0) == pytest.approx(0.5)
    with pytest.raises(BackdoorError):
        salience(f, 3)


def test_recover_backdoor_top_k_with_ties_to_small_index():
    f1 = CnfFormula(4, ((1, 2, -3), (2, 4, -1)))
    f2 = CnfFormula(4, ((1, 2, -4),))
    # Mean salience: v1 high, v2 high, v4 mid, v3 zero.
    assert recover_backdoor([f1, f2], 2) == (0, 1)
    tie = CnfFormula(4, ((1, 2, -3), (3, 4, -1)))
    # All four variables tie at 1/2 appearance; smallest indices win.
    assert recover_backdoor([tie], 2) == (0, 1)


def test_recover_backdoor_validation():
    f = CnfFormula(3, ((1, -2),))
    with pytest.raises(BackdoorError):
        recover_backdoor([], 2)
    with pytest.raises(BackdoorError):
        recover_backdoor([f], 0)
    with pytest.raises(BackdoorError):
        recover_backdoor([f], 4)
    with pytest.raises(BackdoorError):
        recover_backdoor([f, CnfFormula(4, ((1,),))], 1)


def test_recovery_on_planted_family():
    d, k, rho = 12, 2, 0.5
    m = theorem3_samples(d, k, rho, 0.05)
    assert m == 1235
    rng = stream(17, "recovery")
    formulas = []
    backdoor = (2, 7)
    for _ in range(m):
        f, _ = generate_horn_backdoor_formula(
            d, k, 40, rho, rng=rng, backdoor=backdoor
        )
        formulas.append(f)
    assert recover_backdoor(formulas, k) == backdoor


# ---------------------------------------------------------------------------
# Restriction


def test_restrict_semantics():
    clauses = [(1, -2), (2, 3), (-1,)]
    # x1 = True satisfies the first clause and empties the third.
    assert restrict(clauses, {0: True}) is None
    # x1 = False: first clause loses x1, third clause is satisfied.
    assert restrict(clauses, {0: False}) == [(-2,), (2, 3)]
    # Restriction by a variable not present leaves clauses untouched.
    assert restrict(clauses, {3: True}) == [(1, -2), (2, 3), (-1,)]
    assert restrict([], {0: True}) == []


# ---------------------------------------------------------------------------
# Horn solver and DPLL


def test_horn_sat_minimal_model():
    # x1; x1 -> x2; x3 free (stays false in the minimal model).
    model = horn_sat([(1,), (-1, 2)], 3)
    assert model == {0: True, 1: True, 2: False}


def test_horn_sat_unsat_and_non_horn_rejected():
    assert horn_sat([(1,), (-1,)], 1) is None
    assert horn_sat([(1,), (-1, 2), (-2, -1)], 2) is None
    with pytest.raises(BackdoorError):
        horn_sat([(1, 2)], 2)


def test_horn_sat_agrees_with_brute_force():
    rng = stream(23, "horn")
    for _ in range(40):
        clauses = []
        for _ in range(10):
            vars_ = rng.choice(5, size=2, replace=False)
            head = int(vars_[0]) + 1 if rng.random() < 0.5 else None
            clause = [-(int(v) + 1) for v in vars_[1:]]
            if head is not None:
                clause.append(head)
            else:
                clause.append(-(int(vars_[0]) + 1))
            clauses.append(tuple(clause))
        sat = brute_sat(5, clauses)
        model = horn_sat(clauses, 5)
        assert (model is not None) == sat
        if model is not None:
            assert check_model(CnfFormula(5, tuple(clauses)), [model[v] for v in range(5)])


def test_dpll_agrees_with_brute_force():
    rng = stream(29, "dpll")
    for trial in range(60):
        f = _random_formula(rng, 6, int(rng.integers(4, 26)))
        verdict, model = dpll_formula(f)
        assert verdict == brute_sat(f.num_vars, f.clauses)
        if verdict:
            assert check_model(f, model)


def test_dpll_unsat_core():
    # Classic 8-clause unsatisfiable 3-variable formula.
    clauses = [
        (s1 * 1, s2 * 2, s3 * 3)
        for s1 in (1, -1)
        for s2 in (1, -1)
        for s3 in (1, -1)
    ]
    assert dpll(clauses, 3) is None


# ---------------------------------------------------------------------------
# Compiled backdoor solver


def test_solve_with_backdoor_agrees_with_dpll_random():
    rng = stream(31, "compiled")
    mismatches = 0
    for trial in range(60):
        f = _random_formula(rng, 8, int(rng.integers(10, 30)))
        backdoor = tuple(int(v) for v in rng.choice(8, size=3, replace=False))
        res = solve_with_backdoor(f, backdoor)
        verdict, _ = dpll_formula(f)
        if res.satisfiable != verdict:
            mismatches += 1
        if res.satisfiable:
            assert check_model(f, res.model)
    assert mismatches == 0


def test_solve_with_backdoor_on_planted_formula_uses_shortcut():
    rng = stream(37, "planted")
    f, backdoor = generate_horn_backdoor_formula(10, 2, 60, 0.4, rng=rng)
    res = solve_with_backdoor(f, backdoor)
    assert res.satisfiable
    assert check_model(f, res.model)
    # The all-false branch comes first and leaves a Horn residual.
    assert res.trace.shortcut_used
    assert not res.trace.fallback_used
    assert res.trace.residual_size <= f.num_clauses


def test_solve_with_empty_backdoor_falls_back():
    f = CnfFormula(3, ((1, 2, -3), (-1, 2, 3)))
    res = solve_with_backdoor(f, ())
    verdict, _ = dpll_formula(f)
    assert res.satisfiable == verdict
    assert res.trace.fallback_used


def test_solve_with_backdoor_validation():
    f = CnfFormula(3, ((1,),))
    with pytest.raises(BackdoorError):
        solve_with_backdoor(f, (0, 0))
    with pytest.raises(BackdoorError):
        solve_with_backdoor(f, (5,))


def test_backdoor_learner_estimator():
    rng = stream(41, "learner")
    backdoor = (1, 4)
    train = [
        generate_horn_backdoor_formula(8, 2, 40, 0.5, rng=rng, backdoor=backdoor)[0]
        for _ in range(300)
    ]
    learner = BackdoorLearner(k=2)
    assert learner.get_params() == {"k": 2}
    learner.fit(train)
    assert learner.backdoor_ == backdoor
    test = [
        generate_horn_backdoor_formula(8, 2, 40, 0.5, rng=rng, backdoor=backdoor)[0]
        for _ in range(5)
    ]
    assert learner.predict(test) == [True] * 5


def test_backdoor_learner_unfitted():
    with pytest.raises(BackdoorError):
        BackdoorLearner().predict([CnfFormula(2, ((1,),))])
