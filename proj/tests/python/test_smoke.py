import json
import math

import pytest

import syncrate as sr


def test_consistency_model_closed_form():
    assert sr.pair_consistency_prob(0.0, 30.0, 0) == pytest.approx(1.0)
    assert sr.pair_consistency_prob(math.log(2), 1.0, 0) == pytest.approx(0.5)
    assert sr.pair_consistency_prob(math.log(2), 1.0, 1) == pytest.approx(2 ** -0.5)

    model = sr.SystemModel(
        controllers=2,
        change_rates=[math.log(2), math.log(2)],
        slot_seconds=1.0,
        budget=2,
        max_rate=2,
    )
    policy = sr.SyncPolicy(2)
    policy.set_rate(0, 1, 1)
    report = sr.consistency_level(model, policy)
    assert report.omega == pytest.approx(2 ** -0.5 + 0.5)
    assert sr.policy_cost(model, policy) == 1


def test_mck_solvers_agree_and_decode():
    model = sr.SystemModel(
        controllers=2,
        change_rates=[math.log(2), math.log(2)],
        slot_seconds=1.0,
        budget=2,
        max_rate=2,
    )
    instance = sr.build_mck_instance(model)
    dp = sr.solve_exact_dp(instance)
    brute = sr.solve_brute_force(instance)
    assert dp.total_value == pytest.approx(brute.total_value, abs=1e-12)
    assert dp.total_value == pytest.approx(2 * (2 ** -0.5 - 0.5))

    fptas = sr.solve_fptas(instance, 0.1)
    assert fptas.total_value >= 0.9 * dp.total_value

    decoded = sr.decode_policy(instance, dp)
    assert decoded.rates == [1, 1]
    omega = sr.consistency_level(model, decoded).omega
    assert omega == pytest.approx(dp.total_value + sr.zero_rate_baseline(model))

    parsed = sr.mck_from_text(sr.mck_to_text(instance))
    assert sr.solve_exact_dp(parsed).total_value == pytest.approx(dp.total_value)


def test_bound_calculators():
    assert sr.training_time(5, 3, 10) == 153
    assert sr.expected_bound(5, 10, 1, 5, 0.5) == pytest.approx(0.368, abs=1e-3)
    hp = sr.high_prob_bound(5, 10, 1, 5, 3, 0.5, 0.5)
    assert hp.probability == pytest.approx(1 - math.exp(-7.5))


def test_stochastic_greedy_on_modular_oracle():
    spec = sr.SyntheticSpec()
    spec.kind = sr.SyntheticSpec.Kind.modular
    spec.controller_count = 3
    spec.weight = [1.0, 6.0, 2.0, 5.0, 3.0, 4.0]

    config = sr.LearnerConfig(controllers=3, sigma=6, tau=1, budget=4, max_rate=2, rng_seed=7)
    oracle = sr.SyntheticOracle(spec, 1)
    run = sr.stochastic_greedy(config, oracle)
    assert run.slots_used == sr.training_time(6, 1, 4)
    # budget lands on the two heaviest pairs
    assert run.final_policy.rates == [0, 2, 0, 2, 0, 0]
    trace = json.loads(run.to_json())
    assert trace["slots_used"] == run.slots_used


def test_python_defined_oracle():
    class Linear(sr.Oracle):
        def try_out(self, policy, slot):
            return float(sum((i + 1) * r for i, r in enumerate(policy.rates)))

    config = sr.LearnerConfig(controllers=2, sigma=2, tau=1, budget=2, max_rate=2)
    run = sr.stochastic_greedy(config, Linear())
    assert run.final_policy.rates == [0, 2]


def test_simulator_presets_and_determinism():
    scenario = sr.routing16_preset(sr.RoutingMetric.delivered)
    assert scenario.topology.node_count == 16
    assert scenario.topology.domain_sizes() == [6, 5, 5]

    policy = sr.SyncPolicy(3)
    a = sr.evaluate_policy(scenario, policy, slots=4, seeds=[1, 2])
    b = sr.evaluate_policy(scenario, policy, slots=4, seeds=[1, 2])
    assert a.per_seed == b.per_seed

    trace = sr.slot_trace_csv(scenario, policy, 2, [5])
    assert trace.splitlines()[0].startswith("seed,slot,policy_hash,psi")


def test_experiment_runner_roundtrip():
    config = {
        "kind": "rate-curve",
        "id": "smoke",
        "scenario": {"preset": "loadbalance2", "arrival_rates": [0.5, 0.5]},
        "levels": [0, 2],
        "seeds": [1, 2],
        "slots": 3,
    }
    csv_text = sr.run_experiment_json(json.dumps(config))
    assert csv_text.startswith("schema,experiment,params,metric")
    assert csv_text == sr.run_experiment_json(json.dumps(config), jobs=2)
    assert "mean_psi" in csv_text
