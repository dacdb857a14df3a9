#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "syncrate/harness.hpp"
#include "syncrate/learn.hpp"
#include "syncrate/mck.hpp"
#include "syncrate/netsim.hpp"
#include "syncrate/syncmodel.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace syncrate;

namespace {

// Lets Python classes implement the training oracle.
class PyOracle : public learn::Oracle {
public:
    using learn::Oracle::Oracle;
    double try_out(const SyncPolicy& policy, long long slot) override {
        PYBIND11_OVERRIDE_PURE(double, learn::Oracle, try_out, policy, slot);
    }
};

netsim::Scenario scenario_from_json_str(const std::string& text) {
    return harness::scenario_from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "controller synchronization-rate policies: exact and learned";

    py::class_<PairSpace>(m, "PairSpace")
        .def(py::init<int>(), "controller_count"_a)
        .def_property_readonly("controllers", &PairSpace::controllers)
        .def_property_readonly("count", &PairSpace::count)
        .def("index", &PairSpace::index, "i"_a, "j"_a)
        .def("pair", &PairSpace::pair, "index"_a);

    py::class_<SyncPolicy>(m, "SyncPolicy")
        .def(py::init(&SyncPolicy::zeros), "controller_count"_a)
        .def_readonly("controller_count", &SyncPolicy::controller_count)
        .def_readwrite("rates", &SyncPolicy::rates)
        .def("rate", &SyncPolicy::rate, "i"_a, "j"_a)
        .def("set_rate", &SyncPolicy::set_rate, "i"_a, "j"_a, "value"_a)
        .def("total_rate", &SyncPolicy::total_rate)
        .def("__eq__", [](const SyncPolicy& a, const SyncPolicy& b) { return a == b; })
        .def("__repr__", [](const SyncPolicy& p) {
            std::ostringstream out;
            out << "SyncPolicy(C=" << p.controller_count << ", rates=[";
            for (std::size_t i = 0; i < p.rates.size(); ++i)
                out << (i ? "," : "") << p.rates[i];
            out << "])";
            return out.str();
        });
    m.def("policy_hash", &policy_hash, "policy"_a);

    py::class_<SystemModel>(m, "SystemModel")
        .def(py::init([](int controllers, std::vector<double> change_rates,
                         double slot_seconds, long long budget, int max_rate,
                         std::vector<int> pair_costs) {
                 SystemModel model;
                 model.controller_count = controllers;
                 model.change_rates = std::move(change_rates);
                 model.slot_seconds = slot_seconds;
                 model.budget = budget;
                 model.max_rate = max_rate;
                 if (pair_costs.empty())
                     model.pair_costs.assign(
                         static_cast<std::size_t>(PairSpace(controllers).count()), 1);
                 else
                     model.pair_costs = std::move(pair_costs);
                 validate_model(model);
                 return model;
             }),
             "controllers"_a, "change_rates"_a, "slot_seconds"_a, "budget"_a,
             "max_rate"_a, "pair_costs"_a = std::vector<int>{})
        .def_readonly("controller_count", &SystemModel::controller_count)
        .def_readonly("change_rates", &SystemModel::change_rates)
        .def_readonly("slot_seconds", &SystemModel::slot_seconds)
        .def_readonly("pair_costs", &SystemModel::pair_costs)
        .def_readonly("budget", &SystemModel::budget)
        .def_readonly("max_rate", &SystemModel::max_rate);

    py::class_<ConsistencyReport>(m, "ConsistencyReport")
        .def_readonly("omega", &ConsistencyReport::omega)
        .def_readonly("per_pair", &ConsistencyReport::per_pair);

    m.def("pair_consistency_prob", &pair_consistency_prob, "change_rate"_a,
          "slot_seconds"_a, "rate"_a);
    m.def("consistency_level", &consistency_level, "model"_a, "policy"_a);
    m.def("policy_cost", &policy_cost, "model"_a, "policy"_a);
    m.def("is_feasible", &is_feasible, "model"_a, "policy"_a);

    py::class_<mck::MckItem>(m, "MckItem")
        .def_readonly("weight", &mck::MckItem::weight)
        .def_readonly("value", &mck::MckItem::value)
        .def_readonly("pair_index", &mck::MckItem::pair_index)
        .def_readonly("level", &mck::MckItem::level);

    py::class_<mck::MckInstance>(m, "MckInstance")
        .def_readonly("capacity", &mck::MckInstance::capacity)
        .def_readonly("classes", &mck::MckInstance::classes)
        .def_readonly("controller_count", &mck::MckInstance::controller_count);

    py::class_<mck::MckSolution>(m, "MckSolution")
        .def_readonly("chosen", &mck::MckSolution::chosen)
        .def_readonly("total_value", &mck::MckSolution::total_value)
        .def_readonly("total_weight", &mck::MckSolution::total_weight);

    m.def("build_mck_instance", &mck::build_mck_instance, "model"_a);
    m.def("solve_exact_dp", &mck::solve_exact_dp, "instance"_a);
    m.def("solve_fptas", &mck::solve_fptas, "instance"_a, "eps"_a);
    m.def("solve_brute_force", &mck::solve_brute_force, "instance"_a,
          "enumeration_cap"_a = 10'000'000LL);
    m.def("decode_policy", &mck::decode_policy, "instance"_a, "solution"_a);
    m.def("zero_rate_baseline", &mck::zero_rate_baseline, "model"_a);
    m.def("mck_to_text", &mck::to_text, "instance"_a);
    m.def("mck_from_text",
          static_cast<mck::MckInstance (*)(const std::string&)>(&mck::from_text),
          "text"_a);

    py::class_<mck::KnapsackItem>(m, "KnapsackItem")
        .def(py::init([](int weight, double value) {
                 return mck::KnapsackItem{weight, value};
             }),
             "weight"_a, "value"_a)
        .def_readwrite("weight", &mck::KnapsackItem::weight)
        .def_readwrite("value", &mck::KnapsackItem::value);
    m.def("knapsack_hardness_instance", &mck::knapsack_hardness_instance, "items"_a,
          "capacity"_a);

    py::class_<learn::Oracle, PyOracle>(m, "Oracle")
        .def(py::init<>())
        .def("try_out", &learn::Oracle::try_out, "policy"_a, "slot"_a);

    py::class_<learn::LearnerConfig>(m, "LearnerConfig")
        .def(py::init([](int controllers, int sigma, int tau, int budget, int max_rate,
                         std::uint64_t rng_seed) {
                 learn::LearnerConfig config;
                 config.controller_count = controllers;
                 config.sigma = sigma;
                 config.tau = tau;
                 config.budget = budget;
                 config.max_rate = max_rate;
                 config.rng_seed = rng_seed;
                 return config;
             }),
             "controllers"_a, "sigma"_a, "tau"_a, "budget"_a, "max_rate"_a,
             "rng_seed"_a = 0)
        .def_readwrite("controller_count", &learn::LearnerConfig::controller_count)
        .def_readwrite("sigma", &learn::LearnerConfig::sigma)
        .def_readwrite("tau", &learn::LearnerConfig::tau)
        .def_readwrite("budget", &learn::LearnerConfig::budget)
        .def_readwrite("max_rate", &learn::LearnerConfig::max_rate)
        .def_readwrite("rng_seed", &learn::LearnerConfig::rng_seed);

    py::class_<learn::CandidateRecord>(m, "CandidateRecord")
        .def_readonly("pair_index", &learn::CandidateRecord::pair_index)
        .def_readonly("observations", &learn::CandidateRecord::observations)
        .def_readonly("estimate", &learn::CandidateRecord::estimate)
        .def_readonly("gain", &learn::CandidateRecord::gain);

    py::class_<learn::IterationRecord>(m, "IterationRecord")
        .def_readonly("baseline_estimate", &learn::IterationRecord::baseline_estimate)
        .def_readonly("candidates", &learn::IterationRecord::candidates)
        .def_readonly("winner_pair", &learn::IterationRecord::winner_pair)
        .def_readonly("shortfall", &learn::IterationRecord::shortfall);

    py::class_<learn::LearnerRun>(m, "LearnerRun")
        .def_readonly("config", &learn::LearnerRun::config)
        .def_readonly("final_policy", &learn::LearnerRun::final_policy)
        .def_readonly("baseline_estimate", &learn::LearnerRun::baseline_estimate)
        .def_readonly("iterations", &learn::LearnerRun::iterations)
        .def_readonly("slots_used", &learn::LearnerRun::slots_used)
        .def("to_json", [](const learn::LearnerRun& run) { return learn::run_to_json(run); });

    m.def("stochastic_greedy", &learn::stochastic_greedy, "config"_a, "oracle"_a);
    m.def("full_greedy", &learn::full_greedy, "config"_a, "oracle"_a);
    m.def("homogeneous_policy", &learn::homogeneous_policy, "model"_a);
    m.def("training_time", &learn::training_time, "sigma"_a, "tau"_a, "budget"_a);
    m.def("epsilon_param", &learn::epsilon_param, "controllers"_a, "budget"_a,
          "max_rate"_a, "sigma"_a);
    m.def("expected_bound", &learn::expected_bound, "controllers"_a, "budget"_a,
          "max_rate"_a, "sigma"_a, "mu"_a);

    py::class_<learn::HighProbBound>(m, "HighProbBound")
        .def_readonly("factor", &learn::HighProbBound::factor)
        .def_readonly("probability", &learn::HighProbBound::probability);
    m.def("high_prob_bound", &learn::high_prob_bound, "controllers"_a, "budget"_a,
          "max_rate"_a, "sigma"_a, "tau"_a, "mu"_a, "gamma"_a,
          "mu_scaled_probability"_a = false);

    py::class_<learn::MuEstimate>(m, "MuEstimate")
        .def_readonly("clamped_mean", &learn::MuEstimate::clamped_mean)
        .def_readonly("unclamped_mean", &learn::MuEstimate::unclamped_mean)
        .def_readonly("included", &learn::MuEstimate::included);
    m.def("measure_mu", &learn::measure_mu, "run"_a, "true_mean"_a);
    m.def("brute_force_best_policy", &learn::brute_force_best_policy, "objective"_a,
          "controllers"_a, "max_rate"_a, "budget"_a,
          "enumeration_cap"_a = 10'000'000LL);

    py::class_<netsim::Topology>(m, "Topology")
        .def_readonly("node_count", &netsim::Topology::node_count)
        .def_readonly("controller_count", &netsim::Topology::controller_count)
        .def_readonly("edges", &netsim::Topology::edges)
        .def_readonly("domain_of", &netsim::Topology::domain_of)
        .def("edge_owner", &netsim::Topology::edge_owner, "edge"_a)
        .def("domain_sizes", &netsim::Topology::domain_sizes);
    m.def("paper_topology", &netsim::paper_topology);
    m.def("random_connected_topology", &netsim::random_connected_topology, "nodes"_a,
          "controllers"_a, "edge_prob"_a, "seed"_a);

    py::enum_<netsim::RoutingMetric>(m, "RoutingMetric")
        .value("delivered", netsim::RoutingMetric::delivered)
        .value("optimal", netsim::RoutingMetric::optimal);

    py::class_<netsim::RoutingScenario>(m, "RoutingScenario")
        .def(py::init<>())
        .def_readwrite("topology", &netsim::RoutingScenario::topology)
        .def_readwrite("flip_prob", &netsim::RoutingScenario::flip_prob)
        .def_readwrite("packets_per_tick", &netsim::RoutingScenario::packets_per_tick)
        .def_readwrite("slot_seconds", &netsim::RoutingScenario::slot_seconds)
        .def_readwrite("metric", &netsim::RoutingScenario::metric)
        .def_readwrite("rng_seed", &netsim::RoutingScenario::rng_seed);

    py::class_<netsim::LoadBalanceScenario>(m, "LoadBalanceScenario")
        .def(py::init<>())
        .def_readwrite("arrival_rates", &netsim::LoadBalanceScenario::arrival_rates)
        .def_readwrite("work_amount", &netsim::LoadBalanceScenario::work_amount)
        .def_readwrite("slot_seconds", &netsim::LoadBalanceScenario::slot_seconds)
        .def_readwrite("rng_seed", &netsim::LoadBalanceScenario::rng_seed);

    py::class_<netsim::SlotObservation>(m, "SlotObservation")
        .def_readonly("psi", &netsim::SlotObservation::psi)
        .def_readonly("packets", &netsim::SlotObservation::packets)
        .def_readonly("delivered", &netsim::SlotObservation::delivered)
        .def_readonly("optimal", &netsim::SlotObservation::optimal)
        .def_readonly("rmse", &netsim::SlotObservation::rmse)
        .def_readonly("throughput", &netsim::SlotObservation::throughput);

    py::class_<netsim::ScenarioOracle, learn::Oracle>(m, "ScenarioOracle")
        .def(py::init<netsim::Scenario, std::uint64_t>(), "scenario"_a, "seed"_a)
        .def("history", &netsim::ScenarioOracle::history);

    py::class_<netsim::SyntheticSpec> synthetic_spec(m, "SyntheticSpec");
    py::enum_<netsim::SyntheticSpec::Kind>(synthetic_spec, "Kind")
        .value("modular", netsim::SyntheticSpec::Kind::modular)
        .value("coverage", netsim::SyntheticSpec::Kind::coverage);
    synthetic_spec.def(py::init<>())
        .def_readwrite("kind", &netsim::SyntheticSpec::kind)
        .def_readwrite("controller_count", &netsim::SyntheticSpec::controller_count)
        .def_readwrite("weight", &netsim::SyntheticSpec::weight)
        .def_readwrite("decay", &netsim::SyntheticSpec::decay)
        .def_readwrite("noise_lo", &netsim::SyntheticSpec::noise_lo)
        .def_readwrite("noise_hi", &netsim::SyntheticSpec::noise_hi);
    m.def("random_coverage_spec", &netsim::random_coverage_spec, "controllers"_a,
          "seed"_a);

    py::class_<netsim::SyntheticOracle, learn::Oracle>(m, "SyntheticOracle")
        .def(py::init<netsim::SyntheticSpec, std::uint64_t>(), "spec"_a, "seed"_a)
        .def("true_mean", &netsim::SyntheticOracle::true_mean, "policy"_a)
        .def("noise_mean", &netsim::SyntheticOracle::noise_mean);

    py::class_<netsim::EvalStats>(m, "EvalStats")
        .def_readonly("mean", &netsim::EvalStats::mean)
        .def_readonly("stddev", &netsim::EvalStats::stddev)
        .def_readonly("min", &netsim::EvalStats::min)
        .def_readonly("max", &netsim::EvalStats::max)
        .def_readonly("per_seed", &netsim::EvalStats::per_seed);
    m.def(
        "evaluate_policy",
        [](const netsim::Scenario& scenario, const SyncPolicy& policy, int slots,
           const std::vector<std::uint64_t>& seeds) {
            return netsim::evaluate_policy(scenario, policy, slots, seeds);
        },
        "scenario"_a, "policy"_a, "slots"_a, "seeds"_a);
    m.def(
        "slot_trace_csv",
        [](const netsim::Scenario& scenario, const SyncPolicy& policy, int slots,
           const std::vector<std::uint64_t>& seeds) {
            std::ostringstream out;
            netsim::write_slot_trace_csv(out, scenario, policy, slots, seeds);
            return out.str();
        },
        "scenario"_a, "policy"_a, "slots"_a, "seeds"_a);

    m.def("routing16_preset", &harness::presets::routing16,
          "metric"_a = netsim::RoutingMetric::delivered);
    m.def("loadbalance2_preset", &harness::presets::loadbalance2, "rate0"_a = 0.6,
          "rate1"_a = 0.3);
    m.def("obj1_v16_preset", &harness::presets::obj1_v16, "lambda_scale"_a = 0.05,
          "budget"_a = 18, "max_rate"_a = 8);

    m.def(
        "run_experiment_json",
        [](const std::string& text, int jobs) {
            const auto experiment =
                harness::experiment_from_json(nlohmann::json::parse(text));
            return harness::run_experiment(experiment, jobs).to_csv();
        },
        "config_json"_a, "jobs"_a = 1,
        "run an experiment config document, returning the result CSV");
    m.def("scenario_from_json", &scenario_from_json_str, "scenario_json"_a);
}
