#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "syncrate/harness.hpp"
#include "syncrate/mck.hpp"

using namespace syncrate;
using harness::ResultRow;

namespace {

netsim::RoutingScenario tiny_routing(double flip_prob) {
    netsim::RoutingScenario scenario;
    scenario.topology.node_count = 4;
    scenario.topology.controller_count = 2;
    scenario.topology.edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    scenario.topology.domain_of = {0, 0, 1, 1};
    scenario.flip_prob = flip_prob;
    scenario.packets_per_tick = 2;
    scenario.slot_seconds = 8;
    scenario.metric = netsim::RoutingMetric::delivered;
    return scenario;
}

std::map<std::string, double> metric_values(const harness::ResultTable& table,
                                            const std::string& params) {
    std::map<std::string, double> out;
    for (const auto& row : table.rows())
        if (row.params == params) out[row.metric] = row.value;
    return out;
}

}  // namespace

TEST_CASE("presets match the published evaluation setup") {
    const auto model = harness::presets::obj1_v16();
    CHECK(model.controller_count == 3);
    CHECK(model.slot_seconds == doctest::Approx(30.0));
    CHECK(model.change_rates[0] == doctest::Approx(6 * 0.05));
    CHECK(model.change_rates[1] == doctest::Approx(5 * 0.05));
    CHECK(model.change_rates[2] == doctest::Approx(5 * 0.05));

    const auto routing = harness::presets::routing16();
    CHECK(routing.slot_seconds == 32);
    CHECK(routing.topology.node_count == 16);

    const auto lb = harness::presets::loadbalance2();
    CHECK(lb.slot_seconds == 60);
    CHECK(lb.arrival_rates[0] == doctest::Approx(2.0 * lb.arrival_rates[1]));
}

TEST_CASE("obj1 sweep saturates at both budget extremes and keeps DP on top") {
    harness::Obj1SweepSpec spec;
    const auto base = harness::presets::obj1_v16(0.05, 0, 4);
    spec.controller_count = base.controller_count;
    spec.rate_shape = base.change_rates;
    spec.slot_seconds = base.slot_seconds;
    spec.max_rate = 4;
    spec.budgets = {0, 1, 3, 6, 12, 24, 30};
    spec.fptas_eps = 0.1;

    const auto table = harness::run_obj1_sweep(spec);
    CHECK_FALSE(table.any_error());

    const auto model0 = harness::presets::obj1_v16(0.05, 0, 4);
    const double baseline = mck::zero_rate_baseline(model0);
    auto saturated = SyncPolicy::zeros(3);
    for (int& r : saturated.rates) r = 4;
    const double omega_max = consistency_level(model0, saturated).omega;

    for (const auto& row : table.rows()) {
        if (row.metric != "omega_mck_dp") continue;
        const auto values = metric_values(table, row.params);
        CHECK(values.at("omega_mck_dp") >= values.at("omega_homogeneous") - 1e-12);
        CHECK(values.at("omega_fptas") >= 0.9 * values.at("omega_mck_dp") - 1e-12);
        if (row.params.find("budget=0;") != std::string::npos) {
            CHECK(values.at("omega_mck_dp") == doctest::Approx(baseline));
            CHECK(values.at("omega_homogeneous") == doctest::Approx(baseline));
        }
        if (row.params.find("budget=24;") != std::string::npos ||
            row.params.find("budget=30;") != std::string::npos) {
            CHECK(values.at("omega_mck_dp") == doctest::Approx(omega_max));
            CHECK(values.at("omega_homogeneous") == doctest::Approx(omega_max));
        }
    }
}

TEST_CASE("rate curve on a static network is flat at one") {
    harness::RateCurveSpec spec;
    spec.scenario = tiny_routing(0.0);
    spec.levels = {0, 1, 3};
    spec.seeds = {1, 2, 3};
    spec.slots = 4;
    const auto table = harness::run_rate_curve(spec);
    CHECK_FALSE(table.any_error());
    int rows = 0;
    for (const auto& row : table.rows()) {
        if (row.metric != "mean_psi") continue;
        CHECK(row.value == doctest::Approx(1.0));
        CHECK(row.stddev == doctest::Approx(0.0));
        CHECK(row.n == 3);
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("experiments are byte-reproducible, also across jobs") {
    harness::RateCurveSpec spec;
    spec.scenario = tiny_routing(0.1);
    spec.levels = {0, 1, 2, 4};
    spec.seeds = {10, 11, 12};
    spec.slots = 6;

    const auto a = harness::run_rate_curve(spec, "rate-curve", 1).to_csv();
    const auto b = harness::run_rate_curve(spec, "rate-curve", 1).to_csv();
    const auto c = harness::run_rate_curve(spec, "rate-curve", 4).to_csv();
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("training sweep reports the schedule and feasible policies") {
    harness::Obj2TrainSpec spec;
    spec.scenario = tiny_routing(0.1);
    spec.learner.sigma = 2;
    spec.learner.tau = 2;
    spec.learner.budget = 3;
    spec.learner.max_rate = 4;
    spec.seeds = {5, 6};
    spec.eval_slots = 4;
    const std::string trace_path = "obj2_trace_test.json";
    spec.trace_json_path = trace_path;

    const auto table = harness::run_obj2_train(spec);
    CHECK_FALSE(table.any_error());

    int slots_rows = 0, eval_rows = 0;
    for (const auto& row : table.rows()) {
        if (row.metric == "slots_used") {
            CHECK(row.value == doctest::Approx(2 + 2 * 2 * 3));
            ++slots_rows;
        }
        if (row.metric == "policy_total_rate") CHECK(row.value == doctest::Approx(3));
        if (row.metric == "eval_sg_mean_psi") ++eval_rows;
    }
    CHECK(slots_rows == 2);
    CHECK(eval_rows == 2);

    std::ifstream in(trace_path);
    REQUIRE(in.good());
    nlohmann::json doc;
    in >> doc;
    CHECK(doc.at("runs").size() == 2);
    CHECK(doc.at("runs")[0].at("slots_used").get<long long>() == 14);
    in.close();
    std::remove(trace_path.c_str());
}

TEST_CASE("bound check rows carry the caps and isolate failing cells") {
    harness::BoundCheckSpec spec;
    spec.controller_count = 3;
    spec.max_rate = 1;
    spec.budget = 3;
    spec.tau = 2;
    spec.sigmas = {2, 99, 6};  // 99 exceeds the pair count and must fail alone
    spec.gamma = 0.3;
    spec.runs = 20;
    spec.oracle_seed = 5;
    spec.base_seed = 7;

    const auto table = harness::run_bound_check(spec);
    CHECK(table.any_error());

    bool saw_sigma2 = false, saw_sigma6 = false, saw_error = false;
    for (const auto& row : table.rows()) {
        if (!row.error.empty()) {
            saw_error = true;
            continue;
        }
        if (row.params.find("sigma=2;") != std::string::npos && row.metric == "achieved_over_opt") {
            saw_sigma2 = true;
            CHECK(row.value > 0.0);
            CHECK(row.value <= 1.0 + 1e-12);
        }
        if (row.params.find("sigma=6;") != std::string::npos && row.metric == "violation_freq") {
            saw_sigma6 = true;
            CHECK(row.value >= 0.0);
        }
    }
    CHECK(saw_sigma2);
    CHECK(saw_sigma6);
    CHECK(saw_error);
}

TEST_CASE("tradeoff sweep reports training time per grid point") {
    harness::TradeoffSpec spec;
    spec.scenario = tiny_routing(0.1);
    spec.sigma_tau_grid = {{1, 1}, {2, 2}};
    spec.budget = 2;
    spec.max_rate = 2;
    spec.seeds = {3, 4};
    spec.eval_slots = 3;

    const auto table = harness::run_tradeoff(spec);
    CHECK_FALSE(table.any_error());
    bool saw_first = false, saw_second = false;
    for (const auto& row : table.rows()) {
        if (row.metric != "mean_psi") continue;
        if (row.params.find("sigma=1;tau=1;") != std::string::npos) {
            CHECK(row.params.find("training_slots=3") != std::string::npos);
            saw_first = true;
        }
        if (row.params.find("sigma=2;tau=2;") != std::string::npos) {
            CHECK(row.params.find("training_slots=10") != std::string::npos);
            saw_second = true;
        }
    }
    CHECK(saw_first);
    CHECK(saw_second);
}

TEST_CASE("configs round-trip through the JSON loaders") {
    SUBCASE("model presets and inline models") {
        const auto preset = harness::model_from_json(
            nlohmann::json{{"preset", "obj1-v16"}, {"lambda_scale", 0.1}, {"budget", 6}});
        CHECK(preset.budget == 6);
        CHECK(preset.change_rates[0] == doctest::Approx(0.6));

        const nlohmann::json inline_doc{{"controllers", 2},
                                        {"change_rates", {0.1, 0.2}},
                                        {"slot_seconds", 5.0},
                                        {"budget", 3},
                                        {"max_rate", 2},
                                        {"pair_costs", 2}};
        const auto model = harness::model_from_json(inline_doc);
        CHECK(model.pair_costs == std::vector<int>{2, 2});
        CHECK_THROWS(harness::model_from_json(nlohmann::json{{"preset", "nope"}}));
    }
    SUBCASE("scenarios") {
        const auto routing = harness::scenario_from_json(
            nlohmann::json{{"preset", "routing16"}, {"metric", "optimal"}});
        CHECK(std::get<netsim::RoutingScenario>(routing).metric ==
              netsim::RoutingMetric::optimal);

        const nlohmann::json inline_doc{
            {"type", "routing"},
            {"nodes", 4},
            {"controllers", 2},
            {"domains", {0, 0, 1, 1}},
            {"edges", {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
            {"slot_seconds", 8}};
        const auto tiny = harness::scenario_from_json(inline_doc);
        CHECK(std::get<netsim::RoutingScenario>(tiny).topology.edges.size() == 4);

        const auto lb = harness::scenario_from_json(
            nlohmann::json{{"preset", "loadbalance2"}, {"arrival_rates", {0.5, 0.5}}});
        CHECK(std::get<netsim::LoadBalanceScenario>(lb).arrival_rates[1] ==
              doctest::Approx(0.5));
    }
    SUBCASE("experiment documents") {
        const nlohmann::json doc{
            {"kind", "rate-curve"},
            {"id", "smoke"},
            {"scenario", {{"preset", "routing16"}}},
            {"levels", {0, 1}},
            {"seeds", {1, 2}},
            {"slots", 2},
            {"output", "out.csv"}};
        const auto experiment = harness::experiment_from_json(doc);
        CHECK(experiment.id == "smoke");
        CHECK(experiment.output_path == "out.csv");
        CHECK(std::holds_alternative<harness::RateCurveSpec>(experiment.spec));
        CHECK_THROWS(harness::experiment_from_json(nlohmann::json{{"kind", "mystery"}}));
    }
}

TEST_CASE("csv output carries the schema header and sanitizes fields") {
    harness::ResultTable table;
    ResultRow row;
    row.experiment = "demo";
    row.params = "a=1";
    row.metric = "value,with,commas";
    row.value = 0.5;
    row.error = "multi\nline, message";
    table.append(row);
    const auto csv = table.to_csv();
    CHECK(csv.rfind("schema,experiment,params,metric,value,stddev,min,max,n,error\n", 0) == 0);
    CHECK(csv.find("value;with;commas") != std::string::npos);
    CHECK(csv.find("multi;line; message") != std::string::npos);
    CHECK(table.any_error());
}
