#ifndef SYNCRATE_HARNESS_HPP
#define SYNCRATE_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "syncrate/learn.hpp"
#include "syncrate/mck.hpp"
#include "syncrate/netsim.hpp"
#include "syncrate/syncmodel.hpp"

// Experiment runner: declarative JSON configs in, flat CSV result tables out.
// Every row echoes the full parameter tuple; fixed seeds give byte-identical
// output.

namespace syncrate::harness {

struct ResultRow {
    std::string experiment;
    std::string params;  // "key=value;key=value", comma-free
    std::string metric;
    double value = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    long long n = 1;
    std::string error;  // non-empty marks a failed cell
};

class ResultTable {
public:
    static constexpr std::string_view kSchemaVersion = "v1";

    void append(ResultRow row) { rows_.push_back(std::move(row)); }
    void extend(ResultTable other);

    const std::vector<ResultRow>& rows() const { return rows_; }
    bool any_error() const;

    std::string to_csv() const;
    void write_csv(const std::string& path) const;

private:
    std::vector<ResultRow> rows_;
};

struct Obj1SweepSpec {
    int controller_count = 0;
    std::vector<double> rate_shape;  // change rate of controller i = shape_i * scale
    std::vector<double> lambda_scales{1.0};
    double slot_seconds = 30.0;
    std::vector<int> pair_costs;  // empty = unit costs
    std::vector<long long> budgets;
    int max_rate = 1;
    double fptas_eps = 0.1;
};

struct Obj2TrainSpec {
    netsim::Scenario scenario;
    learn::LearnerConfig learner;  // rng_seed is overridden per run
    std::vector<std::uint64_t> seeds;
    int eval_slots = 40;
    std::string trace_json_path;  // empty = no trace file
};

struct RateCurveSpec {
    netsim::Scenario scenario;
    std::vector<int> levels;  // homogeneous extra messages per slot
    std::vector<std::uint64_t> seeds;
    int slots = 40;
};

struct BoundCheckSpec {
    int controller_count = 2;
    int max_rate = 1;
    int budget = 1;
    int tau = 1;
    std::vector<int> sigmas;
    double gamma = 0.3;
    double noise_lo = 1.0;  // 1,1 = noiseless oracle
    double noise_hi = 1.0;
    int runs = 200;
    std::uint64_t oracle_seed = 1;
    std::uint64_t base_seed = 1;
};

struct TradeoffSpec {
    netsim::Scenario scenario;
    std::vector<std::pair<int, int>> sigma_tau_grid;
    int budget = 1;
    int max_rate = 1;
    std::vector<std::uint64_t> seeds;
    int eval_slots = 40;
};

using ExperimentSpec = std::variant<Obj1SweepSpec, Obj2TrainSpec, RateCurveSpec,
                                    BoundCheckSpec, TradeoffSpec>;

struct Experiment {
    std::string id;
    ExperimentSpec spec;
    std::string output_path;  // may be overridden on the command line
};

ResultTable run_obj1_sweep(const Obj1SweepSpec& spec, std::string_view id = "obj1-sweep",
                           int jobs = 1);
ResultTable run_obj2_train(const Obj2TrainSpec& spec, std::string_view id = "obj2-train",
                           int jobs = 1);
ResultTable run_rate_curve(const RateCurveSpec& spec, std::string_view id = "rate-curve",
                           int jobs = 1);
ResultTable run_bound_check(const BoundCheckSpec& spec, std::string_view id = "bound-check",
                            int jobs = 1);
ResultTable run_tradeoff(const TradeoffSpec& spec, std::string_view id = "tradeoff",
                         int jobs = 1);

ResultTable run_experiment(const Experiment& experiment, int jobs = 1);

// Declarative config documents. Schemas are described in the README.
SystemModel model_from_json(const nlohmann::json& doc);
netsim::Scenario scenario_from_json(const nlohmann::json& doc);
Experiment experiment_from_json(const nlohmann::json& doc);
Experiment load_experiment_file(const std::string& path);

namespace presets {

// 16-node, 3-domain model: change rate of controller i = domain size * scale.
SystemModel obj1_v16(double lambda_scale = 0.05, long long budget = 18,
                     int max_rate = 8);

netsim::RoutingScenario routing16(
    netsim::RoutingMetric metric = netsim::RoutingMetric::delivered);

netsim::LoadBalanceScenario loadbalance2(double rate0 = 0.6, double rate1 = 0.3);

}  // namespace presets

}  // namespace syncrate::harness

#endif
