#include "syncrate/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "syncrate/errors.hpp"
#include "syncrate/rng.hpp"
#include "syncrate/stats.hpp"

namespace syncrate::harness {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sanitize(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n') c = ';';
    return text;
}

class ParamList {
public:
    ParamList& add(std::string_view key, const std::string& value) {
        if (!text_.empty()) text_ += ';';
        text_ += key;
        text_ += '=';
        text_ += value;
        return *this;
    }
    ParamList& add(std::string_view key, long long value) {
        return add(key, std::to_string(value));
    }
    ParamList& add(std::string_view key, std::uint64_t value) {
        return add(key, std::to_string(value));
    }
    ParamList& add(std::string_view key, int value) {
        return add(key, std::to_string(value));
    }
    ParamList& add(std::string_view key, double value) {
        return add(key, format_double(value));
    }
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

// Runs cells (possibly in parallel) while keeping output rows in cell order.
ResultTable run_cells(std::size_t count, int jobs, std::string_view id,
                      const std::function<ResultTable(std::size_t)>& cell) {
    std::vector<ResultTable> partial(count);
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                partial[i] = cell(i);
            } catch (const std::exception& e) {
                ResultRow row;
                row.experiment = std::string(id);
                row.params = "cell=" + std::to_string(i);
                row.metric = "error";
                row.error = sanitize(e.what());
                partial[i].append(std::move(row));
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    ResultTable table;
    for (auto& part : partial) table.extend(std::move(part));
    return table;
}

ResultRow make_row(std::string_view id, const std::string& params,
                   std::string_view metric, double value) {
    ResultRow row;
    row.experiment = std::string(id);
    row.params = params;
    row.metric = std::string(metric);
    row.value = value;
    return row;
}

ResultRow stats_row(std::string_view id, const std::string& params,
                    std::string_view metric, const SampleStats& stats) {
    ResultRow row = make_row(id, params, metric, stats.mean);
    row.stddev = stats.stddev;
    row.min = stats.min;
    row.max = stats.max;
    row.n = static_cast<long long>(stats.n);
    return row;
}

SyncPolicy homogeneous_for(int controllers, long long budget, int max_rate) {
    SystemModel scratch = SystemModel::uniform_cost(
        controllers, std::vector<double>(static_cast<std::size_t>(controllers), 0.0),
        1.0, budget, max_rate);
    return learn::homogeneous_policy(scratch);
}

// Evaluation worlds get their own seed stream, separated from training.
std::uint64_t eval_seed_for(std::uint64_t train_seed) {
    return substream_u64(train_seed, Stream::kInstanceGen, 0xe7a1);
}

}  // namespace

void ResultTable::extend(ResultTable other) {
    rows_.insert(rows_.end(), std::make_move_iterator(other.rows_.begin()),
                 std::make_move_iterator(other.rows_.end()));
}

bool ResultTable::any_error() const {
    return std::any_of(rows_.begin(), rows_.end(),
                       [](const ResultRow& r) { return !r.error.empty(); });
}

std::string ResultTable::to_csv() const {
    std::string out = "schema,experiment,params,metric,value,stddev,min,max,n,error\n";
    for (const auto& row : rows_) {
        out += kSchemaVersion;
        out += ',';
        out += sanitize(row.experiment);
        out += ',';
        out += sanitize(row.params);
        out += ',';
        out += sanitize(row.metric);
        out += ',';
        out += format_double(row.value);
        out += ',';
        out += format_double(row.stddev);
        out += ',';
        out += format_double(row.min);
        out += ',';
        out += format_double(row.max);
        out += ',';
        out += std::to_string(row.n);
        out += ',';
        out += sanitize(row.error);
        out += '\n';
    }
    return out;
}

void ResultTable::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << to_csv();
}

ResultTable run_obj1_sweep(const Obj1SweepSpec& spec, std::string_view id, int jobs) {
    if (spec.budgets.empty() || spec.lambda_scales.empty())
        throw std::invalid_argument("obj1-sweep: parameter grids must be non-empty");
    PairSpace pairs(spec.controller_count);
    if (spec.rate_shape.size() != static_cast<std::size_t>(spec.controller_count))
        throw std::invalid_argument("obj1-sweep: rate shape per controller required");

    const std::size_t cells = spec.lambda_scales.size() * spec.budgets.size();
    return run_cells(cells, jobs, id, [&](std::size_t cell) {
        const double scale = spec.lambda_scales[cell / spec.budgets.size()];
        const long long budget = spec.budgets[cell % spec.budgets.size()];

        SystemModel model;
        model.controller_count = spec.controller_count;
        for (double shape : spec.rate_shape) model.change_rates.push_back(shape * scale);
        model.slot_seconds = spec.slot_seconds;
        model.pair_costs = spec.pair_costs.empty()
                               ? std::vector<int>(static_cast<std::size_t>(pairs.count()), 1)
                               : spec.pair_costs;
        model.budget = budget;
        model.max_rate = spec.max_rate;
        validate_model(model);

        ParamList params;
        params.add("lambda_scale", scale).add("budget", budget).add("eps", spec.fptas_eps);

        ResultTable table;
        const auto instance = mck::build_mck_instance(model);
        const auto dp = mck::solve_exact_dp(instance);
        const auto fp = mck::solve_fptas(instance, spec.fptas_eps);
        const double baseline = mck::zero_rate_baseline(model);

        table.append(make_row(id, params.str(), "omega_mck_dp",
                              consistency_level(model, mck::decode_policy(instance, dp)).omega));
        table.append(make_row(id, params.str(), "omega_fptas",
                              consistency_level(model, mck::decode_policy(instance, fp)).omega));
        table.append(make_row(id, params.str(), "omega_homogeneous",
                              consistency_level(model, learn::homogeneous_policy(model)).omega));
        table.append(make_row(id, params.str(), "omega_zero_rate", baseline));
        return table;
    });
}

ResultTable run_obj2_train(const Obj2TrainSpec& spec, std::string_view id, int jobs) {
    if (spec.seeds.empty()) throw std::invalid_argument("obj2-train: seeds required");
    if (spec.eval_slots < 1) throw std::invalid_argument("obj2-train: eval_slots must be >= 1");
    const int controllers = netsim::controllers_of(spec.scenario);
    learn::LearnerConfig base = spec.learner;
    base.controller_count = controllers;
    validate_config(base);

    std::vector<nlohmann::json> traces(spec.seeds.size());

    ResultTable table = run_cells(spec.seeds.size(), jobs, id, [&](std::size_t cell) {
        const std::uint64_t seed = spec.seeds[cell];
        learn::LearnerConfig config = base;
        config.rng_seed = seed;

        netsim::ScenarioOracle oracle(spec.scenario, seed);
        const learn::LearnerRun run = learn::stochastic_greedy(config, oracle);

        ParamList params;
        params.add("seed", seed)
            .add("sigma", config.sigma)
            .add("tau", config.tau)
            .add("budget", config.budget);

        ResultTable part;
        part.append(make_row(id, params.str(), "slots_used",
                             static_cast<double>(run.slots_used)));
        part.append(make_row(id, params.str(), "policy_total_rate",
                             static_cast<double>(run.final_policy.total_rate())));

        for (std::size_t s = 0; s < oracle.history().size(); ++s) {
            ParamList slot_params;
            slot_params.add("seed", seed).add("slot", static_cast<long long>(s + 1));
            part.append(make_row(id, slot_params.str(), "train_psi",
                                 oracle.history()[s].psi));
        }
        for (std::size_t k = 0; k < run.iterations.size(); ++k) {
            ParamList iter_params;
            iter_params.add("seed", seed).add("iteration", static_cast<long long>(k + 1));
            part.append(make_row(id, iter_params.str(), "winner_pair",
                                 static_cast<double>(run.iterations[k].winner_pair)));
        }

        const std::uint64_t eval_seed = eval_seed_for(seed);
        const std::vector<std::uint64_t> eval_seeds{eval_seed};
        const auto sg_eval = netsim::evaluate_policy(spec.scenario, run.final_policy,
                                                     spec.eval_slots, eval_seeds);
        const SyncPolicy homogeneous =
            homogeneous_for(controllers, config.budget, config.max_rate);
        const auto hom_eval = netsim::evaluate_policy(spec.scenario, homogeneous,
                                                      spec.eval_slots, eval_seeds);
        part.append(make_row(id, params.str(), "eval_sg_mean_psi", sg_eval.mean));
        part.append(make_row(id, params.str(), "eval_homogeneous_mean_psi", hom_eval.mean));

        traces[cell] = nlohmann::json::parse(learn::run_to_json(run));
        return part;
    });

    // Cross-seed summary for quick reading; acceptance statistics use the
    // per-seed rows above.
    std::vector<double> sg_means, hom_means;
    for (const auto& row : table.rows()) {
        if (row.metric == "eval_sg_mean_psi") sg_means.push_back(row.value);
        if (row.metric == "eval_homogeneous_mean_psi") hom_means.push_back(row.value);
    }
    if (!sg_means.empty() && sg_means.size() == hom_means.size()) {
        ParamList params;
        params.add("seeds", static_cast<long long>(sg_means.size()));
        const auto sg = summarize(sg_means);
        const auto hom = summarize(hom_means);
        table.append(stats_row(id, params.str(), "summary_sg_mean_psi", sg));
        table.append(stats_row(id, params.str(), "summary_homogeneous_mean_psi", hom));
        if (sg_means.size() > 1)
            table.append(make_row(id, params.str(), "summary_pooled_se",
                                  pooled_standard_error(sg, hom)));
    }

    if (!spec.trace_json_path.empty()) {
        nlohmann::json doc;
        doc["experiment"] = std::string(id);
        doc["runs"] = traces;
        std::ofstream out(spec.trace_json_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open trace file: " + spec.trace_json_path);
        out << doc.dump(2) << '\n';
    }
    return table;
}

ResultTable run_rate_curve(const RateCurveSpec& spec, std::string_view id, int jobs) {
    if (spec.levels.empty() || spec.seeds.empty())
        throw std::invalid_argument("rate-curve: levels and seeds required");
    const int controllers = netsim::controllers_of(spec.scenario);
    PairSpace pairs(controllers);

    return run_cells(spec.levels.size(), jobs, id, [&](std::size_t cell) {
        const int level = spec.levels[cell];
        SyncPolicy policy = SyncPolicy::zeros(controllers);
        for (int& r : policy.rates) r = level;

        const auto eval = netsim::evaluate_policy(spec.scenario, policy, spec.slots,
                                                  spec.seeds);
        ParamList params;
        params.add("level", level)
            .add("slots", spec.slots)
            .add("pairs", pairs.count());
        SampleStats stats = summarize(eval.per_seed);
        ResultTable part;
        part.append(stats_row(id, params.str(), "mean_psi", stats));
        return part;
    });
}

ResultTable run_bound_check(const BoundCheckSpec& spec, std::string_view id, int jobs) {
    if (spec.sigmas.empty()) throw std::invalid_argument("bound-check: sigmas required");
    if (spec.runs < 1) throw std::invalid_argument("bound-check: runs must be >= 1");
    const netsim::SyntheticSpec oracle_spec =
        netsim::random_coverage_spec(spec.controller_count, spec.oracle_seed);

    // Brute-forced optimum of the true mean; shared by every sigma cell.
    netsim::SyntheticOracle probe(oracle_spec, 0);
    const double opt = learn::brute_force_best_policy(
        [&](const SyncPolicy& p) { return probe.true_mean(p); },
        spec.controller_count, spec.max_rate, spec.budget);
    if (!(opt > 0.0)) throw std::invalid_argument("bound-check: degenerate oracle optimum");

    const double mu = std::min(1.0, 0.5 * (spec.noise_lo + spec.noise_hi));

    return run_cells(spec.sigmas.size(), jobs, id, [&](std::size_t cell) {
        const int sigma = spec.sigmas[cell];
        learn::LearnerConfig config;
        config.controller_count = spec.controller_count;
        config.sigma = sigma;
        config.tau = spec.tau;
        config.budget = spec.budget;
        config.max_rate = spec.max_rate;

        const auto hp = learn::high_prob_bound(spec.controller_count, spec.budget,
                                               spec.max_rate, sigma, spec.tau, mu,
                                               spec.gamma, false);
        const auto hp_mu = learn::high_prob_bound(spec.controller_count, spec.budget,
                                                  spec.max_rate, sigma, spec.tau, mu,
                                                  spec.gamma, true);

        std::vector<double> ratios;
        long long below_discounted = 0;
        for (int r = 0; r < spec.runs; ++r) {
            config.rng_seed = substream_u64(spec.base_seed, Stream::kInstanceGen,
                                            static_cast<std::uint64_t>(sigma),
                                            static_cast<std::uint64_t>(r));
            netsim::SyntheticSpec noisy = oracle_spec;
            noisy.noise_lo = spec.noise_lo;
            noisy.noise_hi = spec.noise_hi;
            netsim::SyntheticOracle oracle(noisy, config.rng_seed);
            const auto run = learn::stochastic_greedy(config, oracle);
            const double ratio = oracle.true_mean(run.final_policy) / opt;
            ratios.push_back(ratio);
            if (ratio < hp.factor) ++below_discounted;
        }

        ParamList params;
        params.add("sigma", sigma)
            .add("tau", spec.tau)
            .add("budget", spec.budget)
            .add("mu", mu)
            .add("gamma", spec.gamma)
            .add("runs", spec.runs);

        ResultTable part;
        part.append(stats_row(id, params.str(), "achieved_over_opt", summarize(ratios)));
        part.append(make_row(id, params.str(), "theorem3_bound",
                             learn::expected_bound(spec.controller_count, spec.budget,
                                                   spec.max_rate, sigma, mu)));
        part.append(make_row(id, params.str(), "discounted_factor", hp.factor));
        part.append(make_row(id, params.str(), "violation_freq",
                             static_cast<double>(below_discounted) / spec.runs));
        part.append(make_row(id, params.str(), "theorem4_violation_cap",
                             1.0 - hp.probability));
        part.append(make_row(id, params.str(), "theorem4_violation_cap_mu_variant",
                             1.0 - hp_mu.probability));
        return part;
    });
}

ResultTable run_tradeoff(const TradeoffSpec& spec, std::string_view id, int jobs) {
    if (spec.sigma_tau_grid.empty() || spec.seeds.empty())
        throw std::invalid_argument("tradeoff: grid and seeds required");
    const int controllers = netsim::controllers_of(spec.scenario);

    return run_cells(spec.sigma_tau_grid.size(), jobs, id, [&](std::size_t cell) {
        const auto [sigma, tau] = spec.sigma_tau_grid[cell];
        learn::LearnerConfig config;
        config.controller_count = controllers;
        config.sigma = sigma;
        config.tau = tau;
        config.budget = spec.budget;
        config.max_rate = spec.max_rate;
        validate_config(config);

        std::vector<double> per_seed;
        for (std::uint64_t seed : spec.seeds) {
            config.rng_seed = seed;
            netsim::ScenarioOracle oracle(spec.scenario, seed);
            const auto run = learn::stochastic_greedy(config, oracle);
            const std::vector<std::uint64_t> eval_seeds{eval_seed_for(seed)};
            per_seed.push_back(netsim::evaluate_policy(spec.scenario, run.final_policy,
                                                       spec.eval_slots, eval_seeds)
                                   .mean);
        }

        ParamList params;
        params.add("sigma", sigma).add("tau", tau).add("budget", spec.budget).add(
            "training_slots", learn::training_time(sigma, tau, spec.budget));
        ResultTable part;
        part.append(stats_row(id, params.str(), "mean_psi", summarize(per_seed)));
        return part;
    });
}

ResultTable run_experiment(const Experiment& experiment, int jobs) {
    return std::visit(
        [&](const auto& spec) -> ResultTable {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, Obj1SweepSpec>)
                return run_obj1_sweep(spec, experiment.id, jobs);
            else if constexpr (std::is_same_v<T, Obj2TrainSpec>)
                return run_obj2_train(spec, experiment.id, jobs);
            else if constexpr (std::is_same_v<T, RateCurveSpec>)
                return run_rate_curve(spec, experiment.id, jobs);
            else if constexpr (std::is_same_v<T, BoundCheckSpec>)
                return run_bound_check(spec, experiment.id, jobs);
            else
                return run_tradeoff(spec, experiment.id, jobs);
        },
        experiment.spec);
}

SystemModel model_from_json(const nlohmann::json& doc) {
    if (doc.contains("preset")) {
        const std::string preset = doc.at("preset").get<std::string>();
        if (preset == "obj1-v16")
            return presets::obj1_v16(doc.value("lambda_scale", 0.05),
                                     doc.value("budget", 18LL),
                                     doc.value("max_rate", 8));
        throw std::invalid_argument("unknown model preset: " + preset);
    }
    SystemModel model;
    model.controller_count = doc.at("controllers").get<int>();
    model.change_rates = doc.at("change_rates").get<std::vector<double>>();
    model.slot_seconds = doc.at("slot_seconds").get<double>();
    model.budget = doc.at("budget").get<long long>();
    model.max_rate = doc.at("max_rate").get<int>();
    PairSpace pairs(model.controller_count);
    if (doc.contains("pair_costs") && doc.at("pair_costs").is_array())
        model.pair_costs = doc.at("pair_costs").get<std::vector<int>>();
    else
        model.pair_costs.assign(static_cast<std::size_t>(pairs.count()),
                                doc.value("pair_costs", 1));
    validate_model(model);
    return model;
}

netsim::Scenario scenario_from_json(const nlohmann::json& doc) {
    if (doc.contains("preset")) {
        const std::string preset = doc.at("preset").get<std::string>();
        if (preset == "routing16") {
            auto scenario = presets::routing16(
                doc.value("metric", std::string("delivered")) == "optimal"
                    ? netsim::RoutingMetric::optimal
                    : netsim::RoutingMetric::delivered);
            scenario.flip_prob = doc.value("flip_prob", scenario.flip_prob);
            scenario.packets_per_tick =
                doc.value("packets_per_tick", scenario.packets_per_tick);
            scenario.slot_seconds = doc.value("slot_seconds", scenario.slot_seconds);
            return scenario;
        }
        if (preset == "loadbalance2") {
            auto rates = doc.value("arrival_rates", std::vector<double>{0.6, 0.3});
            if (rates.size() != 2)
                throw std::invalid_argument("loadbalance2: two arrival rates required");
            auto scenario = presets::loadbalance2(rates[0], rates[1]);
            scenario.slot_seconds = doc.value("slot_seconds", scenario.slot_seconds);
            scenario.work_amount = doc.value("work_amount", scenario.work_amount);
            return scenario;
        }
        throw std::invalid_argument("unknown scenario preset: " + preset);
    }

    const std::string type = doc.at("type").get<std::string>();
    if (type == "routing") {
        netsim::RoutingScenario scenario;
        scenario.topology.node_count = doc.at("nodes").get<int>();
        scenario.topology.controller_count = doc.at("controllers").get<int>();
        scenario.topology.domain_of = doc.at("domains").get<std::vector<int>>();
        for (const auto& e : doc.at("edges")) {
            int u = e.at(0).get<int>();
            int v = e.at(1).get<int>();
            if (u > v) std::swap(u, v);
            scenario.topology.edges.push_back({u, v});
        }
        scenario.flip_prob = doc.value("flip_prob", 0.05);
        scenario.packets_per_tick = doc.value("packets_per_tick", 1);
        scenario.slot_seconds = doc.value("slot_seconds", 32);
        scenario.metric = doc.value("metric", std::string("delivered")) == "optimal"
                              ? netsim::RoutingMetric::optimal
                              : netsim::RoutingMetric::delivered;
        validate_scenario(scenario);
        return scenario;
    }
    if (type == "loadbalance") {
        netsim::LoadBalanceScenario scenario;
        const auto rates = doc.at("arrival_rates").get<std::vector<double>>();
        if (rates.size() != 2)
            throw std::invalid_argument("loadbalance: two arrival rates required");
        scenario.arrival_rates = {rates[0], rates[1]};
        scenario.work_amount = doc.value("work_amount", 1.0);
        scenario.slot_seconds = doc.value("slot_seconds", 60);
        validate_scenario(scenario);
        return scenario;
    }
    throw std::invalid_argument("unknown scenario type: " + type);
}

namespace {

std::vector<std::uint64_t> seeds_from_json(const nlohmann::json& doc) {
    std::vector<std::uint64_t> seeds;
    if (doc.contains("seeds")) {
        for (const auto& s : doc.at("seeds")) seeds.push_back(s.get<std::uint64_t>());
    }
    return seeds;
}

}  // namespace

Experiment experiment_from_json(const nlohmann::json& doc) {
    Experiment experiment;
    const std::string kind = doc.at("kind").get<std::string>();
    experiment.id = doc.value("id", kind);
    experiment.output_path = doc.value("output", std::string{});

    if (kind == "obj1-sweep") {
        Obj1SweepSpec spec;
        const SystemModel base = model_from_json(doc.at("model"));
        spec.controller_count = base.controller_count;
        spec.rate_shape = base.change_rates;
        spec.slot_seconds = base.slot_seconds;
        spec.pair_costs = base.pair_costs;
        spec.max_rate = base.max_rate;
        if (doc.contains("budgets"))
            spec.budgets = doc.at("budgets").get<std::vector<long long>>();
        else
            spec.budgets = {base.budget};
        if (doc.contains("lambda_scales"))
            spec.lambda_scales = doc.at("lambda_scales").get<std::vector<double>>();
        spec.fptas_eps = doc.value("fptas_eps", 0.1);
        experiment.spec = std::move(spec);
    } else if (kind == "obj2-train") {
        Obj2TrainSpec spec;
        spec.scenario = scenario_from_json(doc.at("scenario"));
        const auto& learner = doc.at("learner");
        spec.learner.sigma = learner.at("sigma").get<int>();
        spec.learner.tau = learner.at("tau").get<int>();
        spec.learner.budget = learner.at("budget").get<int>();
        spec.learner.max_rate = learner.at("max_rate").get<int>();
        spec.seeds = seeds_from_json(doc);
        spec.eval_slots = doc.value("eval_slots", 40);
        spec.trace_json_path = doc.value("trace_json", std::string{});
        experiment.spec = std::move(spec);
    } else if (kind == "rate-curve") {
        RateCurveSpec spec;
        spec.scenario = scenario_from_json(doc.at("scenario"));
        spec.levels = doc.at("levels").get<std::vector<int>>();
        spec.seeds = seeds_from_json(doc);
        spec.slots = doc.value("slots", 40);
        experiment.spec = std::move(spec);
    } else if (kind == "bound-check") {
        BoundCheckSpec spec;
        spec.controller_count = doc.at("controllers").get<int>();
        spec.max_rate = doc.value("max_rate", 1);
        spec.budget = doc.at("budget").get<int>();
        spec.tau = doc.value("tau", 1);
        spec.sigmas = doc.at("sigmas").get<std::vector<int>>();
        spec.gamma = doc.value("gamma", 0.3);
        if (doc.contains("noise")) {
            spec.noise_lo = doc.at("noise").at(0).get<double>();
            spec.noise_hi = doc.at("noise").at(1).get<double>();
        }
        spec.runs = doc.value("runs", 200);
        spec.oracle_seed = doc.value("oracle_seed", std::uint64_t{1});
        spec.base_seed = doc.value("base_seed", std::uint64_t{1});
        experiment.spec = std::move(spec);
    } else if (kind == "tradeoff-sweep") {
        TradeoffSpec spec;
        spec.scenario = scenario_from_json(doc.at("scenario"));
        for (const auto& pair : doc.at("grid"))
            spec.sigma_tau_grid.push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
        spec.budget = doc.at("budget").get<int>();
        spec.max_rate = doc.at("max_rate").get<int>();
        spec.seeds = seeds_from_json(doc);
        spec.eval_slots = doc.value("eval_slots", 40);
        experiment.spec = std::move(spec);
    } else {
        throw std::invalid_argument("unknown experiment kind: " + kind);
    }
    return experiment;
}

Experiment load_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json doc;
    in >> doc;
    return experiment_from_json(doc);
}

namespace presets {

SystemModel obj1_v16(double lambda_scale, long long budget, int max_rate) {
    const netsim::Topology topo = netsim::paper_topology();
    const auto sizes = topo.domain_sizes();
    std::vector<double> rates;
    rates.reserve(sizes.size());
    for (int n : sizes) rates.push_back(static_cast<double>(n) * lambda_scale);
    return SystemModel::uniform_cost(topo.controller_count, std::move(rates), 30.0,
                                     budget, max_rate);
}

netsim::RoutingScenario routing16(netsim::RoutingMetric metric) {
    netsim::RoutingScenario scenario;
    scenario.topology = netsim::paper_topology();
    scenario.flip_prob = 0.05;
    scenario.packets_per_tick = 2;
    scenario.slot_seconds = 32;
    scenario.metric = metric;
    return scenario;
}

netsim::LoadBalanceScenario loadbalance2(double rate0, double rate1) {
    netsim::LoadBalanceScenario scenario;
    scenario.arrival_rates = {rate0, rate1};
    scenario.work_amount = 1.0;
    scenario.slot_seconds = 60;
    return scenario;
}

}  // namespace presets

}  // namespace syncrate::harness
