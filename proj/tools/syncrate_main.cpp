#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "syncrate/harness.hpp"
#include "syncrate/netsim.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string output_path;
    std::vector<std::uint64_t> seeds;
    int jobs = 1;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--output", args.output_path,
                    "result CSV path (overrides the config)");
    cmd->add_option("-s,--seeds", args.seeds, "seed list (overrides the config)");
    cmd->add_option("-j,--jobs", args.jobs, "parallel sweep cells")
        ->check(CLI::PositiveNumber);
}

void override_seeds(syncrate::harness::Experiment& experiment,
                    const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) return;
    std::visit(
        [&](auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, syncrate::harness::Obj2TrainSpec> ||
                          std::is_same_v<T, syncrate::harness::RateCurveSpec> ||
                          std::is_same_v<T, syncrate::harness::TradeoffSpec>)
                spec.seeds = seeds;
        },
        experiment.spec);
}

int run_command(const CommonArgs& args, const std::string& expected_kind,
                const std::string& slot_trace_path = {}) {
    auto experiment = syncrate::harness::load_experiment_file(args.config_path);

    const bool kind_matches = std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if (expected_kind == "solve-obj1")
                return std::is_same_v<T, syncrate::harness::Obj1SweepSpec>;
            if (expected_kind == "train")
                return std::is_same_v<T, syncrate::harness::Obj2TrainSpec>;
            if (expected_kind == "rate-curve")
                return std::is_same_v<T, syncrate::harness::RateCurveSpec>;
            if (expected_kind == "bound-check")
                return std::is_same_v<T, syncrate::harness::BoundCheckSpec>;
            return std::is_same_v<T, syncrate::harness::TradeoffSpec>;
        },
        experiment.spec);
    if (!kind_matches) {
        std::cerr << "config kind does not match the `" << expected_kind
                  << "` subcommand\n";
        return 2;
    }

    override_seeds(experiment, args.seeds);
    if (!args.output_path.empty()) experiment.output_path = args.output_path;

    const auto table = syncrate::harness::run_experiment(experiment, args.jobs);
    if (experiment.output_path.empty()) {
        std::cout << table.to_csv();
    } else {
        table.write_csv(experiment.output_path);
        std::cout << table.rows().size() << " rows -> " << experiment.output_path
                  << "\n";
    }

    if (!slot_trace_path.empty()) {
        if (const auto* spec =
                std::get_if<syncrate::harness::RateCurveSpec>(&experiment.spec)) {
            std::ofstream trace(slot_trace_path, std::ios::binary);
            if (!trace) {
                std::cerr << "cannot open slot trace file: " << slot_trace_path << "\n";
                return 2;
            }
            const int controllers = syncrate::netsim::controllers_of(spec->scenario);
            bool first = true;
            for (int level : spec->levels) {
                auto policy = syncrate::SyncPolicy::zeros(controllers);
                for (int& r : policy.rates) r = level;
                std::ostringstream chunk;
                syncrate::netsim::write_slot_trace_csv(chunk, spec->scenario, policy,
                                                       spec->slots, spec->seeds);
                std::string text = chunk.str();
                if (!first) text.erase(0, text.find('\n') + 1);  // keep one header
                trace << text;
                first = false;
            }
        }
    }

    if (table.any_error()) {
        std::cerr << "some sweep cells failed; see the error column\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synchronization-rate policy optimizer and experiment runner"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string slot_trace_path;

    auto* solve = app.add_subcommand(
        "solve-obj1", "consistency-level sweep: exact DP, FPTAS and homogeneous");
    attach_common(solve, args);

    auto* train = app.add_subcommand(
        "train", "stochastic-greedy training against a simulated scenario");
    attach_common(train, args);

    auto* curve = app.add_subcommand(
        "rate-curve", "mean performance of homogeneous policies per rate level");
    attach_common(curve, args);
    curve->add_option("--slot-trace", slot_trace_path,
                      "also write per-slot observations to this CSV");

    auto* bound = app.add_subcommand(
        "bound-check", "empirical approximation-bound validation on synthetic oracles");
    attach_common(bound, args);

    auto* tradeoff = app.add_subcommand(
        "tradeoff", "performance versus training time across a (sigma,tau) grid");
    attach_common(tradeoff, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_command(args, "solve-obj1");
        if (train->parsed()) return run_command(args, "train");
        if (curve->parsed()) return run_command(args, "rate-curve", slot_trace_path);
        if (bound->parsed()) return run_command(args, "bound-check");
        return run_command(args, "tradeoff");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
