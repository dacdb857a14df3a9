#ifndef SYNCRATE_NETSIM_HPP
#define SYNCRATE_NETSIM_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "syncrate/learn.hpp"
#include "syncrate/syncmodel.hpp"

// Deterministic slotted simulator: one tick per second, per-entity random
// substreams, controllers acting on possibly stale views of remote domains.
// Provides the per-slot performance oracles the learner trains against.

namespace syncrate::netsim {

struct Topology {
    int node_count = 0;
    int controller_count = 0;
    std::vector<std::pair<int, int>> edges;  // undirected, stored u < v
    std::vector<int> domain_of;              // node -> controller

    // Cross-domain links belong to the lower-indexed adjacent controller.
    int edge_owner(int edge) const;
    std::vector<int> domain_sizes() const;
};

void validate_topology(const Topology& topology);
bool connected_all_up(const Topology& topology);

Topology random_connected_topology(int nodes, int controllers, double edge_prob,
                                   std::uint64_t seed);

// The fixed 16-node, 3-domain network used by the shipped presets.
Topology paper_topology();

enum class RoutingMetric { delivered, optimal };

struct RoutingScenario {
    Topology topology;
    double flip_prob = 0.05;  // per link, per second
    int packets_per_tick = 1;
    int slot_seconds = 32;
    RoutingMetric metric = RoutingMetric::delivered;
    std::uint64_t rng_seed = 0;
};

struct LoadBalanceScenario {
    std::array<double, 2> arrival_rates{0.5, 0.5};  // flows/second per switch
    double work_amount = 1.0;
    int slot_seconds = 60;
    // Substream ids per switch; swapping them relabels the arrival streams,
    // which the label-symmetry tests rely on.
    std::array<std::uint64_t, 2> switch_streams{0, 1};
    std::uint64_t rng_seed = 0;
};

using Scenario = std::variant<RoutingScenario, LoadBalanceScenario>;

void validate_scenario(const RoutingScenario& scenario);
void validate_scenario(const LoadBalanceScenario& scenario);
int controllers_of(const Scenario& scenario);
int slot_seconds_of(const Scenario& scenario);

// What one controller believes about each domain, refreshed by sync messages.
// Own-domain entries track ground truth live.
struct ControllerView {
    std::vector<std::uint8_t> link_up;       // per edge (routing)
    std::vector<double> server_load;         // per controller (load balancing)
    std::vector<long long> domain_sync_tick; // per source controller; -1 = initial
};

struct WorldState {
    std::vector<std::uint8_t> link_up;  // ground truth link states
    std::vector<double> server_loads;   // ground truth cumulative work
    long long tick = 0;                 // seconds elapsed since creation
    std::vector<ControllerView> views;
};

WorldState make_world(const RoutingScenario& scenario);
WorldState make_world(const LoadBalanceScenario& scenario);

struct SlotObservation {
    double psi = 0.0;
    long long packets = 0;
    long long delivered = 0;
    long long optimal = 0;
    double rmse = 0.0;
    std::array<double, 2> throughput{0.0, 0.0};
};

// Invoked at the end of every tick; used by instrumentation and tests.
using TickObserver = std::function<void(const WorldState&, int local_tick)>;

// Advances the world by one slot under `policy`: each tick applies dynamics,
// delivers any sync messages scheduled for it, then runs the application.
// The mandatory slot-start message is tick 0; x_ij extra messages land at
// ticks ceil(s*m/(x_ij+1)), m = 1..x_ij.
SlotObservation run_slot(const RoutingScenario& scenario, WorldState& state,
                         const SyncPolicy& policy, long long slot,
                         const TickObserver& observer = {});
SlotObservation run_slot(const LoadBalanceScenario& scenario, WorldState& state,
                         const SyncPolicy& policy, long long slot,
                         const TickObserver& observer = {});

// Scheduled sync delivery ticks (within-slot, sorted, deduplicated) for a
// pair at rate `rate`, including the mandatory tick 0.
std::vector<int> sync_delivery_ticks(int rate, int slot_seconds);

// Owns a world and exposes it as a training oracle; slots must be requested
// in order 1,2,3,... or ContractViolation is thrown.
class ScenarioOracle final : public learn::Oracle {
public:
    ScenarioOracle(Scenario scenario, std::uint64_t seed);

    double try_out(const SyncPolicy& policy, long long slot) override;

    const WorldState& state() const { return state_; }
    const std::vector<SlotObservation>& history() const { return history_; }

private:
    Scenario scenario_;
    WorldState state_;
    long long last_slot_ = 0;
    std::vector<SlotObservation> history_;
};

std::unique_ptr<learn::Oracle> as_oracle(const Scenario& scenario,
                                         std::uint64_t seed);

// Closed-form oracles with a known mean function, for bound validation.
struct SyntheticSpec {
    enum class Kind { modular, coverage } kind = Kind::modular;
    int controller_count = 2;
    std::vector<double> weight;  // modular: psi = sum w_p x_p;
                                 // coverage: psi = sum w_p (1 - decay_p^{x_p})
    std::vector<double> decay;   // in (0,1), coverage only
    double noise_lo = 1.0;       // observation = U[noise_lo, noise_hi] * mean
    double noise_hi = 1.0;
};

// Coverage spec with randomized positive weights and decays; same seed, same
// spec.
SyntheticSpec random_coverage_spec(int controllers, std::uint64_t seed);

class SyntheticOracle final : public learn::Oracle {
public:
    SyntheticOracle(SyntheticSpec spec, std::uint64_t seed);

    double try_out(const SyncPolicy& policy, long long slot) override;
    double true_mean(const SyncPolicy& policy) const;
    double noise_mean() const { return 0.5 * (spec_.noise_lo + spec_.noise_hi); }
    const SyntheticSpec& spec() const { return spec_; }

private:
    SyntheticSpec spec_;
    std::uint64_t seed_;
};

struct EvalStats {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<double> per_seed;  // mean psi per seed
};

// Mean per-slot psi of a fixed policy, one fresh world per seed.
EvalStats evaluate_policy(const Scenario& scenario, const SyncPolicy& policy,
                          int slots, std::span<const std::uint64_t> seeds);

// Per-slot trace rows: seed,slot,policy_hash,psi,delivered_frac,optimal_frac,
// packets,rmse.
void write_slot_trace_csv(std::ostream& out, const Scenario& scenario,
                          const SyncPolicy& policy, int slots,
                          std::span<const std::uint64_t> seeds);

}  // namespace syncrate::netsim

#endif
