#include "syncrate/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <stdexcept>

#include "syncrate/errors.hpp"
#include "syncrate/rng.hpp"
#include "syncrate/stats.hpp"

namespace syncrate::netsim {

namespace {

// Unbiased-enough fixed-point map of 64 random bits onto [0, n).
inline int bounded_index(std::uint64_t bits, int n) {
    return static_cast<int>((static_cast<unsigned __int128>(bits) *
                             static_cast<unsigned __int128>(n)) >> 64);
}

struct Adjacency {
    // per node: (neighbor, edge index), neighbors ascending
    std::vector<std::vector<std::pair<int, int>>> at;

    explicit Adjacency(const Topology& topo) {
        at.resize(static_cast<std::size_t>(topo.node_count));
        for (std::size_t e = 0; e < topo.edges.size(); ++e) {
            const auto [u, v] = topo.edges[e];
            at[static_cast<std::size_t>(u)].push_back({v, static_cast<int>(e)});
            at[static_cast<std::size_t>(v)].push_back({u, static_cast<int>(e)});
        }
        for (auto& nbrs : at) std::sort(nbrs.begin(), nbrs.end());
    }
};

struct HopPaths {
    std::vector<int> dist;         // -1 = unreachable
    std::vector<int> parent_edge;  // edge leading back toward the source
    std::vector<int> parent_node;
};

// Unit-weight shortest paths; ties resolve to the lowest-index neighbor
// because discovery order is FIFO over ascending adjacency.
HopPaths shortest_hops(const Adjacency& adj, const std::vector<std::uint8_t>& up,
                       int src) {
    const std::size_t n = adj.at.size();
    HopPaths out;
    out.dist.assign(n, -1);
    out.parent_edge.assign(n, -1);
    out.parent_node.assign(n, -1);
    out.dist[static_cast<std::size_t>(src)] = 0;
    std::deque<int> queue{src};
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        for (const auto& [nbr, edge] : adj.at[static_cast<std::size_t>(node)]) {
            if (!up[static_cast<std::size_t>(edge)]) continue;
            if (out.dist[static_cast<std::size_t>(nbr)] >= 0) continue;
            out.dist[static_cast<std::size_t>(nbr)] =
                out.dist[static_cast<std::size_t>(node)] + 1;
            out.parent_edge[static_cast<std::size_t>(nbr)] = edge;
            out.parent_node[static_cast<std::size_t>(nbr)] = node;
            queue.push_back(nbr);
        }
    }
    return out;
}

void validate_policy_for(const SyncPolicy& policy, int controllers) {
    PairSpace pairs(controllers);
    if (policy.controller_count != controllers ||
        policy.rates.size() != static_cast<std::size_t>(pairs.count()))
        throw std::invalid_argument("run_slot: policy does not match scenario");
    for (int r : policy.rates)
        if (r < 0) throw std::invalid_argument("run_slot: negative sync rate");
}

// Per-pair within-slot delivery schedule as a tick -> pairs table.
std::vector<std::vector<int>> schedule_by_tick(const SyncPolicy& policy,
                                               int pair_count, int slot_seconds) {
    std::vector<std::vector<int>> at_tick(static_cast<std::size_t>(slot_seconds));
    for (int p = 0; p < pair_count; ++p)
        for (int tick : sync_delivery_ticks(policy.rates[static_cast<std::size_t>(p)],
                                            slot_seconds))
            at_tick[static_cast<std::size_t>(tick)].push_back(p);
    return at_tick;
}

void deliver_sync_routing(const Topology& topo, WorldState& state, int from,
                          int to, long long tick) {
    auto& view = state.views[static_cast<std::size_t>(to)];
    for (std::size_t e = 0; e < topo.edges.size(); ++e)
        if (topo.edge_owner(static_cast<int>(e)) == from)
            view.link_up[e] = state.link_up[e];
    view.domain_sync_tick[static_cast<std::size_t>(from)] = tick;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

int Topology::edge_owner(int edge) const {
    const auto [u, v] = edges.at(static_cast<std::size_t>(edge));
    return std::min(domain_of[static_cast<std::size_t>(u)],
                    domain_of[static_cast<std::size_t>(v)]);
}

std::vector<int> Topology::domain_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(controller_count), 0);
    for (int d : domain_of) ++sizes[static_cast<std::size_t>(d)];
    return sizes;
}

void validate_topology(const Topology& topology) {
    if (topology.node_count < 2)
        throw std::invalid_argument("Topology: need at least 2 nodes");
    if (topology.controller_count < 1)
        throw std::invalid_argument("Topology: need at least 1 controller");
    if (topology.domain_of.size() != static_cast<std::size_t>(topology.node_count))
        throw std::invalid_argument("Topology: every node needs a domain");
    for (int d : topology.domain_of)
        if (d < 0 || d >= topology.controller_count)
            throw std::invalid_argument("Topology: domain out of range");
    for (int size : topology.domain_sizes())
        if (size == 0) throw std::invalid_argument("Topology: empty domain");
    for (const auto& [u, v] : topology.edges)
        if (u < 0 || v < 0 || u >= topology.node_count || v >= topology.node_count ||
            u >= v)
            throw std::invalid_argument("Topology: malformed edge");
    if (!connected_all_up(topology))
        throw std::invalid_argument("Topology: graph must be connected with all links up");
}

bool connected_all_up(const Topology& topology) {
    if (topology.node_count == 0) return false;
    Adjacency adj(topology);
    std::vector<std::uint8_t> up(topology.edges.size(), 1);
    const auto paths = shortest_hops(adj, up, 0);
    return std::all_of(paths.dist.begin(), paths.dist.end(),
                       [](int d) { return d >= 0; });
}

Topology random_connected_topology(int nodes, int controllers, double edge_prob,
                                   std::uint64_t seed) {
    if (nodes < 2 || controllers < 1 || controllers > nodes)
        throw std::invalid_argument("random_connected_topology: bad sizes");
    if (!(edge_prob > 0.0 && edge_prob <= 1.0))
        throw std::invalid_argument("random_connected_topology: bad edge probability");

    Topology topo;
    topo.node_count = nodes;
    topo.controller_count = controllers;
    // Contiguous domains, sizes as even as possible (larger ones first).
    topo.domain_of.resize(static_cast<std::size_t>(nodes));
    int next = 0;
    for (int c = 0; c < controllers; ++c) {
        const int size = (nodes + controllers - 1 - c) / controllers;
        for (int k = 0; k < size; ++k)
            topo.domain_of[static_cast<std::size_t>(next++)] = c;
    }

    for (std::uint64_t trial = 0;; ++trial) {
        CounterRng rng(seed, Stream::kTopology, trial);
        topo.edges.clear();
        for (int u = 0; u < nodes; ++u)
            for (int v = u + 1; v < nodes; ++v)
                if (rng.bernoulli(edge_prob)) topo.edges.push_back({u, v});
        if (connected_all_up(topo)) break;
    }
    validate_topology(topo);
    return topo;
}

Topology paper_topology() {
    return random_connected_topology(16, 3, 0.22, 0x16a3d0);
}

void validate_scenario(const RoutingScenario& scenario) {
    validate_topology(scenario.topology);
    if (!(scenario.flip_prob >= 0.0 && scenario.flip_prob <= 1.0))
        throw std::invalid_argument("RoutingScenario: flip probability outside [0,1]");
    if (scenario.packets_per_tick < 1)
        throw std::invalid_argument("RoutingScenario: need at least one packet per tick");
    if (scenario.slot_seconds < 1)
        throw std::invalid_argument("RoutingScenario: slot must span at least one tick");
    if (scenario.topology.controller_count < 2)
        throw std::invalid_argument("RoutingScenario: need at least 2 controllers");
}

void validate_scenario(const LoadBalanceScenario& scenario) {
    for (double rate : scenario.arrival_rates)
        if (!(rate > 0.0 && rate <= 1.0))
            throw std::invalid_argument(
                "LoadBalanceScenario: arrival rates must lie in (0,1] flows/second");
    if (!(scenario.work_amount > 0.0))
        throw std::invalid_argument("LoadBalanceScenario: work amount must be positive");
    if (scenario.slot_seconds < 1)
        throw std::invalid_argument("LoadBalanceScenario: slot must span at least one tick");
}

int controllers_of(const Scenario& scenario) {
    return std::visit(
        [](const auto& s) -> int {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, RoutingScenario>)
                return s.topology.controller_count;
            else
                return 2;
        },
        scenario);
}

int slot_seconds_of(const Scenario& scenario) {
    return std::visit([](const auto& s) { return s.slot_seconds; }, scenario);
}

WorldState make_world(const RoutingScenario& scenario) {
    validate_scenario(scenario);
    const auto& topo = scenario.topology;
    WorldState state;
    state.link_up.assign(topo.edges.size(), 1);
    state.views.resize(static_cast<std::size_t>(topo.controller_count));
    for (auto& view : state.views) {
        view.link_up = state.link_up;
        view.domain_sync_tick.assign(static_cast<std::size_t>(topo.controller_count), -1);
    }
    return state;
}

WorldState make_world(const LoadBalanceScenario& scenario) {
    validate_scenario(scenario);
    WorldState state;
    state.server_loads.assign(2, 0.0);
    state.views.resize(2);
    for (auto& view : state.views) {
        view.server_load.assign(2, 0.0);
        view.domain_sync_tick.assign(2, -1);
    }
    return state;
}

std::vector<int> sync_delivery_ticks(int rate, int slot_seconds) {
    std::vector<int> ticks{0};
    for (int m = 1; m <= rate; ++m) {
        const int tick = static_cast<int>(
            std::ceil(static_cast<double>(slot_seconds) * m / (rate + 1)));
        ticks.push_back(std::min(tick, slot_seconds - 1));
    }
    std::sort(ticks.begin(), ticks.end());
    ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
    return ticks;
}

SlotObservation run_slot(const RoutingScenario& scenario, WorldState& state,
                         const SyncPolicy& policy, long long slot,
                         const TickObserver& observer) {
    validate_scenario(scenario);
    const auto& topo = scenario.topology;
    validate_policy_for(policy, topo.controller_count);
    if (slot < 1) throw std::invalid_argument("run_slot: slot indices start at 1");
    if (state.link_up.size() != topo.edges.size() ||
        state.views.size() != static_cast<std::size_t>(topo.controller_count))
        throw std::invalid_argument("run_slot: state does not match scenario");

    PairSpace pairs(topo.controller_count);
    const Adjacency adj(topo);
    const auto deliveries = schedule_by_tick(policy, pairs.count(), scenario.slot_seconds);
    const std::uint64_t seed = scenario.rng_seed;

    SlotObservation obs;
    for (int u = 0; u < scenario.slot_seconds; ++u) {
        const std::uint64_t tick = static_cast<std::uint64_t>(state.tick);

        // 1. link dynamics: independent per-link state flips
        for (std::size_t e = 0; e < topo.edges.size(); ++e)
            if (substream_unit(seed, Stream::kLinkFlip, tick, e) < scenario.flip_prob)
                state.link_up[e] ^= 1;

        // 2. view maintenance: own domain live, then scheduled deliveries
        for (int c = 0; c < topo.controller_count; ++c)
            deliver_sync_routing(topo, state, c, c, state.tick);
        for (int p : deliveries[static_cast<std::size_t>(u)]) {
            const auto [from, to] = pairs.pair(p);
            deliver_sync_routing(topo, state, from, to, state.tick);
        }

        // 3. application: route this tick's packets on the source controller's view
        for (int pkt = 0; pkt < scenario.packets_per_tick; ++pkt) {
            const int src = bounded_index(
                substream_u64(seed, Stream::kPacket, tick, static_cast<std::uint64_t>(pkt), 0),
                topo.node_count);
            int dst = bounded_index(
                substream_u64(seed, Stream::kPacket, tick, static_cast<std::uint64_t>(pkt), 1),
                topo.node_count - 1);
            if (dst >= src) ++dst;
            ++obs.packets;

            const int acting = topo.domain_of[static_cast<std::size_t>(src)];
            const auto& view = state.views[static_cast<std::size_t>(acting)];
            const auto planned = shortest_hops(adj, view.link_up, src);
            if (planned.dist[static_cast<std::size_t>(dst)] < 0) continue;  // no route in view

            bool path_truly_up = true;
            for (int node = dst; node != src; node = planned.parent_node[static_cast<std::size_t>(node)])
                if (!state.link_up[static_cast<std::size_t>(
                        planned.parent_edge[static_cast<std::size_t>(node)])]) {
                    path_truly_up = false;
                    break;
                }
            if (!path_truly_up) continue;
            ++obs.delivered;

            const auto truth = shortest_hops(adj, state.link_up, src);
            if (truth.dist[static_cast<std::size_t>(dst)] ==
                planned.dist[static_cast<std::size_t>(dst)])
                ++obs.optimal;
        }

        ++state.tick;
        if (observer) observer(state, u);
    }

    const double denom = static_cast<double>(obs.packets);
    obs.psi = scenario.metric == RoutingMetric::delivered
                  ? static_cast<double>(obs.delivered) / denom
                  : static_cast<double>(obs.optimal) / denom;
    return obs;
}

SlotObservation run_slot(const LoadBalanceScenario& scenario, WorldState& state,
                         const SyncPolicy& policy, long long slot,
                         const TickObserver& observer) {
    validate_scenario(scenario);
    validate_policy_for(policy, 2);
    if (slot < 1) throw std::invalid_argument("run_slot: slot indices start at 1");
    if (state.server_loads.size() != 2 || state.views.size() != 2)
        throw std::invalid_argument("run_slot: state does not match scenario");

    PairSpace pairs(2);
    const auto deliveries = schedule_by_tick(policy, pairs.count(), scenario.slot_seconds);
    const std::uint64_t seed = scenario.rng_seed;

    SlotObservation obs;
    for (int u = 0; u < scenario.slot_seconds; ++u) {
        const std::uint64_t tick = static_cast<std::uint64_t>(state.tick);

        // 1. flow arrivals, one Bernoulli draw per switch
        std::array<bool, 2> arrived{};
        for (int k = 0; k < 2; ++k)
            arrived[static_cast<std::size_t>(k)] =
                substream_unit(seed, Stream::kFlowArrival,
                               scenario.switch_streams[static_cast<std::size_t>(k)],
                               tick) < scenario.arrival_rates[static_cast<std::size_t>(k)];

        // 2. view maintenance
        for (int c = 0; c < 2; ++c) {
            state.views[static_cast<std::size_t>(c)].server_load[static_cast<std::size_t>(c)] =
                state.server_loads[static_cast<std::size_t>(c)];
            state.views[static_cast<std::size_t>(c)].domain_sync_tick[static_cast<std::size_t>(c)] =
                state.tick;
        }
        for (int p : deliveries[static_cast<std::size_t>(u)]) {
            const auto [from, to] = pairs.pair(p);
            state.views[static_cast<std::size_t>(to)].server_load[static_cast<std::size_t>(from)] =
                state.server_loads[static_cast<std::size_t>(from)];
            state.views[static_cast<std::size_t>(to)].domain_sync_tick[static_cast<std::size_t>(from)] =
                state.tick;
        }

        // 3. application: join the server the controller believes is least
        // loaded. Same-tick arrivals decide from the same snapshot, so the
        // outcome does not depend on controller processing order.
        std::array<int, 2> target{-1, -1};
        for (int k = 0; k < 2; ++k) {
            if (!arrived[static_cast<std::size_t>(k)]) continue;
            const int other = 1 - k;
            const double own = state.server_loads[static_cast<std::size_t>(k)];
            const double remote =
                state.views[static_cast<std::size_t>(k)].server_load[static_cast<std::size_t>(other)];
            target[static_cast<std::size_t>(k)] = remote < own ? other : k;  // tie stays local
        }
        for (int k = 0; k < 2; ++k) {
            if (target[static_cast<std::size_t>(k)] < 0) continue;
            const auto chosen = static_cast<std::size_t>(target[static_cast<std::size_t>(k)]);
            state.server_loads[chosen] += scenario.work_amount;
            obs.throughput[chosen] += scenario.work_amount;
        }

        ++state.tick;
        if (observer) observer(state, u);
    }

    const double mean = 0.5 * (obs.throughput[0] + obs.throughput[1]);
    obs.rmse = std::sqrt(0.5 * ((obs.throughput[0] - mean) * (obs.throughput[0] - mean) +
                                (obs.throughput[1] - mean) * (obs.throughput[1] - mean)));
    obs.psi = -obs.rmse;
    return obs;
}

ScenarioOracle::ScenarioOracle(Scenario scenario, std::uint64_t seed)
    : scenario_(std::move(scenario)) {
    std::visit([&](auto& s) { s.rng_seed = seed; }, scenario_);
    state_ = std::visit([](const auto& s) { return make_world(s); }, scenario_);
}

double ScenarioOracle::try_out(const SyncPolicy& policy, long long slot) {
    if (slot != last_slot_ + 1)
        throw ContractViolation("ScenarioOracle: slots must be requested in order");
    last_slot_ = slot;
    const SlotObservation obs = std::visit(
        [&](const auto& s) { return run_slot(s, state_, policy, slot); }, scenario_);
    history_.push_back(obs);
    return obs.psi;
}

std::unique_ptr<learn::Oracle> as_oracle(const Scenario& scenario,
                                         std::uint64_t seed) {
    return std::make_unique<ScenarioOracle>(scenario, seed);
}

SyntheticSpec random_coverage_spec(int controllers, std::uint64_t seed) {
    PairSpace pairs(controllers);
    SyntheticSpec spec;
    spec.kind = SyntheticSpec::Kind::coverage;
    spec.controller_count = controllers;
    CounterRng rng(seed, Stream::kInstanceGen);
    for (int p = 0; p < pairs.count(); ++p) {
        spec.weight.push_back(rng.next_in(0.5, 2.0));
        spec.decay.push_back(rng.next_in(0.2, 0.8));
    }
    return spec;
}

SyntheticOracle::SyntheticOracle(SyntheticSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed) {
    PairSpace pairs(spec_.controller_count);
    if (spec_.weight.size() != static_cast<std::size_t>(pairs.count()))
        throw std::invalid_argument("SyntheticOracle: weight per ordered pair required");
    if (spec_.kind == SyntheticSpec::Kind::coverage) {
        if (spec_.decay.size() != spec_.weight.size())
            throw std::invalid_argument("SyntheticOracle: decay per ordered pair required");
        for (double d : spec_.decay)
            if (!(d > 0.0 && d < 1.0))
                throw std::invalid_argument("SyntheticOracle: decay must lie in (0,1)");
    }
    if (!(spec_.noise_lo >= 0.0 && spec_.noise_hi >= spec_.noise_lo))
        throw std::invalid_argument("SyntheticOracle: bad noise interval");
}

double SyntheticOracle::true_mean(const SyncPolicy& policy) const {
    PairSpace pairs(spec_.controller_count);
    if (policy.controller_count != spec_.controller_count ||
        policy.rates.size() != static_cast<std::size_t>(pairs.count()))
        throw std::invalid_argument("SyntheticOracle: policy does not match spec");
    double total = 0.0;
    for (std::size_t p = 0; p < policy.rates.size(); ++p) {
        const double x = static_cast<double>(policy.rates[p]);
        if (spec_.kind == SyntheticSpec::Kind::modular)
            total += spec_.weight[p] * x;
        else
            total += spec_.weight[p] * (1.0 - std::pow(spec_.decay[p], x));
    }
    return total;
}

double SyntheticOracle::try_out(const SyncPolicy& policy, long long slot) {
    const double mean = true_mean(policy);
    if (spec_.noise_lo == 1.0 && spec_.noise_hi == 1.0) return mean;
    const double u = substream_unit(seed_, Stream::kOracleNoise,
                                    static_cast<std::uint64_t>(slot));
    return (spec_.noise_lo + (spec_.noise_hi - spec_.noise_lo) * u) * mean;
}

EvalStats evaluate_policy(const Scenario& scenario, const SyncPolicy& policy,
                          int slots, std::span<const std::uint64_t> seeds) {
    if (slots < 1) throw std::invalid_argument("evaluate_policy: need at least one slot");
    if (seeds.empty()) throw std::invalid_argument("evaluate_policy: need at least one seed");
    EvalStats stats;
    for (std::uint64_t seed : seeds) {
        ScenarioOracle oracle(scenario, seed);
        double sum = 0.0;
        for (int t = 1; t <= slots; ++t) sum += oracle.try_out(policy, t);
        stats.per_seed.push_back(sum / static_cast<double>(slots));
    }
    const SampleStats s = summarize(stats.per_seed);
    stats.mean = s.mean;
    stats.stddev = s.stddev;
    stats.min = s.min;
    stats.max = s.max;
    return stats;
}

void write_slot_trace_csv(std::ostream& out, const Scenario& scenario,
                          const SyncPolicy& policy, int slots,
                          std::span<const std::uint64_t> seeds) {
    out << "seed,slot,policy_hash,psi,delivered_frac,optimal_frac,packets,rmse\n";
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(policy_hash(policy)));
    for (std::uint64_t seed : seeds) {
        ScenarioOracle oracle(scenario, seed);
        for (int t = 1; t <= slots; ++t) {
            oracle.try_out(policy, t);
            const SlotObservation& obs = oracle.history().back();
            const double denom = obs.packets > 0 ? static_cast<double>(obs.packets) : 1.0;
            out << seed << ',' << t << ',' << hash_hex << ','
                << format_double(obs.psi) << ','
                << format_double(static_cast<double>(obs.delivered) / denom) << ','
                << format_double(static_cast<double>(obs.optimal) / denom) << ','
                << obs.packets << ',' << format_double(obs.rmse) << '\n';
        }
    }
}

}  // namespace syncrate::netsim
