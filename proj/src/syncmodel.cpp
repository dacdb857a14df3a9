#include "syncrate/syncmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "syncrate/rng.hpp"

namespace syncrate {

PairSpace::PairSpace(int controller_count) : controllers_(controller_count) {
    if (controller_count < 2)
        throw std::invalid_argument("PairSpace: need at least 2 controllers");
}

int PairSpace::index(int i, int j) const {
    if (i < 0 || i >= controllers_ || j < 0 || j >= controllers_ || i == j)
        throw std::invalid_argument("PairSpace::index: bad ordered pair");
    return i * (controllers_ - 1) + (j < i ? j : j - 1);
}

std::pair<int, int> PairSpace::pair(int index) const {
    if (index < 0 || index >= count())
        throw std::invalid_argument("PairSpace::pair: index out of range");
    const int i = index / (controllers_ - 1);
    const int r = index % (controllers_ - 1);
    return {i, r < i ? r : r + 1};
}

SyncPolicy SyncPolicy::zeros(int controller_count) {
    PairSpace pairs(controller_count);
    SyncPolicy p;
    p.controller_count = controller_count;
    p.rates.assign(static_cast<std::size_t>(pairs.count()), 0);
    return p;
}

int SyncPolicy::rate(int i, int j) const {
    return rates.at(static_cast<std::size_t>(PairSpace(controller_count).index(i, j)));
}

void SyncPolicy::set_rate(int i, int j, int value) {
    rates.at(static_cast<std::size_t>(PairSpace(controller_count).index(i, j))) = value;
}

long long SyncPolicy::total_rate() const {
    long long sum = 0;
    for (int r : rates) sum += r;
    return sum;
}

bool operator==(const SyncPolicy& a, const SyncPolicy& b) {
    return a.controller_count == b.controller_count && a.rates == b.rates;
}

std::uint64_t policy_hash(const SyncPolicy& policy) {
    std::uint64_t h = mix64(0x73796e63ULL ^ static_cast<std::uint64_t>(policy.controller_count));
    for (int r : policy.rates) h = mix64(h ^ static_cast<std::uint64_t>(r));
    return h;
}

SystemModel SystemModel::uniform_cost(int controller_count,
                                      std::vector<double> change_rates,
                                      double slot_seconds, long long budget,
                                      int max_rate) {
    PairSpace pairs(controller_count);
    SystemModel m;
    m.controller_count = controller_count;
    m.change_rates = std::move(change_rates);
    m.slot_seconds = slot_seconds;
    m.pair_costs.assign(static_cast<std::size_t>(pairs.count()), 1);
    m.budget = budget;
    m.max_rate = max_rate;
    validate_model(m);
    return m;
}

long long SystemModel::total_pair_cost() const {
    long long sum = 0;
    for (int b : pair_costs) sum += b;
    return sum;
}

void validate_model(const SystemModel& model) {
    if (model.controller_count < 2)
        throw std::invalid_argument("SystemModel: need at least 2 controllers");
    PairSpace pairs(model.controller_count);
    if (model.change_rates.size() != static_cast<std::size_t>(model.controller_count))
        throw std::invalid_argument("SystemModel: change_rates size mismatch");
    for (double lambda : model.change_rates)
        if (!(lambda >= 0.0)) throw std::invalid_argument("SystemModel: change rate must be >= 0");
    if (!(model.slot_seconds > 0.0))
        throw std::invalid_argument("SystemModel: slot length must be positive");
    if (model.pair_costs.size() != static_cast<std::size_t>(pairs.count()))
        throw std::invalid_argument("SystemModel: pair_costs size mismatch");
    for (int b : model.pair_costs)
        if (b < 1) throw std::invalid_argument("SystemModel: pair costs must be >= 1");
    if (model.budget < 0) throw std::invalid_argument("SystemModel: budget must be >= 0");
    if (model.max_rate < 1) throw std::invalid_argument("SystemModel: max rate must be >= 1");
}

void validate_policy(const SystemModel& model, const SyncPolicy& policy) {
    if (policy.controller_count != model.controller_count)
        throw std::invalid_argument("SyncPolicy: controller count does not match model");
    PairSpace pairs(model.controller_count);
    if (policy.rates.size() != static_cast<std::size_t>(pairs.count()))
        throw std::invalid_argument("SyncPolicy: pair entries do not match model");
    for (int r : policy.rates)
        if (r < 0 || r > model.max_rate)
            throw std::invalid_argument("SyncPolicy: rate outside {0..R}");
}

double pair_consistency_prob(double change_rate, double slot_seconds, int rate) {
    if (!(change_rate >= 0.0))
        throw std::invalid_argument("pair_consistency_prob: change rate must be >= 0");
    if (!(slot_seconds > 0.0))
        throw std::invalid_argument("pair_consistency_prob: slot length must be positive");
    if (rate < 0) throw std::invalid_argument("pair_consistency_prob: rate must be >= 0");
    return std::exp(-change_rate * slot_seconds / static_cast<double>(rate + 1));
}

ConsistencyReport consistency_level(const SystemModel& model,
                                    const SyncPolicy& policy) {
    validate_model(model);
    validate_policy(model, policy);
    PairSpace pairs(model.controller_count);
    ConsistencyReport report;
    report.per_pair.resize(static_cast<std::size_t>(pairs.count()));
    for (int p = 0; p < pairs.count(); ++p) {
        const auto [i, j] = pairs.pair(p);
        (void)j;
        report.per_pair[static_cast<std::size_t>(p)] = pair_consistency_prob(
            model.change_rates[static_cast<std::size_t>(i)], model.slot_seconds,
            policy.rates[static_cast<std::size_t>(p)]);
        report.omega += report.per_pair[static_cast<std::size_t>(p)];
    }
    return report;
}

long long policy_cost(const SystemModel& model, const SyncPolicy& policy) {
    validate_model(model);
    validate_policy(model, policy);
    long long cost = 0;
    for (std::size_t p = 0; p < policy.rates.size(); ++p)
        cost += static_cast<long long>(policy.rates[p]) * model.pair_costs[p];
    return cost;
}

}  // namespace syncrate
