#ifndef SYNCRATE_SYNCMODEL_HPP
#define SYNCRATE_SYNCMODEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

// Analytic model of an eventually-consistent multi-controller deployment:
// per-domain state-change rates, per-pair synchronization rates, resource
// budgets, and the closed-form consistency level they induce.

namespace syncrate {

// Ordered controller pairs (i,j), i != j, enumerated row-major:
// (0,1),(0,2),...,(0,C-1),(1,0),(1,2),... Fixed order so every algorithm
// sees the same pair enumeration and tie-breaking is reproducible.
class PairSpace {
public:
    explicit PairSpace(int controller_count);

    int controllers() const { return controllers_; }
    int count() const { return controllers_ * (controllers_ - 1); }
    int index(int i, int j) const;
    std::pair<int, int> pair(int index) const;

private:
    int controllers_;
};

// Extra sync messages per slot for every ordered pair. x_ij and x_ji are
// independent; rate 0 means only the mandatory slot-start message is sent.
struct SyncPolicy {
    int controller_count = 0;
    std::vector<int> rates;  // PairSpace-indexed

    static SyncPolicy zeros(int controller_count);

    int rate(int i, int j) const;
    void set_rate(int i, int j, int value);
    long long total_rate() const;
};

bool operator==(const SyncPolicy& a, const SyncPolicy& b);
std::uint64_t policy_hash(const SyncPolicy& policy);

struct SystemModel {
    int controller_count = 0;
    std::vector<double> change_rates;  // per controller, events/second
    double slot_seconds = 0.0;
    std::vector<int> pair_costs;  // PairSpace-indexed resource units, >= 1
    long long budget = 0;
    int max_rate = 1;

    // Convenience constructor for unit costs everywhere.
    static SystemModel uniform_cost(int controller_count,
                                    std::vector<double> change_rates,
                                    double slot_seconds, long long budget,
                                    int max_rate);

    long long total_pair_cost() const;
};

// Throws std::invalid_argument when an invariant is violated.
void validate_model(const SystemModel& model);
void validate_policy(const SystemModel& model, const SyncPolicy& policy);

struct ConsistencyReport {
    double omega = 0.0;
    std::vector<double> per_pair;  // PairSpace-indexed probabilities
};

// Probability that controller j's view of domain i is current at slot end,
// given x_ij extra messages spread uniformly over the slot.
double pair_consistency_prob(double change_rate, double slot_seconds, int rate);

ConsistencyReport consistency_level(const SystemModel& model,
                                    const SyncPolicy& policy);

long long policy_cost(const SystemModel& model, const SyncPolicy& policy);

inline bool is_feasible(const SystemModel& model, const SyncPolicy& policy) {
    return policy_cost(model, policy) <= model.budget;
}

}  // namespace syncrate

#endif
