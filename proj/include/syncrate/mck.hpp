#ifndef SYNCRATE_MCK_HPP
#define SYNCRATE_MCK_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "syncrate/syncmodel.hpp"

// Multiple-choice knapsack solvers for the consistency-level objective.
// One class per ordered controller pair, one item per nonzero rate level;
// picking no item from a class leaves that pair at rate 0.

namespace syncrate::mck {

struct MckItem {
    int weight = 0;     // b_ij * level
    double value = 0.0; // consistency gain over the rate-0 baseline
    int pair_index = -1;
    int level = 0;      // rate level l >= 1; 0 only for hand-built items
};

struct MckInstance {
    long long capacity = 0;
    std::vector<std::vector<MckItem>> classes;
    // Set when built from a SystemModel (class k == pair index k); 0 for
    // hand-built or fixture-loaded instances, which cannot be decoded.
    int controller_count = 0;
};

struct MckSolution {
    std::vector<int> chosen;  // per class: item index, or -1 for none
    double total_value = 0.0;
    long long total_weight = 0;
};

MckInstance build_mck_instance(const SystemModel& model);

// Pseudopolynomial exact DP over (class prefix, residual weight). Ties break
// toward lower total weight, then lower item index (skip before any item).
MckSolution solve_exact_dp(const MckInstance& instance);

// Value-scaling approximation: total_value >= (1-eps) * optimum.
MckSolution solve_fptas(const MckInstance& instance, double eps);

// Exhaustive reference solver; throws InstanceTooLarge past the cap.
MckSolution solve_brute_force(const MckInstance& instance,
                              long long enumeration_cap = 10'000'000);

// Maps a model-built instance's solution back to per-pair rates.
SyncPolicy decode_policy(const MckInstance& instance, const MckSolution& solution);

// Sum over all ordered pairs of the rate-0 consistency probability; decoded
// policies satisfy omega == solution.total_value + this.
double zero_rate_baseline(const SystemModel& model);

struct KnapsackItem {
    int weight = 0;
    double value = 0.0;  // must lie in (0, 0.25]
};

// Embeds a 0/1 knapsack instance into a synchronization model: one dedicated
// controller pair per item, R = 1, all cross pairs priced out at budget+1.
// Solving the returned model and subtracting zero_rate_baseline recovers the
// knapsack optimum.
SystemModel knapsack_hardness_instance(const std::vector<KnapsackItem>& items,
                                       int capacity);

// Line-oriented fixture format: "K W" header, then one "k w v" triple per item.
std::string to_text(const MckInstance& instance);
MckInstance from_text(std::istream& in);
MckInstance from_text(const std::string& text);

}  // namespace syncrate::mck

#endif
