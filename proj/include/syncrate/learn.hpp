#ifndef SYNCRATE_LEARN_HPP
#define SYNCRATE_LEARN_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "syncrate/syncmodel.hpp"

// Budgeted stochastic-greedy training against a per-slot performance oracle,
// the homogeneous and full-scan baselines, and the approximation-bound
// calculators that go with them.

namespace syncrate::learn {

// A stateful environment: each call advances it by one slot and reports the
// performance observed under the tried policy. Callers drive slots 1,2,3,...
// and never request the same slot twice.
class Oracle {
public:
    virtual ~Oracle() = default;
    virtual double try_out(const SyncPolicy& policy, long long slot) = 0;
};

struct LearnerConfig {
    int controller_count = 0;
    int sigma = 1;      // candidate pairs probed per iteration
    int tau = 1;        // slots spent estimating each candidate
    int budget = 1;     // rate increments to place (unit costs)
    int max_rate = 1;
    std::uint64_t rng_seed = 0;
};

struct CandidateRecord {
    int pair_index = -1;
    std::vector<double> observations;  // tau per-slot values
    double estimate = 0.0;             // their mean
    double gain = 0.0;                 // estimate minus the running baseline
};

struct IterationRecord {
    double baseline_estimate = 0.0;  // running estimate entering the iteration
    std::vector<CandidateRecord> candidates;  // in draw order
    int winner_pair = -1;
    bool shortfall = false;  // fewer eligible pairs than sigma
};

struct LearnerRun {
    LearnerConfig config;
    SyncPolicy final_policy;
    double baseline_estimate = 0.0;  // estimate of the all-zero policy
    std::vector<IterationRecord> iterations;
    long long slots_used = 0;
};

void validate_config(const LearnerConfig& config);

// Trains for exactly tau + sigma*tau*budget slots (absent eligibility
// shortfalls): tau slots estimating the all-zero policy, then budget
// iterations of sigma candidate try-outs, committing the best gain each time.
LearnerRun stochastic_greedy(const LearnerConfig& config, Oracle& oracle);

// Same loop with every currently eligible pair probed each iteration;
// config.sigma is ignored. Slow, thorough comparator.
LearnerRun full_greedy(const LearnerConfig& config, Oracle& oracle);

// Every pair at rate min(R, floor(B / sum of pair costs)); remainder unspent.
SyncPolicy homogeneous_policy(const SystemModel& model);

long long training_time(int sigma, int tau, int budget);

double epsilon_param(int controllers, int budget, int max_rate, int sigma);

// Expected fraction of the optimum achieved: 1 - e^{-(1-eps) mu}.
double expected_bound(int controllers, int budget, int max_rate, int sigma,
                      double mu);

struct HighProbBound {
    double factor = 0.0;
    double probability = 0.0;
};

// Factor 1 - e^{-(1-eps)(1-gamma) mu}, held with probability
// 1 - e^{-gamma B tau / 2}. The mu_scaled_probability variant multiplies the
// exponent by mu instead.
HighProbBound high_prob_bound(int controllers, int budget, int max_rate,
                              int sigma, int tau, double mu, double gamma,
                              bool mu_scaled_probability = false);

struct MuEstimate {
    double clamped_mean = 0.0;    // per-try-out ratios clamped to [0,1]
    double unclamped_mean = 0.0;
    long long included = 0;  // try-outs with positive true marginal gain
};

// Empirical mean ratio of observed to true marginal gain across a run's
// try-outs; requires the oracle's true mean function (synthetic oracles only).
MuEstimate measure_mu(const LearnerRun& run,
                      const std::function<double(const SyncPolicy&)>& true_mean);

// Exhaustive optimum of `objective` over policies with total rate <= budget
// and per-pair rates <= max_rate. Throws InstanceTooLarge past the cap.
double brute_force_best_policy(const std::function<double(const SyncPolicy&)>& objective,
                               int controllers, int max_rate, int budget,
                               long long enumeration_cap = 10'000'000);

// Structured trace of a run, one JSON document.
std::string run_to_json(const LearnerRun& run, int indent = -1);

}  // namespace syncrate::learn

#endif
