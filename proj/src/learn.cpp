#include "syncrate/learn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "syncrate/errors.hpp"
#include "syncrate/rng.hpp"

namespace syncrate::learn {

namespace {

void validate_common(const LearnerConfig& config) {
    if (config.controller_count < 2)
        throw std::invalid_argument("LearnerConfig: need at least 2 controllers");
    if (config.tau < 1) throw std::invalid_argument("LearnerConfig: tau must be >= 1");
    if (config.budget < 1) throw std::invalid_argument("LearnerConfig: budget must be >= 1");
    if (config.max_rate < 1) throw std::invalid_argument("LearnerConfig: max rate must be >= 1");
    const long long pair_count =
        static_cast<long long>(config.controller_count) * (config.controller_count - 1);
    if (config.budget > static_cast<long long>(config.max_rate) * pair_count)
        throw BudgetExhaustsRates("LearnerConfig: budget exceeds total rate increments");
}

LearnerRun run_greedy(const LearnerConfig& config, Oracle& oracle, bool full_scan) {
    validate_common(config);
    if (!full_scan) {
        PairSpace pairs(config.controller_count);
        if (config.sigma < 1 || config.sigma > pairs.count())
            throw std::invalid_argument("LearnerConfig: sigma must lie in [1, C(C-1)]");
    }

    PairSpace pairs(config.controller_count);
    const int pair_count = pairs.count();
    SyncPolicy policy = SyncPolicy::zeros(config.controller_count);
    CounterRng rng(config.rng_seed, Stream::kLearnerDraw);
    long long slot = 0;

    LearnerRun run;
    run.config = config;

    double sum = 0.0;
    for (int t = 0; t < config.tau; ++t) sum += oracle.try_out(policy, ++slot);
    run.baseline_estimate = sum / static_cast<double>(config.tau);
    double baseline = run.baseline_estimate;

    for (int k = 0; k < config.budget; ++k) {
        std::vector<int> eligible;
        eligible.reserve(static_cast<std::size_t>(pair_count));
        for (int p = 0; p < pair_count; ++p)
            if (policy.rates[static_cast<std::size_t>(p)] < config.max_rate)
                eligible.push_back(p);
        // Non-empty: the up-front budget check bounds total increments.

        IterationRecord rec;
        rec.baseline_estimate = baseline;

        std::vector<int> drawn;
        if (full_scan) {
            drawn = eligible;
        } else {
            const std::size_t want = static_cast<std::size_t>(config.sigma);
            const std::size_t take = std::min(want, eligible.size());
            rec.shortfall = eligible.size() < want;
            drawn.reserve(take);
            for (std::size_t d = 0; d < take; ++d) {
                const std::size_t j =
                    d + static_cast<std::size_t>(rng.next_below(eligible.size() - d));
                std::swap(eligible[d], eligible[j]);
                drawn.push_back(eligible[d]);
            }
        }

        std::size_t best = 0;
        for (std::size_t c = 0; c < drawn.size(); ++c) {
            SyncPolicy candidate = policy;
            candidate.rates[static_cast<std::size_t>(drawn[c])] += 1;

            CandidateRecord cr;
            cr.pair_index = drawn[c];
            cr.observations.reserve(static_cast<std::size_t>(config.tau));
            double obs_sum = 0.0;
            for (int t = 0; t < config.tau; ++t) {
                const double obs = oracle.try_out(candidate, ++slot);
                cr.observations.push_back(obs);
                obs_sum += obs;
            }
            cr.estimate = obs_sum / static_cast<double>(config.tau);
            cr.gain = cr.estimate - baseline;
            rec.candidates.push_back(std::move(cr));
            // First candidate in draw order wins ties.
            if (rec.candidates[c].gain > rec.candidates[best].gain) best = c;
        }

        rec.winner_pair = rec.candidates[best].pair_index;
        policy.rates[static_cast<std::size_t>(rec.winner_pair)] += 1;
        baseline = rec.candidates[best].estimate;  // reused, not re-sampled
        run.iterations.push_back(std::move(rec));
    }

    run.final_policy = std::move(policy);
    run.slots_used = slot;
    return run;
}

}  // namespace

void validate_config(const LearnerConfig& config) {
    validate_common(config);
    PairSpace pairs(config.controller_count);
    if (config.sigma < 1 || config.sigma > pairs.count())
        throw std::invalid_argument("LearnerConfig: sigma must lie in [1, C(C-1)]");
}

LearnerRun stochastic_greedy(const LearnerConfig& config, Oracle& oracle) {
    return run_greedy(config, oracle, /*full_scan=*/false);
}

LearnerRun full_greedy(const LearnerConfig& config, Oracle& oracle) {
    return run_greedy(config, oracle, /*full_scan=*/true);
}

SyncPolicy homogeneous_policy(const SystemModel& model) {
    validate_model(model);
    const long long total_cost = model.total_pair_cost();
    const long long rate = std::min<long long>(model.max_rate, model.budget / total_cost);
    SyncPolicy policy = SyncPolicy::zeros(model.controller_count);
    for (int& r : policy.rates) r = static_cast<int>(rate);
    return policy;
}

long long training_time(int sigma, int tau, int budget) {
    if (sigma < 1 || tau < 1 || budget < 0)
        throw std::invalid_argument("training_time: bad parameters");
    return static_cast<long long>(tau) +
           static_cast<long long>(sigma) * tau * budget;
}

double epsilon_param(int controllers, int budget, int max_rate, int sigma) {
    if (controllers < 2 || budget < 1 || max_rate < 1 || sigma < 1)
        throw std::invalid_argument("epsilon_param: bad parameters");
    const double ground_set =
        static_cast<double>(controllers) * (controllers - 1) * max_rate;
    return std::exp(-static_cast<double>(sigma) * budget / ground_set);
}

double expected_bound(int controllers, int budget, int max_rate, int sigma,
                      double mu) {
    if (!(mu > 0.0 && mu <= 1.0))
        throw std::invalid_argument("expected_bound: mu must lie in (0,1]");
    const double eps = epsilon_param(controllers, budget, max_rate, sigma);
    return 1.0 - std::exp(-(1.0 - eps) * mu);
}

HighProbBound high_prob_bound(int controllers, int budget, int max_rate,
                              int sigma, int tau, double mu, double gamma,
                              bool mu_scaled_probability) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("high_prob_bound: gamma must lie in (0,1)");
    if (!(mu > 0.0 && mu <= 1.0))
        throw std::invalid_argument("high_prob_bound: mu must lie in (0,1]");
    if (tau < 1) throw std::invalid_argument("high_prob_bound: tau must be >= 1");
    const double eps = epsilon_param(controllers, budget, max_rate, sigma);
    HighProbBound bound;
    bound.factor = 1.0 - std::exp(-(1.0 - eps) * (1.0 - gamma) * mu);
    double exponent = gamma * static_cast<double>(budget) * tau / 2.0;
    if (mu_scaled_probability) exponent *= mu;
    bound.probability = 1.0 - std::exp(-exponent);
    return bound;
}

MuEstimate measure_mu(const LearnerRun& run,
                      const std::function<double(const SyncPolicy&)>& true_mean) {
    SyncPolicy base = SyncPolicy::zeros(run.config.controller_count);
    MuEstimate est;
    double clamped_sum = 0.0;
    double raw_sum = 0.0;
    for (const auto& iteration : run.iterations) {
        const double true_base = true_mean(base);
        for (const auto& candidate : iteration.candidates) {
            SyncPolicy tried = base;
            tried.rates[static_cast<std::size_t>(candidate.pair_index)] += 1;
            const double true_marginal = true_mean(tried) - true_base;
            if (!(true_marginal > 0.0)) continue;
            for (double obs : candidate.observations) {
                const double ratio = (obs - iteration.baseline_estimate) / true_marginal;
                raw_sum += ratio;
                clamped_sum += std::clamp(ratio, 0.0, 1.0);
                ++est.included;
            }
        }
        base.rates[static_cast<std::size_t>(iteration.winner_pair)] += 1;
    }
    if (est.included == 0)
        throw UndefinedMu("measure_mu: no try-out had a positive true marginal gain");
    est.clamped_mean = clamped_sum / static_cast<double>(est.included);
    est.unclamped_mean = raw_sum / static_cast<double>(est.included);
    return est;
}

double brute_force_best_policy(const std::function<double(const SyncPolicy&)>& objective,
                               int controllers, int max_rate, int budget,
                               long long enumeration_cap) {
    PairSpace pairs(controllers);
    const int pair_count = pairs.count();
    if (max_rate < 1 || budget < 0)
        throw std::invalid_argument("brute_force_best_policy: bad parameters");

    // Count feasible policies before enumerating them.
    std::vector<long long> count(static_cast<std::size_t>(budget) + 1, 0);
    count[0] = 1;
    for (int p = 0; p < pair_count; ++p) {
        std::vector<long long> next(count.size(), 0);
        for (std::size_t b = 0; b < count.size(); ++b) {
            if (count[b] == 0) continue;
            for (int x = 0; x <= max_rate && b + static_cast<std::size_t>(x) < next.size(); ++x)
                next[b + static_cast<std::size_t>(x)] =
                    std::min(next[b + static_cast<std::size_t>(x)] + count[b],
                             enumeration_cap + 1);
        }
        count = std::move(next);
    }
    long long total = 0;
    for (long long c : count) total = std::min(total + c, enumeration_cap + 1);
    if (total > enumeration_cap)
        throw InstanceTooLarge("brute_force_best_policy: too many policies to enumerate");

    SyncPolicy policy = SyncPolicy::zeros(controllers);
    bool have_best = false;
    double best = 0.0;
    auto dfs = [&](auto&& self, int p, int remaining) -> void {
        if (p == pair_count) {
            const double v = objective(policy);
            if (!have_best || v > best) {
                best = v;
                have_best = true;
            }
            return;
        }
        for (int x = 0; x <= std::min(max_rate, remaining); ++x) {
            policy.rates[static_cast<std::size_t>(p)] = x;
            self(self, p + 1, remaining - x);
        }
        policy.rates[static_cast<std::size_t>(p)] = 0;
    };
    dfs(dfs, 0, budget);
    return best;
}

std::string run_to_json(const LearnerRun& run, int indent) {
    nlohmann::json doc;
    doc["config"] = {{"controllers", run.config.controller_count},
                     {"sigma", run.config.sigma},
                     {"tau", run.config.tau},
                     {"budget", run.config.budget},
                     {"max_rate", run.config.max_rate},
                     {"seed", run.config.rng_seed}};
    doc["baseline_estimate"] = run.baseline_estimate;
    doc["slots_used"] = run.slots_used;
    doc["final_policy"] = {{"controllers", run.final_policy.controller_count},
                           {"rates", run.final_policy.rates}};
    nlohmann::json iterations = nlohmann::json::array();
    for (const auto& iteration : run.iterations) {
        nlohmann::json candidates = nlohmann::json::array();
        for (const auto& candidate : iteration.candidates) {
            candidates.push_back({{"pair", candidate.pair_index},
                                  {"observations", candidate.observations},
                                  {"estimate", candidate.estimate},
                                  {"gain", candidate.gain}});
        }
        iterations.push_back({{"baseline_estimate", iteration.baseline_estimate},
                              {"candidates", std::move(candidates)},
                              {"winner_pair", iteration.winner_pair},
                              {"shortfall", iteration.shortfall}});
    }
    doc["iterations"] = std::move(iterations);
    return doc.dump(indent);
}

}  // namespace syncrate::learn
