#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "syncrate/errors.hpp"
#include "syncrate/learn.hpp"
#include "syncrate/netsim.hpp"
#include "syncrate/rng.hpp"

using namespace syncrate;

namespace {

netsim::SyntheticOracle modular_oracle(int controllers, std::vector<double> weights,
                                       std::uint64_t seed = 0) {
    netsim::SyntheticSpec spec;
    spec.kind = netsim::SyntheticSpec::Kind::modular;
    spec.controller_count = controllers;
    spec.weight = std::move(weights);
    return netsim::SyntheticOracle(spec, seed);
}

// Logs every try-out the learner issues.
class RecordingOracle final : public learn::Oracle {
public:
    explicit RecordingOracle(learn::Oracle& inner) : inner_(inner) {}
    double try_out(const SyncPolicy& policy, long long slot) override {
        slots.push_back(slot);
        policies.push_back(policy);
        return inner_.try_out(policy, slot);
    }
    std::vector<long long> slots;
    std::vector<SyncPolicy> policies;

private:
    learn::Oracle& inner_;
};

class ScaledOracle final : public learn::Oracle {
public:
    ScaledOracle(learn::Oracle& inner, double scale) : inner_(inner), scale_(scale) {}
    double try_out(const SyncPolicy& policy, long long slot) override {
        return scale_ * inner_.try_out(policy, slot);
    }

private:
    learn::Oracle& inner_;
    double scale_;
};

std::vector<int> winner_sequence(const learn::LearnerRun& run) {
    std::vector<int> winners;
    for (const auto& it : run.iterations) winners.push_back(it.winner_pair);
    return winners;
}

}  // namespace

TEST_CASE("bound calculators reproduce the worked numbers") {
    CHECK(learn::training_time(5, 3, 10) == 153);
    CHECK(learn::training_time(2, 4, 18) == 148);

    const double eps = learn::epsilon_param(5, 10, 1, 5);
    CHECK(eps == doctest::Approx(std::exp(-2.5)));
    CHECK(learn::expected_bound(5, 10, 1, 5, 0.5) ==
          doctest::Approx(1.0 - std::exp(-(1.0 - std::exp(-2.5)) * 0.5)));
    CHECK(learn::expected_bound(5, 10, 1, 5, 0.5) == doctest::Approx(0.368).epsilon(0.01));

    // limits
    CHECK(learn::expected_bound(5, 10, 1, 5, 1e-9) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(learn::expected_bound(5, 10, 1, 1000000, 0.7) ==
          doctest::Approx(1.0 - std::exp(-0.7)).epsilon(1e-6));
}

TEST_CASE("high probability bound follows Chernoff arithmetic") {
    const auto tiny_gamma = learn::high_prob_bound(5, 10, 1, 5, 3, 0.5, 1e-9);
    CHECK(tiny_gamma.factor == doctest::Approx(learn::expected_bound(5, 10, 1, 5, 0.5)).epsilon(1e-6));
    CHECK(tiny_gamma.probability == doctest::Approx(0.0).epsilon(1e-6));

    const auto halves = learn::high_prob_bound(5, 10, 1, 5, 3, 0.5, 0.5);
    CHECK(halves.probability == doctest::Approx(1.0 - std::exp(-7.5)));
    CHECK(halves.factor ==
          doctest::Approx(1.0 - std::exp(-(1.0 - std::exp(-2.5)) * 0.25)).epsilon(1e-9));
    CHECK(halves.factor == doctest::Approx(0.205).epsilon(0.01));

    const auto mu_variant = learn::high_prob_bound(5, 10, 1, 5, 3, 0.5, 0.5, true);
    CHECK(mu_variant.probability == doctest::Approx(1.0 - std::exp(-3.75)));
    CHECK(mu_variant.factor == doctest::Approx(halves.factor));
}

TEST_CASE("homogeneous policy splits the budget evenly") {
    auto model = SystemModel::uniform_cost(3, {0.1, 0.1, 0.1}, 1.0, 18, 4);
    auto policy = learn::homogeneous_policy(model);
    for (int r : policy.rates) CHECK(r == 3);
    CHECK(policy_cost(model, policy) == 18);

    model = SystemModel::uniform_cost(5, {0.1, 0.1, 0.1, 0.1, 0.1}, 1.0, 10, 3);
    policy = learn::homogeneous_policy(model);
    for (int r : policy.rates) CHECK(r == 0);

    model = SystemModel::uniform_cost(2, {0.1, 0.1}, 1.0, 5, 3);
    model.pair_costs = {2, 2};
    policy = learn::homogeneous_policy(model);
    for (int r : policy.rates) CHECK(r == 1);
    CHECK(policy_cost(model, policy) == 4);  // one unit unspent
}

TEST_CASE("full-scan greedy on a noiseless modular oracle picks the top slots") {
    const int controllers = 3;
    PairSpace pairs(controllers);
    std::vector<double> weights;
    for (int p = 0; p < pairs.count(); ++p) weights.push_back(1.0 + 0.37 * p);

    learn::LearnerConfig config;
    config.controller_count = controllers;
    config.sigma = pairs.count();
    config.tau = 1;
    config.budget = 7;
    config.max_rate = 2;
    config.rng_seed = 42;

    auto oracle = modular_oracle(controllers, weights);
    const auto run = learn::stochastic_greedy(config, oracle);

    // reference: drop the budget on the largest weights, max_rate each
    std::vector<int> expected(weights.size(), 0);
    {
        std::vector<std::size_t> order(weights.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
        int left = config.budget;
        for (std::size_t p : order) {
            const int take = std::min(left, config.max_rate);
            expected[p] = take;
            left -= take;
            if (left == 0) break;
        }
    }
    CHECK(run.final_policy.rates == expected);
    CHECK(run.final_policy.total_rate() == config.budget);

    // full_greedy agrees on the same oracle
    auto oracle2 = modular_oracle(controllers, weights);
    const auto full = learn::full_greedy(config, oracle2);
    CHECK(full.final_policy.rates == expected);
}

TEST_CASE("sigma=1 runs have a single candidate per iteration") {
    learn::LearnerConfig config;
    config.controller_count = 3;
    config.sigma = 1;
    config.tau = 2;
    config.budget = 5;
    config.max_rate = 3;
    config.rng_seed = 9;

    auto oracle = modular_oracle(3, {1, 2, 3, 4, 5, 6});
    const auto run = learn::stochastic_greedy(config, oracle);
    CHECK(run.iterations.size() == 5);
    for (const auto& it : run.iterations) {
        CHECK(it.candidates.size() == 1);
        CHECK(it.winner_pair == it.candidates[0].pair_index);
    }
    CHECK(run.final_policy.total_rate() == config.budget);
}

TEST_CASE("training slot schedule matches the published indexing") {
    const int controllers = 5;  // 20 pairs
    PairSpace pairs(controllers);
    std::vector<double> weights(static_cast<std::size_t>(pairs.count()), 0.0);
    for (std::size_t p = 0; p < weights.size(); ++p)
        weights[p] = 0.1 + 0.01 * static_cast<double>(p);

    learn::LearnerConfig config;
    config.controller_count = controllers;
    config.sigma = 5;
    config.tau = 3;
    config.budget = 10;
    config.max_rate = 1;
    config.rng_seed = 77;

    auto inner = modular_oracle(controllers, weights);
    RecordingOracle oracle(inner);
    const auto run = learn::stochastic_greedy(config, oracle);

    CHECK(run.slots_used == 153);
    CHECK(run.slots_used == learn::training_time(config.sigma, config.tau, config.budget));
    REQUIRE(oracle.slots.size() == 153);
    for (std::size_t i = 0; i < oracle.slots.size(); ++i)
        CHECK(oracle.slots[i] == static_cast<long long>(i) + 1);

    // candidate p (1-based) of iteration k occupies slots (k-1)*sigma*tau + p*tau + t
    const long long sigma = config.sigma, tau = config.tau;
    std::size_t cursor = static_cast<std::size_t>(tau);  // skip baseline slots
    for (std::size_t k = 1; k <= static_cast<std::size_t>(config.budget); ++k) {
        const auto& iteration = run.iterations[k - 1];
        REQUIRE(iteration.candidates.size() == static_cast<std::size_t>(sigma));
        for (std::size_t p = 1; p <= iteration.candidates.size(); ++p) {
            for (long long t = 1; t <= tau; ++t, ++cursor) {
                const long long expected = (static_cast<long long>(k) - 1) * sigma * tau +
                                           static_cast<long long>(p) * tau + t;
                CHECK(oracle.slots[cursor] == expected);
            }
        }
    }

    // every try-out policy stays feasible
    for (const auto& policy : oracle.policies) {
        CHECK(policy.total_rate() <= config.budget);
        for (int r : policy.rates) CHECK(r <= config.max_rate);
    }
    CHECK(run.final_policy.total_rate() == config.budget);
}

TEST_CASE("budget exceeding the rate space fails fast") {
    learn::LearnerConfig config;
    config.controller_count = 2;
    config.sigma = 1;
    config.tau = 1;
    config.budget = 3;  // only 2 increments exist
    config.max_rate = 1;
    auto oracle = modular_oracle(2, {1.0, 2.0});
    CHECK_THROWS_AS(learn::stochastic_greedy(config, oracle), BudgetExhaustsRates);
}

TEST_CASE("an eligibility shortfall shrinks the candidate set and is recorded") {
    learn::LearnerConfig config;
    config.controller_count = 2;  // 2 pairs
    config.sigma = 2;
    config.tau = 1;
    config.budget = 4;  // saturates both pairs at R=2
    config.max_rate = 2;
    config.rng_seed = 5;

    auto oracle = modular_oracle(2, {1.0, 3.0});
    const auto run = learn::stochastic_greedy(config, oracle);
    CHECK(run.final_policy.total_rate() == 4);
    bool saw_shortfall = false;
    for (const auto& it : run.iterations) {
        if (it.shortfall) {
            saw_shortfall = true;
            CHECK(it.candidates.size() < static_cast<std::size_t>(config.sigma));
        }
    }
    CHECK(saw_shortfall);  // the last iteration has a single eligible pair
}

TEST_CASE("matched seeds give bit-identical runs") {
    learn::LearnerConfig config;
    config.controller_count = 3;
    config.sigma = 2;
    config.tau = 2;
    config.budget = 6;
    config.max_rate = 2;
    config.rng_seed = 1234;

    netsim::SyntheticSpec spec = netsim::random_coverage_spec(3, 8);
    spec.noise_lo = 0.5;
    spec.noise_hi = 1.0;

    netsim::SyntheticOracle o1(spec, 99);
    netsim::SyntheticOracle o2(spec, 99);
    const auto r1 = learn::stochastic_greedy(config, o1);
    const auto r2 = learn::stochastic_greedy(config, o2);
    CHECK(learn::run_to_json(r1) == learn::run_to_json(r2));

    netsim::SyntheticOracle o3(spec, 100);  // different oracle seed
    const auto r3 = learn::stochastic_greedy(config, o3);
    CHECK(learn::run_to_json(r1) != learn::run_to_json(r3));
}

TEST_CASE("scaling all observations leaves the selection sequence unchanged") {
    learn::LearnerConfig config;
    config.controller_count = 3;
    config.sigma = 3;
    config.tau = 2;
    config.budget = 5;
    config.max_rate = 2;
    config.rng_seed = 31;

    netsim::SyntheticSpec spec = netsim::random_coverage_spec(3, 21);
    spec.noise_lo = 0.6;
    spec.noise_hi = 1.0;

    netsim::SyntheticOracle plain(spec, 7);
    const auto base = learn::stochastic_greedy(config, plain);

    netsim::SyntheticOracle inner(spec, 7);
    ScaledOracle scaled(inner, 4.7);
    const auto lifted = learn::stochastic_greedy(config, scaled);

    CHECK(winner_sequence(base) == winner_sequence(lifted));
}

TEST_CASE("mean achieved value is non-decreasing in sigma on matched seeds") {
    const int controllers = 3;
    PairSpace pairs(controllers);
    const auto spec = netsim::random_coverage_spec(controllers, 4);

    learn::LearnerConfig config;
    config.controller_count = controllers;
    config.tau = 1;
    config.budget = 4;
    config.max_rate = 2;

    std::vector<double> means;
    for (int sigma : {1, 3, pairs.count()}) {
        config.sigma = sigma;
        double total = 0.0;
        for (std::uint64_t seed = 0; seed < 120; ++seed) {
            config.rng_seed = seed;
            netsim::SyntheticOracle oracle(spec, seed);
            const auto run = learn::stochastic_greedy(config, oracle);
            total += oracle.true_mean(run.final_policy);
        }
        means.push_back(total / 120.0);
    }
    CHECK(means[1] >= means[0] - 1e-9);
    CHECK(means[2] >= means[1] - 1e-9);
}

TEST_CASE("measure_mu recovers the observation-to-truth ratio") {
    learn::LearnerConfig config;
    config.controller_count = 3;
    config.sigma = 4;
    config.tau = 2;
    config.budget = 5;
    config.max_rate = 2;
    config.rng_seed = 3;

    const auto spec = netsim::random_coverage_spec(3, 15);

    SUBCASE("noiseless observations give mu = 1") {
        netsim::SyntheticOracle oracle(spec, 1);
        const auto run = learn::stochastic_greedy(config, oracle);
        const auto mu = learn::measure_mu(
            run, [&](const SyncPolicy& p) { return oracle.true_mean(p); });
        CHECK(mu.clamped_mean == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(mu.unclamped_mean == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(mu.included > 0);
    }
    SUBCASE("uniformly halved observations give mu = 0.5") {
        auto halved = spec;
        halved.noise_lo = 0.5;
        halved.noise_hi = 0.5;
        netsim::SyntheticOracle oracle(halved, 1);
        const auto run = learn::stochastic_greedy(config, oracle);
        const auto mu = learn::measure_mu(
            run, [&](const SyncPolicy& p) { return oracle.true_mean(p); });
        CHECK(mu.clamped_mean == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(mu.unclamped_mean == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("multiplicative noise on [0.4, 0.6] averages near 0.5") {
        // single heavy iteration from the zero baseline: ratios are the raw
        // noise draws, so the mean estimates the noise law's mean
        learn::LearnerConfig wide;
        wide.controller_count = 5;
        wide.sigma = 20;
        wide.tau = 5;
        wide.budget = 1;
        wide.max_rate = 1;
        wide.rng_seed = 17;

        netsim::SyntheticSpec noisy = netsim::random_coverage_spec(5, 23);
        noisy.noise_lo = 0.4;
        noisy.noise_hi = 0.6;
        netsim::SyntheticOracle oracle(noisy, 29);
        const auto run = learn::stochastic_greedy(wide, oracle);
        const auto mu = learn::measure_mu(
            run, [&](const SyncPolicy& p) { return oracle.true_mean(p); });
        CHECK(mu.included >= 100);
        CHECK(mu.clamped_mean == doctest::Approx(0.5).epsilon(0.1));
        CHECK(std::abs(mu.clamped_mean - 0.5) < 0.05);
    }
    SUBCASE("no positive true marginal gives undefined mu") {
        auto flat = modular_oracle(3, std::vector<double>(6, 0.0));
        learn::LearnerConfig small = config;
        small.rng_seed = 8;
        const auto run = learn::stochastic_greedy(small, flat);
        CHECK_THROWS_AS(
            learn::measure_mu(run, [](const SyncPolicy&) { return 0.0; }), UndefinedMu);
    }
}

TEST_CASE("full greedy slot usage follows the shrinking eligibility schedule") {
    const int controllers = 3;
    PairSpace pairs(controllers);
    std::vector<double> weights;
    for (int p = 0; p < pairs.count(); ++p) weights.push_back(10.0 - p);

    learn::LearnerConfig config;
    config.controller_count = controllers;
    config.sigma = 1;  // ignored by full_greedy
    config.tau = 4;
    config.budget = 18;
    config.max_rate = 3;
    config.rng_seed = 0;

    auto oracle = modular_oracle(controllers, weights);
    const auto run = learn::full_greedy(config, oracle);

    // independent replay of the eligibility counts
    std::vector<int> rates(static_cast<std::size_t>(pairs.count()), 0);
    long long expected_slots = config.tau;
    for (int k = 0; k < config.budget; ++k) {
        int eligible = 0;
        for (int r : rates) eligible += (r < config.max_rate);
        expected_slots += static_cast<long long>(config.tau) * eligible;
        // noiseless modular: winner is the max-weight eligible pair
        int best = -1;
        for (int p = 0; p < pairs.count(); ++p) {
            if (rates[static_cast<std::size_t>(p)] >= config.max_rate) continue;
            if (best < 0 || weights[static_cast<std::size_t>(p)] >
                                weights[static_cast<std::size_t>(best)])
                best = p;
        }
        rates[static_cast<std::size_t>(best)] += 1;
    }
    CHECK(run.slots_used == expected_slots);
    CHECK(run.final_policy.total_rate() == config.budget);

    // with a roomy max rate the closed form applies
    learn::LearnerConfig roomy = config;
    roomy.budget = 4;
    roomy.max_rate = 10;
    auto oracle2 = modular_oracle(controllers, weights);
    const auto wide = learn::full_greedy(roomy, oracle2);
    CHECK(wide.slots_used ==
          roomy.tau + static_cast<long long>(roomy.tau) * roomy.budget * pairs.count());
}

TEST_CASE("policy brute force maximizes modular objectives exactly") {
    const std::vector<double> weights{5.0, 1.0, 4.0, 2.0, 3.0, 0.5};
    const int budget = 4, max_rate = 2;
    const double best = learn::brute_force_best_policy(
        [&](const SyncPolicy& p) {
            double v = 0.0;
            for (std::size_t i = 0; i < p.rates.size(); ++i) v += weights[i] * p.rates[i];
            return v;
        },
        3, max_rate, budget);
    CHECK(best == doctest::Approx(2 * 5.0 + 2 * 4.0));

    CHECK_THROWS_AS(learn::brute_force_best_policy([](const SyncPolicy&) { return 0.0; },
                                                   6, 5, 20, 1000),
                    InstanceTooLarge);
}

TEST_CASE("run trace serializes to a complete JSON document") {
    learn::LearnerConfig config;
    config.controller_count = 2;
    config.sigma = 2;
    config.tau = 2;
    config.budget = 2;
    config.max_rate = 2;
    config.rng_seed = 55;

    auto oracle = modular_oracle(2, {1.0, 2.0});
    const auto run = learn::stochastic_greedy(config, oracle);
    const auto doc = nlohmann::json::parse(learn::run_to_json(run));
    CHECK(doc.at("slots_used").get<long long>() == run.slots_used);
    CHECK(doc.at("config").at("sigma").get<int>() == 2);
    CHECK(doc.at("iterations").size() == 2);
    CHECK(doc.at("final_policy").at("rates").get<std::vector<int>>() ==
          run.final_policy.rates);
}
