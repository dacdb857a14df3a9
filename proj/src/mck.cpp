#include "syncrate/mck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "syncrate/errors.hpp"

namespace syncrate::mck {

namespace {

constexpr long long kMaxDpCells = 200'000'000;

void validate_instance(const MckInstance& instance) {
    if (instance.capacity < 0)
        throw std::invalid_argument("MckInstance: capacity must be >= 0");
    for (const auto& cls : instance.classes) {
        for (const auto& item : cls) {
            if (item.weight < 1)
                throw std::invalid_argument("MckInstance: item weights must be >= 1");
            if (!(item.value >= 0.0))
                throw std::invalid_argument("MckInstance: item values must be >= 0");
        }
    }
}

// The DP never benefits from capacity beyond one max-weight item per class.
long long effective_capacity(const MckInstance& instance) {
    long long sum = 0;
    for (const auto& cls : instance.classes) {
        int max_w = 0;
        for (const auto& item : cls) max_w = std::max(max_w, item.weight);
        sum += max_w;
    }
    return std::min(instance.capacity, sum);
}

void fill_totals(const MckInstance& instance, MckSolution& solution) {
    solution.total_value = 0.0;
    solution.total_weight = 0;
    for (std::size_t k = 0; k < instance.classes.size(); ++k) {
        const int c = solution.chosen[k];
        if (c < 0) continue;
        solution.total_value += instance.classes[k][static_cast<std::size_t>(c)].value;
        solution.total_weight += instance.classes[k][static_cast<std::size_t>(c)].weight;
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

MckInstance build_mck_instance(const SystemModel& model) {
    validate_model(model);
    PairSpace pairs(model.controller_count);
    MckInstance instance;
    instance.capacity = model.budget;
    instance.controller_count = model.controller_count;
    instance.classes.resize(static_cast<std::size_t>(pairs.count()));
    for (int p = 0; p < pairs.count(); ++p) {
        const auto [i, j] = pairs.pair(p);
        (void)j;
        const double lambda_s =
            model.change_rates[static_cast<std::size_t>(i)] * model.slot_seconds;
        const double baseline = std::exp(-lambda_s);
        auto& cls = instance.classes[static_cast<std::size_t>(p)];
        cls.reserve(static_cast<std::size_t>(model.max_rate));
        for (int level = 1; level <= model.max_rate; ++level) {
            MckItem item;
            item.weight = model.pair_costs[static_cast<std::size_t>(p)] * level;
            item.value = std::exp(-lambda_s / static_cast<double>(level + 1)) - baseline;
            item.pair_index = p;
            item.level = level;
            cls.push_back(item);
        }
    }
    return instance;
}

MckSolution solve_exact_dp(const MckInstance& instance) {
    validate_instance(instance);
    const std::size_t num_classes = instance.classes.size();
    const long long cap = effective_capacity(instance);
    if (static_cast<long long>(num_classes) * (cap + 1) > kMaxDpCells)
        throw InstanceTooLarge("solve_exact_dp: DP table too large");
    const std::size_t width = static_cast<std::size_t>(cap) + 1;

    struct Cell {
        double value = 0.0;
        long long weight = 0;
    };
    std::vector<Cell> prev(width), cur(width);
    // choice[k][w]: item picked for class k with w units available to classes 0..k.
    std::vector<std::vector<int>> choice(num_classes, std::vector<int>(width, -1));

    for (std::size_t k = 0; k < num_classes; ++k) {
        const auto& cls = instance.classes[k];
        for (std::size_t w = 0; w < width; ++w) {
            Cell best = prev[w];  // skipping the class is always allowed
            int best_choice = -1;
            for (std::size_t l = 0; l < cls.size(); ++l) {
                const long long iw = cls[l].weight;
                if (iw > static_cast<long long>(w)) continue;
                const Cell& base = prev[w - static_cast<std::size_t>(iw)];
                const double v = base.value + cls[l].value;
                const long long tw = base.weight + iw;
                if (v > best.value || (v == best.value && tw < best.weight)) {
                    best = {v, tw};
                    best_choice = static_cast<int>(l);
                }
            }
            cur[w] = best;
            choice[k][w] = best_choice;
        }
        std::swap(prev, cur);
    }

    MckSolution solution;
    solution.chosen.assign(num_classes, -1);
    long long w = cap;
    for (std::size_t k = num_classes; k-- > 0;) {
        const int c = choice[k][static_cast<std::size_t>(w)];
        solution.chosen[k] = c;
        if (c >= 0) w -= instance.classes[k][static_cast<std::size_t>(c)].weight;
    }
    fill_totals(instance, solution);
    return solution;
}

MckSolution solve_fptas(const MckInstance& instance, double eps) {
    validate_instance(instance);
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("solve_fptas: eps must lie in (0,1)");

    const std::size_t num_classes = instance.classes.size();
    MckSolution empty;
    empty.chosen.assign(num_classes, -1);
    if (num_classes == 0) return empty;

    double max_value = 0.0;
    for (const auto& cls : instance.classes)
        for (const auto& item : cls)
            if (item.weight <= instance.capacity) max_value = std::max(max_value, item.value);
    if (max_value <= 0.0) return empty;  // nothing worth packing

    const double scale = eps * max_value / static_cast<double>(num_classes);

    // Scaled profile: per class, the max floor-scaled value of a feasible item.
    long long total_scaled = 0;
    std::vector<std::vector<long long>> scaled(num_classes);
    for (std::size_t k = 0; k < num_classes; ++k) {
        const auto& cls = instance.classes[k];
        scaled[k].assign(cls.size(), -1);
        long long class_max = 0;
        for (std::size_t l = 0; l < cls.size(); ++l) {
            if (cls[l].weight > instance.capacity) continue;
            scaled[k][l] = static_cast<long long>(std::floor(cls[l].value / scale));
            class_max = std::max(class_max, scaled[k][l]);
        }
        total_scaled += class_max;
    }
    if (static_cast<long long>(num_classes) * (total_scaled + 1) > kMaxDpCells)
        throw InstanceTooLarge("solve_fptas: scaled-value table too large");
    const std::size_t width = static_cast<std::size_t>(total_scaled) + 1;

    constexpr long long kInf = std::numeric_limits<long long>::max() / 2;
    // g[v]: min total weight reaching scaled value v with the classes seen so far.
    std::vector<long long> g(width, kInf), next(width, kInf);
    g[0] = 0;
    std::vector<std::vector<int>> choice(num_classes, std::vector<int>(width, -1));

    for (std::size_t k = 0; k < num_classes; ++k) {
        const auto& cls = instance.classes[k];
        next = g;  // skipping the class keeps value and weight
        for (std::size_t v = 0; v < width; ++v) {
            for (std::size_t l = 0; l < cls.size(); ++l) {
                const long long sv = scaled[k][l];
                if (sv < 0 || sv > static_cast<long long>(v)) continue;
                const long long base = g[v - static_cast<std::size_t>(sv)];
                if (base >= kInf) continue;
                const long long w = base + cls[l].weight;
                if (w < next[v]) {
                    next[v] = w;
                    choice[k][v] = static_cast<int>(l);
                }
            }
        }
        std::swap(g, next);
    }

    long long best_v = 0;
    for (std::size_t v = 0; v < width; ++v)
        if (g[v] <= instance.capacity) best_v = static_cast<long long>(v);

    MckSolution solution;
    solution.chosen.assign(num_classes, -1);
    long long v = best_v;
    for (std::size_t k = num_classes; k-- > 0;) {
        const int c = choice[k][static_cast<std::size_t>(v)];
        solution.chosen[k] = c;
        if (c >= 0) v -= scaled[k][static_cast<std::size_t>(c)];
    }
    fill_totals(instance, solution);
    return solution;
}

MckSolution solve_brute_force(const MckInstance& instance, long long enumeration_cap) {
    validate_instance(instance);
    long long combos = 1;
    for (const auto& cls : instance.classes) {
        combos *= static_cast<long long>(cls.size()) + 1;
        if (combos > enumeration_cap)
            throw InstanceTooLarge("solve_brute_force: too many selections to enumerate");
    }

    const std::size_t num_classes = instance.classes.size();
    MckSolution best;
    best.chosen.assign(num_classes, -1);
    std::vector<int> current(num_classes, -1);

    auto consider = [&](double value, long long weight) {
        if (value > best.total_value ||
            (value == best.total_value && weight < best.total_weight)) {
            best.chosen = current;
            best.total_value = value;
            best.total_weight = weight;
        }
    };

    // DFS, skip-first then items in order: the first optimum found is the
    // lexicographically smallest among value/weight ties.
    auto dfs = [&](auto&& self, std::size_t k, double value, long long weight) -> void {
        if (k == num_classes) {
            consider(value, weight);
            return;
        }
        current[k] = -1;
        self(self, k + 1, value, weight);
        const auto& cls = instance.classes[k];
        for (std::size_t l = 0; l < cls.size(); ++l) {
            if (weight + cls[l].weight > instance.capacity) continue;
            current[k] = static_cast<int>(l);
            self(self, k + 1, value + cls[l].value, weight + cls[l].weight);
        }
        current[k] = -1;
    };
    dfs(dfs, 0, 0.0, 0);
    return best;
}

SyncPolicy decode_policy(const MckInstance& instance, const MckSolution& solution) {
    if (instance.controller_count < 2)
        throw std::invalid_argument("decode_policy: instance was not built from a model");
    PairSpace pairs(instance.controller_count);
    if (instance.classes.size() != static_cast<std::size_t>(pairs.count()))
        throw std::invalid_argument("decode_policy: class count does not match pair space");
    if (solution.chosen.size() != instance.classes.size())
        throw std::invalid_argument("decode_policy: solution does not match instance");

    SyncPolicy policy = SyncPolicy::zeros(instance.controller_count);
    for (std::size_t k = 0; k < solution.chosen.size(); ++k) {
        const int c = solution.chosen[k];
        if (c < 0) continue;
        if (c >= static_cast<int>(instance.classes[k].size()))
            throw std::invalid_argument("decode_policy: chosen item out of range");
        const MckItem& item = instance.classes[k][static_cast<std::size_t>(c)];
        policy.rates[static_cast<std::size_t>(item.pair_index)] = item.level;
    }
    return policy;
}

double zero_rate_baseline(const SystemModel& model) {
    validate_model(model);
    double sum = 0.0;
    for (double lambda : model.change_rates)
        sum += static_cast<double>(model.controller_count - 1) *
               std::exp(-lambda * model.slot_seconds);
    return sum;
}

namespace {

// Smaller root of exp(-a/2) - exp(-a) = v; the function increases from 0 to
// 0.25 on (0, 2 ln 2].
double solve_rate_for_value(double v) {
    const double hi_bound = 2.0 * std::log(2.0);
    double lo = 0.0, hi = hi_bound;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f = std::exp(-mid / 2.0) - std::exp(-mid);
        if (f < v)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SystemModel knapsack_hardness_instance(const std::vector<KnapsackItem>& items,
                                       int capacity) {
    if (items.empty())
        throw std::invalid_argument("knapsack_hardness_instance: no items");
    if (capacity < 0)
        throw std::invalid_argument("knapsack_hardness_instance: capacity must be >= 0");
    for (const auto& item : items) {
        if (item.weight < 1)
            throw std::invalid_argument("knapsack_hardness_instance: weights must be >= 1");
        if (!(item.value > 0.0) || item.value > 0.25)
            throw NotEncodable(
                "knapsack_hardness_instance: item value outside (0, 0.25]");
    }

    const int num_items = static_cast<int>(items.size());
    SystemModel model;
    model.controller_count = 2 * num_items;
    model.change_rates.assign(static_cast<std::size_t>(model.controller_count), 0.0);
    model.slot_seconds = 1.0;
    model.budget = capacity;
    model.max_rate = 1;

    PairSpace pairs(model.controller_count);
    const int excluded_cost = capacity + 1;
    model.pair_costs.assign(static_cast<std::size_t>(pairs.count()), excluded_cost);
    for (int l = 0; l < num_items; ++l) {
        model.change_rates[static_cast<std::size_t>(2 * l)] =
            solve_rate_for_value(items[static_cast<std::size_t>(l)].value);
        model.pair_costs[static_cast<std::size_t>(pairs.index(2 * l, 2 * l + 1))] =
            items[static_cast<std::size_t>(l)].weight;
    }
    validate_model(model);
    return model;
}

std::string to_text(const MckInstance& instance) {
    std::ostringstream out;
    out << instance.classes.size() << ' ' << instance.capacity << '\n';
    for (std::size_t k = 0; k < instance.classes.size(); ++k)
        for (const auto& item : instance.classes[k])
            out << k << ' ' << item.weight << ' ' << format_double(item.value) << '\n';
    return out.str();
}

MckInstance from_text(std::istream& in) {
    MckInstance instance;
    std::size_t num_classes = 0;
    if (!(in >> num_classes >> instance.capacity))
        throw std::invalid_argument("mck::from_text: bad header");
    instance.classes.resize(num_classes);
    std::size_t k = 0;
    MckItem item;
    while (in >> k >> item.weight >> item.value) {
        if (k >= num_classes) throw std::invalid_argument("mck::from_text: class out of range");
        item.pair_index = -1;
        item.level = static_cast<int>(instance.classes[k].size()) + 1;
        instance.classes[k].push_back(item);
    }
    validate_instance(instance);
    return instance;
}

MckInstance from_text(const std::string& text) {
    std::istringstream in(text);
    return from_text(in);
}

}  // namespace syncrate::mck
