#ifndef SYNCRATE_ERRORS_HPP
#define SYNCRATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace syncrate {

// Enumeration or DP state space exceeds the configured cap.
struct InstanceTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A knapsack item value cannot be realized by any change-rate setting.
struct NotEncodable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The training budget exceeds the total number of rate increments available.
struct BudgetExhaustsRates : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A stateful interface was driven outside its call contract.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// No try-out with a positive true marginal gain was available.
struct UndefinedMu : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace syncrate

#endif
