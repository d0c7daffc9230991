#pragma once

#include <cstddef>

namespace lipreach::lipopt {

enum class LipschitzMode {
    /// K = max(K_prev, K_init, eta * largest slope between consecutive points).
    Dynamic,
    /// K = K_init for the whole run.
    Fixed,
};

/// How the tolerance is shared between nesting levels.
struct InnerTolerance {
    enum class Rule {
        /// Each level keeps half of what it received and passes half inward;
        /// the innermost level keeps everything it received.
        EqualSplit,
        /// Outermost level uses epsilon, every inner level uses `value`.
        Fixed,
    };
    Rule rule = Rule::EqualSplit;
    double value = 0.0;

    static InnerTolerance equal_split() { return {}; }
    static InnerTolerance fixed(double v) { return {Rule::Fixed, v}; }
};

struct SolverConfig {
    /// Termination tolerance on u - l.
    double epsilon = 1e-3;
    /// Inflation applied to observed slopes; must exceed 1.
    double eta = 2.0;
    /// Bootstrap constant and floor for K.
    double k_init = 1.0;
    /// Global budget of objective evaluations, all nesting levels included.
    std::size_t max_evals = 2'000'000;
    LipschitzMode mode = LipschitzMode::Dynamic;
    InnerTolerance inner{};

    /// Throws ContractError unless epsilon > 0, eta > 1, k_init > 0 and
    /// max_evals >= 3.
    void validate() const;

    static SolverConfig fixed_lipschitz(double k, double epsilon) {
        SolverConfig c;
        c.k_init = k;
        c.epsilon = epsilon;
        c.mode = LipschitzMode::Fixed;
        return c;
    }
};

}  // namespace lipreach::lipopt
