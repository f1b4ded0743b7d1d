#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "mcpart/task_model.hpp"

namespace mcpart {

using Rng = std::mt19937_64;

/// Normalized (divided by m) utilization targets of one grid point.
struct UtilizationTargets {
    double hc_hi = 0.0;  // U_HH
    double hc_lo = 0.0;  // U_HL
    double lc_lo = 0.0;  // U_LL

    friend bool operator==(const UtilizationTargets&, const UtilizationTargets&) = default;
};

struct GeneratorConfig {
    int m = 2;
    double p_h = 0.5;
    double u_min = 0.001;
    double u_max = 0.99;
    UtilizationTargets targets;
    Time period_lo = 10;
    Time period_hi = 500;
    DeadlineModel deadline_model = DeadlineModel::Implicit;
    int n_min = 0;  // 0 selects m + 1
    int n_max = 0;  // 0 selects 5m
    double tolerance = 0.05;  // on each normalized sum, after rounding
    int max_retries = 1000;
    int sampler_attempts = 200;

    /// Throws std::invalid_argument when the configuration is inconsistent.
    void validate() const;
    int min_tasks() const { return n_min > 0 ? n_min : m + 1; }
    int max_tasks() const { return n_max > 0 ? n_max : 5 * m; }
};

/// Raised when the retry budget is exhausted for one configuration.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Log-uniform integer period in [lo, hi].
Time draw_period(Rng& rng, Time lo, Time hi);

/// `n` values in [lo, hi] summing to `total`, uniformly distributed over
/// that region of the simplex (UUniFast with discarding). Empty optional
/// after `attempts` rejected draws.
std::optional<std::vector<double>> uunifast_discard(Rng& rng, int n, double total, double lo,
                                                    double hi, int attempts);

/// LO utilizations for HC tasks: one uniform draw in [lo, caps[i]] per task,
/// then a common scale factor (each value clamped to [lo, caps[i]]) chosen
/// so the values sum to `total`. Requires n * lo <= total <= sum(caps).
std::vector<double> scaled_lo_utilizations(Rng& rng, const std::vector<double>& caps,
                                           double total, double lo);

/// Generates one task set hitting the configured targets. Throws
/// GenerationError after `max_retries` failed attempts.
TaskSet generate_taskset(const GeneratorConfig& config, Rng& rng);

/// max(U_HL + U_LL, U_HH).
double u_b(const UtilizationTargets& t);

}  // namespace mcpart
