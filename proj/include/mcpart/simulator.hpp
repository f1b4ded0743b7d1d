#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mcpart/amc.hpp"
#include "mcpart/bin_test.hpp"
#include "mcpart/generator.hpp"
#include "mcpart/task_model.hpp"

namespace mcpart {

/// Per-job execution demand of HC jobs. LC jobs always run for C_L.
/// Releases are synchronous and periodic.
struct Scenario {
    enum class Kind { AllLo, AllHi, Random };

    Kind kind = Kind::AllLo;
    std::uint64_t seed = 0;
    double p_overrun = 0.5;

    static Scenario all_lo() { return {Kind::AllLo}; }
    static Scenario all_hi() { return {Kind::AllHi}; }
    static Scenario random(std::uint64_t seed, double p_overrun = 0.5)
    {
        return {Kind::Random, seed, p_overrun};
    }

    /// True when job `job` of task `task` (index into the simulated span)
    /// needs C_H instead of C_L.
    bool overruns(std::size_t task, Time job) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// EDF in both modes. Before the switch, jobs are ordered by
/// release + lo_deadline[i] (virtual deadline for HC tasks, real deadline
/// for LC tasks); after it, HC jobs by their real deadlines.
struct EdfVdRuntime {
    std::vector<Time> lo_deadline;
};

/// Fixed priorities in both modes.
struct AmcRuntime {
    PriorityOrder order;
};

using Runtime = std::variant<EdfVdRuntime, AmcRuntime>;

struct DeadlineMiss {
    int task_id;
    Time deadline;

    friend bool operator==(const DeadlineMiss&, const DeadlineMiss&) = default;
};

struct SimReport {
    std::optional<DeadlineMiss> miss;
    std::optional<Time> switch_time;
    Time trace_length = 0;
};

/// Preemptive single-processor simulation over [0, horizon). The mode
/// switches the first time an HC job has run for C_L and still needs more;
/// LC jobs are dropped at that instant and LC releases are ignored
/// afterwards. Stops at the first miss.
SimReport simulate(std::span<const Task> tasks, const Runtime& runtime, const Scenario& scenario,
                   Time horizon);

struct FalsifyOptions {
    Time hyperperiod_cap = 100'000;
    Time max_horizon = 10'000'000;
};

/// min(2 * lcm(T), hyperperiod_cap) + max D.
Time falsification_horizon(std::span<const Task> tasks, Time hyperperiod_cap = 100'000);

struct Counterexample {
    int scenario_index;
    Scenario scenario;
    DeadlineMiss miss;
    std::optional<Time> switch_time;
};

/// A falsifier can only refute a test: an empty counterexample means no miss
/// was observed, not that the task set is schedulable.
struct FalsifyReport {
    std::optional<Counterexample> counterexample;
    int scenarios_run = 0;
    int scenarios_skipped = 0;
    std::vector<std::string> diagnostics;
};

/// Runtime configured by the test that accepted the set: virtual deadlines
/// for EDF-VD and ECDF, deadline-monotonic priorities for AMC. Throws
/// std::invalid_argument if the test rejects the set.
Runtime runtime_for(Test test, std::span<const Task> tasks);

/// Scenario 0 is all-LO, 1 is all-HI, 2.. are random; the lowest-indexed
/// miss is reported.
FalsifyReport falsify(std::span<const Task> tasks, const Runtime& runtime, int random_scenarios,
                      Rng& rng, const FalsifyOptions& opts = {});

FalsifyReport falsify(Test test, std::span<const Task> tasks, int random_scenarios, Rng& rng,
                      const FalsifyOptions& opts = {});

}  // namespace mcpart
