#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mcpart/task_model.hpp"

namespace mcpart {

/// Fixed priorities for one processor: `rank[0]` is the index (into the
/// analysed task span) of the highest-priority task.
struct PriorityOrder {
    std::vector<std::size_t> rank;

    friend bool operator==(const PriorityOrder&, const PriorityOrder&) = default;
};

/// Response times indexed like the analysed task span. `hi` is only set for
/// HC tasks and only by the HI-mode analyses.
struct RtaResult {
    std::vector<Time> lo;
    std::vector<std::optional<Time>> hi;
    bool schedulable = false;
    std::optional<int> failing_task;
};

/// Deadline-monotonic order, ties broken by smaller task id.
PriorityOrder assign_priorities(std::span<const Task> tasks);

/// LO-mode response times. Iteration for a task stops as soon as the
/// candidate exceeds its deadline; that task is reported as failing and the
/// remaining lower-priority tasks are not analysed.
RtaResult rta_lo(std::span<const Task> tasks, const PriorityOrder& order);

/// AMC-rtb: HI-mode response times with LC interference frozen at R_LO.
RtaResult amc_rtb(std::span<const Task> tasks, const PriorityOrder& order);

/// AMC-max: HI-mode response times maximised over every mode-switch
/// instant s before R_LO at which a higher-priority LC job is released.
RtaResult amc_max(std::span<const Task> tasks, const PriorityOrder& order);

/// Jobs of an HC task `k` charged at their LO budget in a window of length
/// `t` with the switch at `s`. The remaining ones, up to one per period from
/// the last deadline before s, are charged at the HI budget.
Time amc_lo_jobs(const Task& k, Time s, Time t);

bool amc_rtb_schedulable(std::span<const Task> tasks);
bool amc_max_schedulable(std::span<const Task> tasks);

}  // namespace mcpart
