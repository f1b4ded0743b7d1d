#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcpart/task_model.hpp"

namespace mcpart {

// Demand-bound-function test with per-task virtual deadlines and greedy
// deadline tuning, for implicit- and constrained-deadline task sets.

enum class Mode { LO, HI };

/// LO-mode deadlines indexed like the analysed task span. HC tasks carry
/// their virtual deadline (C_L <= V <= D), LC tasks their real deadline.
struct VirtualDeadlineAssignment {
    std::vector<Time> deadline;

    friend bool operator==(const VirtualDeadlineAssignment&, const VirtualDeadlineAssignment&) = default;
};

struct DemandViolation {
    Mode mode;
    Time at;
};

struct DbfVerdict {
    bool schedulable = false;
    VirtualDeadlineAssignment assignment;
    std::optional<DemandViolation> first_violation;
    std::string diagnostic;
};

/// Demand of jobs with release >= 0 and LO-mode deadline <= l.
Time dbf_lo(const Task& t, Time v, Time l);

/// HI-mode demand of an HC task in a window of length l, crediting the
/// carry-over job with the LO execution it must already have received.
Time dbf_hi(const Task& t, Time v, Time l);

struct Horizon {
    Time value = 0;  // 0 when either mode is over-utilized
    bool cap_exceeded = false;
};

inline constexpr Time kDefaultHorizonCap = 1'000'000;

/// Length beyond which neither demand check can fail first. Zero when the
/// LO utilization or the HI utilization of the HC tasks exceeds 1. A mode
/// loaded to exactly 1 is covered by max D plus its hyperperiod.
Horizon lmax_bound(std::span<const Task> tasks, const VirtualDeadlineAssignment& v,
                   Time cap = kDefaultHorizonCap);

/// Earliest checkpoint l <= horizon with sum of dbf_lo > l.
std::optional<Time> lo_demand_violation(std::span<const Task> tasks,
                                        const VirtualDeadlineAssignment& v, Time horizon);

/// Earliest checkpoint in [from, horizon] with sum of dbf_hi > l.
std::optional<Time> hi_demand_violation(std::span<const Task> tasks,
                                        const VirtualDeadlineAssignment& v, Time from,
                                        Time horizon);

struct EcdfOptions {
    Time horizon_cap = kDefaultHorizonCap;
};

DbfVerdict ecdf_schedulable(std::span<const Task> tasks, const EcdfOptions& opts = {});

}  // namespace mcpart
