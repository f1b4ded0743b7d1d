#pragma once

#include <span>
#include <vector>

#include "mcpart/task_model.hpp"

namespace mcpart {

/// Result of the EDF-VD utilization test on one processor.
///
/// `x` is the virtual-deadline scaling factor. When the bin is schedulable
/// by plain EDF (U_LL + U_HH <= 1) no scaling is needed and x is 1.
struct EdfVdVerdict {
    bool schedulable = false;
    bool scaled = false;
    double x = 1.0;
};

/// Tolerance applied to every `<=` comparison of utilization sums.
inline constexpr double kUtilTolerance = 1e-12;

/// Inequality form: U_LL <= (1 - U_HH) / (1 - (U_HH - U_HL)).
bool edfvd_bound_form(const Utilizations& u);

/// Scaling-factor form: x = U_HL / (1 - U_LL) and x * U_LL + U_HH <= 1.
bool edfvd_factor_form(const Utilizations& u);

/// Verdict from per-processor sums. The two forms are algebraically
/// equivalent; a bin is accepted only when both hold.
EdfVdVerdict edfvd_verdict(const Utilizations& u);

/// Throws std::invalid_argument for constrained-deadline input.
EdfVdVerdict edfvd_schedulable(std::span<const Task> tasks);

/// Virtual deadlines for the runtime, indexed like `tasks`: floor(x * T)
/// clamped to at least C_L for HC tasks, the real deadline for LC tasks.
std::vector<Time> edfvd_virtual_deadlines(std::span<const Task> tasks, double x);

}  // namespace mcpart
