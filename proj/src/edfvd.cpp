#include "mcpart/edfvd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcpart {

bool edfvd_bound_form(const Utilizations& u)
{
    if (u.lc_lo >= 1.0 || u.hc_hi >= 1.0)
        return false;
    const double bound = (1.0 - u.hc_hi) / (1.0 - (u.hc_hi - u.hc_lo));
    return u.lc_lo <= bound + kUtilTolerance;
}

bool edfvd_factor_form(const Utilizations& u)
{
    if (u.lc_lo >= 1.0 || u.hc_hi >= 1.0)
        return false;
    const double x = u.hc_lo / (1.0 - u.lc_lo);
    return x * u.lc_lo + u.hc_hi <= 1.0 + kUtilTolerance;
}

EdfVdVerdict edfvd_verdict(const Utilizations& u)
{
    if (u.lc_lo + u.hc_hi <= 1.0 + kUtilTolerance)
        return {true, false, 1.0};
    if (edfvd_bound_form(u) && edfvd_factor_form(u)) {
        const double x = u.hc_lo / (1.0 - u.lc_lo);
        return {true, true, std::min(x, 1.0)};
    }
    return {false, false, 1.0};
}

EdfVdVerdict edfvd_schedulable(std::span<const Task> tasks)
{
    if (!has_implicit_deadlines(tasks))
        throw std::invalid_argument("EDF-VD test requires implicit deadlines");
    return edfvd_verdict(bin_utilizations(tasks));
}

std::vector<Time> edfvd_virtual_deadlines(std::span<const Task> tasks, double x)
{
    std::vector<Time> v;
    v.reserve(tasks.size());
    for (const Task& t : tasks) {
        if (!t.is_hc()) {
            v.push_back(t.deadline);
            continue;
        }
        // The small bias keeps exact products such as 0.5 * 10 from
        // flooring to 4 after rounding error.
        auto scaled = static_cast<Time>(std::floor(x * static_cast<double>(t.period) + 1e-9));
        v.push_back(std::clamp(scaled, t.wcet_lo, t.deadline));
    }
    return v;
}

}  // namespace mcpart
