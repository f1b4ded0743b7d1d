#include "mcpart/amc.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mcpart {

namespace {

Time ceil_div(Time a, Time b)
{
    // b > 0; rounds toward +infinity for negative a as well.
    Time q = a / b;
    if (a % b != 0 && a > 0)
        ++q;
    return q;
}

struct FixedPoint {
    Time value;
    bool converged;
};

// Least fixed point of a monotone recurrence, starting from `start`. Gives up
// as soon as the iterate exceeds `limit`.
template <class F>
FixedPoint iterate(Time start, Time limit, F&& f)
{
    Time r = start;
    while (true) {
        if (r > limit)
            return {r, false};
        Time next = f(r);
        if (next == r)
            return {r, true};
        r = next;
    }
}

void check_order(std::span<const Task> tasks, const PriorityOrder& order)
{
    if (order.rank.size() != tasks.size())
        throw std::invalid_argument("priority order does not match task count");
    std::vector<bool> seen(tasks.size(), false);
    for (std::size_t idx : order.rank) {
        if (idx >= tasks.size() || seen[idx])
            throw std::invalid_argument("priority order is not a permutation");
        seen[idx] = true;
    }
}

enum class HiAnalysis { Rtb, Max };

Time rtb_response(std::span<const Task> tasks, const PriorityOrder& order, std::size_t pos,
                  Time r_lo, bool& ok)
{
    const Task& ti = tasks[order.rank[pos]];
    Time lc_load = 0;
    for (std::size_t p = 0; p < pos; ++p) {
        const Task& tj = tasks[order.rank[p]];
        if (!tj.is_hc())
            lc_load += ceil_div(r_lo, tj.period) * tj.wcet_lo;
    }
    auto fp = iterate(ti.wcet_hi, ti.deadline, [&](Time r) {
        Time sum = ti.wcet_hi + lc_load;
        for (std::size_t p = 0; p < pos; ++p) {
            const Task& tk = tasks[order.rank[p]];
            if (tk.is_hc())
                sum += ceil_div(r, tk.period) * tk.wcet_hi;
        }
        return sum;
    });
    ok = fp.converged;
    return fp.value;
}

Time max_response(std::span<const Task> tasks, const PriorityOrder& order, std::size_t pos,
                  Time r_lo, bool& ok)
{
    const Task& ti = tasks[order.rank[pos]];

    std::vector<Time> switches{0};
    for (std::size_t p = 0; p < pos; ++p) {
        const Task& tj = tasks[order.rank[p]];
        if (tj.is_hc())
            continue;
        for (Time s = tj.period; s < r_lo; s += tj.period)
            switches.push_back(s);
    }
    std::sort(switches.begin(), switches.end());
    switches.erase(std::unique(switches.begin(), switches.end()), switches.end());

    Time worst = ti.wcet_hi;
    for (Time s : switches) {
        Time lc_load = 0;
        for (std::size_t p = 0; p < pos; ++p) {
            const Task& tj = tasks[order.rank[p]];
            if (!tj.is_hc())
                lc_load += (s / tj.period + 1) * tj.wcet_lo;
        }
        auto fp = iterate(ti.wcet_hi, ti.deadline, [&](Time r) {
            Time sum = ti.wcet_hi + lc_load;
            for (std::size_t p = 0; p < pos; ++p) {
                const Task& tk = tasks[order.rank[p]];
                if (!tk.is_hc())
                    continue;
                const Time lo_jobs = amc_lo_jobs(tk, s, r);
                sum += lo_jobs * tk.wcet_lo + (ceil_div(r, tk.period) - lo_jobs) * tk.wcet_hi;
            }
            return sum;
        });
        if (!fp.converged) {
            ok = false;
            return fp.value;
        }
        worst = std::max(worst, fp.value);
    }
    ok = true;
    return worst;
}

RtaResult hi_mode(std::span<const Task> tasks, const PriorityOrder& order, HiAnalysis kind)
{
    RtaResult res = rta_lo(tasks, order);
    if (!res.schedulable)
        return res;
    for (std::size_t pos = 0; pos < order.rank.size(); ++pos) {
        const std::size_t idx = order.rank[pos];
        if (!tasks[idx].is_hc())
            continue;
        bool ok = false;
        const Time r = kind == HiAnalysis::Rtb ? rtb_response(tasks, order, pos, res.lo[idx], ok)
                                               : max_response(tasks, order, pos, res.lo[idx], ok);
        res.hi[idx] = r;
        if (!ok) {
            res.schedulable = false;
            res.failing_task = tasks[idx].id;
            return res;
        }
    }
    return res;
}

}  // namespace

PriorityOrder assign_priorities(std::span<const Task> tasks)
{
    PriorityOrder order;
    order.rank.resize(tasks.size());
    std::iota(order.rank.begin(), order.rank.end(), std::size_t{0});
    std::sort(order.rank.begin(), order.rank.end(), [&](std::size_t a, std::size_t b) {
        if (tasks[a].deadline != tasks[b].deadline)
            return tasks[a].deadline < tasks[b].deadline;
        return tasks[a].id < tasks[b].id;
    });
    return order;
}

Time amc_lo_jobs(const Task& k, Time s, Time t)
{
    const Time jobs = ceil_div(t, k.period);
    const Time hi_jobs = ceil_div(t - s - (k.period - k.deadline), k.period) + 1;
    return jobs - std::clamp<Time>(hi_jobs, 0, jobs);
}

RtaResult rta_lo(std::span<const Task> tasks, const PriorityOrder& order)
{
    check_order(tasks, order);
    RtaResult res;
    res.lo.assign(tasks.size(), 0);
    res.hi.assign(tasks.size(), std::nullopt);
    res.schedulable = true;
    for (std::size_t pos = 0; pos < order.rank.size(); ++pos) {
        const Task& ti = tasks[order.rank[pos]];
        auto fp = iterate(ti.wcet_lo, ti.deadline, [&](Time r) {
            Time sum = ti.wcet_lo;
            for (std::size_t p = 0; p < pos; ++p) {
                const Task& tj = tasks[order.rank[p]];
                sum += ceil_div(r, tj.period) * tj.wcet_lo;
            }
            return sum;
        });
        res.lo[order.rank[pos]] = fp.value;
        if (!fp.converged) {
            res.schedulable = false;
            res.failing_task = ti.id;
            return res;
        }
    }
    return res;
}

RtaResult amc_rtb(std::span<const Task> tasks, const PriorityOrder& order)
{
    return hi_mode(tasks, order, HiAnalysis::Rtb);
}

RtaResult amc_max(std::span<const Task> tasks, const PriorityOrder& order)
{
    return hi_mode(tasks, order, HiAnalysis::Max);
}

bool amc_rtb_schedulable(std::span<const Task> tasks)
{
    return amc_rtb(tasks, assign_priorities(tasks)).schedulable;
}

bool amc_max_schedulable(std::span<const Task> tasks)
{
    return amc_max(tasks, assign_priorities(tasks)).schedulable;
}

}  // namespace mcpart
