#include "mcpart/ecdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace mcpart {

namespace {

// One arithmetic progression of checkpoints.
struct Stream {
    Time next;
    Time step;
};

struct ScanResult {
    std::optional<Time> violation;
    Time last_ok = 0;
};

void push_stream(std::vector<Stream>& out, Time start, Time step, Time from)
{
    if (start < from)
        start += (from - start + step - 1) / step * step;
    out.push_back({start, step});
}

// Walks the merged checkpoints in [from, horizon] (horizon itself always
// included) and stops at the first l with demand(l) > l.
template <class Demand>
ScanResult scan(std::vector<Stream>& streams, Time from, Time horizon, Demand&& demand)
{
    ScanResult res;
    res.last_ok = from;
    while (true) {
        Time cur = std::numeric_limits<Time>::max();
        for (const Stream& s : streams)
            cur = std::min(cur, s.next);
        const bool last = cur >= horizon;
        if (last)
            cur = horizon;
        if (cur >= from) {
            if (demand(cur) > cur) {
                res.violation = cur;
                return res;
            }
            res.last_ok = cur;
        }
        if (last)
            return res;
        for (Stream& s : streams)
            if (s.next == cur)
                s.next += s.step;
    }
}

Time lo_total(std::span<const Task> tasks, const VirtualDeadlineAssignment& v, Time l)
{
    Time sum = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        sum += dbf_lo(tasks[i], v.deadline[i], l);
    return sum;
}

Time hi_total(std::span<const Task> tasks, const VirtualDeadlineAssignment& v, Time l)
{
    Time sum = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].is_hc())
            sum += dbf_hi(tasks[i], v.deadline[i], l);
    return sum;
}

ScanResult scan_hi(std::span<const Task> tasks, const VirtualDeadlineAssignment& v, Time from,
                   Time horizon)
{
    std::vector<Stream> streams;
    streams.reserve(2 * tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Task& t = tasks[i];
        if (!t.is_hc())
            continue;
        const Time offset = t.deadline - v.deadline[i];
        push_stream(streams, offset, t.period, from);
        push_stream(streams, offset + t.wcet_lo, t.period, from);
    }
    return scan(streams, from, horizon, [&](Time l) { return hi_total(tasks, v, l); });
}

// Largest V' in [C_L, v) with a strictly smaller dbf_hi at l, if any.
std::optional<Time> next_reducing_deadline(const Task& t, Time v, Time l)
{
    const Time current = dbf_hi(t, v, l);
    for (Time cand = v - 1; cand >= t.wcet_lo; --cand)
        if (dbf_hi(t, cand, l) < current)
            return cand;
    return std::nullopt;
}

// Largest LO checkpoint V_i + jT strictly below t, or nullopt.
std::optional<Time> previous_lo_point(std::span<const Task> tasks,
                                      const VirtualDeadlineAssignment& v, Time t)
{
    std::optional<Time> best;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Time d = v.deadline[i];
        if (d >= t)
            continue;
        const Time p = d + (t - 1 - d) / tasks[i].period * tasks[i].period;
        if (!best || p > *best)
            best = p;
    }
    return best;
}

// Backward quick-processor-demand iteration: true when no l <= horizon has
// LO demand above l.
bool lo_demand_ok(std::span<const Task> tasks, const VirtualDeadlineAssignment& v, Time horizon)
{
    Time first = std::numeric_limits<Time>::max();
    for (Time d : v.deadline)
        first = std::min(first, d);
    Time t = horizon;
    while (true) {
        const Time h = lo_total(tasks, v, t);
        if (h > t)
            return false;
        if (h < first)
            return true;
        if (h < t) {
            t = h;
            continue;
        }
        const auto prev = previous_lo_point(tasks, v, t);
        if (!prev)
            return true;
        t = *prev;
    }
}

DbfVerdict reject(VirtualDeadlineAssignment v, std::optional<DemandViolation> at, std::string why)
{
    return {false, std::move(v), at, std::move(why)};
}

}  // namespace

Time dbf_lo(const Task& t, Time v, Time l)
{
    if (l < v)
        return 0;
    return ((l - v) / t.period + 1) * t.wcet_lo;
}

Time dbf_hi(const Task& t, Time v, Time l)
{
    const Time offset = t.deadline - v;
    if (l < offset)
        return 0;
    const Time jobs = (l - offset) / t.period + 1;
    const Time window = l - (jobs - 1) * t.period;
    if (window >= t.deadline)
        return jobs * t.wcet_hi;
    const Time to_virtual = window - offset;
    return jobs * t.wcet_hi - std::max<Time>(0, t.wcet_lo - to_virtual);
}

namespace {

enum class Load { Below, Full, Over };

struct ModeLoad {
    Load load = Load::Below;
    Time hyperperiod = 0;  // set when the load is exactly 1; 0 if above the cap
};

// Exact comparison of a mode's utilization with 1 when the hyperperiod is
// small enough; floating point with a tight tolerance otherwise.
template <class Budget>
ModeLoad classify(std::span<const Task> tasks, bool hc_only, Budget&& budget, Time cap)
{
    Time hyper = 1;
    double u = 0.0;
    bool exact = true;
    for (const Task& t : tasks) {
        if (hc_only && !t.is_hc())
            continue;
        u += static_cast<double>(budget(t)) / static_cast<double>(t.period);
        if (exact) {
            hyper = std::lcm(hyper, t.period);
            exact = hyper <= cap;
        }
    }
    if (exact) {
        Time demand = 0;
        for (const Task& t : tasks)
            if (!hc_only || t.is_hc())
                demand += budget(t) * (hyper / t.period);
        if (demand > hyper)
            return {Load::Over, 0};
        return demand == hyper ? ModeLoad{Load::Full, hyper} : ModeLoad{Load::Below, 0};
    }
    if (u > 1.0 + 1e-12)
        return {Load::Over, 0};
    return u >= 1.0 - 1e-12 ? ModeLoad{Load::Full, 0} : ModeLoad{Load::Below, 0};
}

}  // namespace

Horizon lmax_bound(std::span<const Task> tasks, const VirtualDeadlineAssignment& v, Time cap)
{
    const ModeLoad lo = classify(tasks, false, [](const Task& t) { return t.wcet_lo; }, cap);
    const ModeLoad hi = classify(tasks, true, [](const Task& t) { return t.wcet_hi; }, cap);
    if (lo.load == Load::Over || hi.load == Load::Over)
        return {0, false};

    double u_lo = 0.0, u_hi = 0.0;
    double lo_offsets = 0.0, hi_offsets = 0.0;
    Time longest = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Task& t = tasks[i];
        longest = std::max(longest, t.deadline);
        u_lo += t.u_lo();
        lo_offsets += t.u_lo() * static_cast<double>(t.period - v.deadline[i]);
        if (t.is_hc()) {
            u_hi += t.u_hi();
            hi_offsets += t.u_hi() * static_cast<double>(t.period - t.deadline + v.deadline[i]);
        }
    }

    double bound = static_cast<double>(longest);
    for (const auto& [mode, u, offsets] :
         {std::tuple{lo, u_lo, lo_offsets}, std::tuple{hi, u_hi, hi_offsets}}) {
        if (mode.load == Load::Below) {
            bound = std::max(bound, offsets / (1.0 - u));
        } else {
            // Full load: slack repeats with the hyperperiod past the longest
            // deadline.
            if (mode.hyperperiod == 0)
                return {cap, true};
            bound = std::max(bound, static_cast<double>(longest + mode.hyperperiod));
        }
    }
    if (bound > static_cast<double>(cap))
        return {cap, true};
    return {static_cast<Time>(std::ceil(bound)), false};
}

std::optional<Time> lo_demand_violation(std::span<const Task> tasks,
                                        const VirtualDeadlineAssignment& v, Time horizon)
{
    std::vector<Stream> streams;
    streams.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i)
        push_stream(streams, v.deadline[i], tasks[i].period, 0);
    return scan(streams, 0, horizon, [&](Time l) { return lo_total(tasks, v, l); }).violation;
}

std::optional<Time> hi_demand_violation(std::span<const Task> tasks,
                                        const VirtualDeadlineAssignment& v, Time from,
                                        Time horizon)
{
    return scan_hi(tasks, v, from, horizon).violation;
}

DbfVerdict ecdf_schedulable(std::span<const Task> tasks, const EcdfOptions& opts)
{
    VirtualDeadlineAssignment v;
    v.deadline.reserve(tasks.size());
    for (const Task& t : tasks)
        v.deadline.push_back(t.deadline);
    if (tasks.empty())
        return {true, std::move(v), std::nullopt, {}};

    auto horizon = [&]() { return lmax_bound(tasks, v, opts.horizon_cap); };

    Horizon h = horizon();
    if (h.value == 0)
        return reject(std::move(v), std::nullopt, "utilization reaches 1");
    if (h.cap_exceeded)
        return reject(std::move(v), std::nullopt, "demand horizon exceeds cap");
    if (auto at = lo_demand_violation(tasks, v, h.value))
        return reject(std::move(v), DemandViolation{Mode::LO, *at}, "LO demand exceeds supply");

    Time resume = 0;
    while (true) {
        const ScanResult hi = scan_hi(tasks, v, resume, h.value);
        if (!hi.violation)
            return {true, std::move(v), std::nullopt, {}};
        const Time at = *hi.violation;

        // Greedy pick: largest reduction from a unit decrement, then largest
        // u_H - u_L, then smallest id.
        std::optional<std::size_t> pick;
        std::optional<Time> pick_to;
        Time best_gain = -1;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const Task& t = tasks[i];
            if (!t.is_hc() || v.deadline[i] <= t.wcet_lo || dbf_hi(t, v.deadline[i], at) == 0)
                continue;
            const auto to = next_reducing_deadline(t, v.deadline[i], at);
            if (!to)
                continue;
            const Time gain = dbf_hi(t, v.deadline[i], at) - dbf_hi(t, v.deadline[i] - 1, at);
            bool better = !pick || gain > best_gain;
            if (pick && gain == best_gain) {
                const Task& p = tasks[*pick];
                const double dt = t.u_hi() - t.u_lo(), dp = p.u_hi() - p.u_lo();
                better = dt > dp || (dt == dp && t.id < p.id);
            }
            if (better) {
                pick = i;
                pick_to = to;
                best_gain = gain;
            }
        }
        if (!pick)
            return reject(std::move(v), DemandViolation{Mode::HI, at},
                          "no virtual deadline can reduce HI demand");

        v.deadline[*pick] = *pick_to;
        h = horizon();
        if (h.value == 0 || h.cap_exceeded)
            return reject(std::move(v), std::nullopt, "demand horizon exceeds cap");
        if (!lo_demand_ok(tasks, v, h.value)) {
            const auto lo_at = lo_demand_violation(tasks, v, h.value);
            return reject(std::move(v), DemandViolation{Mode::LO, lo_at.value_or(h.value)},
                          "LO demand exceeds supply after tightening");
        }
        resume = hi.last_ok;
    }
}

}  // namespace mcpart
