#include "mcpart/partitioner.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mcpart {

std::string_view to_string(Strategy s)
{
    switch (s) {
    case Strategy::CaUdp: return "CA-UDP";
    case Strategy::CuUdp: return "CU-UDP";
    case Strategy::CaWuF: return "CA-Wu-F";
    case Strategy::CaFF: return "CA-F-F";
    case Strategy::CaNosortFF: return "CA(nosort)-F-F";
    case Strategy::EcaWuF: return "ECA-Wu-F";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name)
{
    for (Strategy s : all_strategies())
        if (to_string(s) == name)
            return s;
    throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::vector<Strategy> all_strategies()
{
    return {Strategy::CaUdp,  Strategy::CuUdp,      Strategy::CaWuF,
            Strategy::CaFF,   Strategy::CaNosortFF, Strategy::EcaWuF};
}

StrategySpec strategy_spec(Strategy s, double heavy_lc_threshold)
{
    switch (s) {
    case Strategy::CaUdp:
        return {s, Ordering::CriticalityAware, FitRule::UtilDifference, FitRule::FirstFit};
    case Strategy::CuUdp:
        return {s, Ordering::CriticalityUnaware, FitRule::UtilDifference, FitRule::FirstFit};
    case Strategy::CaWuF:
        return {s, Ordering::CriticalityAware, FitRule::HcUtilization, FitRule::FirstFit};
    case Strategy::CaFF:
        return {s, Ordering::CriticalityAware, FitRule::FirstFit, FitRule::FirstFit};
    case Strategy::CaNosortFF:
        return {s, Ordering::CriticalityAwareUnsorted, FitRule::FirstFit, FitRule::FirstFit};
    case Strategy::EcaWuF:
        return {s, Ordering::HeavyLcFirst, FitRule::HcUtilization, FitRule::FirstFit,
                heavy_lc_threshold};
    }
    throw std::invalid_argument("unknown strategy");
}

std::vector<int> ProcessorBin::task_ids() const
{
    std::vector<int> ids;
    ids.reserve(tasks_.size());
    for (const Task& t : tasks_)
        ids.push_back(t.id);
    return ids;
}

void ProcessorBin::add(const Task& t)
{
    tasks_.push_back(t);
    util_.add(t);
}

namespace {

double level_utilization(const Task& t)
{
    return t.is_hc() ? t.u_hi() : t.u_lo();
}

void sort_by_level_utilization(std::vector<Task>& v)
{
    std::stable_sort(v.begin(), v.end(), [](const Task& a, const Task& b) {
        const double ua = level_utilization(a), ub = level_utilization(b);
        if (ua != ub)
            return ua > ub;
        return a.id < b.id;
    });
}

double fit_key(FitRule rule, const ProcessorBin& bin)
{
    switch (rule) {
    case FitRule::FirstFit: return 0.0;
    case FitRule::UtilDifference: return bin.utilization().difference();
    case FitRule::HcUtilization: return bin.utilization().hc_hi;
    }
    return 0.0;
}

}  // namespace

std::vector<Task> order_tasks(const StrategySpec& spec, std::span<const Task> tasks)
{
    std::vector<Task> hc, lc;
    for (const Task& t : tasks)
        (t.is_hc() ? hc : lc).push_back(t);

    std::vector<Task> out;
    out.reserve(tasks.size());
    switch (spec.ordering) {
    case Ordering::CriticalityAwareUnsorted:
        out = hc;
        out.insert(out.end(), lc.begin(), lc.end());
        break;
    case Ordering::CriticalityAware:
        sort_by_level_utilization(hc);
        sort_by_level_utilization(lc);
        out = hc;
        out.insert(out.end(), lc.begin(), lc.end());
        break;
    case Ordering::CriticalityUnaware:
        out.assign(tasks.begin(), tasks.end());
        sort_by_level_utilization(out);
        break;
    case Ordering::HeavyLcFirst: {
        sort_by_level_utilization(hc);
        sort_by_level_utilization(lc);
        auto light = std::stable_partition(lc.begin(), lc.end(), [&](const Task& t) {
            return t.u_lo() > spec.heavy_lc_threshold;
        });
        out.assign(lc.begin(), light);
        out.insert(out.end(), hc.begin(), hc.end());
        out.insert(out.end(), light, lc.end());
        break;
    }
    }
    return out;
}

std::vector<int> candidate_processors(const StrategySpec& spec, const Task& task,
                                      std::span<const ProcessorBin> bins)
{
    const FitRule rule = task.is_hc() ? spec.hc_fit : spec.lc_fit;
    std::vector<int> order(bins.size());
    std::iota(order.begin(), order.end(), 0);
    if (rule == FitRule::FirstFit)
        return order;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ka = fit_key(rule, bins[a]), kb = fit_key(rule, bins[b]);
        if (ka != kb)
            return ka < kb;
        return a < b;
    });
    return order;
}

Partition partition(const TaskSet& ts, int m, const StrategySpec& spec, const BinTest& test,
                    const TrialObserver& observer)
{
    if (m < 1)
        throw std::invalid_argument("partition needs m >= 1");
    Partition result;
    result.bins.reserve(m);
    for (int k = 0; k < m; ++k)
        result.bins.emplace_back(k);

    std::vector<Task> trial;
    for (const Task& task : order_tasks(spec, ts.tasks())) {
        const std::vector<int> candidates = candidate_processors(spec, task, result.bins);
        int chosen = -1;
        int tried = 0;
        for (int k : candidates) {
            ++tried;
            const auto current = result.bins[k].tasks();
            trial.assign(current.begin(), current.end());
            trial.push_back(task);
            if (test(trial)) {
                chosen = k;
                break;
            }
        }
        if (observer)
            observer(task, candidates, tried, chosen);
        if (chosen < 0) {
            result.failure = PartitionFailure{task.id, task.crit};
            return result;
        }
        result.bins[chosen].add(task);
    }
    return result;
}

Partition partition(const TaskSet& ts, int m, Strategy strategy, Test test)
{
    if (!supports(test, ts.deadline_model()))
        throw std::invalid_argument(std::string(to_string(test)) + " does not support " +
                                    std::string(to_string(ts.deadline_model())) + " deadlines");
    return partition(ts, m, strategy_spec(strategy), make_bin_test(test));
}

}  // namespace mcpart
