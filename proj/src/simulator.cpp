#include "mcpart/simulator.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mcpart/ecdf.hpp"
#include "mcpart/edfvd.hpp"

namespace mcpart {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr Time kNever = std::numeric_limits<Time>::max();

struct Job {
    bool active = false;
    Time release = 0;
    Time deadline = 0;
    Time demand = 0;
    Time executed = 0;
};

}  // namespace

bool Scenario::overruns(std::size_t task, Time job) const
{
    switch (kind) {
    case Kind::AllLo: return false;
    case Kind::AllHi: return true;
    case Kind::Random: break;
    }
    const std::uint64_t h =
        splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(task) * 0x100000001b3ULL +
                                     static_cast<std::uint64_t>(job)));
    const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
    return unit < p_overrun;
}

SimReport simulate(std::span<const Task> tasks, const Runtime& runtime, const Scenario& scenario,
                   Time horizon)
{
    const std::size_t n = tasks.size();
    const auto* edf = std::get_if<EdfVdRuntime>(&runtime);
    const auto* amc = std::get_if<AmcRuntime>(&runtime);
    if (edf && edf->lo_deadline.size() != n)
        throw std::invalid_argument("virtual deadlines do not match task count");
    std::vector<std::size_t> rank(n);
    if (amc) {
        if (amc->order.rank.size() != n)
            throw std::invalid_argument("priority order does not match task count");
        for (std::size_t p = 0; p < n; ++p)
            rank[amc->order.rank[p]] = p;
    }

    std::vector<Job> jobs(n);
    std::vector<Time> next_release(n, 0);
    std::vector<Time> job_index(n, 0);
    bool hi_mode = false;
    SimReport report;

    auto dispatch_key = [&](std::size_t i) -> Time {
        if (amc)
            return static_cast<Time>(rank[i]);
        return hi_mode ? jobs[i].deadline : jobs[i].release + edf->lo_deadline[i];
    };

    Time t = 0;
    while (true) {
        // Deadline check; completions at t were already retired.
        for (std::size_t i = 0; i < n; ++i) {
            if (jobs[i].active && jobs[i].deadline <= t &&
                (!report.miss || jobs[i].deadline < report.miss->deadline)) {
                report.miss = DeadlineMiss{tasks[i].id, jobs[i].deadline};
            }
        }
        if (report.miss) {
            report.trace_length = t;
            return report;
        }
        if (t >= horizon)
            break;

        for (std::size_t i = 0; i < n; ++i) {
            if (next_release[i] != t)
                continue;
            const Task& task = tasks[i];
            if (!(hi_mode && !task.is_hc())) {
                Job& j = jobs[i];
                j.active = true;
                j.release = t;
                j.deadline = t + task.deadline;
                j.executed = 0;
                j.demand = task.is_hc() && scenario.overruns(i, job_index[i]) ? task.wcet_hi
                                                                               : task.wcet_lo;
            }
            ++job_index[i];
            next_release[i] += task.period;
        }

        std::optional<std::size_t> run;
        for (std::size_t i = 0; i < n; ++i) {
            if (!jobs[i].active)
                continue;
            if (!run || dispatch_key(i) < dispatch_key(*run))
                run = i;
        }

        Time next_event = horizon;
        for (std::size_t i = 0; i < n; ++i) {
            next_event = std::min(next_event, next_release[i]);
            if (jobs[i].active)
                next_event = std::min(next_event, jobs[i].deadline);
        }

        if (!run) {
            t = next_event;
            continue;
        }

        Job& j = jobs[*run];
        const Task& task = tasks[*run];
        Time step = std::min(j.demand - j.executed, next_event - t);
        const bool may_switch = !hi_mode && task.is_hc() && j.demand > task.wcet_lo;
        if (may_switch)
            step = std::min(step, task.wcet_lo - j.executed);
        j.executed += step;
        t += step;

        if (j.executed == j.demand) {
            j.active = false;
        } else if (may_switch && j.executed == task.wcet_lo) {
            hi_mode = true;
            report.switch_time = t;
            for (std::size_t i = 0; i < n; ++i)
                if (!tasks[i].is_hc())
                    jobs[i].active = false;
        }
    }
    report.trace_length = t;
    return report;
}

Time falsification_horizon(std::span<const Task> tasks, Time hyperperiod_cap)
{
    Time hyper = 1;
    Time longest = 0;
    for (const Task& t : tasks) {
        longest = std::max(longest, t.deadline);
        if (hyper <= hyperperiod_cap)
            hyper = std::lcm(hyper, t.period);
    }
    const Time window = hyper > hyperperiod_cap / 2 ? hyperperiod_cap : 2 * hyper;
    return std::min(window, hyperperiod_cap) + longest;
}

Runtime runtime_for(Test test, std::span<const Task> tasks)
{
    auto rejected = [&]() {
        return std::invalid_argument(std::string(to_string(test)) + " rejects the task set");
    };
    switch (test) {
    case Test::EdfVd: {
        const EdfVdVerdict verdict = edfvd_schedulable(tasks);
        if (!verdict.schedulable)
            throw rejected();
        return EdfVdRuntime{edfvd_virtual_deadlines(tasks, verdict.x)};
    }
    case Test::Ecdf: {
        DbfVerdict verdict = ecdf_schedulable(tasks);
        if (!verdict.schedulable)
            throw rejected();
        return EdfVdRuntime{std::move(verdict.assignment.deadline)};
    }
    case Test::AmcRtb:
    case Test::AmcMax:
        if (!bin_accepts(test, tasks))
            throw rejected();
        return AmcRuntime{assign_priorities(tasks)};
    }
    throw std::invalid_argument("unknown test");
}

FalsifyReport falsify(std::span<const Task> tasks, const Runtime& runtime, int random_scenarios,
                      Rng& rng, const FalsifyOptions& opts)
{
    FalsifyReport report;
    std::vector<Scenario> scenarios{Scenario::all_lo(), Scenario::all_hi()};
    for (int k = 0; k < random_scenarios; ++k)
        scenarios.push_back(Scenario::random(rng()));

    const Time horizon = falsification_horizon(tasks, opts.hyperperiod_cap);
    if (horizon > opts.max_horizon) {
        report.scenarios_skipped = static_cast<int>(scenarios.size());
        report.diagnostics.push_back("horizon " + std::to_string(horizon) + " exceeds limit " +
                                     std::to_string(opts.max_horizon));
        return report;
    }

    for (std::size_t k = 0; k < scenarios.size(); ++k) {
        const SimReport sim = simulate(tasks, runtime, scenarios[k], horizon);
        ++report.scenarios_run;
        if (sim.miss) {
            report.counterexample =
                Counterexample{static_cast<int>(k), scenarios[k], *sim.miss, sim.switch_time};
            return report;
        }
    }
    return report;
}

FalsifyReport falsify(Test test, std::span<const Task> tasks, int random_scenarios, Rng& rng,
                      const FalsifyOptions& opts)
{
    return falsify(tasks, runtime_for(test, tasks), random_scenarios, rng, opts);
}

}  // namespace mcpart
