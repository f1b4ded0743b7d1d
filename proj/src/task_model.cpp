#include "mcpart/task_model.hpp"

#include <stdexcept>
#include <string>

namespace mcpart {

std::string_view to_string(Criticality c)
{
    return c == Criticality::HC ? "HC" : "LC";
}

std::string_view to_string(DeadlineModel d)
{
    return d == DeadlineModel::Implicit ? "implicit" : "constrained";
}

Criticality parse_criticality(std::string_view s)
{
    if (s == "HC")
        return Criticality::HC;
    if (s == "LC")
        return Criticality::LC;
    throw std::invalid_argument("unknown criticality '" + std::string(s) + "'");
}

DeadlineModel parse_deadline_model(std::string_view s)
{
    if (s == "implicit")
        return DeadlineModel::Implicit;
    if (s == "constrained")
        return DeadlineModel::Constrained;
    throw std::invalid_argument("unknown deadline model '" + std::string(s) + "'");
}

void validate(const Task& t)
{
    auto fail = [&](const char* what) {
        throw std::invalid_argument("task " + std::to_string(t.id) + ": " + what);
    };
    if (t.period <= 0 || t.wcet_lo <= 0 || t.wcet_hi <= 0 || t.deadline <= 0)
        fail("all parameters must be positive");
    if (t.wcet_lo > t.wcet_hi)
        fail("C_L > C_H");
    if (!t.is_hc() && t.wcet_lo != t.wcet_hi)
        fail("LC task must have C_L == C_H");
    if (t.wcet_hi > t.deadline)
        fail("C_H > D");
    if (t.deadline > t.period)
        fail("D > T");
}

Task make_task(Time period, Criticality crit, Time wcet_lo, Time wcet_hi, Time deadline, int id)
{
    Task t{id, period, crit, wcet_lo, wcet_hi, deadline};
    validate(t);
    return t;
}

void Utilizations::add(const Task& t)
{
    if (t.is_hc()) {
        hc_lo += t.u_lo();
        hc_hi += t.u_hi();
    } else {
        lc_lo += t.u_lo();
    }
}

TaskSet::TaskSet(int m, DeadlineModel model, std::vector<Task> tasks)
    : m_(m), model_(model), tasks_(std::move(tasks))
{
    if (m_ < 1)
        throw std::invalid_argument("task set needs m >= 1");
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        const Task& t = tasks_[i];
        if (t.id != static_cast<int>(i))
            throw std::invalid_argument("task ids must be contiguous from 0");
        validate(t);
        if (model_ == DeadlineModel::Implicit && t.deadline != t.period)
            throw std::invalid_argument("task " + std::to_string(t.id) +
                                        ": implicit-deadline set requires D == T");
    }
}

std::vector<Task> TaskSet::hc_tasks() const
{
    std::vector<Task> out;
    for (const Task& t : tasks_)
        if (t.is_hc())
            out.push_back(t);
    return out;
}

std::vector<Task> TaskSet::lc_tasks() const
{
    std::vector<Task> out;
    for (const Task& t : tasks_)
        if (!t.is_hc())
            out.push_back(t);
    return out;
}

Utilizations system_utilizations(const TaskSet& ts)
{
    Utilizations u = bin_utilizations(ts.tasks());
    const double m = ts.m();
    u.lc_lo /= m;
    u.hc_lo /= m;
    u.hc_hi /= m;
    return u;
}

Utilizations bin_utilizations(std::span<const Task> bin)
{
    Utilizations u;
    for (const Task& t : bin)
        u.add(t);
    return u;
}

double util_difference(std::span<const Task> bin)
{
    return bin_utilizations(bin).difference();
}

bool has_implicit_deadlines(std::span<const Task> tasks)
{
    for (const Task& t : tasks)
        if (t.deadline != t.period)
            return false;
    return true;
}

}  // namespace mcpart
