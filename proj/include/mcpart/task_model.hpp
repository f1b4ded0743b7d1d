#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mcpart {

/// Integer time unit shared by every analysis and the simulator.
using Time = std::int64_t;

enum class Criticality { LC, HC };

enum class DeadlineModel { Implicit, Constrained };

std::string_view to_string(Criticality c);
std::string_view to_string(DeadlineModel d);
Criticality parse_criticality(std::string_view s);
DeadlineModel parse_deadline_model(std::string_view s);

/// One sporadic dual-criticality task.
///
/// LC tasks carry a single budget: wcet_hi == wcet_lo.
struct Task {
    int id = 0;
    Time period = 0;
    Criticality crit = Criticality::LC;
    Time wcet_lo = 0;
    Time wcet_hi = 0;
    Time deadline = 0;

    bool is_hc() const { return crit == Criticality::HC; }
    double u_lo() const { return static_cast<double>(wcet_lo) / static_cast<double>(period); }
    double u_hi() const { return static_cast<double>(wcet_hi) / static_cast<double>(period); }

    friend bool operator==(const Task&, const Task&) = default;
};

/// Validating constructor. Throws std::invalid_argument on any invariant
/// violation (non-positive field, C_L > C_H, C_H > D, D > T, or an LC task
/// with two distinct budgets).
Task make_task(Time period, Criticality crit, Time wcet_lo, Time wcet_hi, Time deadline,
               int id = 0);

/// Re-checks the invariants of an already-built task.
void validate(const Task& t);

/// Utilization triple. At system level the values are normalized by m; per
/// processor they are plain sums.
struct Utilizations {
    double lc_lo = 0.0;  // sum of u_L over LC tasks
    double hc_lo = 0.0;  // sum of u_L over HC tasks
    double hc_hi = 0.0;  // sum of u_H over HC tasks

    /// Extra HC demand absorbed at a mode switch.
    double difference() const { return hc_hi - hc_lo; }

    void add(const Task& t);
};

class TaskSet {
public:
    TaskSet() = default;

    /// Validates every task, contiguous ids from 0, m >= 1 and, for the
    /// implicit model, D == T.
    TaskSet(int m, DeadlineModel model, std::vector<Task> tasks);

    int m() const { return m_; }
    DeadlineModel deadline_model() const { return model_; }
    std::span<const Task> tasks() const { return tasks_; }
    std::size_t size() const { return tasks_.size(); }
    const Task& operator[](std::size_t i) const { return tasks_[i]; }

    std::vector<Task> hc_tasks() const;
    std::vector<Task> lc_tasks() const;

    friend bool operator==(const TaskSet&, const TaskSet&) = default;

private:
    int m_ = 1;
    DeadlineModel model_ = DeadlineModel::Implicit;
    std::vector<Task> tasks_;
};

/// Per-criticality sums over the whole set, divided by m.
Utilizations system_utilizations(const TaskSet& ts);

/// Un-normalized sums over the tasks of one processor.
Utilizations bin_utilizations(std::span<const Task> bin);

double util_difference(std::span<const Task> bin);

bool has_implicit_deadlines(std::span<const Task> tasks);

}  // namespace mcpart
