#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mcpart/bin_test.hpp"
#include "mcpart/task_model.hpp"

namespace mcpart {

enum class Strategy { CaUdp, CuUdp, CaWuF, CaFF, CaNosortFF, EcaWuF };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);
std::vector<Strategy> all_strategies();

/// Order in which tasks are offered to the processors.
enum class Ordering {
    CriticalityAware,          // HC by u_H desc, then LC by u_L desc
    CriticalityAwareUnsorted,  // HC then LC, input order
    CriticalityUnaware,        // one list by criticality-level utilization desc
    HeavyLcFirst,              // heavy LC, then HC, then remaining LC
};

/// Order in which processors are tried for one task.
enum class FitRule {
    FirstFit,        // by index
    UtilDifference,  // increasing U_HH - U_HL
    HcUtilization,   // increasing U_HH
};

struct StrategySpec {
    Strategy id;
    Ordering ordering;
    FitRule hc_fit;
    FitRule lc_fit;
    double heavy_lc_threshold = 0.5;  // ECA only: LC tasks with u_L above this go first
};

StrategySpec strategy_spec(Strategy s, double heavy_lc_threshold = 0.5);

/// Tasks assigned to one processor with running utilization sums.
class ProcessorBin {
public:
    explicit ProcessorBin(int index) : index_(index) {}

    int index() const { return index_; }
    std::span<const Task> tasks() const { return tasks_; }
    const Utilizations& utilization() const { return util_; }
    std::vector<int> task_ids() const;

    void add(const Task& t);

private:
    int index_;
    std::vector<Task> tasks_;
    Utilizations util_;
};

struct PartitionFailure {
    int task_id;
    Criticality phase;
};

struct Partition {
    std::vector<ProcessorBin> bins;
    std::optional<PartitionFailure> failure;

    bool success() const { return !failure.has_value(); }
};

/// Called once per allocated (or unplaceable) task with the processor order
/// that was tried, the number of processors actually tested and the chosen
/// bin index (-1 when none accepted).
using TrialObserver =
    std::function<void(const Task& task, std::span<const int> candidates, int tried, int chosen)>;

std::vector<Task> order_tasks(const StrategySpec& spec, std::span<const Task> tasks);

std::vector<int> candidate_processors(const StrategySpec& spec, const Task& task,
                                      std::span<const ProcessorBin> bins);

Partition partition(const TaskSet& ts, int m, const StrategySpec& spec, const BinTest& test,
                    const TrialObserver& observer = {});

/// Checks that the test supports the set's deadline model before running.
Partition partition(const TaskSet& ts, int m, Strategy strategy, Test test);

}  // namespace mcpart
