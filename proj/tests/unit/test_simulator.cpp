#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "mcpart/amc.hpp"
#include "mcpart/simulator.hpp"

using namespace mcpart;

namespace {

Task hc(Time t, Time cl, Time ch, int id = 0) { return make_task(t, Criticality::HC, cl, ch, t, id); }
Task lc(Time t, Time c, int id = 0) { return make_task(t, Criticality::LC, c, c, t, id); }

}  // namespace

TEST_CASE("single HC task finishes each job at its deadline")
{
    const std::vector<Task> tasks{hc(2, 1, 2)};
    const SimReport r = simulate(tasks, EdfVdRuntime{{1}}, Scenario::all_hi(), 20);
    CHECK_FALSE(r.miss.has_value());
    REQUIRE(r.switch_time.has_value());
    CHECK(*r.switch_time == 1);
}

TEST_CASE("two HC tasks overload HI mode")
{
    const std::vector<Task> tasks{hc(2, 1, 2, 0), hc(2, 1, 2, 1)};
    const SimReport r = simulate(tasks, EdfVdRuntime{{2, 2}}, Scenario::all_hi(), 20);
    REQUIRE(r.miss.has_value());
    CHECK(r.miss->deadline == 2);
}

TEST_CASE("LC jobs are dropped at the switch")
{
    const std::vector<Task> tasks{hc(4, 1, 3, 0), lc(4, 2, 1)};
    const SimReport lo = simulate(tasks, EdfVdRuntime{{2, 4}}, Scenario::all_lo(), 40);
    CHECK_FALSE(lo.miss.has_value());
    CHECK_FALSE(lo.switch_time.has_value());
    const SimReport hi = simulate(tasks, EdfVdRuntime{{2, 4}}, Scenario::all_hi(), 40);
    CHECK_FALSE(hi.miss.has_value());
    CHECK(hi.switch_time == 1);
}

TEST_CASE("AMC runtime follows fixed priorities")
{
    // Low-priority task with the shorter period misses behind a long job.
    const std::vector<Task> tasks{make_task(20, Criticality::LC, 6, 6, 7, 0),
                                  make_task(5, Criticality::LC, 2, 2, 5, 1)};
    const PriorityOrder order{{0, 1}};
    const SimReport r = simulate(tasks, AmcRuntime{order}, Scenario::all_lo(), 40);
    REQUIRE(r.miss.has_value());
    CHECK(r.miss->task_id == 1);
    CHECK(r.miss->deadline == 5);
}

TEST_CASE("EDF meets every deadline at full utilization")
{
    // Work conservation plus EDF optimality: U = 1 leaves no idle slack.
    const std::vector<Task> tasks{lc(4, 1, 0), lc(6, 3, 1), lc(12, 3, 2)};
    const SimReport r = simulate(tasks, EdfVdRuntime{{4, 6, 12}}, Scenario::all_lo(), 240);
    CHECK_FALSE(r.miss.has_value());
    CHECK(r.trace_length == 240);
    const std::vector<Task> over{lc(4, 1, 0), lc(6, 3, 1), lc(12, 4, 2)};
    CHECK(simulate(over, EdfVdRuntime{{4, 6, 12}}, Scenario::all_lo(), 240).miss.has_value());
}

TEST_CASE("scenarios")
{
    CHECK_FALSE(Scenario::all_lo().overruns(0, 0));
    CHECK(Scenario::all_hi().overruns(3, 9));
    const Scenario s = Scenario::random(5, 0.3);
    int over = 0;
    for (Time j = 0; j < 10000; ++j) {
        CHECK(s.overruns(1, j) == s.overruns(1, j));
        over += s.overruns(1, j);
    }
    CHECK(over > 2700);
    CHECK(over < 3300);
}

TEST_CASE("simulation is deterministic")
{
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const auto tasks = testing::random_bin(rng, DeadlineModel::Constrained, 0.8, 1.0);
        std::vector<Time> v;
        for (const Task& t : tasks)
            v.push_back(t.deadline);
        const Scenario sc = Scenario::random(trial);
        const SimReport a = simulate(tasks, EdfVdRuntime{v}, sc, 5000);
        const SimReport b = simulate(tasks, EdfVdRuntime{v}, sc, 5000);
        CHECK(a.miss == b.miss);
        CHECK(a.switch_time == b.switch_time);
        CHECK(a.trace_length == b.trace_length);
    }
}

TEST_CASE("all-LO runs of LO-schedulable sets never miss under AMC")
{
    Rng rng(13);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto tasks = testing::random_bin(rng, DeadlineModel::Constrained, 0.3, 0.9);
        const PriorityOrder order = assign_priorities(tasks);
        if (!rta_lo(tasks, order).schedulable)
            continue;
        ++checked;
        const SimReport r =
            simulate(tasks, AmcRuntime{order}, Scenario::all_lo(), falsification_horizon(tasks));
        CHECK_FALSE(r.miss.has_value());
    }
    CHECK(checked > 100);
}

TEST_CASE("falsification horizon")
{
    const std::vector<Task> tasks{hc(4, 1, 2, 0), make_task(6, Criticality::LC, 1, 1, 5, 1)};
    CHECK(falsification_horizon(tasks) == 2 * 12 + 5);
    const std::vector<Task> coprime{lc(499, 1, 0), lc(491, 1, 1), lc(487, 1, 2)};
    CHECK(falsification_horizon(coprime) == 100000 + 499);
}

TEST_CASE("falsify")
{
    Rng rng(21);
    SUBCASE("accepted single-task sets survive")
    {
        for (Test test : {Test::EdfVd, Test::AmcMax, Test::Ecdf}) {
            const std::vector<Task> tasks{hc(10, 3, 8)};
            const FalsifyReport rep = falsify(test, tasks, 20, rng);
            CHECK_FALSE(rep.counterexample.has_value());
            CHECK(rep.scenarios_run == 22);
        }
    }
    SUBCASE("an always-accepting test is refuted on an overloaded set")
    {
        const std::vector<Task> tasks{hc(10, 4, 8, 0), hc(10, 4, 8, 1), lc(10, 1, 2)};
        const FalsifyReport rep = falsify(tasks, EdfVdRuntime{{10, 10, 10}}, 10, rng);
        REQUIRE(rep.counterexample.has_value());
        CHECK(rep.counterexample->scenario_index == 1);
    }
    SUBCASE("rejected sets have no runtime")
    {
        const std::vector<Task> tasks{hc(10, 4, 8, 0), hc(10, 4, 8, 1)};
        CHECK_THROWS_AS(falsify(Test::EdfVd, tasks, 5, rng), std::invalid_argument);
    }
    SUBCASE("oversized horizons are skipped with a diagnostic")
    {
        const std::vector<Task> tasks{hc(10, 1, 2, 0), lc(7, 1, 1)};
        FalsifyOptions opts;
        opts.max_horizon = 50;
        const FalsifyReport rep = falsify(Test::AmcMax, tasks, 3, rng, opts);
        CHECK(rep.scenarios_run == 0);
        CHECK(rep.scenarios_skipped == 5);
        CHECK(rep.diagnostics.size() == 1);
    }
}
