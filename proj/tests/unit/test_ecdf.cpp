#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "mcpart/ecdf.hpp"
#include "mcpart/edfvd.hpp"

using namespace mcpart;

namespace {

Task hc(Time t, Time cl, Time ch, int id = 0) { return make_task(t, Criticality::HC, cl, ch, t, id); }
Task lc(Time t, Time c, int id = 0) { return make_task(t, Criticality::LC, c, c, t, id); }

Time lo_sum(const std::vector<Task>& tasks, const std::vector<Time>& v, Time l)
{
    Time s = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        s += dbf_lo(tasks[i], v[i], l);
    return s;
}

Time hi_sum(const std::vector<Task>& tasks, const std::vector<Time>& v, Time l)
{
    Time s = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].is_hc())
            s += dbf_hi(tasks[i], v[i], l);
    return s;
}

bool any_lo_violation(const std::vector<Task>& tasks, const std::vector<Time>& v, Time upto)
{
    for (Time l = 0; l <= upto; ++l)
        if (lo_sum(tasks, v, l) > l)
            return true;
    return false;
}

bool any_hi_violation(const std::vector<Task>& tasks, const std::vector<Time>& v, Time upto)
{
    for (Time l = 0; l <= upto; ++l)
        if (hi_sum(tasks, v, l) > l)
            return true;
    return false;
}

Task random_small_task(Rng& rng, int id)
{
    std::uniform_int_distribution<Time> period(3, 12);
    const Time t = period(rng);
    const Time d = std::uniform_int_distribution<Time>(1, t)(rng);
    const Time ch = std::uniform_int_distribution<Time>(1, d)(rng);
    if (std::bernoulli_distribution(0.5)(rng))
        return make_task(t, Criticality::LC, ch, ch, d, id);
    const Time cl = std::uniform_int_distribution<Time>(1, ch)(rng);
    return make_task(t, Criticality::HC, cl, ch, d, id);
}

std::vector<Time> random_deadlines(Rng& rng, const std::vector<Task>& tasks)
{
    std::vector<Time> v;
    for (const Task& t : tasks)
        v.push_back(t.is_hc() ? std::uniform_int_distribution<Time>(t.wcet_lo, t.deadline)(rng)
                              : t.deadline);
    return v;
}

}  // namespace

TEST_CASE("dbf_lo")
{
    const Task t = make_task(10, Criticality::HC, 2, 4, 10);
    CHECK(dbf_lo(t, 5, 4) == 0);
    CHECK(dbf_lo(t, 5, 5) == 2);
    CHECK(dbf_lo(t, 5, 15) == 4);
    CHECK(dbf_lo(t, 5, 15) == testing::enumerate_lo_demand(t, 5, 15));
}

TEST_CASE("dbf_hi")
{
    const Task t = make_task(10, Criticality::HC, 2, 4, 10);
    CHECK(dbf_hi(t, 5, 4) == 0);
    CHECK(dbf_hi(t, 5, 5) == 2);
    CHECK(dbf_hi(t, 5, 6) == 3);
    CHECK(dbf_hi(t, 5, 7) == 4);
    CHECK(dbf_hi(t, 5, 10) == 4);
    CHECK(dbf_hi(t, 5, 15) == 6);
    // Without a virtual deadline there is no carry-over credit window.
    CHECK(dbf_hi(t, 10, 0) == 2);
    CHECK(dbf_hi(t, 10, 2) == 4);
}

TEST_CASE("demand functions are monotone")
{
    Rng rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const Task t = random_small_task(rng, 0);
        if (!t.is_hc())
            continue;
        for (Time v = t.wcet_lo; v <= t.deadline; ++v) {
            for (Time l = 0; l <= 4 * t.period; ++l) {
                CHECK(dbf_lo(t, v, l) <= dbf_lo(t, v, l + 1));
                CHECK(dbf_hi(t, v, l) <= dbf_hi(t, v, l + 1));
                if (v > t.wcet_lo) {
                    CHECK(dbf_hi(t, v - 1, l) <= dbf_hi(t, v, l));
                    CHECK(dbf_lo(t, v - 1, l) >= dbf_lo(t, v, l));
                }
            }
        }
        if (t.wcet_hi < t.deadline) {
            Task bigger = t;
            ++bigger.wcet_hi;
            for (Time l = 0; l <= 3 * t.period; ++l)
                CHECK(dbf_hi(bigger, t.deadline, l) >= dbf_hi(t, t.deadline, l));
        }
    }
}

TEST_CASE("dbf_lo matches job enumeration")
{
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Task> tasks;
        for (int i = 0; i < 3; ++i)
            tasks.push_back(random_small_task(rng, i));
        const auto v = random_deadlines(rng, tasks);
        const Time h = testing::hyperperiod(tasks);
        for (Time l = 0; l <= 2 * h; ++l)
            for (std::size_t i = 0; i < tasks.size(); ++i)
                CHECK(dbf_lo(tasks[i], v[i], l) == testing::enumerate_lo_demand(tasks[i], v[i], l));
    }
}

TEST_CASE("lmax_bound")
{
    const std::vector<Task> one{hc(10, 5, 5)};
    const Horizon h = lmax_bound(one, {{10}});
    CHECK_FALSE(h.cap_exceeded);
    CHECK(h.value >= 10);

    const std::vector<Task> over{lc(10, 6, 0), lc(10, 5, 1)};
    CHECK(lmax_bound(over, {{10, 10}}).value == 0);
    CHECK_FALSE(ecdf_schedulable(over).schedulable);

    // Exactly full: one hyperperiod past the longest deadline.
    const std::vector<Task> full{lc(10, 6, 0), lc(15, 6, 1)};
    CHECK(lmax_bound(full, {{10, 15}}).value == 15 + 30);
    CHECK(ecdf_schedulable(full).schedulable);
    const std::vector<Task> full_hi{hc(10, 2, 6, 0), hc(15, 1, 6, 1)};
    CHECK(lmax_bound(full_hi, {{10, 15}}).value == 15 + 30);

    const std::vector<Task> near{lc(1000, 999, 0)};
    const Horizon capped = lmax_bound(near, {{1000}}, 50);
    CHECK(capped.cap_exceeded);
}

TEST_CASE("lmax_bound agrees with a long brute-force scan on two-task sets")
{
    Rng rng(23);
    int compared = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        const std::vector<Task> tasks{random_small_task(rng, 0), random_small_task(rng, 1)};
        const auto v = random_deadlines(rng, tasks);
        const Horizon h = lmax_bound(tasks, {v});
        if (h.value == 0 || h.cap_exceeded)
            continue;
        ++compared;
        const Time far = 4 * testing::hyperperiod(tasks);
        CHECK(any_lo_violation(tasks, v, far) == any_lo_violation(tasks, v, h.value));
        CHECK(any_hi_violation(tasks, v, far) == any_hi_violation(tasks, v, h.value));
        CHECK(lo_demand_violation(tasks, {v}, h.value).has_value() ==
              any_lo_violation(tasks, v, h.value));
        CHECK(hi_demand_violation(tasks, {v}, 0, h.value).has_value() ==
              any_hi_violation(tasks, v, h.value));
    }
    CHECK(compared > 1000);
}

TEST_CASE("checkpoint scans find violations")
{
    Rng rng(29);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<Task> tasks;
        for (int i = 0; i < 3; ++i)
            tasks.push_back(random_small_task(rng, i));
        const auto v = random_deadlines(rng, tasks);
        const Time horizon = 3 * testing::hyperperiod(tasks);
        std::optional<Time> lo, hi;
        for (Time l = 0; l <= horizon; ++l) {
            if (!lo && lo_sum(tasks, v, l) > l)
                lo = l;
            if (!hi && hi_sum(tasks, v, l) > l)
                hi = l;
        }
        CHECK(lo_demand_violation(tasks, {v}, horizon) == lo);
        // Overlapping carry-over ramps can push HI slack below zero between
        // checkpoints; the scan then reports the ramp end.
        const auto found = hi_demand_violation(tasks, {v}, 0, horizon);
        REQUIRE(found.has_value() == hi.has_value());
        if (found) {
            CHECK(*found >= *hi);
            CHECK(hi_sum(tasks, v, *found) > *found);
        }
    }
}

TEST_CASE("ecdf_schedulable examples")
{
    SUBCASE("LC-only set")
    {
        const std::vector<Task> tasks{lc(10, 3, 0), lc(20, 8, 1), lc(40, 10, 2)};
        const DbfVerdict v = ecdf_schedulable(tasks);
        CHECK(v.schedulable);
        CHECK(v.assignment.deadline == std::vector<Time>{10, 20, 40});
        const std::vector<Task> full{lc(10, 3, 0), lc(20, 8, 1), lc(40, 12, 2)};
        CHECK(ecdf_schedulable(full).schedulable);
    }
    SUBCASE("single HC task")
    {
        // dbf_hi with V = 10 is 4 at l = 2; V = 8 is the first value with
        // 2 + (l - (D - V)) <= l on the carry-over ramp.
        const std::vector<Task> tasks{hc(10, 2, 4)};
        CHECK(dbf_hi(tasks[0], 10, 2) == 4);
        CHECK(dbf_hi(tasks[0], 8, 2) == 2);
        const DbfVerdict v = ecdf_schedulable(tasks);
        CHECK(v.schedulable);
        CHECK(v.assignment.deadline == std::vector<Time>{8});
    }
    SUBCASE("empty bin")
    {
        CHECK(ecdf_schedulable({}).schedulable);
    }
    SUBCASE("bins accepted by EDF-VD in the worked partition examples")
    {
        const std::vector<std::vector<Task>> bins{
            {hc(100, 50, 60, 0), hc(100, 35, 40, 2)},
            {hc(100, 10, 50, 1), lc(100, 50, 3)},
            {lc(100, 90, 2)},
            {hc(100, 30, 60, 0), hc(100, 20, 35, 1)},
        };
        for (const auto& bin : bins) {
            CHECK(edfvd_schedulable(bin).schedulable);
            CHECK(ecdf_schedulable(bin).schedulable);
        }
    }
    SUBCASE("tuning lowers a virtual deadline when HI demand needs it")
    {
        // With V = D the HI check fails at once: two carry-over jobs owe 6 each.
        const std::vector<Task> tasks{hc(20, 3, 9, 0), hc(20, 3, 9, 1), lc(20, 4, 2)};
        const DbfVerdict v = ecdf_schedulable(tasks);
        CHECK(v.schedulable);
        CHECK(v.assignment.deadline[0] + v.assignment.deadline[1] < 40);
    }
    SUBCASE("overloaded HI mode is rejected")
    {
        const std::vector<Task> tasks{hc(10, 1, 6, 0), hc(10, 1, 5, 1)};
        const DbfVerdict v = ecdf_schedulable(tasks);
        CHECK_FALSE(v.schedulable);
    }
}

TEST_CASE("accepted assignments pass both checks at every integer point")
{
    Rng rng(37);
    int accepted = 0, rejected = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        std::vector<Task> tasks;
        const int n = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int i = 0; i < n; ++i)
            tasks.push_back(random_small_task(rng, i));
        const DbfVerdict verdict = ecdf_schedulable(tasks);
        const auto& v = verdict.assignment.deadline;
        REQUIRE(v.size() == tasks.size());
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            CHECK(v[i] <= tasks[i].deadline);
            CHECK(v[i] >= tasks[i].wcet_lo);
            if (!tasks[i].is_hc())
                CHECK(v[i] == tasks[i].deadline);
        }
        if (!verdict.schedulable) {
            ++rejected;
            continue;
        }
        ++accepted;
        const Time far = 4 * testing::hyperperiod(tasks);
        CHECK_FALSE(any_lo_violation(tasks, v, far));
        CHECK_FALSE(any_hi_violation(tasks, v, far));
    }
    CHECK(accepted > 100);
    CHECK(rejected > 100);
}

TEST_CASE("ECDF accepts what EDF-VD accepts on most implicit bins")
{
    Rng rng(43);
    int both = 0, edfvd_only = 0, ecdf_only = 0;
    for (int trial = 0; trial < 1500; ++trial) {
        const auto bin = testing::random_bin(rng, DeadlineModel::Implicit, 0.7, 1.0);
        const bool a = edfvd_schedulable(bin).schedulable;
        const bool b = ecdf_schedulable(bin).schedulable;
        both += a && b;
        edfvd_only += a && !b;
        ecdf_only += b && !a;
    }
    MESSAGE("both " << both << ", EDF-VD only " << edfvd_only << ", ECDF only " << ecdf_only);
    CHECK(ecdf_only >= edfvd_only);
}
