#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "mcpart/amc.hpp"

using namespace mcpart;

namespace {

// tau1 HC (T=D=5, C=1/2), tau2 LC (T=D=10, C=1), tau3 HC (T=D=20, C=2/3).
std::vector<Task> three_tasks()
{
    return {make_task(5, Criticality::HC, 1, 2, 5, 0), make_task(10, Criticality::LC, 1, 1, 10, 1),
            make_task(20, Criticality::HC, 2, 3, 20, 2)};
}

std::vector<std::size_t> ranks(std::vector<Task> tasks) { return assign_priorities(tasks).rank; }

Task with_deadline(Time d, int id) { return make_task(20, Criticality::LC, 1, 1, d, id); }

}  // namespace

TEST_CASE("deadline-monotonic priorities")
{
    CHECK(ranks({with_deadline(5, 0), with_deadline(10, 1), with_deadline(20, 2)}) ==
          std::vector<std::size_t>{0, 1, 2});
    CHECK(ranks({with_deadline(10, 0), with_deadline(10, 1)}) == std::vector<std::size_t>{0, 1});
    CHECK(ranks({with_deadline(20, 0), with_deadline(5, 1)}) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("LO-mode response times")
{
    const auto tasks = three_tasks();
    const RtaResult r = rta_lo(tasks, assign_priorities(tasks));
    CHECK(r.schedulable);
    CHECK(r.lo[0] == 1);
    CHECK(r.lo[1] == 2);
    CHECK(r.lo[2] == 4);

    for (const Task& t : tasks) {
        const std::vector<Task> alone{t};
        CHECK(rta_lo(alone, assign_priorities(alone)).lo[0] == t.wcet_lo);
    }
}

TEST_CASE("AMC-rtb")
{
    const auto tasks = three_tasks();
    const RtaResult r = amc_rtb(tasks, assign_priorities(tasks));
    CHECK(r.schedulable);
    REQUIRE(r.hi[0].has_value());
    REQUIRE(r.hi[2].has_value());
    CHECK(*r.hi[0] == 2);
    CHECK(*r.hi[2] == 8);
    CHECK_FALSE(r.hi[1].has_value());

    // Hand iteration: 3 -> 3 + 1*2 + 1 = 6 -> 3 + 2*2 + 1 = 8 -> 8.
    Time x = 3;
    for (int i = 0; i < 10; ++i)
        x = 3 + (x + 4) / 5 * 2 + 1;
    CHECK(x == 8);
}

TEST_CASE("LC-only bins reduce to the LO-mode verdict")
{
    const std::vector<Task> ok{make_task(10, Criticality::LC, 4, 4, 10, 0),
                               make_task(10, Criticality::LC, 5, 5, 10, 1)};
    const std::vector<Task> bad{make_task(10, Criticality::LC, 6, 6, 10, 0),
                                make_task(10, Criticality::LC, 5, 5, 10, 1)};
    for (const auto& bin : {ok, bad}) {
        const PriorityOrder order = assign_priorities(bin);
        CHECK(amc_rtb(bin, order).schedulable == rta_lo(bin, order).schedulable);
        CHECK(amc_max(bin, order).schedulable == rta_lo(bin, order).schedulable);
    }
    const PriorityOrder order = assign_priorities(bad);
    CHECK(rta_lo(bad, order).failing_task == 1);
}

TEST_CASE("AMC-max")
{
    const auto tasks = three_tasks();
    const RtaResult mx = amc_max(tasks, assign_priorities(tasks));
    const RtaResult rtb = amc_rtb(tasks, assign_priorities(tasks));
    CHECK(mx.schedulable);
    REQUIRE(mx.hi[2].has_value());
    CHECK(*mx.hi[2] == 8);
    CHECK(*mx.hi[2] <= *rtb.hi[2]);
    CHECK(*rtb.hi[2] <= tasks[2].deadline);

    const std::vector<Task> alone{make_task(10, Criticality::HC, 2, 7, 9)};
    CHECK(*amc_max(alone, assign_priorities(alone)).hi[0] == 7);
}

TEST_CASE("LO jobs at the switch")
{
    const Task k = make_task(5, Criticality::HC, 1, 2, 5);
    CHECK(amc_lo_jobs(k, 0, 5) == 0);
    CHECK(amc_lo_jobs(k, 0, 12) == 0);
    CHECK(amc_lo_jobs(k, 7, 12) == 1);
    CHECK(amc_lo_jobs(k, 10, 12) == 1);
    CHECK(amc_lo_jobs(k, 12, 25) == 1);
    // Constrained: the HI window starts T - D earlier than the switch.
    const Task c = make_task(10, Criticality::HC, 1, 2, 4);
    CHECK(amc_lo_jobs(c, 0, 30) == 0);
    CHECK(amc_lo_jobs(c, 20, 30) == 1);
    CHECK(amc_lo_jobs(c, 25, 30) == 2);
    CHECK(amc_lo_jobs(c, 7, 0) == 0);
}

TEST_CASE("a non-permutation order is rejected")
{
    const auto tasks = three_tasks();
    CHECK_THROWS(rta_lo(tasks, PriorityOrder{{0, 0, 1}}));
    CHECK_THROWS(rta_lo(tasks, PriorityOrder{{0, 1}}));
}

TEST_CASE("AMC-max dominates AMC-rtb")
{
    Rng rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto bin = testing::random_bin(rng, DeadlineModel::Constrained, 0.3, 1.0);
        const PriorityOrder order = assign_priorities(bin);
        const RtaResult rtb = amc_rtb(bin, order);
        const RtaResult mx = amc_max(bin, order);
        if (rtb.schedulable)
            CHECK(mx.schedulable);
        for (std::size_t i = 0; i < bin.size(); ++i) {
            if (rtb.hi[i] && mx.hi[i] && *rtb.hi[i] <= bin[i].deadline &&
                *mx.hi[i] <= bin[i].deadline)
                CHECK(*mx.hi[i] <= *rtb.hi[i]);
        }
    }
}

TEST_CASE("response times are monotone in budgets")
{
    Rng rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        auto bin = testing::random_bin(rng, DeadlineModel::Constrained, 0.2, 0.7);
        const PriorityOrder order = assign_priorities(bin);
        const RtaResult before = amc_max(bin, order);
        if (!before.schedulable)
            continue;
        std::uniform_int_distribution<std::size_t> pick(0, bin.size() - 1);
        Task& t = bin[pick(rng)];
        if (t.wcet_hi >= t.deadline)
            continue;
        ++t.wcet_hi;
        if (!t.is_hc())
            t.wcet_lo = t.wcet_hi;
        const RtaResult after = amc_max(bin, order);
        for (std::size_t i = 0; i < bin.size(); ++i) {
            if (i < after.lo.size() && after.lo[i] > 0)
                CHECK(after.lo[i] >= before.lo[i]);
            if (after.hi[i] && before.hi[i])
                CHECK(*after.hi[i] >= *before.hi[i]);
        }
    }
}
