#include "mcpart/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcpart {

void GeneratorConfig::validate() const
{
    auto fail = [](const char* what) { throw std::invalid_argument(what); };
    if (m < 1)
        fail("generator: m must be >= 1");
    if (p_h < 0.0 || p_h > 1.0)
        fail("generator: P_H must lie in [0, 1]");
    if (!(u_min > 0.0 && u_min <= u_max && u_max <= 1.0))
        fail("generator: need 0 < u_min <= u_max <= 1");
    if (targets.hc_hi < 0.0 || targets.hc_lo < 0.0 || targets.lc_lo < 0.0)
        fail("generator: utilization targets must be non-negative");
    if (targets.hc_lo > targets.hc_hi)
        fail("generator: need U_HL <= U_HH");
    if (period_lo < 1 || period_lo > period_hi)
        fail("generator: need 1 <= T_lo <= T_hi");
    if (min_tasks() < 1 || min_tasks() > max_tasks())
        fail("generator: invalid task-count bounds");
    if (max_retries < 1 || sampler_attempts < 1)
        fail("generator: retry budgets must be positive");
}

Time draw_period(Rng& rng, Time lo, Time hi)
{
    if (hi <= lo)
        return lo;
    std::uniform_real_distribution<double> log_period(std::log(static_cast<double>(lo)),
                                                      std::log(static_cast<double>(hi)));
    const auto t = static_cast<Time>(std::floor(std::exp(log_period(rng))));
    return std::clamp(t, lo, hi);
}

std::optional<std::vector<double>> uunifast_discard(Rng& rng, int n, double total, double lo,
                                                    double hi, int attempts)
{
    if (n <= 0) {
        if (total == 0.0)
            return std::vector<double>{};
        return std::nullopt;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> u(n);
    for (int a = 0; a < attempts; ++a) {
        double remaining = total;
        for (int i = 0; i < n - 1; ++i) {
            const double next = remaining * std::pow(unit(rng), 1.0 / static_cast<double>(n - 1 - i));
            u[i] = remaining - next;
            remaining = next;
        }
        u[n - 1] = remaining;
        if (std::all_of(u.begin(), u.end(), [&](double x) { return x >= lo && x <= hi; }))
            return u;
    }
    return std::nullopt;
}

std::vector<double> scaled_lo_utilizations(Rng& rng, const std::vector<double>& caps,
                                           double total, double lo)
{
    const std::size_t n = caps.size();
    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uniform_real_distribution<double> draw(lo, std::max(lo, caps[i]));
        raw[i] = draw(rng);
    }
    auto at_scale = [&](double s, std::size_t i) { return std::clamp(s * raw[i], lo, caps[i]); };
    auto sum_at = [&](double s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            sum += at_scale(s, i);
        return sum;
    };

    double s_lo = 0.0, s_hi = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s_hi = std::max(s_hi, caps[i] / raw[i]);
    for (int it = 0; it < 200 && s_hi - s_lo > 1e-15 * s_hi; ++it) {
        const double mid = 0.5 * (s_lo + s_hi);
        (sum_at(mid) < total ? s_lo : s_hi) = mid;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = at_scale(s_hi, i);
    return out;
}

namespace {

Time budget(double u, Time period)
{
    // The bias absorbs rounding in products that are exact integers.
    const auto c = static_cast<Time>(std::ceil(u * static_cast<double>(period) - 1e-9));
    return std::clamp<Time>(c, 1, period);
}

}  // namespace

TaskSet generate_taskset(const GeneratorConfig& config, Rng& rng)
{
    config.validate();
    const double m = config.m;
    const double hh = m * config.targets.hc_hi;
    const double hl = m * config.targets.hc_lo;
    const double ll = m * config.targets.lc_lo;

    std::uniform_int_distribution<int> task_count(config.min_tasks(), config.max_tasks());
    std::bernoulli_distribution is_hc(config.p_h);

    for (int attempt = 0; attempt < config.max_retries; ++attempt) {
        const int n = task_count(rng);
        std::vector<Criticality> crit(n);
        int n_hc = 0;
        for (auto& c : crit) {
            c = is_hc(rng) ? Criticality::HC : Criticality::LC;
            n_hc += c == Criticality::HC;
        }
        const int n_lc = n - n_hc;

        if ((hh > 0.0) != (n_hc > 0) || (ll > 0.0) != (n_lc > 0))
            continue;
        if (hh > n_hc * config.u_max || hl < n_hc * config.u_min)
            continue;
        if (ll > n_lc * config.u_max || ll < n_lc * config.u_min)
            continue;

        auto hc_hi = uunifast_discard(rng, n_hc, hh, config.u_min, config.u_max,
                                      config.sampler_attempts);
        if (!hc_hi)
            continue;
        auto lc_lo = uunifast_discard(rng, n_lc, ll, config.u_min, config.u_max,
                                      config.sampler_attempts);
        if (!lc_lo)
            continue;
        const std::vector<double> hc_lo = scaled_lo_utilizations(rng, *hc_hi, hl, config.u_min);

        std::vector<Task> tasks;
        tasks.reserve(n);
        std::size_t next_hc = 0, next_lc = 0;
        for (int i = 0; i < n; ++i) {
            Task t;
            t.id = i;
            t.crit = crit[i];
            t.period = draw_period(rng, config.period_lo, config.period_hi);
            if (t.is_hc()) {
                t.wcet_hi = budget((*hc_hi)[next_hc], t.period);
                t.wcet_lo = std::min(budget(hc_lo[next_hc], t.period), t.wcet_hi);
                ++next_hc;
            } else {
                t.wcet_lo = t.wcet_hi = budget((*lc_lo)[next_lc++], t.period);
            }
            if (config.deadline_model == DeadlineModel::Implicit) {
                t.deadline = t.period;
            } else {
                std::uniform_int_distribution<Time> deadline(t.wcet_hi, t.period);
                t.deadline = deadline(rng);
            }
            tasks.push_back(t);
        }

        TaskSet ts(config.m, config.deadline_model, std::move(tasks));
        const Utilizations got = system_utilizations(ts);
        const double tol = config.tolerance + 1e-12;
        if (std::abs(got.hc_hi - config.targets.hc_hi) > tol ||
            std::abs(got.hc_lo - config.targets.hc_lo) > tol ||
            std::abs(got.lc_lo - config.targets.lc_lo) > tol)
            continue;
        return ts;
    }
    throw GenerationError("task-set generation exhausted its retry budget");
}

double u_b(const UtilizationTargets& t)
{
    return std::max(t.hc_lo + t.lc_lo, t.hc_hi);
}

}  // namespace mcpart
