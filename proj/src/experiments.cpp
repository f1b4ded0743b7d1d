#include "mcpart/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace mcpart {

namespace {

std::uint64_t mix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v)
{
    return mix(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

std::uint64_t taskset_digest(const TaskSet& ts)
{
    std::uint64_t h = static_cast<std::uint64_t>(ts.m());
    for (const Task& t : ts.tasks()) {
        h = hash_combine(h, static_cast<std::uint64_t>(t.period));
        h = hash_combine(h, static_cast<std::uint64_t>(t.wcet_lo));
        h = hash_combine(h, static_cast<std::uint64_t>(t.wcet_hi));
        h = hash_combine(h, static_cast<std::uint64_t>(t.deadline));
        h = hash_combine(h, t.is_hc() ? 1u : 0u);
    }
    return h;
}

// Grid values are multiples of 0.01; bucket keys are kept in hundredths.
int hundredths(double x)
{
    return static_cast<int>(std::lround(x * 100.0));
}

struct Job {
    int m;
    double p_h;
    std::size_t point;
};

struct JobOutcome {
    std::vector<int> accepted;  // per cell
    int generated = 0;
    int failed = 0;
    std::vector<std::uint64_t> digests;  // per cell
};

JobOutcome run_job(const ExperimentConfig& cfg, const Job& job)
{
    JobOutcome out;
    out.accepted.assign(cfg.cells.size(), 0);
    out.digests.assign(cfg.cells.size(), 0);

    GeneratorConfig gen;
    gen.m = job.m;
    gen.p_h = job.p_h;
    gen.u_min = cfg.u_min;
    gen.u_max = cfg.u_max;
    gen.targets = cfg.grid[job.point];
    gen.period_lo = cfg.period_lo;
    gen.period_hi = cfg.period_hi;
    gen.deadline_model = cfg.deadline_model;
    gen.max_retries = cfg.max_retries;

    std::vector<StrategySpec> specs;
    std::vector<BinTest> tests;
    for (const Cell& c : cfg.cells) {
        specs.push_back(strategy_spec(c.strategy));
        tests.push_back(make_bin_test(c.test));
    }

    Rng rng(point_seed(cfg.master_seed, job.m, job.p_h, cfg.deadline_model, job.point));
    for (int s = 0; s < cfg.sets_per_point; ++s) {
        TaskSet ts;
        try {
            ts = generate_taskset(gen, rng);
        } catch (const GenerationError&) {
            ++out.failed;
            continue;
        }
        ++out.generated;
        for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
            if (cfg.record_digests)
                out.digests[c] = hash_combine(out.digests[c], taskset_digest(ts));
            if (partition(ts, job.m, specs[c], tests[c]).success())
                ++out.accepted[c];
        }
    }
    return out;
}

std::string format_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

Strategy strategy_from_json(const nlohmann::json& j)
{
    return parse_strategy(j.get<std::string>());
}

template <class T>
std::vector<T> scalar_or_list(const nlohmann::json& j)
{
    if (j.is_array())
        return j.get<std::vector<T>>();
    return {j.get<T>()};
}

}  // namespace

std::vector<UtilizationTargets> standard_grid()
{
    std::vector<UtilizationTargets> grid;
    const int hh_values[] = {10, 20, 30, 40, 50, 60, 70, 80, 90, 99};
    for (int hh : hh_values)
        for (int hl = 5; hl <= hh; hl += 10)
            for (int ll = 5; ll <= 99 - hl; ll += 10)
                grid.push_back({hh / 100.0, hl / 100.0, ll / 100.0});
    return grid;
}

void ExperimentConfig::validate() const
{
    if (sets_per_point < 0)
        throw std::invalid_argument("experiment: sets_per_point must be >= 0");
    for (int m : m_values)
        if (m < 1)
            throw std::invalid_argument("experiment: m must be >= 1");
    for (double p : p_h_values)
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("experiment: P_H must lie in [0, 1]");
    for (const Cell& c : cells)
        if (!supports(c.test, deadline_model))
            throw std::invalid_argument(std::string(to_string(c.test)) + " does not support " +
                                        std::string(to_string(deadline_model)) + " deadlines");
    for (const UtilizationTargets& t : grid) {
        if (t.hc_lo > t.hc_hi + 1e-12)
            throw std::invalid_argument("experiment: grid point with U_HL > U_HH");
        if (t.lc_lo > 0.99 - t.hc_lo + 1e-12)
            throw std::invalid_argument("experiment: grid point with U_LL > 0.99 - U_HL");
    }
}

std::uint64_t point_seed(std::uint64_t master, int m, double p_h, DeadlineModel model,
                         std::size_t point)
{
    std::uint64_t h = mix(master);
    h = hash_combine(h, static_cast<std::uint64_t>(m));
    h = hash_combine(h, static_cast<std::uint64_t>(std::lround(p_h * 1000.0)));
    h = hash_combine(h, model == DeadlineModel::Implicit ? 0u : 1u);
    h = hash_combine(h, static_cast<std::uint64_t>(point));
    return h;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentResult result;
    if (cfg.sets_per_point == 0 || cfg.cells.empty())
        return result;

    std::vector<Job> jobs;
    for (int m : cfg.m_values)
        for (double p : cfg.p_h_values)
            for (std::size_t k = 0; k < cfg.grid.size(); ++k)
                jobs.push_back({m, p, k});

    std::vector<JobOutcome> outcomes(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t j = next++; j < jobs.size(); j = next++)
            outcomes[j] = run_job(cfg, jobs[j]);
    };
    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(jobs.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
    }

    // (m, p_h in thousandths, cell, u_b in hundredths) -> (total, accepted)
    std::map<std::tuple<int, long, std::size_t, int>, std::pair<int, int>> buckets;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const Job& job = jobs[j];
        const JobOutcome& out = outcomes[j];
        const int ub = hundredths(u_b(cfg.grid[job.point]));
        const long ph = std::lround(job.p_h * 1000.0);
        for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
            auto& b = buckets[{job.m, ph, c, ub}];
            b.first += out.generated;
            b.second += out.accepted[c];
        }
        if (out.failed > 0)
            result.failures.push_back(
                {job.m, job.p_h, cfg.grid[job.point], out.failed, cfg.sets_per_point});
        if (cfg.record_digests)
            result.digests.push_back({job.m, job.p_h, job.point, out.digests});
    }

    for (const auto& [key, counts] : buckets) {
        const auto& [m, ph, c, ub] = key;
        ExperimentRecord r;
        r.strategy = std::string(to_string(cfg.cells[c].strategy));
        r.test = std::string(to_string(cfg.cells[c].test));
        r.m = m;
        r.deadline_model = cfg.deadline_model;
        r.p_h = static_cast<double>(ph) / 1000.0;
        r.u_b = ub / 100.0;
        r.n_total = counts.first;
        r.n_accepted = counts.second;
        result.records.push_back(std::move(r));
    }
    return result;
}

double weighted_acceptance_ratio(std::span<const ExperimentRecord> records)
{
    if (records.empty())
        throw std::invalid_argument("weighted acceptance ratio of an empty record set");
    double num = 0.0, den = 0.0;
    for (const ExperimentRecord& r : records) {
        num += r.acceptance_ratio() * r.u_b;
        den += r.u_b;
    }
    if (den <= 0.0)
        throw std::invalid_argument("weighted acceptance ratio needs positive U_B");
    return num / den;
}

std::vector<WarRecord> war_table(std::span<const ExperimentRecord> records)
{
    using Key = std::tuple<int, long, std::string, std::string, int>;
    std::map<Key, std::vector<ExperimentRecord>> groups;
    for (const ExperimentRecord& r : records) {
        if (r.n_total == 0)
            continue;
        groups[{r.m, std::lround(r.p_h * 1000.0), r.strategy, r.test,
                r.deadline_model == DeadlineModel::Implicit ? 0 : 1}]
            .push_back(r);
    }
    std::vector<WarRecord> rows;
    for (const auto& [key, group] : groups) {
        const ExperimentRecord& first = group.front();
        rows.push_back({first.strategy, first.test, first.m, first.deadline_model, first.p_h,
                        weighted_acceptance_ratio(group)});
    }
    return rows;
}

void write_results_csv(std::ostream& out, std::span<const ExperimentRecord> records)
{
    out << "strategy,test,m,deadline_model,p_h,u_b,n_total,n_accepted,acceptance_ratio\n";
    for (const ExperimentRecord& r : records) {
        out << r.strategy << ',' << r.test << ',' << r.m << ',' << to_string(r.deadline_model)
            << ',' << format_number(r.p_h) << ',' << format_number(r.u_b) << ',' << r.n_total
            << ',' << r.n_accepted << ',' << format_number(r.acceptance_ratio()) << '\n';
    }
}

void write_war_csv(std::ostream& out, std::span<const WarRecord> rows)
{
    out << "strategy,test,m,deadline_model,p_h,war\n";
    for (const WarRecord& r : rows) {
        out << r.strategy << ',' << r.test << ',' << r.m << ',' << to_string(r.deadline_model)
            << ',' << format_number(r.p_h) << ',' << format_number(r.war) << '\n';
    }
}

ExperimentConfig experiment_config_from_json(const std::string& text)
{
    ExperimentConfig cfg;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        if (doc.contains("m"))
            cfg.m_values = scalar_or_list<int>(doc["m"]);
        if (doc.contains("p_h"))
            cfg.p_h_values = scalar_or_list<double>(doc["p_h"]);
        if (doc.contains("deadline_model"))
            cfg.deadline_model = parse_deadline_model(doc["deadline_model"].get<std::string>());
        cfg.sets_per_point = doc.value("sets_per_point", cfg.sets_per_point);
        cfg.master_seed = doc.value("seed", cfg.master_seed);
        cfg.threads = doc.value("threads", cfg.threads);
        cfg.u_min = doc.value("u_min", cfg.u_min);
        cfg.u_max = doc.value("u_max", cfg.u_max);
        cfg.period_lo = doc.value("period_min", cfg.period_lo);
        cfg.period_hi = doc.value("period_max", cfg.period_hi);
        cfg.max_retries = doc.value("max_retries", cfg.max_retries);

        if (doc.contains("cells")) {
            for (const auto& c : doc["cells"])
                cfg.cells.push_back(
                    {strategy_from_json(c.at("strategy")), parse_test(c.at("test").get<std::string>())});
        } else {
            std::vector<Strategy> strategies = all_strategies();
            std::vector<Test> tests{Test::EdfVd};
            if (doc.contains("strategies")) {
                strategies.clear();
                for (const auto& s : doc["strategies"])
                    strategies.push_back(strategy_from_json(s));
            }
            if (doc.contains("tests")) {
                tests.clear();
                for (const auto& t : doc["tests"])
                    tests.push_back(parse_test(t.get<std::string>()));
            }
            for (Strategy s : strategies)
                for (Test t : tests)
                    cfg.cells.push_back({s, t});
        }

        if (doc.contains("grid")) {
            cfg.grid.clear();
            for (const auto& p : doc["grid"])
                cfg.grid.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return experiment_config_from_json(buf.str());
}

}  // namespace mcpart
