#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mcpart/bin_test.hpp"
#include "mcpart/generator.hpp"
#include "mcpart/partitioner.hpp"

namespace mcpart {

struct Cell {
    Strategy strategy;
    Test test;

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Utilization grid used by the acceptance-ratio study: U_HH in
/// {0.1, ..., 0.9, 0.99}, U_HL in {0.05, 0.15, ...} up to U_HH, U_LL in
/// {0.05, 0.15, ...} up to 0.99 - U_HL.
std::vector<UtilizationTargets> standard_grid();

struct ExperimentConfig {
    std::vector<int> m_values{2, 4, 8};
    std::vector<double> p_h_values{0.5};
    DeadlineModel deadline_model = DeadlineModel::Implicit;
    int sets_per_point = 200;
    std::vector<Cell> cells;
    std::vector<UtilizationTargets> grid = standard_grid();
    std::uint64_t master_seed = 1;
    int threads = 0;  // 0: one worker per hardware thread

    // Generator knobs shared by every grid point.
    double u_min = 0.001;
    double u_max = 0.99;
    Time period_lo = 10;
    Time period_hi = 500;
    int max_retries = 1000;

    /// Keep a per-cell digest of the task sets each grid point evaluated.
    bool record_digests = false;

    void validate() const;
};

struct ExperimentRecord {
    std::string strategy;
    std::string test;
    int m = 0;
    DeadlineModel deadline_model = DeadlineModel::Implicit;
    double p_h = 0.0;
    double u_b = 0.0;
    int n_total = 0;
    int n_accepted = 0;

    double acceptance_ratio() const
    {
        return n_total > 0 ? static_cast<double>(n_accepted) / n_total : 0.0;
    }
};

struct GenerationFailures {
    int m;
    double p_h;
    UtilizationTargets targets;
    int failed;
    int requested;
};

/// One entry per (m, P_H, grid point) when digests are recorded; `cells`
/// holds the digest of the task sets seen by each cell, in config order.
struct PairingDigest {
    int m;
    double p_h;
    std::size_t point;
    std::vector<std::uint64_t> cells;
};

struct ExperimentResult {
    std::vector<ExperimentRecord> records;
    std::vector<GenerationFailures> failures;
    std::vector<PairingDigest> digests;
};

/// Seed of one grid point, derived from the master seed and its coordinates.
std::uint64_t point_seed(std::uint64_t master, int m, double p_h, DeadlineModel model,
                         std::size_t point);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// sum(AR * U_B) / sum(U_B) over the records of one cell. Throws
/// std::invalid_argument on empty input.
double weighted_acceptance_ratio(std::span<const ExperimentRecord> records);

struct WarRecord {
    std::string strategy;
    std::string test;
    int m;
    DeadlineModel deadline_model;
    double p_h;
    double war;
};

/// Groups records by (strategy, test, m, deadline_model, P_H). Buckets that
/// received no task sets are left out.
std::vector<WarRecord> war_table(std::span<const ExperimentRecord> records);

void write_results_csv(std::ostream& out, std::span<const ExperimentRecord> records);
void write_war_csv(std::ostream& out, std::span<const WarRecord> rows);

/// JSON configuration, e.g.
///   {"m": [2, 4], "p_h": [0.5], "deadline_model": "implicit",
///    "sets_per_point": 200, "seed": 7,
///    "strategies": ["CU-UDP", "CA(nosort)-F-F"], "tests": ["edfvd"]}
/// `cells` ([{"strategy": ..., "test": ...}]) may replace the
/// strategies x tests product.
ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig read_experiment_config(const std::filesystem::path& path);

}  // namespace mcpart
