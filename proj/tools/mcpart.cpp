// mcpart: command-line front end for partitioning, generation, falsification
// and acceptance-ratio experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcpart/experiments.hpp"
#include "mcpart/generator.hpp"
#include "mcpart/partitioner.hpp"
#include "mcpart/simulator.hpp"
#include "mcpart/taskset_io.hpp"

namespace fs = std::filesystem;
using namespace mcpart;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json partition_to_json(const Partition& p, Strategy strategy, Test test, int m)
{
    ordered_json doc;
    doc["outcome"] = p.success() ? "success" : "failure";
    doc["strategy"] = std::string(to_string(strategy));
    doc["test"] = std::string(to_string(test));
    doc["m"] = m;
    ordered_json bins = ordered_json::array();
    for (const ProcessorBin& b : p.bins) {
        ordered_json jb;
        jb["index"] = b.index();
        jb["tasks"] = b.task_ids();
        jb["U_LL"] = b.utilization().lc_lo;
        jb["U_HL"] = b.utilization().hc_lo;
        jb["U_HH"] = b.utilization().hc_hi;
        bins.push_back(std::move(jb));
    }
    doc["bins"] = std::move(bins);
    if (p.failure) {
        doc["failure"] = {{"task", p.failure->task_id},
                          {"phase", std::string(to_string(p.failure->phase))}};
    }
    return doc;
}

int run_partition(const std::string& input, const std::string& strategy_name,
                  const std::string& test_name, int m)
{
    const TaskSet ts = read_taskset(input);
    const Strategy strategy = parse_strategy(strategy_name);
    const Test test = parse_test(test_name);
    const Partition p = partition(ts, m, strategy, test);
    std::cout << partition_to_json(p, strategy, test, m).dump(2) << '\n';
    return p.success() ? 0 : 1;
}

struct GenerateArgs {
    std::uint64_t seed = 1;
    int m = 2;
    double p_h = 0.5;
    double u_hh = 0.5, u_hl = 0.25, u_ll = 0.25;
    std::string deadline_model = "implicit";
    int count = 1;
    std::string out_dir = ".";
};

int run_generate(const GenerateArgs& a)
{
    GeneratorConfig cfg;
    cfg.m = a.m;
    cfg.p_h = a.p_h;
    cfg.targets = {a.u_hh, a.u_hl, a.u_ll};
    cfg.deadline_model = parse_deadline_model(a.deadline_model);
    cfg.validate();

    fs::create_directories(a.out_dir);
    Rng rng(a.seed);
    int failed = 0;
    for (int i = 0; i < a.count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "taskset_%04d.json", i);
        try {
            write_taskset(fs::path(a.out_dir) / name, generate_taskset(cfg, rng));
        } catch (const GenerationError& e) {
            ++failed;
            std::cerr << name << ": " << e.what() << '\n';
        }
    }
    std::cerr << "generated " << (a.count - failed) << " of " << a.count << " task sets\n";
    return 0;
}

int run_falsify(const std::string& input, const std::string& test_name, int scenarios,
                std::uint64_t seed)
{
    const TaskSet ts = read_taskset(input);
    const Test test = parse_test(test_name);
    if (ts.m() != 1)
        std::cerr << "note: analysing all " << ts.size() << " tasks as one processor\n";

    ordered_json doc;
    doc["test"] = std::string(to_string(test));
    if (!bin_accepts(test, ts.tasks())) {
        doc["accepted"] = false;
        std::cout << doc.dump(2) << '\n';
        return 2;
    }
    doc["accepted"] = true;
    Rng rng(seed);
    const FalsifyReport rep = falsify(test, ts.tasks(), scenarios, rng);
    doc["scenarios_run"] = rep.scenarios_run;
    doc["scenarios_skipped"] = rep.scenarios_skipped;
    doc["diagnostics"] = rep.diagnostics;
    if (rep.counterexample) {
        const Counterexample& c = *rep.counterexample;
        ordered_json ce;
        ce["scenario_index"] = c.scenario_index;
        ce["task"] = c.miss.task_id;
        ce["deadline"] = c.miss.deadline;
        if (c.switch_time)
            ce["switch_time"] = *c.switch_time;
        else
            ce["switch_time"] = nullptr;
        doc["counterexample"] = std::move(ce);
    } else {
        doc["counterexample"] = nullptr;
    }
    std::cout << doc.dump(2) << '\n';
    return rep.counterexample ? 1 : 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out,
                       const std::string& war_out)
{
    const ExperimentConfig cfg = read_experiment_config(config_path);
    const ExperimentResult res = run_experiment(cfg);

    std::ofstream csv(out);
    if (!csv)
        throw std::runtime_error("cannot write " + out);
    write_results_csv(csv, res.records);

    if (!war_out.empty()) {
        std::ofstream war(war_out);
        if (!war)
            throw std::runtime_error("cannot write " + war_out);
        write_war_csv(war, war_table(res.records));
    }
    int failed = 0;
    for (const GenerationFailures& f : res.failures)
        failed += f.failed;
    std::cerr << res.records.size() << " records; " << failed
              << " task sets could not be generated\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Partitioned mixed-criticality scheduling toolkit"};
    app.require_subcommand(1);

    std::string input, strategy, test = "edfvd";
    int m = 2;
    auto* part = app.add_subcommand("partition", "Partition a task-set file onto m processors");
    part->add_option("--input", input, "Task-set JSON file")->required()->check(CLI::ExistingFile);
    part->add_option("--strategy", strategy, "CA-UDP, CU-UDP, CA-Wu-F, CA-F-F, CA(nosort)-F-F, ECA-Wu-F")
        ->required();
    part->add_option("--test", test, "edfvd, amc-rtb, amc-max or ecdf")->required();
    part->add_option("--m", m, "Number of processors")->required()->check(CLI::PositiveNumber);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate random task-set files");
    generate->add_option("--seed", gen.seed);
    generate->add_option("--m", gen.m)->check(CLI::PositiveNumber);
    generate->add_option("--ph", gen.p_h, "Probability that a task is HC");
    generate->add_option("--uhh", gen.u_hh, "Target normalized U_HH");
    generate->add_option("--uhl", gen.u_hl, "Target normalized U_HL");
    generate->add_option("--ull", gen.u_ll, "Target normalized U_LL");
    generate->add_option("--deadline-model", gen.deadline_model, "implicit or constrained");
    generate->add_option("--count", gen.count)->check(CLI::NonNegativeNumber);
    generate->add_option("--out", gen.out_dir, "Output directory")->required();

    std::string f_input, f_test;
    int scenarios = 50;
    std::uint64_t f_seed = 1;
    auto* fals = app.add_subcommand("falsify", "Simulate an accepted task set looking for misses");
    fals->add_option("--input", f_input)->required()->check(CLI::ExistingFile);
    fals->add_option("--test", f_test)->required();
    fals->add_option("--scenarios", scenarios, "Number of random demand scenarios");
    fals->add_option("--seed", f_seed);

    std::string config, out = "results.csv", war;
    auto* exp = app.add_subcommand("experiment", "Run an acceptance-ratio study");
    exp->add_option("--config", config)->required()->check(CLI::ExistingFile);
    exp->add_option("--out", out);
    exp->add_option("--war", war);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*part)
            return run_partition(input, strategy, test, m);
        if (*generate)
            return run_generate(gen);
        if (*fals)
            return run_falsify(f_input, f_test, scenarios, f_seed);
        if (*exp)
            return run_experiment_cmd(config, out, war);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
