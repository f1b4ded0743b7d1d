#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "mcpart/amc.hpp"
#include "mcpart/bin_test.hpp"
#include "mcpart/ecdf.hpp"
#include "mcpart/edfvd.hpp"
#include "mcpart/experiments.hpp"
#include "mcpart/generator.hpp"
#include "mcpart/partitioner.hpp"
#include "mcpart/simulator.hpp"
#include "mcpart/task_model.hpp"
#include "mcpart/taskset_io.hpp"

namespace py = pybind11;
using namespace mcpart;

namespace {

using Tasks = std::vector<Task>;

template <typename Enum>
std::string name_of(Enum e)
{
    return std::string(to_string(e));
}

}  // namespace

PYBIND11_MODULE(_core, mod)
{
    mod.doc() = "Mixed-criticality partitioned scheduling: tests, partitioning, generation";

    py::register_exception<GenerationError>(mod, "GenerationError", PyExc_RuntimeError);

    py::enum_<Criticality>(mod, "Criticality")
        .value("LC", Criticality::LC)
        .value("HC", Criticality::HC);
    py::enum_<DeadlineModel>(mod, "DeadlineModel")
        .value("Implicit", DeadlineModel::Implicit)
        .value("Constrained", DeadlineModel::Constrained);
    py::enum_<Test>(mod, "Test")
        .value("EdfVd", Test::EdfVd)
        .value("AmcRtb", Test::AmcRtb)
        .value("AmcMax", Test::AmcMax)
        .value("Ecdf", Test::Ecdf)
        .def_property_readonly("label", &name_of<Test>);
    py::enum_<Strategy>(mod, "Strategy")
        .value("CaUdp", Strategy::CaUdp)
        .value("CuUdp", Strategy::CuUdp)
        .value("CaWuF", Strategy::CaWuF)
        .value("CaFF", Strategy::CaFF)
        .value("CaNosortFF", Strategy::CaNosortFF)
        .value("EcaWuF", Strategy::EcaWuF)
        .def_property_readonly("label", &name_of<Strategy>);

    mod.def("parse_test", [](const std::string& s) { return parse_test(s); });
    mod.def("parse_strategy", [](const std::string& s) { return parse_strategy(s); });

    py::class_<Task>(mod, "Task")
        .def(py::init(&make_task), py::arg("period"), py::arg("crit"), py::arg("wcet_lo"),
             py::arg("wcet_hi"), py::arg("deadline"), py::arg("id") = 0)
        .def_readwrite("id", &Task::id)
        .def_readwrite("period", &Task::period)
        .def_readwrite("crit", &Task::crit)
        .def_readwrite("wcet_lo", &Task::wcet_lo)
        .def_readwrite("wcet_hi", &Task::wcet_hi)
        .def_readwrite("deadline", &Task::deadline)
        .def_property_readonly("is_hc", &Task::is_hc)
        .def_property_readonly("u_lo", &Task::u_lo)
        .def_property_readonly("u_hi", &Task::u_hi)
        .def(py::self == py::self)
        .def("__repr__", [](const Task& t) {
            std::ostringstream os;
            os << "Task(id=" << t.id << ", T=" << t.period << ", " << to_string(t.crit)
               << ", C=" << t.wcet_lo << "/" << t.wcet_hi << ", D=" << t.deadline << ")";
            return os.str();
        });

    py::class_<Utilizations>(mod, "Utilizations")
        .def_readonly("lc_lo", &Utilizations::lc_lo)
        .def_readonly("hc_lo", &Utilizations::hc_lo)
        .def_readonly("hc_hi", &Utilizations::hc_hi)
        .def_property_readonly("difference", &Utilizations::difference);

    py::class_<TaskSet>(mod, "TaskSet")
        .def(py::init<int, DeadlineModel, Tasks>(), py::arg("m"), py::arg("deadline_model"),
             py::arg("tasks"))
        .def_property_readonly("m", &TaskSet::m)
        .def_property_readonly("deadline_model", &TaskSet::deadline_model)
        .def_property_readonly("tasks",
                               [](const TaskSet& ts) { return Tasks(ts.tasks().begin(), ts.tasks().end()); })
        .def("__len__", &TaskSet::size)
        .def("utilizations", &system_utilizations)
        .def("to_json", &taskset_to_json)
        .def_static("from_json", &taskset_from_json)
        .def(py::self == py::self);

    mod.def("read_taskset", &read_taskset);
    mod.def("write_taskset", &write_taskset);
    mod.def("bin_utilizations", [](const Tasks& b) { return bin_utilizations(b); });

    py::class_<EdfVdVerdict>(mod, "EdfVdVerdict")
        .def_readonly("schedulable", &EdfVdVerdict::schedulable)
        .def_readonly("scaled", &EdfVdVerdict::scaled)
        .def_readonly("x", &EdfVdVerdict::x);
    mod.def("edfvd_schedulable", [](const Tasks& b) { return edfvd_schedulable(b); });
    mod.def("edfvd_virtual_deadlines",
            [](const Tasks& b, double x) { return edfvd_virtual_deadlines(b, x); });

    py::class_<RtaResult>(mod, "RtaResult")
        .def_readonly("lo", &RtaResult::lo)
        .def_readonly("hi", &RtaResult::hi)
        .def_readonly("schedulable", &RtaResult::schedulable)
        .def_readonly("failing_task", &RtaResult::failing_task);
    mod.def("priority_order", [](const Tasks& b) { return assign_priorities(b).rank; });
    mod.def("amc_rtb", [](const Tasks& b) { return amc_rtb(b, assign_priorities(b)); });
    mod.def("amc_max", [](const Tasks& b) { return amc_max(b, assign_priorities(b)); });

    py::class_<DbfVerdict>(mod, "DbfVerdict")
        .def_readonly("schedulable", &DbfVerdict::schedulable)
        .def_property_readonly("virtual_deadlines",
                               [](const DbfVerdict& v) { return v.assignment.deadline; })
        .def_property_readonly("violation",
                               [](const DbfVerdict& v) -> py::object {
                                   if (!v.first_violation)
                                       return py::none();
                                   return py::make_tuple(v.first_violation->mode == Mode::LO ? "LO" : "HI",
                                                         v.first_violation->at);
                               })
        .def_readonly("diagnostic", &DbfVerdict::diagnostic);
    mod.def("ecdf_schedulable", [](const Tasks& b) { return ecdf_schedulable(b); });
    mod.def("dbf_lo", &dbf_lo, py::arg("task"), py::arg("v"), py::arg("l"));
    mod.def("dbf_hi", &dbf_hi, py::arg("task"), py::arg("v"), py::arg("l"));

    mod.def("bin_accepts", [](Test t, const Tasks& b) { return bin_accepts(t, b); });

    py::class_<Partition>(mod, "Partition")
        .def_property_readonly("success", &Partition::success)
        .def_property_readonly("bins",
                               [](const Partition& p) {
                                   std::vector<std::vector<int>> out;
                                   for (const ProcessorBin& b : p.bins)
                                       out.push_back(b.task_ids());
                                   return out;
                               })
        .def_property_readonly("failed_task", [](const Partition& p) -> std::optional<int> {
            if (p.failure)
                return p.failure->task_id;
            return std::nullopt;
        });
    mod.def(
        "partition",
        [](const TaskSet& ts, Strategy s, Test t, std::optional<int> m) {
            py::gil_scoped_release release;
            return partition(ts, m.value_or(ts.m()), s, t);
        },
        py::arg("taskset"), py::arg("strategy"), py::arg("test"), py::arg("m") = py::none());

    mod.def(
        "generate_taskset",
        [](int m, double hc_hi, double hc_lo, double lc_lo, std::uint64_t seed, double p_h,
           DeadlineModel model) {
            GeneratorConfig cfg;
            cfg.m = m;
            cfg.p_h = p_h;
            cfg.targets = {hc_hi, hc_lo, lc_lo};
            cfg.deadline_model = model;
            Rng rng(seed);
            return generate_taskset(cfg, rng);
        },
        py::arg("m"), py::arg("hc_hi"), py::arg("hc_lo"), py::arg("lc_lo"), py::arg("seed"),
        py::arg("p_h") = 0.5, py::arg("deadline_model") = DeadlineModel::Implicit);

    mod.def(
        "falsify",
        [](Test t, const Tasks& b, int scenarios, std::uint64_t seed) -> py::object {
            Rng rng(seed);
            const FalsifyReport rep = falsify(t, b, scenarios, rng);
            py::dict out;
            out["scenarios_run"] = rep.scenarios_run;
            out["scenarios_skipped"] = rep.scenarios_skipped;
            out["diagnostics"] = rep.diagnostics;
            if (rep.counterexample) {
                const Counterexample& c = *rep.counterexample;
                py::dict miss;
                miss["scenario_index"] = c.scenario_index;
                miss["task_id"] = c.miss.task_id;
                miss["deadline"] = c.miss.deadline;
                miss["switch_time"] = c.switch_time;
                out["counterexample"] = miss;
            } else {
                out["counterexample"] = py::none();
            }
            return out;
        },
        py::arg("test"), py::arg("tasks"), py::arg("scenarios") = 50, py::arg("seed") = 1);

    py::class_<ExperimentRecord>(mod, "ExperimentRecord")
        .def_readonly("strategy", &ExperimentRecord::strategy)
        .def_readonly("test", &ExperimentRecord::test)
        .def_readonly("m", &ExperimentRecord::m)
        .def_readonly("p_h", &ExperimentRecord::p_h)
        .def_readonly("u_b", &ExperimentRecord::u_b)
        .def_readonly("n_total", &ExperimentRecord::n_total)
        .def_readonly("n_accepted", &ExperimentRecord::n_accepted)
        .def_property_readonly("acceptance_ratio", &ExperimentRecord::acceptance_ratio);

    mod.def(
        "run_experiment",
        [](const std::string& config_json) {
            const ExperimentConfig cfg = experiment_config_from_json(config_json);
            py::gil_scoped_release release;
            return run_experiment(cfg).records;
        },
        py::arg("config_json"));
    mod.def("weighted_acceptance_ratio",
            [](const std::vector<ExperimentRecord>& r) { return weighted_acceptance_ratio(r); });
    mod.def("results_csv", [](const std::vector<ExperimentRecord>& r) {
        std::ostringstream os;
        write_results_csv(os, r);
        return os.str();
    });
    mod.def("war_csv", [](const std::vector<ExperimentRecord>& r) {
        std::ostringstream os;
        write_war_csv(os, war_table(r));
        return os.str();
    });
}
