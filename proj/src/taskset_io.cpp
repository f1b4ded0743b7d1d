#include "mcpart/taskset_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mcpart {

using ordered_json = nlohmann::ordered_json;

std::string taskset_to_json(const TaskSet& ts)
{
    ordered_json doc;
    doc["m"] = ts.m();
    doc["deadline_model"] = std::string(to_string(ts.deadline_model()));
    ordered_json tasks = ordered_json::array();
    for (const Task& t : ts.tasks()) {
        ordered_json j;
        j["id"] = t.id;
        j["T"] = t.period;
        j["chi"] = std::string(to_string(t.crit));
        j["C_L"] = t.wcet_lo;
        j["C_H"] = t.wcet_hi;
        j["D"] = t.deadline;
        tasks.push_back(std::move(j));
    }
    doc["tasks"] = std::move(tasks);
    return doc.dump(2) + "\n";
}

TaskSet taskset_from_json(const std::string& text)
{
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument(std::string("task-set document: ") + e.what());
    }
    try {
        const int m = doc.at("m").get<int>();
        const DeadlineModel model = parse_deadline_model(doc.at("deadline_model").get<std::string>());
        std::vector<Task> tasks;
        for (const auto& j : doc.at("tasks")) {
            Task t;
            t.id = j.at("id").get<int>();
            t.period = j.at("T").get<Time>();
            t.crit = parse_criticality(j.at("chi").get<std::string>());
            t.wcet_lo = j.at("C_L").get<Time>();
            t.wcet_hi = j.at("C_H").get<Time>();
            t.deadline = j.at("D").get<Time>();
            tasks.push_back(t);
        }
        return TaskSet(m, model, std::move(tasks));
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("task-set document: ") + e.what());
    }
}

void write_taskset(const std::filesystem::path& path, const TaskSet& ts)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << taskset_to_json(ts);
}

TaskSet read_taskset(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return taskset_from_json(buf.str());
}

}  // namespace mcpart
