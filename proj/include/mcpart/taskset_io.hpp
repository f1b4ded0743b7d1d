#pragma once

#include <filesystem>
#include <string>

#include "mcpart/task_model.hpp"

namespace mcpart {

// Task-set documents are JSON:
//   {"m": 2, "deadline_model": "implicit",
//    "tasks": [{"id": 0, "T": 10, "chi": "HC", "C_L": 2, "C_H": 4, "D": 10}, ...]}
// Serialization is canonical (fixed key order, two-space indent, trailing
// newline), so read -> write reproduces a written file byte for byte.

std::string taskset_to_json(const TaskSet& ts);
TaskSet taskset_from_json(const std::string& text);

void write_taskset(const std::filesystem::path& path, const TaskSet& ts);
TaskSet read_taskset(const std::filesystem::path& path);

}  // namespace mcpart
