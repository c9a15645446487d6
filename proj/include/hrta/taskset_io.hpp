#pragma once

#include "hrta/task_model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hrta {

/// Reads {"tasks": [{"period", "wcet", "deadline", "jitter"?, "priority"}]}.
/// Task ids are the positions in the array. Unknown keys are ignored.
/// Throws Error(ParseError) with "source:line:column" for syntax errors.
std::vector<Task> parse_tasks(std::string_view text, const std::string& source = "<input>");
std::vector<Task> read_task_file(const std::string& path);

/// Pretty document, one task per line, in the given order.
std::string format_tasks(const std::vector<Task>& tasks);
/// The same document on a single line (for record streams).
std::string format_tasks_line(const std::vector<Task>& tasks);

}  // namespace hrta
