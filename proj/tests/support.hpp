#pragma once

#include "hrta/task_model.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace support {

struct Spec {
    hrta::Time period;
    hrta::Time wcet;
    hrta::Time jitter = 0;
};

/// Tasks in priority order (first = priority 1), deadline = period.
inline std::vector<hrta::Task> tasks_of(const std::vector<Spec>& specs) {
    std::vector<hrta::Task> out;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        hrta::Task t;
        t.id = i;
        t.period = specs[i].period;
        t.wcet = specs[i].wcet;
        t.deadline = specs[i].period;
        t.jitter = specs[i].jitter;
        t.priority = static_cast<hrta::Time>(i + 1);
        out.push_back(t);
    }
    return out;
}

inline hrta::TaskSet set_of(const std::vector<Spec>& specs,
                            hrta::ValidationMode mode = hrta::ValidationMode::Strict) {
    return hrta::validate(tasks_of(specs), mode);
}

inline hrta::TaskSet six_task_jitter() {
    return set_of({{60, 6, 8}, {60, 8, 0}, {30, 4, 9}, {360, 13, 7}, {120, 7, 3}, {360, 12, 9}});
}

inline hrta::TaskSet worked_example() {
    return set_of({{240, 1, 167}, {120, 50, 119}, {120, 50, 0}, {20, 1, 0}, {10, 1, 0}, {240, 1, 0}});
}

/// "(T,C,J) ..." in priority order, for failure messages.
inline std::string describe(const hrta::TaskSet& ts) {
    std::ostringstream os;
    for (const auto& t : ts.tasks()) {
        os << '(' << t.period << ',' << t.wcet << ',' << t.jitter << ") ";
    }
    return os.str();
}

inline std::string data_path(const std::string& name) { return std::string(HRTA_TEST_DATA) + "/" + name; }

}  // namespace support
