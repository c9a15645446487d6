#include "hrta/taskset_io.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace hrta {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Time field(const json& obj, const char* key, std::size_t pos, const std::string& source, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (required) {
            throw Error(ErrorCode::ParseError,
                        source + ": task #" + std::to_string(pos) + " lacks \"" + key + "\"", {pos});
        }
        return 0;
    }
    if (!it->is_number_integer()) {
        throw Error(ErrorCode::ParseError,
                    source + ": task #" + std::to_string(pos) + " field \"" + key + "\" must be an integer", {pos});
    }
    return it->get<Time>();
}

std::string task_fields(const Task& t) {
    std::ostringstream os;
    os << "{\"period\": " << t.period << ", \"wcet\": " << t.wcet << ", \"deadline\": " << t.deadline
       << ", \"jitter\": " << t.jitter << ", \"priority\": " << t.priority << "}";
    return os.str();
}

}  // namespace

std::vector<Task> parse_tasks(std::string_view text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string what = e.what();
        auto cut = what.find("parse error");
        throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                                               (cut == std::string::npos ? what : what.substr(cut)));
    }
    if (!doc.is_object() || !doc.contains("tasks") || !doc["tasks"].is_array()) {
        throw Error(ErrorCode::ParseError, source + ": expected an object with a \"tasks\" array");
    }
    std::vector<Task> tasks;
    std::size_t pos = 0;
    for (const json& item : doc["tasks"]) {
        if (!item.is_object()) {
            throw Error(ErrorCode::ParseError, source + ": task #" + std::to_string(pos) + " is not an object", {pos});
        }
        Task t;
        t.id = pos;
        t.period = field(item, "period", pos, source, true);
        t.wcet = field(item, "wcet", pos, source, true);
        t.deadline = field(item, "deadline", pos, source, true);
        t.jitter = field(item, "jitter", pos, source, false);
        t.priority = field(item, "priority", pos, source, true);
        tasks.push_back(t);
        ++pos;
    }
    return tasks;
}

std::vector<Task> read_task_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::ParseError, path + ": cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tasks(buf.str(), path);
}

std::string format_tasks(const std::vector<Task>& tasks) {
    std::string out = "{\n  \"tasks\": [\n";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        out += "    " + task_fields(tasks[i]) + (i + 1 < tasks.size() ? ",\n" : "\n");
    }
    out += "  ]\n}\n";
    return out;
}

std::string format_tasks_line(const std::vector<Task>& tasks) {
    std::string out = "{\"tasks\": [";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        out += (i ? ", " : "") + task_fields(tasks[i]);
    }
    out += "]}\n";
    return out;
}

}  // namespace hrta
