#include "hrta/cli.hpp"

#include "hrta/experiments.hpp"
#include "hrta/harmonic_rta.hpp"
#include "hrta/jitter_feasibility.hpp"
#include "hrta/simulator.hpp"
#include "hrta/taskset_io.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace hrta::cli {

namespace {

const std::vector<std::string> kMethods = {"harmonic",  "uniform-jitter", "fixed-point", "fixed-point-jitter",
                                           "exclusion", "virtual-jitter", "simulate"};

struct Row {
    const Task* task = nullptr;
    std::string status = "ok";
    std::optional<Rational> wcrt;
    bool schedulable = false;
    std::size_t stages = 0;
};

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

Time max_hp_jitter(const TaskSet& ts, std::size_t target) {
    Time j = 0;
    for (std::size_t i = 0; i < target; ++i) {
        j = std::max(j, ts[i].jitter);
    }
    return j;
}

Row fill(const Task& t, const RtaResult& r) {
    Row row;
    row.task = &t;
    row.wcrt = r.wcrt;
    row.schedulable = r.schedulable;
    row.stages = r.iterations;
    return row;
}

Row analyze_one(const TaskSet& ts, std::size_t target, const std::string& method) {
    const Task& t = ts[target];
    if (method == "harmonic") {
        return fill(t, wcrt_harmonic(ts, target).result);
    }
    if (method == "uniform-jitter") {
        return fill(t, wcrt_uniform_jitter(ts, target, max_hp_jitter(ts, target)).result);
    }
    if (method == "fixed-point") {
        return fill(t, wcrt_fixed_point(ts, target));
    }
    if (method == "fixed-point-jitter") {
        return fill(t, wcrt_fixed_point_jitter(ts, target));
    }
    if (method == "exclusion") {
        return fill(t, wcrt_exclusion_model(ts, target));
    }
    if (method == "virtual-jitter") {
        const FeasibilityResult fr = solve_feasibility(ts, target);
        if (!fr.feasible()) {
            Row row;
            row.task = &t;
            row.status = "infeasible";
            row.stages = fr.bound_trace.size();
            return row;
        }
        return fill(t, wcrt_virtual_jitter(ts, target, fr).result);
    }
    // simulate: largest observed response over the release patterns
    Row row;
    row.task = &t;
    const Time r = adversarial_response(ts, target);
    row.wcrt = to_rational(r);
    row.schedulable = r <= t.deadline - t.jitter;
    row.status = "observed";
    return row;
}

// Exact methods whose preconditions hold for this target.
std::map<std::string, Rational> exact_results(const TaskSet& ts, std::size_t target) {
    std::map<std::string, Rational> out;
    out["fixed-point-jitter"] = wcrt_fixed_point_jitter(ts, target).wcrt;
    bool jitter_free = true;
    for (std::size_t i = 0; i <= target; ++i) {
        jitter_free = jitter_free && ts[i].jitter == 0;
    }
    if (jitter_free) {
        out["fixed-point"] = wcrt_fixed_point(ts, target).wcrt;
    }
    if (!ts.harmonic() || ts.total_utilization() >= 1) {
        return out;
    }
    if (jitter_free) {
        out["harmonic"] = wcrt_harmonic(ts, target).result.wcrt;
        out["exclusion"] = wcrt_exclusion_model(ts, target).wcrt;
    }
    if (check_restricted_jitter(ts, target) && target > 0) {
        const InterferenceOrder po = interference_order(ts, target);
        out["uniform-jitter@last"] = wcrt_uniform_jitter(ts, target, po.tasks.back().jitter).result.wcrt;
    }
    const FeasibilityResult fr = solve_feasibility(ts, target);
    if (fr.feasible()) {
        out["virtual-jitter"] = wcrt_virtual_jitter(ts, target, fr).result.wcrt;
    }
    return out;
}

std::vector<std::size_t> parse_targets(const std::string& spec, const TaskSet& ts, bool default_lowest) {
    std::vector<std::size_t> out;
    if (spec.empty() && default_lowest) {
        out.push_back(ts.size() - 1);
        return out;
    }
    if (spec.empty() || spec == "all") {
        for (std::size_t i = 0; i < ts.size(); ++i) {
            out.push_back(i);
        }
        return out;
    }
    long long p = 0;
    try {
        std::size_t used = 0;
        p = std::stoll(spec, &used);
        if (used != spec.size()) {
            throw std::invalid_argument(spec);
        }
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, "--target must be 'all' or a priority, got '" + spec + "'");
    }
    if (p < 1 || p > static_cast<long long>(ts.size())) {
        throw Error(ErrorCode::IndexOutOfRange, "no task with priority " + spec);
    }
    out.push_back(static_cast<std::size_t>(p - 1));
    return out;
}

// Writes to --output when given, otherwise to the command's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw Error(ErrorCode::InvalidConfig, "cannot write " + path);
            }
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

struct AnalyzeOptions {
    std::string input;
    std::string output;
    std::string method = "fixed-point-jitter";
    std::string target = "all";
    bool deterministic = false;
    bool cross_validate = false;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
    const bool relaxed = o.method == "fixed-point" || o.method == "fixed-point-jitter";
    const TaskSet ts = validate(read_task_file(o.input), relaxed ? ValidationMode::Relaxed : ValidationMode::Strict);
    const std::vector<std::size_t> targets = parse_targets(o.target, ts, false);

    std::vector<Row> rows;
    for (std::size_t t : targets) {
        rows.push_back(analyze_one(ts, t, o.method));
    }

    if (o.cross_validate) {
        bool mismatch = false;
        for (std::size_t k = 0; k < targets.size(); ++k) {
            const auto results = exact_results(ts, targets[k]);
            const Row& row = rows[k];
            for (const auto& [name, value] : results) {
                const bool own_inexact = o.method == "simulate" || !row.wcrt;
                if (value != results.begin()->second || (!own_inexact && *row.wcrt != value)) {
                    err << "cross-validation mismatch for priority " << row.task->priority << ": " << name << " = "
                        << to_string(value) << ", " << o.method << " = "
                        << (row.wcrt ? to_string(*row.wcrt) : std::string("n/a")) << "\n";
                    mismatch = true;
                }
            }
        }
        if (mismatch) {
            return kInputError;
        }
    }

    Sink sink(o.output, out);
    std::ostream& os = *sink;
    os << "# input: " << o.input << "\n";
    os << "# method: " << o.method << "\n";
    if (!o.deterministic) {
        os << "# generated: " << timestamp() << "\n";
    }
    os << "priority,period,wcet,deadline,jitter,method,status,wcrt_num,wcrt_den,wcrt,schedulable,stages\n";
    bool all_ok = true;
    for (const Row& r : rows) {
        const Task& t = *r.task;
        os << t.priority << ',' << t.period << ',' << t.wcet << ',' << t.deadline << ',' << t.jitter << ','
           << o.method << ',' << r.status << ',';
        if (r.wcrt) {
            os << r.wcrt->get_num().get_str() << ',' << r.wcrt->get_den().get_str() << ','
               << to_decimal(*r.wcrt, 6) << ',' << (r.schedulable ? "true" : "false");
        } else {
            os << ",,,false";
        }
        os << ',' << r.stages << '\n';
        all_ok = all_ok && r.wcrt && r.schedulable;
    }
    return all_ok ? kOk : kNegative;
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        s += (i ? "," : "") + parts[i];
    }
    return s;
}

int cmd_check_jitter(const std::string& input, const std::string& target_spec, const std::string& output,
                     std::ostream& out) {
    const TaskSet ts = validate(read_task_file(input));
    Sink sink(output, out);
    std::ostream& os = *sink;
    bool all_feasible = true;
    for (std::size_t target : parse_targets(target_spec, ts, true)) {
        const Task& self = ts[target];
        if (target == 0) {
            os << "task " << self.priority << ": no higher-priority tasks\n";
            continue;
        }
        const FeasibilityResult fr = solve_feasibility(ts, target);
        auto prio_at = [&](std::size_t stage) { return ts[fr.order[stage - 1]].priority; };
        if (fr.feasible()) {
            // report m in priority order of the higher-priority tasks
            std::vector<std::string> by_priority(fr.order.size());
            for (std::size_t p = 0; p < fr.order.size(); ++p) {
                by_priority[fr.order[p]] = fr.m[p].get_str();
            }
            os << "task " << self.priority << ": feasible, m=(" << join(by_priority)
               << "), J'_max=" << fr.virtual_jitter_max->get_str() << "\n";
        } else {
            const StageBounds& last = fr.bound_trace.back();
            os << "task " << self.priority << ": infeasible at stage " << *fr.failure_stage;
            if (last.m_lower && *last.m_lower > *last.m_upper) {
                os << " (m lower " << last.m_lower->get_str() << " > m upper " << last.m_upper->get_str() << ")";
            } else {
                os << " (lower " << last.lower.get_str() << " > upper " << last.upper.get_str() << ")";
            }
            os << "\n";
            all_feasible = false;
        }
        for (const StageBounds& sb : fr.bound_trace) {
            os << "  stage " << sb.stage << " (priority " << prio_at(sb.stage) << "): ";
            if (sb.m_lower) {
                os << "m in [" << sb.m_lower->get_str() << ", " << sb.m_upper->get_str() << "]";
                if (sb.branch) {
                    os << ", diff " << sb.branch->diff_lower.get_str() << " vs " << sb.branch->diff_upper.get_str()
                       << ", chose " << (sb.branch->chose_upper ? *sb.m_upper : *sb.m_lower).get_str();
                }
                os << ", ";
            } else {
                os << "m = 1, ";
            }
            os << "window [" << sb.lower.get_str() << ", " << sb.upper.get_str() << "]\n";
        }
    }
    return all_feasible ? kOk : kNegative;
}

struct GenerateOptions {
    std::size_t tasks = 5;
    std::string utilization = "0.5";
    std::uint64_t seed = 1;
    Time base_period = 10;
    Time factor_min = 1;
    Time factor_max = 4;
    std::string jitter_mode = "none";
    std::string alpha = "0.5";
    std::size_t count = 1;
    std::string output;
    bool split = false;
};

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
    GenConfig cfg;
    cfg.task_count = o.tasks;
    cfg.total_utilization = parse_rational(o.utilization);
    cfg.seed = o.seed;
    cfg.base_period = o.base_period;
    cfg.factor_range = {o.factor_min, o.factor_max};
    if (o.jitter_mode == "unconstrained") {
        cfg.jitter_mode = Unconstrained{parse_rational(o.alpha)};
    } else if (o.jitter_mode == "constrained") {
        cfg.jitter_mode = ConstraintSatisfying{};
    } else {
        cfg.jitter_mode = NoJitter{};
    }
    cfg.check();
    if (o.count == 0) {
        throw Error(ErrorCode::InvalidConfig, "--count must be positive");
    }
    if (o.split && o.output.empty()) {
        throw Error(ErrorCode::InvalidConfig, "--split needs --output naming a directory");
    }

    Rng rng(cfg.seed);
    std::vector<std::vector<Task>> sets;
    for (std::size_t k = 0; k < o.count; ++k) {
        const TaskSet ts = generate_task_set(cfg, rng);
        std::vector<Task> tasks = ts.tasks();
        std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) { return a.id < b.id; });
        sets.push_back(std::move(tasks));
    }

    if (o.split) {
        std::filesystem::create_directories(o.output);
        for (std::size_t k = 0; k < sets.size(); ++k) {
            std::ostringstream name;
            name << "set_" << std::setw(5) << std::setfill('0') << k << ".json";
            std::ofstream f(std::filesystem::path(o.output) / name.str(), std::ios::binary);
            if (!f) {
                throw Error(ErrorCode::InvalidConfig, "cannot write into " + o.output);
            }
            f << format_tasks(sets[k]);
        }
        return kOk;
    }
    Sink sink(o.output, out);
    if (sets.size() == 1) {
        *sink << format_tasks(sets.front());
    } else {
        for (const auto& s : sets) {
            *sink << format_tasks_line(s);
        }
    }
    return kOk;
}

struct ExperimentOptions {
    std::string name;
    std::optional<std::size_t> sets;
    std::optional<std::size_t> hp_tasks;
    std::size_t max_tasks = 8;
    std::string utilization = "0.95";
    std::vector<std::string> points;  // utilizations or alphas
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::string output;
};

std::vector<Rational> parse_list(const std::vector<std::string>& items) {
    std::vector<Rational> out;
    for (const auto& s : items) {
        out.push_back(parse_rational(s));
    }
    return out;
}

int cmd_experiment(const ExperimentOptions& o, std::ostream& out) {
    ShardPlan plan;
    plan.seed = o.seed;
    plan.jobs = o.jobs == 0 ? std::max(1U, std::thread::hardware_concurrency()) : o.jobs;
    if (o.name == "heuristic-quality") {
        HeuristicQualityConfig cfg;
        cfg.plan = plan;
        cfg.hp_tasks = o.hp_tasks.value_or(14);
        cfg.sets_per_point = o.sets.value_or(50'000);
        cfg.utilizations = parse_list(o.points);
        const auto rows = run_heuristic_quality(cfg);
        Sink sink(o.output, out);
        *sink << "utilization,sets,feasible,misclassified,rate\n";
        for (const auto& r : rows) {
            *sink << to_decimal(r.utilization, 2) << ',' << r.sets << ',' << r.feasible << ',' << r.misclassified
                  << ',' << to_decimal(make_rational(static_cast<Time>(r.misclassified), static_cast<Time>(r.sets)), 8)
                  << '\n';
        }
        return kOk;
    }
    if (o.name == "feasibility-sweep") {
        FeasibilitySweepConfig cfg;
        cfg.plan = plan;
        cfg.hp_tasks = o.hp_tasks.value_or(4);
        cfg.sets_per_point = o.sets.value_or(100'000);
        cfg.utilization = parse_rational(o.utilization);
        cfg.alphas = parse_list(o.points);
        const auto rows = run_feasibility_sweep(cfg);
        Sink sink(o.output, out);
        *sink << "alpha,sets,solver_feasible,exact_feasible,solver_fraction,exact_fraction\n";
        for (const auto& r : rows) {
            const auto n = static_cast<Time>(r.sets);
            *sink << to_decimal(r.alpha, 2) << ',' << r.sets << ',' << r.solver_feasible << ',' << r.exact_feasible
                  << ',' << to_decimal(make_rational(static_cast<Time>(r.solver_feasible), n), 6) << ','
                  << to_decimal(make_rational(static_cast<Time>(r.exact_feasible), n), 6) << '\n';
        }
        return kOk;
    }
    if (o.name == "oracle-cross-check") {
        CrossCheckConfig cfg;
        cfg.plan = plan;
        cfg.sets = o.sets.value_or(1000);
        cfg.max_tasks = o.max_tasks;
        const auto rows = run_oracle_cross_check(cfg);
        Sink sink(o.output, out);
        *sink << "check,cases,failures\n";
        std::uint64_t failures = 0;
        for (const auto& r : rows) {
            *sink << r.check << ',' << r.cases << ',' << r.failures << '\n';
            failures += r.failures;
        }
        return failures == 0 ? kOk : kNegative;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown experiment '" + o.name + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Response-time analysis for harmonic fixed-priority task sets", "hrta"};
    app.require_subcommand(1);

    AnalyzeOptions ao;
    auto* analyze = app.add_subcommand("analyze", "compute worst-case response times");
    analyze->add_option("-i,--input", ao.input, "task-set file")->required();
    analyze->add_option("-o,--output", ao.output, "CSV destination (default stdout)");
    analyze->add_option("-m,--method", ao.method, "analysis method")->check(CLI::IsMember(kMethods));
    analyze->add_option("-t,--target", ao.target, "'all' or a priority");
    analyze->add_flag("--deterministic", ao.deterministic, "omit the timestamp");
    analyze->add_flag("--cross-validate", ao.cross_validate, "fail if exact methods disagree");

    std::string cj_input, cj_target, cj_output;
    auto* check = app.add_subcommand("check-jitter", "solve the virtual-jitter constraint system");
    check->add_option("-i,--input", cj_input, "task-set file")->required();
    check->add_option("-t,--target", cj_target, "'all' or a priority (default: lowest priority)");
    check->add_option("-o,--output", cj_output, "destination (default stdout)");
    bool cj_det = false;
    check->add_flag("--deterministic", cj_det, "accepted for symmetry; output has no timestamp");

    GenerateOptions go;
    auto* gen = app.add_subcommand("generate", "generate random harmonic task sets");
    gen->add_option("-n,--n,--tasks", go.tasks, "number of tasks");
    gen->add_option("-u,--utilization", go.utilization, "total utilization, e.g. 0.95 or 19/20");
    gen->add_option("-s,--seed", go.seed, "random seed");
    gen->add_option("--base-period", go.base_period, "period of the shortest-period task");
    gen->add_option("--factor-min", go.factor_min, "smallest period multiplier");
    gen->add_option("--factor-max", go.factor_max, "largest period multiplier");
    gen->add_option("--jitter-mode", go.jitter_mode, "none, unconstrained or constrained")
        ->check(CLI::IsMember({"none", "unconstrained", "constrained"}));
    gen->add_option("--alpha", go.alpha, "jitter bound as a fraction of the period (unconstrained)");
    gen->add_option("-c,--count", go.count, "number of task sets");
    gen->add_option("-o,--output", go.output, "file, or directory with --split");
    gen->add_flag("--split", go.split, "one file per task set");
    bool gen_det = false;
    gen->add_flag("--deterministic", gen_det, "accepted for symmetry; output has no timestamp");

    ExperimentOptions eo;
    auto* exp = app.add_subcommand("experiment", "run a statistical experiment");
    exp->add_option("name", eo.name, "heuristic-quality, feasibility-sweep or oracle-cross-check")->required();
    exp->add_option("--sets", eo.sets, "task sets per point");
    exp->add_option("--hp-tasks", eo.hp_tasks, "higher-priority tasks per set");
    exp->add_option("--max-tasks", eo.max_tasks, "largest set size (oracle-cross-check)");
    exp->add_option("-u,--utilization", eo.utilization, "utilization (feasibility-sweep)");
    exp->add_option("--points", eo.points, "utilization grid or alpha grid");
    exp->add_option("-s,--seed", eo.seed, "base seed");
    exp->add_option("-j,--jobs", eo.jobs, "worker threads (0 = all cores)");
    exp->add_option("-o,--output", eo.output, "CSV destination (default stdout)");
    bool exp_det = false;
    exp->add_flag("--deterministic", exp_det, "accepted for symmetry; output has no timestamp");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (*analyze) {
            return cmd_analyze(ao, out, err);
        }
        if (*check) {
            return cmd_check_jitter(cj_input, cj_target, cj_output, out);
        }
        if (*gen) {
            return cmd_generate(go, out);
        }
        if (*exp) {
            return cmd_experiment(eo, out);
        }
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace hrta::cli
