// Acceptance run: one PASS/FAIL line per criterion. Exit status 1 if any fails.

#include "hrta/cli.hpp"
#include "hrta/experiments.hpp"
#include "hrta/generator.hpp"
#include "hrta/harmonic_rta.hpp"
#include "hrta/jitter_feasibility.hpp"
#include "hrta/simulator.hpp"
#include "hrta/taskset_io.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

using namespace hrta;

namespace {

// Pinned limits.
constexpr double kTableSeconds = 1.0;
constexpr double kWorkedExampleSeconds = 1.0;
constexpr double kOracleSeconds = 60.0;
constexpr double kJitterSeconds = 120.0;
constexpr double kExperimentSeconds = 600.0;
constexpr std::size_t kOracleSets = 10'000;
constexpr std::size_t kOracleMaxTasks = 12;
constexpr std::size_t kJitterSets = 10'000;
constexpr std::size_t kJitterMaxTasks = 10;
constexpr std::size_t kNestedCeilPairs = 10'000;
constexpr std::size_t kQualityHpTasks = 14;
constexpr std::size_t kQualitySets = 50'000;
constexpr double kQualityMaxRate = 1e-4;
constexpr std::size_t kSweepHpTasks = 4;  // five tasks including the analyzed one
constexpr std::size_t kSweepSets = 100'000;
constexpr double kSweepMaxFraction = 0.02;

const Rational kMinU = make_rational(1, 20);
const Rational kMaxU = make_rational(49, 50);

struct Verdict {
    bool pass = true;
    std::string detail;
};

bool all_passed = true;

void report(const std::string& name, double limit, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit > 0 && secs >= limit) {
        v.pass = false;
        v.detail += "; over the time limit";
    }
    all_passed = all_passed && v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " [" << std::fixed
              << std::setprecision(2) << secs << " s";
    if (limit > 0) {
        std::cout << " < " << std::setprecision(0) << limit << " s";
    }
    std::cout << "]" << std::endl;
}

std::string data(const std::string& name) { return std::string(HRTA_TEST_DATA) + "/" + name; }

std::vector<std::vector<std::string>> csv_body(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

unsigned worker_count() { return std::max(1U, std::thread::hardware_concurrency()); }

TaskSet random_set(Rng& rng, std::size_t max_tasks, const JitterMode& mode) {
    GenConfig g;
    g.task_count = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_tasks)));
    g.total_utilization = uniform_rational(kMinU, kMaxU, rng);
    g.jitter_mode = mode;
    return generate_task_set(g, rng);
}

Verdict six_task_jitter() {
    const std::vector<std::string> expected{"6", "14", "18", "35", "42", "72"};
    Verdict v;
    std::ostringstream detail;
    for (const std::string method : {"uniform-jitter", "fixed-point-jitter"}) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run({"analyze", "-i", data("six_task_jitter.json"), "-m", method, "--deterministic"}, out, err);
        const auto rows = csv_body(out.str());
        std::string got;
        bool ok = code == cli::kOk && rows.size() == expected.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            got += (i ? "," : "") + rows[i][7] + (rows[i][8] == "1" ? "" : "/" + rows[i][8]);
            ok = ok && i < expected.size() && rows[i][7] == expected[i] && rows[i][8] == "1" && rows[i][10] == "true";
        }
        v.pass = v.pass && ok;
        detail << method << " (" << got << ") exit " << code << "; ";
    }
    const TaskSet ts = validate(read_task_file(data("six_task_jitter.json")));
    const auto t2 = wcrt_uniform_jitter(ts, 1, 8).trace.stage_values;
    const auto t3 = wcrt_uniform_jitter(ts, 2, 8).trace.stage_values;
    const bool stages = t2.size() == 2 && t2[0] == make_rational(88, 9) && t2[1] == 14 && t3.size() == 3 &&
                        t3[0] == make_rational(176, 23) && t3[1] == make_rational(128, 9) && t3[2] == 18;
    v.pass = v.pass && stages;
    detail << "stages task 2 " << to_string(t2.front()) << ", task 3 " << to_string(t3[0]) << " "
           << to_string(t3[1]);
    v.detail = detail.str();
    return v;
}

Verdict worked_example() {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run({"check-jitter", "-i", data("example45.json")}, out, err);
    const std::string text = out.str();
    const std::vector<std::string> needles{
        "feasible, m=(1,3,4,24,48), J'_max=480",
        "stage 1 (priority 1): m = 1, window [410, 500]",
        "diff 0 vs 20, chose 4, window [480, 500]",
        "stage 3 (priority 2): m in [3, 3], window [480, 480]",
        "stage 4 (priority 4): m in [24, 24], window [480, 480]",
    };
    Verdict v{code == cli::kOk, "exit " + std::to_string(code)};
    for (const auto& n : needles) {
        if (text.find(n) == std::string::npos) {
            v.pass = false;
            v.detail += "; missing '" + n + "'";
        }
    }
    if (v.pass) {
        v.detail += "; m=(1,3,4,24,48), J'_max=480, windows [410,500] -> diff 0 vs 20 -> [480,500] -> [480,480]";
    } else {
        v.detail += "; output:\n" + text;
    }
    return v;
}

struct OracleCorpus {
    std::size_t sets = 0;
    std::size_t cases = 0;
    std::size_t mismatches = 0;
    std::size_t work_violations = 0;
    std::size_t interval_checks = 0;
    std::size_t interval_violations = 0;
    std::size_t max_stages = 0;
};

OracleCorpus oracle_corpus;

Verdict theorem_equivalence() {
    Rng rng(20'240'101);
    OracleCorpus& c = oracle_corpus;
    for (std::size_t s = 0; s < kOracleSets; ++s) {
        const TaskSet ts = random_set(rng, kOracleMaxTasks, NoJitter{});
        ++c.sets;
        std::vector<HarmonicResult> harmonic;
        Rational longest = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            harmonic.push_back(wcrt_harmonic(ts, i));
            longest = std::max(longest, harmonic.back().result.wcrt);
        }
        SimConfig cfg;
        cfg.horizon = std::max(ts[0].period, to_time(ceil(longest)) + 1);
        for (const Task& t : ts.tasks()) {
            cfg.horizon = std::max(cfg.horizon, t.period);
        }
        cfg.stop_after_first_jobs = true;
        const SimTrace sim = simulate(ts, cfg);

        for (std::size_t i = 0; i < ts.size(); ++i) {
            ++c.cases;
            const HarmonicResult& h = harmonic[i];
            const Rational& w = h.result.wcrt;
            const bool same = w == wcrt_fixed_point(ts, i).wcrt && w == wcrt_exclusion_model(ts, i).wcrt &&
                              sim.first_job_response[i] && Rational(*sim.first_job_response[i]) == w;
            c.mismatches += same ? 0 : 1;

            const InterferenceOrder po = interference_order(ts, i);
            const std::size_t stages = h.trace.stage_values.size() - 1;
            c.max_stages = std::max(c.max_stages, stages);
            if (stages > po.size() || h.trace.ceil_evals != stages) {
                ++c.work_violations;
            }

            for (std::size_t p = 0; p < po.size(); ++p) {
                const Time period = po.tasks[p].period;
                const Time width = po.tasks[p].wcet + po.cumulative_wcet[p];
                for (Time m = 1; m * period < w; ++m) {
                    ++c.interval_checks;
                    if (w > m * period && w <= m * period + width) {
                        ++c.interval_violations;
                    }
                }
            }
        }
    }
    return {c.mismatches == 0, std::to_string(c.sets) + " sets, " + std::to_string(c.cases) +
                                   " tasks, harmonic=fixed-point=exclusion=simulation mismatches " +
                                   std::to_string(c.mismatches)};
}

Verdict linear_work() {
    const OracleCorpus& c = oracle_corpus;
    return {c.cases > 0 && c.work_violations == 0,
            std::to_string(c.cases) + " traces, violations " + std::to_string(c.work_violations) +
                ", most stages " + std::to_string(c.max_stages)};
}

Verdict exclusion_intervals() {
    const OracleCorpus& c = oracle_corpus;
    return {c.interval_checks > 0 && c.interval_violations == 0,
            std::to_string(c.interval_checks) + " intervals checked, violations " +
                std::to_string(c.interval_violations)};
}

struct JitterCorpus {
    std::size_t virtual_cases = 0;
    std::size_t virtual_failures = 0;
    std::size_t infeasible = 0;
    std::size_t restricted_cases = 0;
    std::size_t restricted_failures = 0;
    std::size_t bound_cases = 0;
    std::size_t bound_violations = 0;
};

JitterCorpus jitter_corpus;

void check_bounds(const TaskSet& ts, std::size_t i, const Rational& exact) {
    const JitterBounds b = wcrt_jitter_bounds(ts, i);
    ++jitter_corpus.bound_cases;
    if (!(b.low <= exact && exact <= b.high)) {
        ++jitter_corpus.bound_violations;
    }
}

Verdict jitter_end_to_end() {
    Rng rng(20'240'202);
    JitterCorpus& c = jitter_corpus;
    for (std::size_t s = 0; s < kJitterSets; ++s) {
        const TaskSet ts = random_set(rng, kJitterMaxTasks, ConstraintSatisfying{});
        for (std::size_t i = 1; i < ts.size(); ++i) {
            const Rational exact = wcrt_fixed_point_jitter(ts, i).wcrt;
            const FeasibilityResult fr = solve_feasibility(ts, i);
            if (fr.feasible()) {
                ++c.virtual_cases;
                if (wcrt_virtual_jitter(ts, i, fr).result.wcrt != exact) {
                    ++c.virtual_failures;
                }
            } else {
                ++c.infeasible;
            }
            if (check_restricted_jitter(ts, i)) {
                ++c.restricted_cases;
                const InterferenceOrder po = interference_order(ts, i);
                if (wcrt_uniform_jitter(ts, i, po.tasks.back().jitter).result.wcrt != exact) {
                    ++c.restricted_failures;
                }
            }
            check_bounds(ts, i, exact);
        }
    }
    return {c.virtual_failures == 0 && c.restricted_failures == 0 && c.virtual_cases > 0 && c.restricted_cases > 0,
            std::to_string(kJitterSets) + " sets; virtual-jitter " + std::to_string(c.virtual_cases) +
                " feasible targets, failures " + std::to_string(c.virtual_failures) + " (" +
                std::to_string(c.infeasible) + " infeasible targets skipped); restricted " +
                std::to_string(c.restricted_cases) + " targets, failures " + std::to_string(c.restricted_failures)};
}

Verdict bounds_lemma() {
    // the constraint-satisfying corpus above plus an unconstrained one
    Rng rng(20'240'303);
    for (std::size_t s = 0; s < kJitterSets; ++s) {
        const Rational alpha = make_rational(rng.uniform_int(1, 10), 10);
        const TaskSet ts = random_set(rng, kJitterMaxTasks, Unconstrained{alpha});
        for (std::size_t i = 1; i < ts.size(); ++i) {
            check_bounds(ts, i, wcrt_fixed_point_jitter(ts, i).wcrt);
        }
    }
    const JitterCorpus& c = jitter_corpus;
    return {c.bound_violations == 0 && c.bound_cases > 0, std::to_string(c.bound_cases) +
                                                               " targets, violations " +
                                                               std::to_string(c.bound_violations)};
}

Verdict nested_ceil_property() {
    Rng rng(20'240'404);
    std::size_t failures = 0;
    for (std::size_t k = 0; k < kNestedCeilPairs; ++k) {
        const Rational z = make_rational(rng.uniform_int(1, 1'000'000'000), rng.uniform_int(1, 1'000'000));
        const Rational x = z * uniform_rational(0, 1, rng) + z * make_rational(1, 1'000'000'000'000);
        const Rational xc = x > z ? z : x;
        if (nested_ceil(xc, z) != Rational(ceil(z))) {
            ++failures;
        }
    }
    return {failures == 0, std::to_string(kNestedCeilPairs) + " pairs, failures " + std::to_string(failures)};
}

Verdict heuristic_quality() {
    HeuristicQualityConfig cfg;
    cfg.hp_tasks = kQualityHpTasks;
    cfg.sets_per_point = kQualitySets;
    cfg.plan.seed = 20'240'505;
    cfg.plan.jobs = worker_count();
    const auto rows = run_heuristic_quality(cfg);
    Verdict v;
    std::ostringstream d;
    d << kQualityHpTasks << " tasks, " << kQualitySets << " sets/point; misclassified:";
    for (const auto& r : rows) {
        const double rate = static_cast<double>(r.misclassified) / static_cast<double>(r.sets);
        const bool ok = r.utilization <= make_rational(3, 4) ? r.misclassified == 0 : rate <= kQualityMaxRate;
        v.pass = v.pass && ok && r.sets == kQualitySets;
        d << ' ' << to_decimal(r.utilization, 2) << '=' << r.misclassified << (ok ? "" : "!");
    }
    v.detail = d.str();
    return v;
}

Verdict feasibility_sweep() {
    FeasibilitySweepConfig cfg;
    cfg.hp_tasks = kSweepHpTasks;
    cfg.sets_per_point = kSweepSets;
    cfg.utilization = make_rational(19, 20);
    cfg.plan.seed = 20'240'606;
    cfg.plan.jobs = worker_count();
    const auto rows = run_feasibility_sweep(cfg);
    Verdict v;
    std::ostringstream d;
    d << kSweepHpTasks << " higher-priority tasks, U=0.95, " << kSweepSets << " sets/alpha; feasible %:";
    for (const auto& r : rows) {
        const double frac = static_cast<double>(r.solver_feasible) / static_cast<double>(r.sets);
        const double exact = static_cast<double>(r.exact_feasible) / static_cast<double>(r.sets);
        const bool ok = frac < kSweepMaxFraction;
        v.pass = v.pass && ok;
        d << ' ' << to_decimal(r.alpha, 1) << '=' << std::fixed << std::setprecision(2) << 100 * frac << " (exact "
          << 100 * exact << ")" << (ok ? "" : "!");
    }
    v.detail = d.str();
    return v;
}

}  // namespace

int main() {
    report("six-task-jitter-example", kTableSeconds, six_task_jitter);
    report("worked-example-check-jitter", kWorkedExampleSeconds, worked_example);
    report("harmonic-oracle-equivalence", kOracleSeconds, theorem_equivalence);
    report("linear-work-bound", 0, linear_work);
    report("jitter-end-to-end", kJitterSeconds, jitter_end_to_end);
    report("exclusion-intervals", 0, exclusion_intervals);
    report("heuristic-quality", kExperimentSeconds, heuristic_quality);
    report("feasibility-sweep", kExperimentSeconds, feasibility_sweep);
    report("jitter-bounds", 0, bounds_lemma);
    report("nested-ceil", 0, nested_ceil_property);
    return all_passed ? 0 : 1;
}
