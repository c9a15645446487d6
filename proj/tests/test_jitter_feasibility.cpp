#include "catch_amalgamated.hpp"

#include "hrta/generator.hpp"
#include "hrta/jitter_feasibility.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hrta;
using support::set_of;

namespace {

std::vector<Integer> ints(std::initializer_list<long> v) {
    std::vector<Integer> out;
    for (long x : v) {
        out.emplace_back(x);
    }
    return out;
}

FeasibilityProblem problem(std::vector<Time> periods, std::vector<Time> wcets, std::vector<Time> jitters) {
    FeasibilityProblem pr;
    pr.periods = std::move(periods);
    for (Time c : wcets) {
        pr.wcets.push_back(to_rational(c));
    }
    pr.jitters = std::move(jitters);
    return pr;
}

// Constraint check written out independently of is_witness; m_1 may be any
// value so that shifted solutions can be tested.
bool satisfies(const FeasibilityProblem& pr, const std::vector<Integer>& m) {
    const std::size_t n = pr.size();
    const Integer top = Integer(static_cast<long>(pr.jitters[n - 1])) + m[n - 1] * static_cast<long>(pr.periods[n - 1]);
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i] < 0) {
            return false;
        }
        Rational after = 0;
        for (std::size_t k = i + 1; k < n; ++k) {
            after += pr.wcets[k];
        }
        const Integer vj = Integer(static_cast<long>(pr.jitters[i])) + m[i] * static_cast<long>(pr.periods[i]);
        if (vj > top || Rational(vj) + after < Rational(top)) {
            return false;
        }
    }
    return true;
}

std::vector<oracle::HpTask> hp_tasks(const FeasibilityProblem& pr) {
    std::vector<oracle::HpTask> out;
    for (std::size_t i = 0; i < pr.size(); ++i) {
        out.push_back({pr.periods[i], to_time(floor(pr.wcets[i])), pr.jitters[i]});
    }
    return out;
}

// Small harmonic problem with integer WCETs, periods non-increasing.
FeasibilityProblem random_problem(Rng& rng, std::size_t max_tasks, Time max_factor, bool constrained) {
    GenConfig g;
    g.factor_range = {1, max_factor};
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_tasks)));
    const Rational u = make_rational(rng.uniform_int(5, 95), 100);
    std::vector<Time> periods = gen_harmonic_periods(n, g, rng);
    std::reverse(periods.begin(), periods.end());
    FeasibilityProblem pr;
    pr.periods = periods;
    for (Rational total = 1; total >= 1;) {
        const std::vector<Rational> shares = uunifast(n, u, rng);
        pr.wcets.clear();
        total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            pr.wcets.push_back(Rational(std::max<Integer>(1, floor(shares[i] * periods[i]))));
            total += pr.wcets.back() / periods[i];
        }
    }
    if (constrained) {
        pr.jitters = gen_constrained_jitters(pr.periods, pr.wcets, rng);
    } else {
        pr.jitters = gen_unconstrained_jitters(pr.periods, make_rational(rng.uniform_int(1, 10), 10), rng);
    }
    return pr;
}

}  // namespace

TEST_CASE("worked example", "[jitter-feasibility]") {
    SECTION("order as listed") {
        const auto r = solve_feasibility(problem({240, 120, 120, 20, 10}, {1, 50, 50, 1, 1}, {167, 119, 0, 0, 0}));
        REQUIRE(r.feasible());
        CHECK(r.m == ints({1, 3, 4, 24, 48}));
        CHECK(*r.virtual_jitter_max == 480);
        REQUIRE(r.bound_trace.size() == 4);
        CHECK(r.bound_trace[0].lower == 410);
        CHECK(r.bound_trace[0].upper == 500);
        REQUIRE(r.bound_trace[1].branch.has_value());
        CHECK(r.bound_trace[1].branch->diff_lower == 0);
        CHECK(r.bound_trace[1].branch->diff_upper == 20);
        CHECK(r.bound_trace[1].branch->chose_upper);
        CHECK(*r.bound_trace[1].m_lower == 2);
        CHECK(*r.bound_trace[1].m_upper == 3);
        CHECK(r.bound_trace[1].lower == 480);
        CHECK(r.bound_trace[1].upper == 500);
        CHECK(r.bound_trace[2].lower == 480);
        CHECK(r.bound_trace[2].upper == 480);
        CHECK(r.bound_trace[3].lower == 480);
        CHECK(r.bound_trace[3].upper == 480);
    }
    SECTION("from the task set in canonical order") {
        const TaskSet ts = support::worked_example();
        const auto r = solve_feasibility(ts, 5);
        REQUIRE(r.feasible());
        CHECK(*r.virtual_jitter_max == 480);
        CHECK(r.order == std::vector<std::size_t>{0, 2, 1, 3, 4});
        CHECK(r.m == ints({1, 4, 3, 24, 48}));
        CHECK(r.bound_trace[0].lower == 410);
        CHECK(r.bound_trace[1].branch->diff_lower == 0);
        CHECK(r.bound_trace[1].branch->diff_upper == 20);
        CHECK(r.bound_trace[1].lower == 480);
        CHECK(r.bound_trace[1].upper == 500);
        CHECK(r.bound_trace[2].upper == 480);

        const auto bf = brute_force_feasibility(ts, 5);
        REQUIRE(bf.result.feasible());
        CHECK(bf.feasible_last == ints({48}));
        CHECK(bf.result.m.back() == 48);
    }
}

TEST_CASE("two-task examples", "[jitter-feasibility]") {
    const auto bad = solve_feasibility(problem({100, 10}, {1, 1}, {55, 0}));
    CHECK_FALSE(bad.feasible());
    CHECK(*bad.failure_stage == 1);
    CHECK(bad.bound_trace.back().lower == 160);
    CHECK(bad.bound_trace.back().upper == 150);
    CHECK(bad.m.empty());
    CHECK_FALSE(brute_force_feasibility(problem({100, 10}, {1, 1}, {55, 0})).result.feasible());

    const auto good = solve_feasibility(problem({100, 10}, {1, 1}, {50, 0}));
    REQUIRE(good.feasible());
    CHECK(good.m == ints({1, 15}));
    CHECK(*good.virtual_jitter_max == 150);
    const auto bf = brute_force_feasibility(problem({100, 10}, {1, 1}, {50, 0}));
    CHECK(bf.witness_count == 1);
    CHECK(bf.feasible_last == ints({15}));
}

TEST_CASE("single higher-priority task", "[jitter-feasibility]") {
    const auto r = solve_feasibility(problem({40}, {3}, {7}));
    REQUIRE(r.feasible());
    CHECK(r.m == ints({1}));
    CHECK(*r.virtual_jitter_max == 47);
    CHECK(brute_force_feasibility(problem({40}, {3}, {7})).result.feasible());

    const auto empty = solve_feasibility(FeasibilityProblem{});
    CHECK(empty.feasible());
    CHECK(*empty.virtual_jitter_max == 0);
}

TEST_CASE("gamma classification", "[jitter-feasibility]") {
    const auto pr = problem({240, 120, 120, 20, 10}, {1, 50, 50, 1, 1}, {167, 119, 0, 0, 0});
    const GammaCase g = classify_gamma(pr, 1);
    CHECK(g.jtilde == 72);
    CHECK(g.kind == GammaKind::One);
    CHECK(oracle::gamma_by_ranges(72, 52, 102, 120) == 1);

    const auto same = problem({40, 20, 10}, {2, 2, 1}, {3, 3, 3});
    CHECK(classify_gamma(same, 1).jtilde == 0);
    CHECK(classify_gamma(same, 1).kind == GammaKind::Zero);

    CHECK_THROWS_AS(classify_gamma(pr, 0), Error);
    CHECK_THROWS_AS(classify_gamma(pr, 5), Error);
    CHECK(to_string(GammaKind::Both) == "both");
}

TEST_CASE("virtual jitter end to end on the worked example", "[jitter-feasibility]") {
    const TaskSet ts = support::worked_example();
    const auto fr = solve_feasibility(ts, 5);
    const auto v = wcrt_virtual_jitter(ts, 5, fr);
    CHECK(v.result.wcrt == wcrt_fixed_point_jitter(ts, 5).wcrt);

    const auto bad = set_of({{100, 1, 55}, {10, 1, 0}, {100, 1, 0}});
    const auto fbad = solve_feasibility(bad, 2);
    CHECK_FALSE(fbad.feasible());
    CHECK_THROWS_AS(wcrt_virtual_jitter(bad, 2, fbad), Error);

    const TaskSet single = set_of({{40, 3}, {80, 5}});
    CHECK(wcrt_virtual_jitter(single, 1, solve_feasibility(single, 1)).result.wcrt ==
          wcrt_harmonic(single, 1).result.wcrt);
}

TEST_CASE("feasibility properties on random problems", "[jitter-feasibility][property]") {
    Rng rng(31);
    std::size_t feasible = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        const bool constrained = trial % 2 == 0;
        const FeasibilityProblem pr = random_problem(rng, 6, 4, constrained);
        const FeasibilityResult r = solve_feasibility(pr);
        const auto& bt = r.bound_trace;

        for (std::size_t s = 1; s < bt.size(); ++s) {
            REQUIRE(bt[s].lower >= bt[s - 1].lower);
            REQUIRE(bt[s].upper <= bt[s - 1].upper);
            if (bt[s - 1].lower == bt[s - 1].upper && bt[s].lower <= bt[s].upper) {
                REQUIRE(bt[s].lower == bt[s].upper);
            }
        }

        const BruteForceResult bf = brute_force_feasibility(pr);
        if (constrained) {
            REQUIRE(bf.result.feasible());
        }
        if (!r.feasible()) {
            REQUIRE(r.failure_stage.has_value());
            const StageBounds& last = bt.back();
            REQUIRE(*r.failure_stage == last.stage);
            REQUIRE((last.lower > last.upper || (last.m_lower && *last.m_lower > *last.m_upper)));
            continue;
        }
        ++feasible;
        REQUIRE(bf.result.feasible());
        REQUIRE(r.m[0] == 1);
        REQUIRE(satisfies(pr, r.m));
        REQUIRE(is_witness(pr, r.m));
        REQUIRE(*r.virtual_jitter_max == pr.jitters.back() + r.m.back() * static_cast<long>(pr.periods.back()));
        for (const auto& s : bt) {
            REQUIRE(s.lower <= s.upper);
        }
        REQUIRE(std::find(bf.feasible_last.begin(), bf.feasible_last.end(), r.m.back()) != bf.feasible_last.end());

        // shifting by whole multiples of the longest period
        for (long alpha : {1L, 2L}) {
            std::vector<Integer> shifted = r.m;
            for (std::size_t i = 0; i < pr.size(); ++i) {
                shifted[i] += alpha * (pr.periods[0] / pr.periods[i]);
            }
            REQUIRE(satisfies(pr, shifted));
        }

        // interference is unchanged by virtual jitters
        for (int k = 0; k < 5; ++k) {
            const Time t = rng.uniform_int(0, 5 * pr.periods[0]);
            Rational real = 0;
            Rational virt = 0;
            for (std::size_t i = 0; i < pr.size(); ++i) {
                const Time vj = pr.jitters[i] + to_time(r.m[i]) * pr.periods[i];
                real += pr.wcets[i] * oracle::ceil_div(t + pr.jitters[i], pr.periods[i]);
                virt += pr.wcets[i] * (oracle::ceil_div(t + vj, pr.periods[i]) - to_time(r.m[i]));
            }
            REQUIRE(real == virt);
        }
    }
    CHECK(feasible > 1000);
}

TEST_CASE("brute force agrees with full enumeration", "[jitter-feasibility][property]") {
    Rng rng(32);
    for (int trial = 0; trial < 400; ++trial) {
        const FeasibilityProblem pr = random_problem(rng, 4, 2, trial % 2 == 0);
        std::vector<std::vector<Time>> found;
        const auto count = oracle::enumerate_witnesses(hp_tasks(pr), 4, &found);
        const BruteForceResult bf = brute_force_feasibility(pr);
        REQUIRE(bf.result.feasible() == (count > 0));
        if (count < 1000) {
            REQUIRE(bf.witness_count == count);
        }
        for (const auto& m : found) {
            std::vector<Integer> mz(m.begin(), m.end());
            REQUIRE(is_witness(pr, mz));
        }
    }
}

TEST_CASE("gamma cases and uniqueness", "[jitter-feasibility][property]") {
    Rng rng(33);
    int unique_checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const FeasibilityProblem pr = random_problem(rng, 5, 3, trial % 3 != 0);
        const std::size_t n = pr.size();
        bool no_both = true;
        Rational prefix_util = 0;
        for (std::size_t i = 1; i < n; ++i) {
            prefix_util += pr.wcets[i - 1] / pr.periods[i - 1];
            const GammaCase g = classify_gamma(pr, i);
            Time a = 0;
            for (std::size_t k = i + 1; k < n; ++k) {
                a += to_time(floor(pr.wcets[k]));
            }
            const Time b = a + to_time(floor(pr.wcets[i]));
            const Time diff = pr.jitters[i] - pr.jitters[i - 1];
            REQUIRE(g.jtilde == diff - pr.periods[i] * oracle::floor_div(diff, pr.periods[i]));
            REQUIRE(static_cast<int>(g.kind) == oracle::gamma_by_ranges(g.jtilde, a, b, pr.periods[i]));
            if (a + b < pr.periods[i] || prefix_util >= make_rational(1, 2)) {
                REQUIRE(g.kind != GammaKind::Both);
            }
            no_both = no_both && g.kind != GammaKind::Both;
        }
        const FeasibilityResult r = solve_feasibility(pr);
        if (no_both && r.feasible() && n >= 2) {
            ++unique_checked;
            const BruteForceResult bf = brute_force_feasibility(pr);
            REQUIRE(bf.witness_count == 1);
            REQUIRE(bf.feasible_last == std::vector<Integer>{r.m.back()});
        }
    }
    CHECK(unique_checked > 50);
}
