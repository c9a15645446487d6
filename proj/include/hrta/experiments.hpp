#pragma once

#include "hrta/generator.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hrta {

/// Work is cut into fixed-size shards; shard k of a run draws from
/// Rng(seed + k), so results do not depend on the number of threads.
struct ShardPlan {
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::size_t shard_size = 1000;
};

struct HeuristicQualityConfig {
    std::size_t hp_tasks = 14;
    std::size_t sets_per_point = 50'000;
    std::vector<Rational> utilizations;  // empty: 0.05, 0.10, ..., 0.95
    GenConfig periods;                   // base period and factor range
    ShardPlan plan;
};

struct HeuristicQualityRow {
    Rational utilization;
    std::uint64_t sets = 0;
    std::uint64_t feasible = 0;
    std::uint64_t misclassified = 0;
};

/// Generates constraint-satisfying jitters (unrounded WCETs) and counts how
/// often the propagation solver still reports infeasible.
std::vector<HeuristicQualityRow> run_heuristic_quality(const HeuristicQualityConfig& cfg);

struct FeasibilitySweepConfig {
    std::size_t hp_tasks = 4;
    std::size_t sets_per_point = 100'000;
    Rational utilization = Rational(19, 20);
    std::vector<Rational> alphas;  // empty: 0.1, 0.2, ..., 1.0
    GenConfig periods;
    ShardPlan plan;
};

struct FeasibilitySweepRow {
    Rational alpha;
    std::uint64_t sets = 0;
    std::uint64_t solver_feasible = 0;
    std::uint64_t exact_feasible = 0;
};

/// Unconstrained jitters; counts sets whose virtual-jitter system is
/// solvable, both by the solver and by exhaustive search.
std::vector<FeasibilitySweepRow> run_feasibility_sweep(const FeasibilitySweepConfig& cfg);

struct CrossCheckConfig {
    std::size_t sets = 1000;
    std::size_t max_tasks = 8;
    Rational min_utilization = Rational(1, 20);
    Rational max_utilization = Rational(49, 50);
    ShardPlan plan;
};

struct CrossCheckRow {
    std::string check;
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
};

/// Runs every analysis on random sets and counts disagreements.
std::vector<CrossCheckRow> run_oracle_cross_check(const CrossCheckConfig& cfg);

/// Rational uniform in [lo, hi) on a 2^53 grid.
Rational uniform_rational(const Rational& lo, const Rational& hi, Rng& rng);

/// Evaluates `shard(k, rng)` for k in [0, shard_count) on plan.jobs threads.
void run_shards(std::size_t shard_count, const ShardPlan& plan,
                const std::function<void(std::size_t, Rng&)>& shard);

}  // namespace hrta
