#pragma once

#include "hrta/task_model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace hrta {

/// xoshiro256** seeded through splitmix64. The state transition is fixed so
/// that experiment streams are reproducible across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform integer in [lo, hi], unbiased.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    /// k / 2^53 for a uniform 53-bit k.
    std::uint64_t unit_numerator();
    double unit_double();

    static constexpr int kUnitBits = 53;

private:
    std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

/// n utilizations drawn uniformly from the simplex, summing exactly to total.
std::vector<Rational> uunifast(std::size_t n, const Rational& total, Rng& rng);

struct Unconstrained {
    Rational alpha;
};
struct ConstraintSatisfying {};
struct NoJitter {};
using JitterMode = std::variant<NoJitter, Unconstrained, ConstraintSatisfying>;

struct GenConfig {
    std::size_t task_count = 5;
    Rational total_utilization = Rational(1, 2);
    Time base_period = 10;
    std::pair<Time, Time> factor_range{1, 4};
    JitterMode jitter_mode = NoJitter{};
    std::uint64_t seed = 1;

    void check() const;  // throws InvalidConfig
};

/// T_1 = base, T_{k+1} = T_k * factor with factor uniform in factor_range.
std::vector<Time> gen_harmonic_periods(std::size_t n, const GenConfig& cfg, Rng& rng);

/// Jitters for tasks given in canonical order (non-increasing periods) whose
/// virtual-jitter system has a solution with m_1 = 1 in that order.
std::vector<Time> gen_constrained_jitters(const std::vector<Time>& periods, const std::vector<Rational>& wcets,
                                          Rng& rng);

/// J_i uniform in [0, floor(alpha * T_i)], kept below T_i.
std::vector<Time> gen_unconstrained_jitters(const std::vector<Time>& periods, const Rational& alpha, Rng& rng);

/// Higher-priority tasks with unrounded WCETs, in canonical order, ready for the
/// feasibility solver. Used by the statistical experiments.
struct RawHigherPriority {
    std::vector<Time> periods;
    std::vector<Rational> wcets;
    std::vector<Time> jitters;
};
RawHigherPriority gen_raw_higher_priority(std::size_t count, const Rational& total_utilization,
                                          const JitterMode& mode, const GenConfig& cfg, Rng& rng);

/// A validated task set with integer WCETs (C = round(T * U), at least 1;
/// rounded down instead when rounding to nearest reaches utilization 1)
/// and D = T. Priorities are a random permutation. In constraint-satisfying
/// mode the lowest-priority task carries no jitter and the others admit a
/// virtual-jitter assignment in the canonical order.
TaskSet generate_task_set(const GenConfig& cfg);
TaskSet generate_task_set(const GenConfig& cfg, Rng& rng);

}  // namespace hrta
