#pragma once

#include "hrta/harmonic_rta.hpp"

#include <cstdint>
#include <optional>

namespace hrta {

/// Higher-priority tasks in canonical order. WCETs may be rational so that the
/// statistical experiments can use unrounded utilizations.
struct FeasibilityProblem {
    std::vector<Time> periods;
    std::vector<Rational> wcets;
    std::vector<Time> jitters;

    std::size_t size() const noexcept { return periods.size(); }

    static FeasibilityProblem from_order(const InterferenceOrder& po);
};

enum class Verdict { Feasible, Infeasible };

struct BranchChoice {
    Integer diff_lower;  // window width if the smaller candidate is taken
    Integer diff_upper;
    bool chose_upper = false;
};

/// Window for J'_last - J_last (that is m_last * T_last) after one stage.
struct StageBounds {
    std::size_t stage = 0;  // 1-based position in canonical order
    Integer lower;
    Integer upper;
    std::optional<Integer> m_lower;  // candidate range for m at this stage (stages >= 2)
    std::optional<Integer> m_upper;
    std::optional<BranchChoice> branch;
};

struct FeasibilityResult {
    Verdict verdict = Verdict::Infeasible;
    std::vector<Integer> m;  // canonical order; empty unless feasible
    std::optional<Integer> virtual_jitter_max;
    std::optional<std::size_t> failure_stage;  // 1-based
    std::vector<StageBounds> bound_trace;
    std::vector<std::size_t> order;  // task indices of the canonical order, when built from a task set

    bool feasible() const noexcept { return verdict == Verdict::Feasible; }
};

/// Propagates the window on the last virtual jitter through the canonical order,
/// picking between two candidates by the wider remaining window (ties take
/// the larger candidate). Infeasible is a result, not an error.
FeasibilityResult solve_feasibility(const FeasibilityProblem& problem);
FeasibilityResult solve_feasibility(const TaskSet& ts, std::size_t target);

/// J'_last - C_{after i} <= J_i + m_i T_i <= J'_last for all i, with m_1 = 1,
/// m_i >= 0 and J'_last = J_last + m_last T_last.
bool is_witness(const FeasibilityProblem& problem, const std::vector<Integer>& m);

struct BruteForceResult {
    FeasibilityResult result;           // witness uses the smallest feasible m_last
    std::vector<Integer> feasible_last; // every m_last admitting a witness
    std::uint64_t witness_count = 0;    // saturating
};

/// Exhaustive search with m_1 = 1 and m_i in [0, cap * T_1 / T_i]. Throws
/// CapTooSmall if the propagation result lies outside that box.
BruteForceResult brute_force_feasibility(const FeasibilityProblem& problem, std::int64_t m_cap = 4);
BruteForceResult brute_force_feasibility(const TaskSet& ts, std::size_t target, std::int64_t m_cap = 4);

enum class GammaKind { Zero, One, Empty, Both };

struct GammaCase {
    GammaKind kind = GammaKind::Zero;
    Time jtilde = 0;  // (J_{i+1} - J_i) mod T_{i+1}
};

/// Classifies the admissible offsets between canonical-order positions i and i+1
/// (1-based, 1 <= i <= N-1 for N higher-priority tasks).
GammaCase classify_gamma(const FeasibilityProblem& problem, std::size_t i);
GammaCase classify_gamma(const TaskSet& ts, std::size_t target, std::size_t i);

/// WCRT from the uniform-jitter refinement at J'_max with the demand
/// constant lowered by sum_i m_i C_i. Throws InfeasibleInput when fr is not
/// feasible.
HarmonicResult wcrt_virtual_jitter(const TaskSet& ts, std::size_t target, const FeasibilityResult& fr,
                                   const HarmonicOptions& opts = {});

std::string_view to_string(GammaKind kind);

}  // namespace hrta
