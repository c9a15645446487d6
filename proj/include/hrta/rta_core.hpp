#pragma once

#include "hrta/rational.hpp"
#include "hrta/task_model.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace hrta {

struct RtaResult {
    Rational wcrt;
    std::size_t iterations = 0;
    // Successive iterates. For the fixed-point methods the last two entries
    // are equal; the harmonic methods store their stage values here.
    std::vector<Rational> trace;
    bool schedulable = false;
    Rational margin;  // deadline (minus own jitter for jitter-aware methods) - wcrt
};

enum class StartValue {
    Bound,  // C_n / (1 - U_hp), raised by the jitter terms for the jitter-aware form
    Wcet,   // plain C_n
};

struct FixedPointOptions {
    StartValue start = StartValue::Bound;
    std::size_t max_iterations = 1'000'000;
};

/// Least fixed point of t = C_n + sum_i C_i ceil(t / T_i) over the
/// higher-priority tasks. Jitters are ignored. Accepts non-harmonic sets.
RtaResult wcrt_fixed_point(const TaskSet& ts, std::size_t target, const FixedPointOptions& opts = {});

/// Least fixed point of t = C_n + sum_i C_i ceil((t + J_i) / T_i).
/// Schedulable iff wcrt <= D_n - J_n.
RtaResult wcrt_fixed_point_jitter(const TaskSet& ts, std::size_t target, const FixedPointOptions& opts = {});

/// Iterates t <- demand(t) from `start` until two iterates agree. `start`
/// must not exceed the least fixed point and `demand` must be
/// non-decreasing. Throws NonConvergent past `horizon` or max_iterations.
struct FixedPointRun {
    Rational value;
    std::vector<Rational> trace;
};
FixedPointRun least_fixed_point(const std::function<Rational(const Rational&)>& demand, Rational start,
                                const Rational& horizon, std::size_t max_iterations);

/// ceil(x + (1 - x/z) * ceil(z)); equals ceil(z) whenever 0 < x <= z.
Rational nested_ceil(const Rational& x, const Rational& z);

}  // namespace hrta
