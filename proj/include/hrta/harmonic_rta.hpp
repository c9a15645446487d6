#pragma once

#include "hrta/rta_core.hpp"

#include <optional>

namespace hrta {

struct HarmonicIterationTrace {
    std::vector<Rational> stage_values;  // entry 0 is the start value
    std::size_t ceil_evals = 0;
    // Refinement stage whose input was already a multiple of the stage
    // period; its value repeats the previous one and later stages are skipped.
    std::optional<std::size_t> early_stop_stage;
};

struct HarmonicOptions {
    bool early_stop = true;
};

struct HarmonicResult {
    RtaResult result;
    HarmonicIterationTrace trace;
};

/// Runs the per-stage refinement over a higher-priority order for the demand
/// t = constant + sum_i C_i ceil((t + jitter) / T_i). constant + jitter must
/// be positive.
HarmonicIterationTrace harmonic_stages(const InterferenceOrder& order, const Rational& constant, const Rational& jitter,
                                       const HarmonicOptions& opts = {});

/// Exact WCRT of a jitter-free harmonic set in at most one ceiling evaluation
/// per higher-priority task. Throws JitterPresent if any relevant jitter is set.
HarmonicResult wcrt_harmonic(const TaskSet& ts, std::size_t target, const HarmonicOptions& opts = {});

/// Same refinement with one release jitter J shared by all higher-priority
/// tasks. Schedulable iff wcrt <= D_n - J_n.
HarmonicResult wcrt_uniform_jitter(const TaskSet& ts, std::size_t target, Time jitter,
                                   const HarmonicOptions& opts = {});

struct JitterBounds {
    Rational low;   // uniform jitter at the smallest higher-priority jitter
    Rational high;  // uniform jitter at the largest
};
JitterBounds wcrt_jitter_bounds(const TaskSet& ts, std::size_t target);

/// Least fixed point of the demand where each higher-priority task is
/// shifted right by the WCET of the tasks after it in canonical order.
RtaResult wcrt_exclusion_model(const TaskSet& ts, std::size_t target);

/// Least fixed point with per-task delays delta (canonical order), each within
/// [0, cumulative_wcet[i]]. Throws DeltaOutOfRange naming the index.
RtaResult wcrt_with_delays(const TaskSet& ts, std::size_t target, const std::vector<Rational>& delta);

/// True iff max(0, J_last - cumulative_wcet[i]) <= J_i <= J_last for every
/// higher-priority task, J_last being the jitter of the last task in canonical order.
bool check_restricted_jitter(const TaskSet& ts, std::size_t target);

}  // namespace hrta
