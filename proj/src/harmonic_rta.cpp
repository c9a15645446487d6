#include "hrta/harmonic_rta.hpp"

#include <algorithm>

namespace hrta {

namespace {

void require_harmonic(const TaskSet& ts) {
    if (!ts.harmonic()) {
        throw Error(ErrorCode::NonHarmonic, "the harmonic analyses need pairwise harmonic periods");
    }
}

void require_jitter_free(const TaskSet& ts, std::size_t target) {
    for (std::size_t i = 0; i <= target; ++i) {
        if (ts[i].jitter != 0) {
            throw Error(ErrorCode::JitterPresent,
                        "task with priority " + std::to_string(ts[i].priority) +
                            " has release jitter; use a jitter-aware method",
                        {i});
        }
    }
}

RtaResult finish(const Task& self, Rational wcrt, std::vector<Rational> trace, std::size_t iterations,
                 bool jitter_aware) {
    RtaResult r;
    r.wcrt = std::move(wcrt);
    r.trace = std::move(trace);
    r.iterations = iterations;
    Time limit = jitter_aware ? self.deadline - self.jitter : self.deadline;
    r.margin = to_rational(limit) - r.wcrt;
    r.schedulable = r.margin >= 0;
    return r;
}

Rational shifted_horizon(const InterferenceOrder& po, const Rational& cn) {
    Rational acc = cn;
    for (const Task& t : po.tasks) {
        acc += t.wcet;
    }
    return acc / (1 - po.total_util);
}

}  // namespace

HarmonicIterationTrace harmonic_stages(const InterferenceOrder& order, const Rational& constant, const Rational& jitter,
                                       const HarmonicOptions& opts) {
    if (order.total_util >= 1) {
        throw Error(ErrorCode::UtilizationOverload, "higher-priority utilization is not below 1");
    }
    if (constant + jitter <= 0) {
        throw Error(ErrorCode::DomainError, "demand constant plus jitter must be positive");
    }
    HarmonicIterationTrace tr;
    // Work in s = t + jitter, where the demand is jitter free.
    Rational s = (constant + jitter) / (1 - order.total_util);
    tr.stage_values.push_back(s - jitter);
    for (std::size_t p = 0; p < order.size(); ++p) {
        const Task& t = order.tasks[p];
        const Rational period = to_rational(t.period);
        const Rational q = s / period;
        const Rational c(ceil(q));
        ++tr.ceil_evals;
        if (c == q) {
            tr.stage_values.push_back(s - jitter);
            if (opts.early_stop) {
                tr.early_stop_stage = p + 1;
                break;
            }
            continue;
        }
        s += to_rational(t.wcet) * (c - q) / (1 - order.cumulative_util[p]);
        tr.stage_values.push_back(s - jitter);
    }
    return tr;
}

HarmonicResult wcrt_harmonic(const TaskSet& ts, std::size_t target, const HarmonicOptions& opts) {
    require_harmonic(ts);
    InterferenceOrder po = interference_order(ts, target);
    require_jitter_free(ts, target);
    const Task& self = ts[target];
    HarmonicResult out;
    out.trace = harmonic_stages(po, to_rational(self.wcet), Rational(0), opts);
    out.result = finish(self, out.trace.stage_values.back(), out.trace.stage_values, out.trace.ceil_evals, false);
    return out;
}

HarmonicResult wcrt_uniform_jitter(const TaskSet& ts, std::size_t target, Time jitter, const HarmonicOptions& opts) {
    require_harmonic(ts);
    if (jitter < 0) {
        throw Error(ErrorCode::DomainError, "jitter must not be negative");
    }
    InterferenceOrder po = interference_order(ts, target);
    const Task& self = ts[target];
    HarmonicResult out;
    out.trace = harmonic_stages(po, to_rational(self.wcet), to_rational(jitter), opts);
    out.result = finish(self, out.trace.stage_values.back(), out.trace.stage_values, out.trace.ceil_evals, true);
    return out;
}

JitterBounds wcrt_jitter_bounds(const TaskSet& ts, std::size_t target) {
    InterferenceOrder po = interference_order(ts, target);
    Time lo = 0;
    Time hi = 0;
    if (!po.empty()) {
        auto [mn, mx] = std::minmax_element(po.tasks.begin(), po.tasks.end(),
                                            [](const Task& a, const Task& b) { return a.jitter < b.jitter; });
        lo = mn->jitter;
        hi = mx->jitter;
    }
    return {wcrt_uniform_jitter(ts, target, lo).result.wcrt, wcrt_uniform_jitter(ts, target, hi).result.wcrt};
}

RtaResult wcrt_with_delays(const TaskSet& ts, std::size_t target, const std::vector<Rational>& delta) {
    require_harmonic(ts);
    InterferenceOrder po = interference_order(ts, target);
    require_jitter_free(ts, target);
    if (delta.size() != po.size()) {
        throw Error(ErrorCode::DeltaOutOfRange, "expected " + std::to_string(po.size()) + " delays, got " +
                                                    std::to_string(delta.size()));
    }
    for (std::size_t p = 0; p < delta.size(); ++p) {
        if (delta[p] < 0 || delta[p] > po.cumulative_wcet[p]) {
            throw Error(ErrorCode::DeltaOutOfRange,
                        "delay " + to_string(delta[p]) + " at position " + std::to_string(p) + " outside [0, " +
                            std::to_string(po.cumulative_wcet[p]) + "]",
                        {p});
        }
    }
    if (po.total_util >= 1) {
        throw Error(ErrorCode::UtilizationOverload, "higher-priority utilization is not below 1");
    }
    const Task& self = ts[target];
    const Rational cn = to_rational(self.wcet);
    auto demand = [&](const Rational& t) {
        Rational w = cn;
        for (std::size_t p = 0; p < po.size(); ++p) {
            const Task& hp = po.tasks[p];
            w += to_rational(hp.wcet) * Rational(ceil((t - delta[p]) / to_rational(hp.period)));
        }
        return w;
    };
    Rational bound = cn;
    for (std::size_t p = 0; p < po.size(); ++p) {
        bound -= po.tasks[p].utilization() * delta[p];
    }
    bound /= 1 - po.total_util;
    FixedPointRun run = least_fixed_point(demand, std::max(cn, bound), shifted_horizon(po, cn), 1'000'000);
    std::size_t iters = run.trace.size() - 1;
    return finish(self, run.value, std::move(run.trace), iters, false);
}

RtaResult wcrt_exclusion_model(const TaskSet& ts, std::size_t target) {
    InterferenceOrder po = interference_order(ts, target);
    std::vector<Rational> delta;
    delta.reserve(po.size());
    for (Time c : po.cumulative_wcet) {
        delta.push_back(to_rational(c));
    }
    return wcrt_with_delays(ts, target, delta);
}

bool check_restricted_jitter(const TaskSet& ts, std::size_t target) {
    InterferenceOrder po = interference_order(ts, target);
    if (po.empty()) {
        return true;
    }
    const Time last = po.tasks.back().jitter;
    for (std::size_t p = 0; p < po.size(); ++p) {
        const Time j = po.tasks[p].jitter;
        if (j > last || j < std::max<Time>(0, last - po.cumulative_wcet[p])) {
            return false;
        }
    }
    return true;
}

}  // namespace hrta
