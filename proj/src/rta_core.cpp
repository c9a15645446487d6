#include "hrta/rta_core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace hrta {

namespace {

constexpr Time kTimeMax = std::numeric_limits<Time>::max();

Time saturating_lcm(Time a, Time b) {
    Time g = std::gcd(a, b);
    Time q = a / g;
    if (q > kTimeMax / b) {
        return kTimeMax;
    }
    return q * b;
}

// Upper limit on any useful iterate. When the higher-priority utilization is
// below one the demand is bounded by a line with slope < 1, which gives a
// closed-form limit; otherwise fall back to the hyperperiod plus jitter.
Rational horizon_for(const TaskSet& ts, std::size_t target, bool with_jitter, const Rational& u_hp) {
    const auto& tasks = ts.tasks();
    if (u_hp < 1) {
        Rational acc = to_rational(tasks[target].wcet);
        for (std::size_t i = 0; i < target; ++i) {
            const Task& t = tasks[i];
            Time j = with_jitter ? t.jitter : 0;
            acc += to_rational(t.wcet) * (1 + make_rational(j, t.period));
        }
        return acc / (1 - u_hp);
    }
    Time h = 1;
    Time jmax = 0;
    for (std::size_t i = 0; i <= target; ++i) {
        h = saturating_lcm(h, tasks[i].period);
        if (with_jitter) {
            jmax = std::max(jmax, tasks[i].jitter);
        }
    }
    return to_rational(h) + to_rational(jmax);
}

RtaResult classic(const TaskSet& ts, std::size_t target, bool with_jitter, const FixedPointOptions& opts) {
    if (target >= ts.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "target index " + std::to_string(target) + " out of range");
    }
    const auto& tasks = ts.tasks();
    const Task& self = tasks[target];
    const Rational cn = to_rational(self.wcet);
    const Rational u_hp = ts.higher_priority_utilization(target);

    auto demand = [&](const Rational& t) {
        Rational w = cn;
        for (std::size_t i = 0; i < target; ++i) {
            const Task& hp = tasks[i];
            Time j = with_jitter ? hp.jitter : 0;
            w += to_rational(hp.wcet) * Rational(ceil((t + j) / to_rational(hp.period)));
        }
        return w;
    };

    Rational start = cn;
    if (opts.start == StartValue::Bound && u_hp < 1) {
        Rational num = cn;
        if (with_jitter) {
            for (std::size_t i = 0; i < target; ++i) {
                num += tasks[i].utilization() * tasks[i].jitter;
            }
        }
        start = std::max(cn, Rational(num / (1 - u_hp)));
    }

    FixedPointRun run =
        least_fixed_point(demand, start, horizon_for(ts, target, with_jitter, u_hp), opts.max_iterations);

    RtaResult r;
    r.wcrt = run.value;
    r.iterations = run.trace.size() - 1;
    r.trace = std::move(run.trace);
    Time limit = with_jitter ? self.deadline - self.jitter : self.deadline;
    r.margin = to_rational(limit) - r.wcrt;
    r.schedulable = r.margin >= 0;
    return r;
}

}  // namespace

FixedPointRun least_fixed_point(const std::function<Rational(const Rational&)>& demand, Rational start,
                                const Rational& horizon, std::size_t max_iterations) {
    FixedPointRun run;
    run.trace.push_back(start);
    Rational current = std::move(start);
    for (std::size_t k = 0; k < max_iterations; ++k) {
        Rational next = demand(current);
        run.trace.push_back(next);
        if (next == current) {
            run.value = next;
            return run;
        }
        if (next > horizon) {
            throw Error(ErrorCode::NonConvergent,
                        "iterate " + to_string(next) + " exceeds horizon " + to_string(horizon));
        }
        current = std::move(next);
    }
    throw Error(ErrorCode::NonConvergent,
                "no fixed point after " + std::to_string(max_iterations) + " iterations");
}

RtaResult wcrt_fixed_point(const TaskSet& ts, std::size_t target, const FixedPointOptions& opts) {
    return classic(ts, target, false, opts);
}

RtaResult wcrt_fixed_point_jitter(const TaskSet& ts, std::size_t target, const FixedPointOptions& opts) {
    return classic(ts, target, true, opts);
}

Rational nested_ceil(const Rational& x, const Rational& z) {
    if (x <= 0 || x > z) {
        throw Error(ErrorCode::DomainError, "nested_ceil needs 0 < x <= z, got x=" + to_string(x) +
                                                " z=" + to_string(z));
    }
    Rational cz(ceil(z));
    return Rational(ceil(x + (1 - x / z) * cz));
}

}  // namespace hrta
