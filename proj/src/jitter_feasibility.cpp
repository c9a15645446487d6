#include "hrta/jitter_feasibility.hpp"

#include <algorithm>
#include <limits>

namespace hrta {

namespace {

std::vector<Rational> suffix_after(const FeasibilityProblem& pr) {
    std::vector<Rational> after(pr.size(), Rational(0));
    for (std::size_t p = pr.size(); p-- > 1;) {
        after[p - 1] = after[p] + pr.wcets[p];
    }
    return after;
}

void check_problem(const FeasibilityProblem& pr) {
    if (pr.wcets.size() != pr.size() || pr.jitters.size() != pr.size()) {
        throw Error(ErrorCode::InvalidConfig, "periods, wcets and jitters differ in length");
    }
    for (std::size_t p = 0; p < pr.size(); ++p) {
        if (pr.periods[p] <= 0 || pr.wcets[p] <= 0 || pr.jitters[p] < 0 || pr.jitters[p] >= pr.periods[p]) {
            throw Error(ErrorCode::InvalidConfig, "bad task parameters at position " + std::to_string(p), {p});
        }
        if (p > 0 && pr.periods[p - 1] % pr.periods[p] != 0) {
            throw Error(ErrorCode::NonHarmonic, "periods must be non-increasing and harmonic along the order",
                        {p - 1, p});
        }
    }
}

Integer ceil_q(const Rational& num, Time den) { return ceil(num / to_rational(den)); }
Integer floor_q(const Rational& num, Time den) { return floor(num / to_rational(den)); }

Integer cap_for(const FeasibilityProblem& pr, std::size_t p, std::int64_t m_cap) {
    return to_integer(m_cap) * to_integer(pr.periods.front() / pr.periods[p]);
}

}  // namespace

FeasibilityProblem FeasibilityProblem::from_order(const InterferenceOrder& po) {
    FeasibilityProblem pr;
    for (const Task& t : po.tasks) {
        pr.periods.push_back(t.period);
        pr.wcets.push_back(to_rational(t.wcet));
        pr.jitters.push_back(t.jitter);
    }
    return pr;
}

FeasibilityResult solve_feasibility(const FeasibilityProblem& pr) {
    check_problem(pr);
    FeasibilityResult res;
    const std::size_t n = pr.size();
    if (n == 0) {
        res.verdict = Verdict::Feasible;
        res.virtual_jitter_max = Integer(0);
        return res;
    }
    const std::vector<Rational> after = suffix_after(pr);
    const Time t_last = pr.periods.back();
    const Time j_last = pr.jitters.back();
    const Integer t_last_z = to_integer(t_last);

    std::vector<Integer> m(n);
    m[0] = 1;

    Integer lb = to_integer(pr.periods[0]) + t_last_z * ceil_q(to_rational(pr.jitters[0] - j_last), t_last);
    Integer ub = to_integer(pr.periods[0]) + t_last_z * floor_q(pr.jitters[0] - j_last + after[0], t_last);
    res.bound_trace.push_back({1, lb, ub, std::nullopt, std::nullopt, std::nullopt});
    if (lb > ub) {
        res.failure_stage = 1;
        return res;
    }

    for (std::size_t p = 1; p + 1 < n; ++p) {
        const Time tp = pr.periods[p];
        const Time jp = pr.jitters[p];
        const Integer tp_z = to_integer(tp);
        const Integer m_lo = ceil_q(Rational(lb) + j_last - jp - after[p], tp);
        const Integer m_hi = floor_q(Rational(ub) + j_last - jp, tp);
        const Integer q_lo = t_last_z * ceil_q(to_rational(jp - j_last), t_last);
        const Integer q_hi = t_last_z * floor_q(jp - j_last + after[p], t_last);

        StageBounds sb;
        sb.stage = p + 1;
        sb.m_lower = m_lo;
        sb.m_upper = m_hi;
        if (m_lo > m_hi) {
            sb.lower = lb;
            sb.upper = ub;
            res.bound_trace.push_back(sb);
            res.failure_stage = p + 1;
            return res;
        }
        if (m_lo == m_hi) {
            m[p] = m_lo;
            lb = std::max<Integer>(tp_z * m_lo + q_lo, lb);
            ub = std::min<Integer>(tp_z * m_lo + q_hi, ub);
        } else {
            const Integer lb0 = std::max<Integer>(tp_z * m_lo + q_lo, lb);
            const Integer ub0 = std::min<Integer>(tp_z * m_lo + q_hi, ub);
            const Integer lb1 = std::max<Integer>(tp_z * m_hi + q_lo, lb);
            const Integer ub1 = std::min<Integer>(tp_z * m_hi + q_hi, ub);
            BranchChoice bc{ub0 - lb0, ub1 - lb1, false};
            if (bc.diff_lower > bc.diff_upper) {
                m[p] = m_lo;
                lb = lb0;
                ub = ub0;
            } else {
                m[p] = m_hi;
                lb = lb1;
                ub = ub1;
                bc.chose_upper = true;
            }
            sb.branch = bc;
        }
        sb.lower = lb;
        sb.upper = ub;
        res.bound_trace.push_back(sb);
        if (lb > ub) {
            res.failure_stage = p + 1;
            return res;
        }
    }

    if (n > 1) {
        if (lb % t_last_z != 0) {
            throw std::logic_error("window bound " + lb.get_str() + " is not a multiple of the last period");
        }
        m[n - 1] = lb / t_last_z;
    }
    res.verdict = Verdict::Feasible;
    res.virtual_jitter_max = to_integer(j_last) + m[n - 1] * t_last_z;
    res.m = std::move(m);
    if (!is_witness(pr, res.m)) {
        throw std::logic_error("propagation produced an assignment violating the constraints");
    }
    return res;
}

FeasibilityResult solve_feasibility(const TaskSet& ts, std::size_t target) {
    InterferenceOrder po = interference_order(ts, target);
    FeasibilityResult res = solve_feasibility(FeasibilityProblem::from_order(po));
    res.order = po.order;
    return res;
}

bool is_witness(const FeasibilityProblem& pr, const std::vector<Integer>& m) {
    const std::size_t n = pr.size();
    if (m.size() != n) {
        return false;
    }
    if (n == 0) {
        return true;
    }
    if (m[0] != 1) {
        return false;
    }
    const std::vector<Rational> after = suffix_after(pr);
    const Integer top = to_integer(pr.jitters.back()) + m.back() * to_integer(pr.periods.back());
    for (std::size_t p = 0; p < n; ++p) {
        if (m[p] < 0) {
            return false;
        }
        const Integer vj = to_integer(pr.jitters[p]) + m[p] * to_integer(pr.periods[p]);
        if (vj > top || Rational(vj) < Rational(top) - after[p]) {
            return false;
        }
    }
    return true;
}

BruteForceResult brute_force_feasibility(const FeasibilityProblem& pr, std::int64_t m_cap) {
    check_problem(pr);
    if (m_cap <= 0) {
        throw Error(ErrorCode::InvalidConfig, "m_cap must be positive");
    }
    BruteForceResult out;
    const std::size_t n = pr.size();
    if (n <= 1) {
        out.result.verdict = Verdict::Feasible;
        if (n == 1) {
            out.result.m = {Integer(1)};
            out.result.virtual_jitter_max = to_integer(pr.jitters[0] + pr.periods[0]);
            out.feasible_last = {Integer(1)};
        } else {
            out.result.virtual_jitter_max = Integer(0);
        }
        out.witness_count = 1;
        return out;
    }
    const std::vector<Rational> after = suffix_after(pr);
    const Time t_last = pr.periods.back();
    const Time j_last = pr.jitters.back();
    const Integer t_last_z = to_integer(t_last);

    // m_1 = 1 pins J'_last into [J_1 + T_1, J_1 + T_1 + C_after(1)], which
    // bounds the m_last candidates; every other constraint is checked per task.
    const Integer anchor = to_integer(pr.jitters[0] + pr.periods[0]);
    Integer first = ceil_q(Rational(anchor - j_last), t_last);
    Integer last = floor_q(Rational(anchor - j_last) + after[0], t_last);
    first = std::max<Integer>(first, 0);
    last = std::min<Integer>(last, cap_for(pr, n - 1, m_cap));

    constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();
    for (Integer ml = first; ml <= last; ++ml) {
        const Integer top = to_integer(j_last) + ml * t_last_z;
        std::uint64_t count = 1;
        std::vector<Integer> witness(n);
        witness[0] = 1;
        witness[n - 1] = ml;
        for (std::size_t p = 1; p + 1 < n && count > 0; ++p) {
            const Time tp = pr.periods[p];
            Integer lo = ceil_q(Rational(top) - pr.jitters[p] - after[p], tp);
            Integer hi = floor_q(Rational(top - pr.jitters[p]), tp);
            lo = std::max<Integer>(lo, 0);
            hi = std::min<Integer>(hi, cap_for(pr, p, m_cap));
            if (lo > hi) {
                count = 0;
                break;
            }
            witness[p] = lo;
            Integer width = hi - lo + 1;
            std::uint64_t w = width.fits_ulong_p() ? width.get_ui() : kSat;
            count = (w != 0 && count > kSat / w) ? kSat : count * w;
        }
        if (count == 0) {
            continue;
        }
        out.feasible_last.push_back(ml);
        out.witness_count = (out.witness_count > kSat - count) ? kSat : out.witness_count + count;
        if (!out.result.feasible()) {
            out.result.verdict = Verdict::Feasible;
            out.result.m = witness;
            out.result.virtual_jitter_max = top;
        }
    }

    FeasibilityResult solver = solve_feasibility(pr);
    if (solver.feasible()) {
        for (std::size_t p = 0; p < n; ++p) {
            if (solver.m[p] > cap_for(pr, p, m_cap)) {
                throw Error(ErrorCode::CapTooSmall,
                            "propagation chose m=" + solver.m[p].get_str() + " at position " + std::to_string(p) +
                                ", outside the search box",
                            {p});
            }
        }
    }
    return out;
}

BruteForceResult brute_force_feasibility(const TaskSet& ts, std::size_t target, std::int64_t m_cap) {
    InterferenceOrder po = interference_order(ts, target);
    BruteForceResult out = brute_force_feasibility(FeasibilityProblem::from_order(po), m_cap);
    out.result.order = po.order;
    return out;
}

GammaCase classify_gamma(const FeasibilityProblem& pr, std::size_t i) {
    check_problem(pr);
    if (i < 1 || i + 1 > pr.size()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "gamma index " + std::to_string(i) + " outside 1.." + std::to_string(pr.size() - 1), {i});
    }
    const std::vector<Rational> after = suffix_after(pr);
    const Time t = pr.periods[i];
    GammaCase g;
    g.jtilde = floor_mod(pr.jitters[i] - pr.jitters[i - 1], t);
    const Integer lo = ceil_q(to_rational(g.jtilde) - after[i], t);
    const Integer hi = floor_q(to_rational(g.jtilde) + after[i - 1], t);
    if (lo == 0 && hi == 0) {
        g.kind = GammaKind::Zero;
    } else if (lo == 1 && hi == 1) {
        g.kind = GammaKind::One;
    } else if (lo > hi) {
        g.kind = GammaKind::Empty;
    } else {
        g.kind = GammaKind::Both;
    }
    return g;
}

GammaCase classify_gamma(const TaskSet& ts, std::size_t target, std::size_t i) {
    return classify_gamma(FeasibilityProblem::from_order(interference_order(ts, target)), i);
}

HarmonicResult wcrt_virtual_jitter(const TaskSet& ts, std::size_t target, const FeasibilityResult& fr,
                                   const HarmonicOptions& opts) {
    if (!fr.feasible() || !fr.virtual_jitter_max) {
        throw Error(ErrorCode::InfeasibleInput, "virtual jitter needs a feasible assignment");
    }
    if (!ts.harmonic()) {
        throw Error(ErrorCode::NonHarmonic, "the harmonic analyses need pairwise harmonic periods");
    }
    InterferenceOrder po = interference_order(ts, target);
    if (fr.m.size() != po.size()) {
        throw Error(ErrorCode::InfeasibleInput, "assignment does not match the higher-priority task count");
    }
    const Task& self = ts[target];
    Rational constant = to_rational(self.wcet);
    for (std::size_t p = 0; p < po.size(); ++p) {
        constant -= Rational(fr.m[p] * to_integer(po.tasks[p].wcet));
    }
    HarmonicResult out;
    out.trace = harmonic_stages(po, constant, Rational(*fr.virtual_jitter_max), opts);
    RtaResult& r = out.result;
    r.wcrt = out.trace.stage_values.back();
    r.trace = out.trace.stage_values;
    r.iterations = out.trace.ceil_evals;
    r.margin = to_rational(self.deadline - self.jitter) - r.wcrt;
    r.schedulable = r.margin >= 0;
    return out;
}

std::string_view to_string(GammaKind kind) {
    switch (kind) {
    case GammaKind::Zero: return "zero";
    case GammaKind::One: return "one";
    case GammaKind::Empty: return "empty";
    case GammaKind::Both: return "both";
    }
    return "?";
}

}  // namespace hrta
