#include "hrta/generator.hpp"

#include "hrta/jitter_feasibility.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace hrta {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) {
        word = splitmix64(sm);
    }
}

std::uint64_t Rng::next() {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
        throw Error(ErrorCode::InvalidConfig, "empty integer range");
    }
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 0) {
        return static_cast<std::int64_t>(next());
    }
    // reject the low 2^64 mod range values so every residue is equally likely
    const std::uint64_t threshold = (0 - range) % range;
    for (;;) {
        const std::uint64_t x = next();
        if (x >= threshold) {
            return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % range);
        }
    }
}

std::uint64_t Rng::unit_numerator() { return next() >> (64 - kUnitBits); }

double Rng::unit_double() { return std::ldexp(static_cast<double>(unit_numerator()), -kUnitBits); }

std::vector<Rational> uunifast(std::size_t n, const Rational& total, Rng& rng) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidConfig, "uunifast needs at least one task");
    }
    if (total <= 0 || total >= 1) {
        throw Error(ErrorCode::InvalidConfig, "total utilization must lie in (0, 1)");
    }
    // Draw parts of 2^53 units so that the sum stays exact, then scale.
    const std::uint64_t whole = std::uint64_t{1} << Rng::kUnitBits;
    std::vector<std::uint64_t> parts;
    parts.reserve(n);
    std::uint64_t remaining = whole;
    for (std::size_t i = 1; i < n; ++i) {
        const double r = rng.unit_double();
        const double e = 1.0 / static_cast<double>(n - i);
        auto next = static_cast<std::uint64_t>(std::floor(static_cast<double>(remaining) * std::pow(r, e)));
        next = std::clamp<std::uint64_t>(next, n - i, remaining - 1);
        parts.push_back(remaining - next);
        remaining = next;
    }
    parts.push_back(remaining);

    const Rational scale = total / Rational(Integer(1) << Rng::kUnitBits);
    std::vector<Rational> out;
    out.reserve(n);
    for (std::uint64_t p : parts) {
        Integer pz;
        mpz_import(pz.get_mpz_t(), 1, -1, sizeof(p), 0, 0, &p);
        Rational u = scale * Rational(pz);
        u.canonicalize();
        out.push_back(u);
    }
    return out;
}

void GenConfig::check() const {
    if (task_count == 0) {
        throw Error(ErrorCode::InvalidConfig, "task count must be positive");
    }
    if (total_utilization <= 0 || total_utilization >= 1) {
        throw Error(ErrorCode::InvalidConfig, "total utilization must lie in (0, 1)");
    }
    if (base_period <= 0) {
        throw Error(ErrorCode::InvalidConfig, "base period must be positive");
    }
    if (factor_range.first < 1 || factor_range.second < factor_range.first) {
        throw Error(ErrorCode::InvalidConfig, "factor range must satisfy 1 <= lo <= hi");
    }
    if (const auto* u = std::get_if<Unconstrained>(&jitter_mode)) {
        if (u->alpha <= 0 || u->alpha > 1) {
            throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0, 1]");
        }
    }
}

std::vector<Time> gen_harmonic_periods(std::size_t n, const GenConfig& cfg, Rng& rng) {
    std::vector<Time> periods;
    periods.reserve(n);
    Time t = cfg.base_period;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            const Time f = rng.uniform_int(cfg.factor_range.first, cfg.factor_range.second);
            if (t > std::numeric_limits<Time>::max() / f) {
                throw Error(ErrorCode::InvalidConfig, "generated period overflows");
            }
            t *= f;
        }
        periods.push_back(t);
    }
    return periods;
}

namespace {

std::vector<Rational> after_sums(const std::vector<Rational>& wcets) {
    std::vector<Rational> after(wcets.size(), Rational(0));
    for (std::size_t p = wcets.size(); p-- > 1;) {
        after[p - 1] = after[p] + wcets[p];
    }
    return after;
}

// Virtual jitters J' for tasks in canonical order; the real jitters are J' mod T.
std::vector<Time> gen_virtual_jitters(const std::vector<Time>& periods, const std::vector<Rational>& wcets,
                                      Rng& rng) {
    const std::size_t n = periods.size();
    std::vector<Time> vj(n);
    if (n == 0) {
        return vj;
    }
    const std::vector<Rational> after = after_sums(wcets);
    vj[0] = periods[0] + rng.uniform_int(0, periods[0] - 1);
    if (n == 1) {
        return vj;
    }
    const Time top = rng.uniform_int(vj[0], to_time(floor(vj[0] + after[0])));
    vj[n - 1] = top;
    for (std::size_t p = 1; p + 1 < n; ++p) {
        vj[p] = rng.uniform_int(to_time(ceil(top - after[p])), top);
    }
    return vj;
}

}  // namespace

std::vector<Time> gen_constrained_jitters(const std::vector<Time>& periods, const std::vector<Rational>& wcets,
                                          Rng& rng) {
    if (periods.size() != wcets.size()) {
        throw Error(ErrorCode::InvalidConfig, "periods and wcets differ in length");
    }
    std::vector<Time> j = gen_virtual_jitters(periods, wcets, rng);
    for (std::size_t p = 0; p < j.size(); ++p) {
        j[p] = floor_mod(j[p], periods[p]);
    }
    return j;
}

std::vector<Time> gen_unconstrained_jitters(const std::vector<Time>& periods, const Rational& alpha, Rng& rng) {
    std::vector<Time> j;
    j.reserve(periods.size());
    for (Time t : periods) {
        const Time hi = std::min(to_time(floor(alpha * t)), t - 1);
        j.push_back(rng.uniform_int(0, std::max<Time>(hi, 0)));
    }
    return j;
}

RawHigherPriority gen_raw_higher_priority(std::size_t count, const Rational& total_utilization,
                                          const JitterMode& mode, const GenConfig& cfg, Rng& rng) {
    RawHigherPriority raw;
    raw.periods = gen_harmonic_periods(count, cfg, rng);
    std::reverse(raw.periods.begin(), raw.periods.end());
    const std::vector<Rational> u = uunifast(count, total_utilization, rng);
    raw.wcets.reserve(count);
    for (std::size_t p = 0; p < count; ++p) {
        raw.wcets.push_back(u[p] * raw.periods[p]);
    }
    if (std::holds_alternative<ConstraintSatisfying>(mode)) {
        raw.jitters = gen_constrained_jitters(raw.periods, raw.wcets, rng);
    } else if (const auto* un = std::get_if<Unconstrained>(&mode)) {
        raw.jitters = gen_unconstrained_jitters(raw.periods, un->alpha, rng);
    } else {
        raw.jitters.assign(count, 0);
    }
    return raw;
}

TaskSet generate_task_set(const GenConfig& cfg) {
    Rng rng(cfg.seed);
    return generate_task_set(cfg, rng);
}

TaskSet generate_task_set(const GenConfig& cfg, Rng& rng) {
    cfg.check();
    const std::size_t n = cfg.task_count;
    constexpr int kAttempts = 10'000;
    constexpr int kJitterAttempts = 200;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const std::vector<Time> periods = gen_harmonic_periods(n, cfg, rng);
        const std::vector<Rational> u = uunifast(n, cfg.total_utilization, rng);
        std::vector<Task> tasks(n);
        auto scale = [&](bool nearest) {
            Rational total = 0;
            for (std::size_t k = 0; k < n; ++k) {
                Task& t = tasks[k];
                t.id = k;
                t.period = periods[k];
                const Rational exact = u[k] * t.period;
                t.wcet = std::clamp<Time>(to_time(nearest ? floor(exact + Rational(1, 2)) : floor(exact)), 1, t.period);
                t.deadline = t.period;
                total += t.utilization();
            }
            return total;
        };
        // rounding down is the fallback when rounding to nearest overloads
        if (scale(true) >= 1 && scale(false) >= 1) {
            continue;
        }
        std::vector<Time> prio(n);
        std::iota(prio.begin(), prio.end(), Time{1});
        for (std::size_t k = n; k > 1; --k) {
            std::swap(prio[k - 1], prio[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(k) - 1))]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            tasks[k].priority = prio[k];
        }

        if (std::holds_alternative<NoJitter>(cfg.jitter_mode)) {
            return validate(tasks);
        }
        if (const auto* un = std::get_if<Unconstrained>(&cfg.jitter_mode)) {
            std::vector<Time> j = gen_unconstrained_jitters(periods, un->alpha, rng);
            for (std::size_t k = 0; k < n; ++k) {
                tasks[k].jitter = j[k];
            }
            return validate(tasks);
        }

        // Constraint-satisfying: everything above the lowest priority gets
        // jitters generated along one canonical order; accept only if the canonical
        // canonical order (which re-sorts equal periods by jitter) still admits the
        // generated virtual jitters as a witness.
        std::vector<std::size_t> hp;
        for (std::size_t k = 0; k < n; ++k) {
            if (tasks[k].priority != static_cast<Time>(n)) {
                hp.push_back(k);
            }
        }
        std::sort(hp.begin(), hp.end(), [&](std::size_t a, std::size_t b) {
            if (tasks[a].period != tasks[b].period) {
                return tasks[a].period > tasks[b].period;
            }
            return tasks[a].priority < tasks[b].priority;
        });
        std::vector<Time> hp_periods;
        std::vector<Rational> hp_wcets;
        for (std::size_t k : hp) {
            hp_periods.push_back(tasks[k].period);
            hp_wcets.push_back(to_rational(tasks[k].wcet));
        }
        for (int ja = 0; ja < kJitterAttempts; ++ja) {
            const std::vector<Time> vj = gen_virtual_jitters(hp_periods, hp_wcets, rng);
            std::vector<Time> virt(n, 0);
            for (std::size_t p = 0; p < hp.size(); ++p) {
                tasks[hp[p]].jitter = floor_mod(vj[p], hp_periods[p]);
                virt[hp[p]] = vj[p];
            }
            TaskSet ts = validate(tasks);
            InterferenceOrder po = interference_order(ts, n - 1);
            std::vector<Integer> m;
            for (const Task& t : po.tasks) {
                m.push_back(to_integer((virt[t.id] - t.jitter) / t.period));
            }
            if (is_witness(FeasibilityProblem::from_order(po), m)) {
                return ts;
            }
        }
    }
    throw Error(ErrorCode::InvalidConfig, "could not generate a task set for this configuration");
}

}  // namespace hrta
