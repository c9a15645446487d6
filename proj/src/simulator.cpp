#include "hrta/simulator.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <ostream>

namespace hrta {

namespace {

constexpr Time kNever = std::numeric_limits<Time>::max();

Time saturating_lcm(Time a, Time b) {
    const Time q = a / std::gcd(a, b);
    return q > kNever / b ? kNever : q * b;
}

}  // namespace

SimTrace simulate(const TaskSet& ts, const SimConfig& cfg) {
    const std::size_t n = ts.size();
    if (cfg.horizon <= 0) {
        throw Error(ErrorCode::InvalidConfig, "simulation horizon must be positive");
    }
    std::vector<Time> offsets = cfg.release_offsets;
    if (offsets.empty()) {
        offsets.assign(n, 0);
    }
    if (offsets.size() != n) {
        throw Error(ErrorCode::InvalidConfig, "need one release offset per task");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (offsets[i] < 0 || offsets[i] > ts[i].jitter) {
            throw Error(ErrorCode::InvalidConfig,
                        "release offset of task " + std::to_string(i) + " outside [0, jitter]", {i});
        }
    }

    SimTrace tr;
    tr.response_times.assign(n, std::nullopt);
    tr.first_job_response.assign(n, std::nullopt);

    std::vector<std::size_t> next_job(n, 0);
    auto release_of = [&](std::size_t i, std::size_t j) -> Time {
        return j == 0 ? offsets[i] : static_cast<Time>(j) * ts[i].period;
    };
    auto next_release = [&](std::size_t i) -> Time {
        Time r = release_of(i, next_job[i]);
        return r <= cfg.horizon ? r : kNever;
    };

    std::vector<std::deque<std::size_t>> ready(n);  // indices into tr.jobs
    std::vector<Time> remaining;
    std::size_t first_done = 0;
    constexpr std::size_t kNoJob = std::numeric_limits<std::size_t>::max();
    std::size_t running = kNoJob;  // job last executed, if unfinished

    Time now = 0;
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) {
            while (next_release(i) == now) {
                const std::size_t j = next_job[i]++;
                tr.jobs.push_back({i, j, static_cast<Time>(j) * ts[i].period, now, std::nullopt, std::nullopt});
                remaining.push_back(ts[i].wcet);
                ready[i].push_back(tr.jobs.size() - 1);
            }
        }
        Time upcoming = kNever;
        for (std::size_t i = 0; i < n; ++i) {
            upcoming = std::min(upcoming, next_release(i));
        }

        std::size_t level = 0;
        while (level < n && ready[level].empty()) {
            ++level;
        }
        if (level == n) {
            if (upcoming == kNever) {
                break;
            }
            now = upcoming;
            continue;
        }

        if (now >= cfg.horizon) {
            break;
        }
        const std::size_t job = ready[level].front();
        if (running != kNoJob && running != job) {
            ++tr.preemption_count;
        }
        JobRecord& rec = tr.jobs[job];
        if (!rec.start) {
            rec.start = now;
        }
        const Time until = std::min({upcoming, now + remaining[job], cfg.horizon});
        if (!tr.segments.empty() && tr.segments.back().end == now && tr.segments.back().task == rec.task &&
            tr.segments.back().job == rec.job) {
            tr.segments.back().end = until;
        } else {
            tr.segments.push_back({rec.task, rec.job, now, until});
        }
        remaining[job] -= until - now;
        now = until;

        if (remaining[job] == 0) {
            rec.finish = now;
            ready[level].pop_front();
            running = kNoJob;
            const Time resp = now - rec.release;
            auto& worst = tr.response_times[rec.task];
            worst = worst ? std::max(*worst, resp) : resp;
            if (rec.job == 0) {
                tr.first_job_response[rec.task] = resp;
                ++first_done;
            }
        } else {
            running = job;
        }
        if (cfg.stop_after_first_jobs && first_done == n) {
            break;
        }
        if (now >= cfg.horizon) {
            break;
        }
    }
    tr.end_time = now;

    if (cfg.analyzed_task) {
        const std::size_t a = *cfg.analyzed_task;
        if (a >= n) {
            throw Error(ErrorCode::IndexOutOfRange, "analyzed task out of range");
        }
        if (!tr.first_job_response[a]) {
            throw Error(ErrorCode::HorizonTooShort,
                        "first job of task " + std::to_string(a) + " unfinished at horizon " +
                            std::to_string(cfg.horizon),
                        {a});
        }
    }
    return tr;
}

Time adversarial_response(const TaskSet& ts, std::size_t target, Time horizon) {
    if (target >= ts.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "target index out of range");
    }
    // Tasks below the target cannot delay it; drop them.
    std::vector<Task> prefix(ts.tasks().begin(), ts.tasks().begin() + static_cast<std::ptrdiff_t>(target) + 1);
    const TaskSet sub = validate(prefix, ValidationMode::Relaxed);

    if (horizon <= 0) {
        Time h = 1;
        Time jmax = 0;
        for (const Task& t : prefix) {
            h = saturating_lcm(h, t.period);
            jmax = std::max(jmax, t.jitter);
        }
        horizon = h > (kNever - jmax) / 2 ? kNever / 2 : 2 * h + jmax;
    }

    const std::size_t hp = target;
    std::vector<std::vector<Time>> patterns;
    auto pattern_from_mask = [&](std::uint64_t mask, Time target_offset) {
        std::vector<Time> off(target + 1, 0);
        for (std::size_t i = 0; i < hp; ++i) {
            off[i] = ((mask >> i) & 1U) ? prefix[i].jitter : 0;
        }
        off[target] = target_offset;
        return off;
    };
    const std::vector<Time> target_offsets =
        prefix[target].jitter > 0 ? std::vector<Time>{0, prefix[target].jitter} : std::vector<Time>{0};
    for (Time to : target_offsets) {
        if (hp <= 12) {
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << hp); ++mask) {
                patterns.push_back(pattern_from_mask(mask, to));
            }
        } else {
            patterns.push_back(pattern_from_mask(0, to));
            patterns.push_back(pattern_from_mask(~std::uint64_t{0}, to));
        }
    }

    Time best = 0;
    for (const auto& off : patterns) {
        SimConfig cfg;
        cfg.horizon = horizon;
        cfg.release_offsets = off;
        cfg.analyzed_task = target;
        SimTrace tr = simulate(sub, cfg);
        best = std::max(best, *tr.response_times[target]);
    }
    return best;
}

void write_trace(std::ostream& out, const TaskSet& ts, const SimTrace& trace) {
    for (const JobRecord& j : trace.jobs) {
        out << ts[j.task].priority << '\t' << j.job << '\t' << j.arrival << '\t' << j.release << '\t';
        if (j.start) {
            out << *j.start;
        } else {
            out << '-';
        }
        out << '\t';
        if (j.finish) {
            out << *j.finish;
        } else {
            out << '-';
        }
        out << '\n';
    }
}

}  // namespace hrta
