#include "hrta/experiments.hpp"

#include "hrta/harmonic_rta.hpp"
#include "hrta/jitter_feasibility.hpp"
#include "hrta/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace hrta {

namespace {

std::vector<Rational> grid(const Rational& first, const Rational& step, const Rational& last) {
    std::vector<Rational> g;
    for (Rational x = first; x <= last; x += step) {
        g.push_back(x);
    }
    return g;
}

std::size_t shards_for(std::size_t sets, std::size_t shard_size) { return (sets + shard_size - 1) / shard_size; }

std::size_t sets_in_shard(std::size_t k, std::size_t sets, std::size_t shard_size) {
    return std::min(shard_size, sets - k * shard_size);
}

}  // namespace

void run_shards(std::size_t shard_count, const ShardPlan& plan,
                const std::function<void(std::size_t, Rng&)>& shard) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= shard_count) {
                return;
            }
            try {
                Rng rng(plan.seed + k);
                shard(k, rng);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = shard_count;
                return;
            }
        }
    };
    const unsigned jobs = std::max(1U, plan.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

Rational uniform_rational(const Rational& lo, const Rational& hi, Rng& rng) {
    const Integer k(static_cast<unsigned long>(rng.unit_numerator()));
    return lo + (hi - lo) * Rational(k, Integer(1) << Rng::kUnitBits);
}

std::vector<HeuristicQualityRow> run_heuristic_quality(const HeuristicQualityConfig& cfg) {
    const std::vector<Rational> us =
        cfg.utilizations.empty() ? grid(Rational(1, 20), Rational(1, 20), Rational(19, 20)) : cfg.utilizations;
    const std::size_t per_point = shards_for(cfg.sets_per_point, cfg.plan.shard_size);
    std::vector<std::atomic<std::uint64_t>> miss(us.size());

    run_shards(per_point * us.size(), cfg.plan, [&](std::size_t k, Rng& rng) {
        const std::size_t point = k / per_point;
        const std::size_t count = sets_in_shard(k % per_point, cfg.sets_per_point, cfg.plan.shard_size);
        std::uint64_t local = 0;
        for (std::size_t s = 0; s < count; ++s) {
            RawHigherPriority raw =
                gen_raw_higher_priority(cfg.hp_tasks, us[point], ConstraintSatisfying{}, cfg.periods, rng);
            FeasibilityProblem pr{std::move(raw.periods), std::move(raw.wcets), std::move(raw.jitters)};
            if (!solve_feasibility(pr).feasible()) {
                ++local;
            }
        }
        miss[point] += local;
    });

    std::vector<HeuristicQualityRow> rows;
    for (std::size_t p = 0; p < us.size(); ++p) {
        const std::uint64_t n = cfg.sets_per_point;
        rows.push_back({us[p], n, n - miss[p].load(), miss[p].load()});
    }
    return rows;
}

std::vector<FeasibilitySweepRow> run_feasibility_sweep(const FeasibilitySweepConfig& cfg) {
    const std::vector<Rational> alphas =
        cfg.alphas.empty() ? grid(Rational(1, 10), Rational(1, 10), Rational(1)) : cfg.alphas;
    const std::size_t per_point = shards_for(cfg.sets_per_point, cfg.plan.shard_size);
    std::vector<std::atomic<std::uint64_t>> solver(alphas.size());
    std::vector<std::atomic<std::uint64_t>> exact(alphas.size());

    run_shards(per_point * alphas.size(), cfg.plan, [&](std::size_t k, Rng& rng) {
        const std::size_t point = k / per_point;
        const std::size_t count = sets_in_shard(k % per_point, cfg.sets_per_point, cfg.plan.shard_size);
        std::uint64_t s_ok = 0;
        std::uint64_t e_ok = 0;
        for (std::size_t s = 0; s < count; ++s) {
            RawHigherPriority raw = gen_raw_higher_priority(cfg.hp_tasks, cfg.utilization,
                                                            Unconstrained{alphas[point]}, cfg.periods, rng);
            FeasibilityProblem pr{std::move(raw.periods), std::move(raw.wcets), std::move(raw.jitters)};
            if (solve_feasibility(pr).feasible()) {
                ++s_ok;
            }
            if (brute_force_feasibility(pr).result.feasible()) {
                ++e_ok;
            }
        }
        solver[point] += s_ok;
        exact[point] += e_ok;
    });

    std::vector<FeasibilitySweepRow> rows;
    for (std::size_t p = 0; p < alphas.size(); ++p) {
        rows.push_back({alphas[p], cfg.sets_per_point, solver[p].load(), exact[p].load()});
    }
    return rows;
}

std::vector<CrossCheckRow> run_oracle_cross_check(const CrossCheckConfig& cfg) {
    enum Check {
        kHarmonicVsFixedPoint,
        kExclusionVsHarmonic,
        kSimulationVsHarmonic,
        kVirtualVsFixedPointJitter,
        kRestrictedVsFixedPointJitter,
        kBoundsContainFixedPointJitter,
        kCheckCount
    };
    const char* names[kCheckCount] = {"harmonic=fixed-point",          "exclusion=harmonic",
                                      "simulate=harmonic",             "virtual-jitter=fixed-point-jitter",
                                      "uniform-jitter=fixed-point-jitter", "bounds-contain-fixed-point-jitter"};
    std::vector<std::atomic<std::uint64_t>> cases(kCheckCount);
    std::vector<std::atomic<std::uint64_t>> fails(kCheckCount);

    const std::size_t shard_count = shards_for(cfg.sets, cfg.plan.shard_size);
    run_shards(shard_count, cfg.plan, [&](std::size_t k, Rng& rng) {
        const std::size_t count = sets_in_shard(k, cfg.sets, cfg.plan.shard_size);
        auto tally = [&](Check c, bool ok) {
            ++cases[c];
            if (!ok) {
                ++fails[c];
            }
        };
        for (std::size_t s = 0; s < count; ++s) {
            GenConfig g;
            g.task_count = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(cfg.max_tasks)));
            g.total_utilization = uniform_rational(cfg.min_utilization, cfg.max_utilization, rng);
            g.jitter_mode = NoJitter{};
            const TaskSet plain = generate_task_set(g, rng);

            std::vector<Rational> h(plain.size());
            SimConfig sc;
            sc.stop_after_first_jobs = true;
            for (std::size_t t = 0; t < plain.size(); ++t) {
                h[t] = wcrt_harmonic(plain, t).result.wcrt;
                sc.horizon = std::max({sc.horizon, plain[t].period, to_time(ceil(h[t]))});
            }
            const SimTrace sim = simulate(plain, sc);
            for (std::size_t t = 0; t < plain.size(); ++t) {
                tally(kHarmonicVsFixedPoint, h[t] == wcrt_fixed_point(plain, t).wcrt);
                tally(kExclusionVsHarmonic, h[t] == wcrt_exclusion_model(plain, t).wcrt);
                const auto& fj = sim.first_job_response[t];
                tally(kSimulationVsHarmonic, fj && Rational(to_integer(*fj)) == h[t]);
            }

            g.jitter_mode = ConstraintSatisfying{};
            if (g.task_count < 2) {
                continue;
            }
            const TaskSet jit = generate_task_set(g, rng);
            for (std::size_t t = 0; t < jit.size(); ++t) {
                const Rational ref = wcrt_fixed_point_jitter(jit, t).wcrt;
                const FeasibilityResult fr = solve_feasibility(jit, t);
                if (fr.feasible()) {
                    tally(kVirtualVsFixedPointJitter, wcrt_virtual_jitter(jit, t, fr).result.wcrt == ref);
                }
                if (t > 0 && check_restricted_jitter(jit, t)) {
                    const InterferenceOrder po = interference_order(jit, t);
                    tally(kRestrictedVsFixedPointJitter,
                          wcrt_uniform_jitter(jit, t, po.tasks.back().jitter).result.wcrt == ref);
                }
                const JitterBounds b = wcrt_jitter_bounds(jit, t);
                tally(kBoundsContainFixedPointJitter, b.low <= ref && ref <= b.high);
            }
        }
    });

    std::vector<CrossCheckRow> rows;
    for (int c = 0; c < kCheckCount; ++c) {
        rows.push_back({names[c], cases[c].load(), fails[c].load()});
    }
    return rows;
}

}  // namespace hrta
