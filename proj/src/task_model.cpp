#include "hrta/task_model.hpp"

#include <algorithm>
#include <numeric>

namespace hrta {

namespace {

std::string describe(const Task& t, std::size_t pos) {
    return "task #" + std::to_string(pos) + " (priority " + std::to_string(t.priority) + ")";
}

void check_task(const Task& t, std::size_t pos) {
    if (t.period <= 0 || t.wcet <= 0 || t.deadline <= 0 || t.priority <= 0) {
        throw Error(ErrorCode::NonPositiveParameter,
                    describe(t, pos) + ": period, wcet, deadline and priority must be positive", {pos});
    }
    if (t.jitter < 0) {
        throw Error(ErrorCode::NonPositiveParameter, describe(t, pos) + ": jitter must not be negative", {pos});
    }
    if (t.wcet > t.deadline || t.deadline > t.period) {
        throw Error(ErrorCode::DeadlineViolation, describe(t, pos) + ": need wcet <= deadline <= period", {pos});
    }
    if (t.jitter >= t.period) {
        throw Error(ErrorCode::JitterTooLarge, describe(t, pos) + ": jitter must be smaller than the period", {pos});
    }
}

}  // namespace

bool divides(Time a, Time b) { return a != 0 && b % a == 0; }

bool periods_harmonic(std::span<const Time> periods) {
    for (std::size_t i = 0; i < periods.size(); ++i) {
        for (std::size_t j = i + 1; j < periods.size(); ++j) {
            if (!divides(periods[i], periods[j]) && !divides(periods[j], periods[i])) {
                return false;
            }
        }
    }
    return true;
}

Rational TaskSet::higher_priority_utilization(std::size_t target) const {
    if (target >= tasks_.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "target index " + std::to_string(target) + " out of range");
    }
    Rational u = 0;
    for (std::size_t i = 0; i < target; ++i) {
        u += tasks_[i].utilization();
    }
    return u;
}

TaskSet validate(std::vector<Task> raw, ValidationMode mode) {
    if (raw.empty()) {
        throw Error(ErrorCode::EmptyTaskSet, "task set is empty");
    }
    for (std::size_t pos = 0; pos < raw.size(); ++pos) {
        check_task(raw[pos], pos);
    }

    std::vector<std::size_t> by_prio(raw.size());
    std::iota(by_prio.begin(), by_prio.end(), std::size_t{0});
    std::stable_sort(by_prio.begin(), by_prio.end(),
                     [&](std::size_t a, std::size_t b) { return raw[a].priority < raw[b].priority; });
    for (std::size_t k = 0; k < by_prio.size(); ++k) {
        const Task& t = raw[by_prio[k]];
        if (k > 0 && raw[by_prio[k - 1]].priority == t.priority) {
            throw Error(ErrorCode::DuplicatePriority, "priority " + std::to_string(t.priority) + " used twice",
                        {by_prio[k - 1], by_prio[k]});
        }
        if (t.priority != static_cast<Time>(k + 1)) {
            throw Error(ErrorCode::NonContiguousPriority,
                        "priorities must be exactly 1.." + std::to_string(raw.size()), {by_prio[k]});
        }
    }

    bool harmonic = true;
    for (std::size_t i = 0; i < raw.size() && harmonic; ++i) {
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (!divides(raw[i].period, raw[j].period) && !divides(raw[j].period, raw[i].period)) {
                if (mode == ValidationMode::Strict) {
                    throw Error(ErrorCode::NonHarmonic,
                                "periods " + std::to_string(raw[i].period) + " (task #" + std::to_string(i) +
                                    ") and " + std::to_string(raw[j].period) + " (task #" + std::to_string(j) +
                                    ") are not harmonic",
                                {i, j});
                }
                harmonic = false;
                break;
            }
        }
    }

    Rational u = 0;
    for (const Task& t : raw) {
        u += t.utilization();
    }
    if (mode == ValidationMode::Strict && u >= 1) {
        throw Error(ErrorCode::UtilizationOverload, "total utilization " + to_string(u) + " is not below 1");
    }

    TaskSet ts;
    ts.tasks_.reserve(raw.size());
    for (std::size_t pos : by_prio) {
        ts.tasks_.push_back(raw[pos]);
    }
    ts.utilization_ = u;
    ts.mode_ = mode;
    ts.harmonic_ = harmonic;
    return ts;
}

InterferenceOrder interference_order(const TaskSet& ts, std::size_t target_index) {
    if (target_index >= ts.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "target index " + std::to_string(target_index) + " out of range");
    }
    InterferenceOrder po;
    po.target_index = target_index;
    po.order.resize(target_index);
    std::iota(po.order.begin(), po.order.end(), std::size_t{0});
    const auto& tasks = ts.tasks();
    std::sort(po.order.begin(), po.order.end(), [&](std::size_t a, std::size_t b) {
        const Task& x = tasks[a];
        const Task& y = tasks[b];
        if (x.period != y.period) {
            return x.period > y.period;
        }
        if (x.jitter != y.jitter) {
            return x.jitter < y.jitter;
        }
        return x.priority < y.priority;
    });

    const std::size_t n = po.order.size();
    po.tasks.reserve(n);
    for (std::size_t idx : po.order) {
        po.tasks.push_back(tasks[idx]);
    }
    po.cumulative_wcet.assign(n, 0);
    po.cumulative_util.assign(n, Rational(0));
    for (std::size_t p = n; p-- > 1;) {
        po.cumulative_wcet[p - 1] = po.cumulative_wcet[p] + po.tasks[p].wcet;
        po.cumulative_util[p - 1] = po.cumulative_util[p] + po.tasks[p].utilization();
    }
    po.total_util = 0;
    for (const Task& t : po.tasks) {
        po.total_util += t.utilization();
    }
    return po;
}

}  // namespace hrta
