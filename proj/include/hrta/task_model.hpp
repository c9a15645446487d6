#pragma once

#include "hrta/error.hpp"
#include "hrta/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hrta {

/// One sporadic task. Priority 1 is the highest.
struct Task {
    std::size_t id = 0;
    Time period = 0;
    Time wcet = 0;
    Time deadline = 0;
    Time jitter = 0;
    Time priority = 0;

    Rational utilization() const { return make_rational(wcet, period); }

    friend bool operator==(const Task&, const Task&) = default;
};

enum class ValidationMode {
    Strict,   // all task-set invariants, harmonic periods included
    Relaxed,  // per-task checks and priorities only; for the classic oracle
};

/// Validated, immutable task set ordered by priority (index 0 = priority 1).
/// Construct through validate().
class TaskSet {
public:
    const std::vector<Task>& tasks() const noexcept { return tasks_; }
    const Task& operator[](std::size_t i) const { return tasks_.at(i); }
    std::size_t size() const noexcept { return tasks_.size(); }

    const Rational& total_utilization() const noexcept { return utilization_; }
    ValidationMode mode() const noexcept { return mode_; }
    bool harmonic() const noexcept { return harmonic_; }

    /// Utilization of the tasks with higher priority than `target`.
    Rational higher_priority_utilization(std::size_t target) const;

private:
    friend TaskSet validate(std::vector<Task> raw, ValidationMode mode);

    std::vector<Task> tasks_;
    Rational utilization_;
    ValidationMode mode_ = ValidationMode::Strict;
    bool harmonic_ = false;
};

/// Checks every task and task-set invariant and returns the set sorted by
/// priority. Throws Error with one of EmptyTaskSet, NonPositiveParameter,
/// DeadlineViolation, JitterTooLarge, DuplicatePriority,
/// NonContiguousPriority, NonHarmonic (subjects = offending pair of input
/// positions) or UtilizationOverload.
TaskSet validate(std::vector<Task> raw, ValidationMode mode = ValidationMode::Strict);

bool divides(Time a, Time b);
bool periods_harmonic(std::span<const Time> periods);

/// Higher-priority tasks of a target in reverse rate-monotonic order: periods
/// non-increasing, equal periods by non-decreasing jitter, then by priority.
///
/// Positions are 0-based. cumulative_wcet[p] is the WCET of all tasks after
/// position p (so the last entry is 0); cumulative_util[p] likewise.
struct InterferenceOrder {
    std::size_t target_index = 0;
    std::vector<std::size_t> order;  // indices into TaskSet::tasks()
    std::vector<Task> tasks;         // the same tasks, copied in order
    std::vector<Time> cumulative_wcet;
    std::vector<Rational> cumulative_util;
    Rational total_util;  // utilization of all higher-priority tasks

    std::size_t size() const noexcept { return order.size(); }
    bool empty() const noexcept { return order.empty(); }
};

InterferenceOrder interference_order(const TaskSet& ts, std::size_t target_index);

}  // namespace hrta
