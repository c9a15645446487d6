#pragma once

#include "hrta/task_model.hpp"

#include <iosfwd>
#include <optional>

namespace hrta {

/// All tasks arrive at time 0 and then every period. The first job of task i
/// is released release_offsets[i] after its arrival (index = position in
/// TaskSet::tasks()); later jobs are released on arrival.
struct SimConfig {
    Time horizon = 0;
    std::vector<Time> release_offsets;  // empty means all zero
    // Stop as soon as the first job of every task has finished.
    bool stop_after_first_jobs = false;
    // The job that must complete within the horizon (task index); none = no check.
    std::optional<std::size_t> analyzed_task;
};

struct JobRecord {
    std::size_t task = 0;  // index into TaskSet::tasks()
    std::size_t job = 0;
    Time arrival = 0;
    Time release = 0;
    std::optional<Time> start;
    std::optional<Time> finish;
};

/// Maximal interval during which one job executes.
struct Segment {
    std::size_t task = 0;
    std::size_t job = 0;
    Time begin = 0;
    Time end = 0;
};

struct SimTrace {
    std::vector<JobRecord> jobs;
    std::vector<std::optional<Time>> response_times;  // per task, max over finished jobs
    std::vector<std::optional<Time>> first_job_response;
    std::size_t preemption_count = 0;
    std::vector<Segment> segments;
    Time end_time = 0;
};

SimTrace simulate(const TaskSet& ts, const SimConfig& cfg);

/// Largest response of the target observed over release-offset patterns:
/// each higher-priority first job released at 0 or at its full jitter (all
/// combinations for up to 12 higher-priority tasks, otherwise the two
/// uniform patterns), target released at 0 or its jitter. A lower bound on
/// the WCRT.
Time adversarial_response(const TaskSet& ts, std::size_t target, Time horizon = 0);

/// Tab-separated job lines: task, job, arrival, release, start, finish.
void write_trace(std::ostream& out, const TaskSet& ts, const SimTrace& trace);

}  // namespace hrta
