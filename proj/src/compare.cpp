#include "advcol/compare.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace advcol {

std::uint64_t trial_seed(std::uint64_t base_seed, int trial) {
  return base_seed + static_cast<std::uint64_t>(trial);
}

void summarize(SchemeSummary& s) {
  double time = 0.0;
  double loss = 0.0;
  s.completed = 0;
  s.aborted = 0;
  for (const auto& r : s.trials) {
    if (r.stop_reason == StopReason::aborted) {
      ++s.aborted;
      continue;
    }
    time += r.wall_time_s;
    loss += r.final_loss;
    ++s.completed;
  }
  s.avg_time_s = s.completed ? time / s.completed : 0.0;
  s.avg_loss = s.completed ? loss / s.completed : std::numeric_limits<double>::quiet_NaN();
}

ComparisonSummary compare(const Problem& problem, const std::vector<Scheme>& schemes,
                          const TrainConfig& config, int trials, int jobs) {
  if (trials < 1) throw std::invalid_argument("compare: trials must be at least 1");
  if (schemes.empty()) throw std::invalid_argument("compare: no schemes given");
  ComparisonSummary summary;
  summary.problem = problem.name;
  summary.loss_type = config.loss_type.value_or(problem.loss_type);

  struct Task {
    std::size_t scheme;
    int trial;
  };
  std::vector<Task> tasks;
  summary.schemes.resize(schemes.size());
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    summary.schemes[s].scheme = std::string(scheme_name(schemes[s]));
    summary.schemes[s].trials.resize(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) tasks.push_back({s, t});
  }

  auto execute = [&](const Task& task) {
    TrainConfig c = config;
    c.scheme = schemes[task.scheme];
    c.seed = trial_seed(config.seed, task.trial);
    summary.schemes[task.scheme].trials[task.trial] = run(problem, c);
  };

  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(tasks.size()));
  if (jobs == 1) {
    for (const auto& t : tasks) execute(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < tasks.size(); i = next++) execute(tasks[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (auto& s : summary.schemes) summarize(s);
  return summary;
}

}  // namespace advcol
