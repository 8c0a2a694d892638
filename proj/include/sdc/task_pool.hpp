// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sdc {

/// Fixed set of worker threads running index-parallel loops. The calling
/// thread takes part, so a pool of width w starts w - 1 helpers.
class TaskPool {
 public:
  explicit TaskPool(int width);
  ~TaskPool();
  TaskPool(const TaskPool&) = delete;
  TaskPool& operator=(const TaskPool&) = delete;

  int width() const { return static_cast<int>(helpers_.size()) + 1; }

  /// Runs fn(0) .. fn(n - 1), each exactly once, and returns when all are done.
  /// The first exception thrown by a task is rethrown here.
  void parallel_for(int n, const std::function<void(int)>& fn);

  /// Number of tasks each worker has executed (index 0 is the calling thread).
  std::vector<long> tasks_per_worker() const;

 private:
  void helper_loop(int id);
  void run_tasks(int id);

  std::vector<std::thread> helpers_;
  mutable std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(int)>* job_ = nullptr;
  int job_size_ = 0;
  int next_index_ = 0;
  int busy_helpers_ = 0;
  unsigned long generation_ = 0;
  bool stopping_ = false;
  std::exception_ptr error_;
  std::vector<long> task_counts_;
};

}  // namespace sdc
