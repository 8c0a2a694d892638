// SPDX-License-Identifier: Apache-2.0
#include "sdc/task_pool.hpp"

#include <stdexcept>

namespace sdc {

TaskPool::TaskPool(int width) {
  if (width < 1) throw std::invalid_argument("TaskPool: width must be at least 1");
  task_counts_.assign(static_cast<std::size_t>(width), 0);
  helpers_.reserve(static_cast<std::size_t>(width - 1));
  for (int id = 1; id < width; ++id) helpers_.emplace_back([this, id] { helper_loop(id); });
}

TaskPool::~TaskPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : helpers_) t.join();
}

void TaskPool::run_tasks(int id) {
  for (;;) {
    int index;
    {
      std::lock_guard lock(mutex_);
      if (next_index_ >= job_size_) return;
      index = next_index_++;
    }
    try {
      (*job_)(index);
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
    ++task_counts_[static_cast<std::size_t>(id)];
  }
}

void TaskPool::helper_loop(int id) {
  unsigned long seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
    }
    run_tasks(id);
    {
      std::lock_guard lock(mutex_);
      --busy_helpers_;
    }
    done_cv_.notify_one();
  }
}

void TaskPool::parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (helpers_.empty()) {
    for (int i = 0; i < n; ++i) fn(i);
    task_counts_[0] += n;
    return;
  }
  {
    std::lock_guard lock(mutex_);
    job_ = &fn;
    job_size_ = n;
    next_index_ = 0;
    busy_helpers_ = static_cast<int>(helpers_.size());
    error_ = nullptr;
    ++generation_;
  }
  start_cv_.notify_all();
  run_tasks(0);
  std::exception_ptr error;
  {
    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [&] { return busy_helpers_ == 0; });
    job_ = nullptr;
    error = error_;
  }
  if (error) std::rethrow_exception(error);
}

std::vector<long> TaskPool::tasks_per_worker() const {
  std::lock_guard lock(mutex_);
  return task_counts_;
}

}  // namespace sdc
