#include "core/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace spdml {

int thread_count() {
  static const int count = [] {
    if (const char* env = std::getenv("SPDML_THREADS")) {
      const int parsed = std::atoi(env);
      if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }();
  return count;
}

namespace {

// Lazily started pool shared by all reductions. Workers sleep between jobs;
// the submitting thread participates, so thread_count() == 1 never spawns.
class ThreadPool {
public:
  static ThreadPool& instance() {
    static ThreadPool pool(thread_count() - 1);
    return pool;
  }

  void run(std::size_t num_jobs, const std::function<void(std::size_t)>& job) {
    std::unique_lock<std::mutex> lock(submit_mutex_);
    {
      std::lock_guard<std::mutex> state(mutex_);
      job_ = &job;
      num_jobs_ = num_jobs;
      next_job_.store(0, std::memory_order_relaxed);
      pending_ = num_jobs;
      generation_++;
    }
    wake_.notify_all();
    work();  // the submitting thread pulls jobs too
    std::unique_lock<std::mutex> state(mutex_);
    done_.wait(state, [&] { return pending_ == 0; });
    job_ = nullptr;
  }

private:
  explicit ThreadPool(int workers) {
    for (int i = 0; i < workers; ++i)
      threads_.emplace_back([this] { worker_loop(); });
  }

  ~ThreadPool() {
    {
      std::lock_guard<std::mutex> state(mutex_);
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock<std::mutex> state(mutex_);
        wake_.wait(state, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      work();
    }
  }

  void work() {
    std::size_t finished = 0;
    for (;;) {
      const std::size_t index =
          next_job_.fetch_add(1, std::memory_order_relaxed);
      if (index >= num_jobs_) break;
      (*job_)(index);
      finished++;
    }
    if (finished > 0) {
      std::lock_guard<std::mutex> state(mutex_);
      pending_ -= finished;
      if (pending_ == 0) done_.notify_all();
    }
  }

  std::mutex submit_mutex_;  // one reduction at a time
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  std::vector<std::thread> threads_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t num_jobs_ = 0;
  std::atomic<std::size_t> next_job_{0};
  std::size_t pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

}  // namespace

void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& body) {
  if (count == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t num_chunks = (count + chunk_size - 1) / chunk_size;

  std::vector<std::exception_ptr> errors(num_chunks);
  auto run_chunk = [&](std::size_t chunk) {
    const std::size_t begin = chunk * chunk_size;
    const std::size_t end = std::min(begin + chunk_size, count);
    try {
      body(chunk, begin, end);
    } catch (...) {
      errors[chunk] = std::current_exception();
    }
  };

  if (num_chunks == 1 || thread_count() == 1) {
    for (std::size_t chunk = 0; chunk < num_chunks; ++chunk) run_chunk(chunk);
  } else {
    ThreadPool::instance().run(num_chunks, run_chunk);
  }

  for (const auto& error : errors)
    if (error) std::rethrow_exception(error);
}

}  // namespace spdml
