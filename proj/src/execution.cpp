#include <qbattery/execution.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace qbattery {

unsigned env_thread_cap() {
  const char* raw = std::getenv("QBATTERY_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    const long v = std::stol(raw);
    return v > 0 ? static_cast<unsigned>(v) : 0u;
  } catch (const std::exception&) {
    return 0;
  }
}

unsigned resolve_threads(const Execution& exec) {
  if (exec.threads > 0) return exec.threads;
  if (const unsigned cap = env_thread_cap(); cap > 0) return cap;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Work-stealing over a shared atomic counter; `job(i)` must write only to
// slot i of caller-owned storage.
void run_indexed(std::size_t count, const std::function<void(std::size_t)>& job,
                 unsigned threads) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

BlockSum reduce_blocks(std::size_t n,
                       const std::function<BlockSum(std::size_t, std::size_t)>& block,
                       const Execution& exec) {
  const std::size_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<BlockSum> partial(nblocks);
  run_indexed(
      nblocks,
      [&](std::size_t b) {
        const std::size_t begin = b * kReductionBlock;
        const std::size_t end = std::min(n, begin + kReductionBlock);
        partial[b] = block(begin, end);
      },
      resolve_threads(exec));

  BlockSum total;
  for (const auto& p : partial) {
    total.sum.add(p.sum);
    total.dropped += p.dropped;
  }
  return total;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task,
                  const Execution& exec) {
  run_indexed(n, task, resolve_threads(exec));
}

}  // namespace qbattery
