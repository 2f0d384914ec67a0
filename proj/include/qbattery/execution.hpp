#ifndef QBATTERY_EXECUTION_HPP
#define QBATTERY_EXECUTION_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace qbattery {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Parallelism knob. threads == 0 means "use QBATTERY_THREADS, else the
/// hardware concurrency".
struct Execution {
  unsigned threads = 0;
};

/// Resolved worker count for an Execution (always >= 1).
unsigned resolve_threads(const Execution& exec);

/// Thread count requested through the QBATTERY_THREADS environment variable;
/// 0 when unset, empty, or "0" (auto).
unsigned env_thread_cap();

/// Fixed partition size for deterministic reductions. Block boundaries never
/// depend on the thread count, so results are bit-identical for any
/// parallelism.
inline constexpr std::size_t kReductionBlock = 4096;

/// Per-block result of a deterministic reduction.
struct BlockSum {
  CompensatedSum sum;
  std::size_t dropped = 0;
};

/// Runs `block(begin, end)` over [0, n) in fixed blocks of kReductionBlock,
/// possibly concurrently, then combines the block sums in index order.
/// The first exception thrown by any block is rethrown after all workers
/// have joined.
BlockSum reduce_blocks(std::size_t n,
                       const std::function<BlockSum(std::size_t, std::size_t)>& block,
                       const Execution& exec = {});

/// Evaluates `task(i)` for i in [0, n), possibly concurrently. Each index is
/// visited exactly once; the caller owns the output slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task,
                  const Execution& exec = {});

}  // namespace qbattery

#endif  // QBATTERY_EXECUTION_HPP
