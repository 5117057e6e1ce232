#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cajux/array.hpp"

namespace cajux {

/// Resource limits for an exhaustive run. Unset means unlimited.
struct Budget {
  std::optional<double> wall_seconds;
  std::optional<std::uint64_t> nodes;
};

/// Snapshot handed to progress callbacks.
struct Progress {
  std::uint64_t nodes = 0;
  std::uint64_t found = 0;
  double seconds = 0;
};

using ProgressFn = std::function<void(const Progress&)>;

/// A run stopped because its budget ran out. Carries what was found so far;
/// that set is not authoritative.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(const std::string& what, std::uint64_t nodes, double seconds, std::vector<CoveringArray> partial)
      : std::runtime_error(what), nodes_(nodes), seconds_(seconds), partial_(std::move(partial)) {}

  std::uint64_t nodes() const noexcept { return nodes_; }
  double seconds() const noexcept { return seconds_; }
  const std::vector<CoveringArray>& partial() const noexcept { return partial_; }

 private:
  std::uint64_t nodes_;
  double seconds_;
  std::vector<CoveringArray> partial_;
};

/// Thread-safe node and wall-clock accounting shared by the workers of one
/// run. Workers charge nodes in batches and poll stopped().
class BudgetGuard {
 public:
  explicit BudgetGuard(Budget budget, ProgressFn progress = {}, double progress_interval = 0)
      : budget_(budget), progress_(std::move(progress)), interval_(progress_interval), start_(Clock::now()) {}

  /// Adds n nodes. Returns false once the budget is exceeded.
  bool charge(std::uint64_t n) {
    const auto total = nodes_.fetch_add(n, std::memory_order_relaxed) + n;
    if (budget_.nodes && total > *budget_.nodes) stop_.store(true, std::memory_order_relaxed);
    const double now = elapsed();
    if (budget_.wall_seconds && now > *budget_.wall_seconds) stop_.store(true, std::memory_order_relaxed);
    if (progress_ && interval_ > 0) maybe_report(now);
    return !stopped();
  }

  void note_found(std::uint64_t n = 1) { found_.fetch_add(n, std::memory_order_relaxed); }

  bool stopped() const noexcept { return stop_.load(std::memory_order_relaxed); }
  std::uint64_t nodes() const noexcept { return nodes_.load(std::memory_order_relaxed); }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  using Clock = std::chrono::steady_clock;

  void maybe_report(double now) {
    std::unique_lock lock(report_mutex_, std::try_to_lock);
    if (!lock.owns_lock() || now - last_report_ < interval_) return;
    last_report_ = now;
    progress_({nodes(), found_.load(std::memory_order_relaxed), now});
  }

  Budget budget_;
  ProgressFn progress_;
  double interval_;
  Clock::time_point start_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<std::uint64_t> found_{0};
  std::atomic<bool> stop_{false};
  std::mutex report_mutex_;
  double last_report_ = 0;
};

}  // namespace cajux
