#include "vivipar/restart.hpp"

#include <stdexcept>

namespace vivipar {

std::uint64_t luby(std::uint64_t index) {
  if (index == 0) throw std::invalid_argument("luby index is 1-based");
  // Find the smallest k with 2^k - 1 >= index, then either index ends a block
  // (value 2^(k-1)) or it lies inside a repeated prefix of length 2^(k-1) - 1.
  for (;;) {
    std::uint64_t k = 1;
    while (((std::uint64_t{1} << k) - 1) < index) ++k;
    if (index == (std::uint64_t{1} << k) - 1) return std::uint64_t{1} << (k - 1);
    index -= (std::uint64_t{1} << (k - 1)) - 1;
  }
}

RestartPolicy::RestartPolicy(RestartConfig config) : config_(config) {
  if (config_.lbd_window == 0) throw std::invalid_argument("restart window must be positive");
  if (config_.luby_unit == 0) throw std::invalid_argument("luby unit must be positive");
}

void RestartPolicy::on_conflict(std::uint32_t lbd) {
  ++conflicts_;
  ++conflicts_since_restart_;
  lbd_sum_ += lbd;
  window_.push_back(lbd);
  window_sum_ += lbd;
  if (window_.size() > config_.lbd_window) {
    window_sum_ -= window_.front();
    window_.pop_front();
  }
}

double RestartPolicy::window_mean() const {
  return window_.empty() ? 0.0 : static_cast<double>(window_sum_) / static_cast<double>(window_.size());
}

double RestartPolicy::global_mean() const {
  return conflicts_ == 0 ? 0.0 : static_cast<double>(lbd_sum_) / static_cast<double>(conflicts_);
}

std::uint64_t RestartPolicy::luby_threshold() const { return config_.luby_unit * luby(restart_index_); }

bool RestartPolicy::should_restart() const {
  if (config_.kind == RestartKind::Luby) return conflicts_since_restart_ >= luby_threshold();
  // Recent clauses are markedly worse than average: the search is stuck.
  return window_full() && window_mean() * config_.k > global_mean();
}

void RestartPolicy::on_restart() {
  window_.clear();
  window_sum_ = 0;
  conflicts_since_restart_ = 0;
  ++restart_index_;
}

}  // namespace vivipar
