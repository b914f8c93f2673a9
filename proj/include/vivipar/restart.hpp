#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>

namespace vivipar {

enum class RestartKind { DynamicLbd, Luby };

/// Luby sequence, 1-based: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
std::uint64_t luby(std::uint64_t index);

struct RestartConfig {
  RestartKind kind = RestartKind::DynamicLbd;
  std::size_t lbd_window = 50;
  double k = 0.8;
  std::uint64_t luby_unit = 100;
};

/// Glucose-style dynamic restarts (recent LBD mean vs. global mean) or Luby.
class RestartPolicy {
 public:
  explicit RestartPolicy(RestartConfig config = {});

  void on_conflict(std::uint32_t lbd);
  [[nodiscard]] bool should_restart() const;
  void on_restart();

  [[nodiscard]] const RestartConfig& config() const { return config_; }
  /// Conflicts the current Luby run may last.
  [[nodiscard]] std::uint64_t luby_threshold() const;
  [[nodiscard]] double window_mean() const;
  [[nodiscard]] double global_mean() const;
  [[nodiscard]] bool window_full() const { return window_.size() >= config_.lbd_window; }

 private:
  RestartConfig config_;
  std::deque<std::uint32_t> window_;
  std::uint64_t window_sum_ = 0;
  std::uint64_t lbd_sum_ = 0;
  std::uint64_t conflicts_ = 0;
  std::uint64_t conflicts_since_restart_ = 0;
  std::uint64_t restart_index_ = 1;
};

}  // namespace vivipar
