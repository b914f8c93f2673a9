#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vivipar/literal.hpp"

namespace vivipar {

/// A clause is exported iff lbd <= max_lbd and length <= max_len.
struct ExportFilter {
  std::uint32_t max_lbd = 4;
  std::size_t max_len = 30;

  [[nodiscard]] bool accepts(std::size_t length, std::uint32_t lbd) const {
    return lbd <= max_lbd && length <= max_len;
  }
};

class DoublePublish : public std::logic_error {
 public:
  DoublePublish() : std::logic_error("link cell already published") {}
};

/// Single-writer, many-reader cell through which the learning worker shares
/// the improved form of an exported clause. The improved literals live in an
/// immutable heap array installed with one release-CAS; readers do a single
/// acquire load, so they see either nothing or the whole array. The array is
/// freed when the last handle to the cell goes away.
class LinkCell {
 public:
  explicit LinkCell(std::size_t writer) : writer_(writer) {}
  ~LinkCell();

  LinkCell(const LinkCell&) = delete;
  LinkCell& operator=(const LinkCell&) = delete;

  /// Empty -> Published. Throws DoublePublish on a second call and
  /// std::logic_error when `writer` is not the designated writer.
  void publish(std::size_t writer, LitVec improved);

  /// Non-blocking; nullptr while Empty. The pointee never changes once visible.
  [[nodiscard]] const LitVec* poll() const { return improved_.load(std::memory_order_acquire); }
  [[nodiscard]] bool published() const { return poll() != nullptr; }
  [[nodiscard]] std::size_t writer() const { return writer_; }

 private:
  std::size_t writer_;
  std::atomic<const LitVec*> improved_{nullptr};
};

using LinkHandle = std::shared_ptr<LinkCell>;

std::optional<LitVec> poll_improvement(const LinkCell& link);

/// One exported clause as seen by an importer.
struct SharedClause {
  LitVec lits;
  std::uint32_t lbd = 0;
  std::size_t origin = 0;
  LinkHandle link;
};

/// Per-worker inbound buffers. Exports are copied into every buffer except the
/// origin's. Buffers are bounded; overflow drops the oldest record.
class SharedPool {
 public:
  static constexpr std::size_t kDefaultCapacity = std::size_t{1} << 16;

  explicit SharedPool(std::size_t num_workers, std::size_t capacity = kDefaultCapacity);

  void publish(const SharedClause& record);
  /// Returns and clears everything pending for `worker`, oldest first.
  std::vector<SharedClause> drain(std::size_t worker);

  [[nodiscard]] std::size_t num_workers() const { return inboxes_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] std::uint64_t overflows(std::size_t worker) const;
  [[nodiscard]] std::size_t pending(std::size_t worker) const;

 private:
  struct Inbox {
    mutable std::mutex mutex;
    std::deque<SharedClause> records;
    std::atomic<std::uint64_t> overflows{0};
  };

  std::size_t capacity_;
  std::vector<std::unique_ptr<Inbox>> inboxes_;
};

}  // namespace vivipar
