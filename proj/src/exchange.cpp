#include "vivipar/exchange.hpp"

namespace vivipar {

LinkCell::~LinkCell() { delete improved_.load(std::memory_order_acquire); }

void LinkCell::publish(std::size_t writer, LitVec improved) {
  if (writer != writer_) throw std::logic_error("link cell written by a foreign worker");
  auto* fresh = new LitVec(std::move(improved));
  const LitVec* expected = nullptr;
  if (!improved_.compare_exchange_strong(expected, fresh, std::memory_order_release,
                                         std::memory_order_relaxed)) {
    delete fresh;
    throw DoublePublish();
  }
}

std::optional<LitVec> poll_improvement(const LinkCell& link) {
  if (const LitVec* improved = link.poll()) return *improved;
  return std::nullopt;
}

SharedPool::SharedPool(std::size_t num_workers, std::size_t capacity) : capacity_(capacity) {
  if (num_workers == 0) throw std::invalid_argument("shared pool needs at least one worker");
  if (capacity_ == 0) throw std::invalid_argument("shared pool capacity must be positive");
  inboxes_.reserve(num_workers);
  for (std::size_t i = 0; i < num_workers; ++i) inboxes_.push_back(std::make_unique<Inbox>());
}

void SharedPool::publish(const SharedClause& record) {
  for (std::size_t w = 0; w < inboxes_.size(); ++w) {
    if (w == record.origin) continue;
    Inbox& inbox = *inboxes_[w];
    std::lock_guard lock(inbox.mutex);
    if (inbox.records.size() >= capacity_) {
      inbox.records.pop_front();
      inbox.overflows.fetch_add(1, std::memory_order_relaxed);
    }
    inbox.records.push_back(record);
  }
}

std::vector<SharedClause> SharedPool::drain(std::size_t worker) {
  Inbox& inbox = *inboxes_.at(worker);
  std::deque<SharedClause> taken;
  {
    std::lock_guard lock(inbox.mutex);
    taken.swap(inbox.records);
  }
  return {std::make_move_iterator(taken.begin()), std::make_move_iterator(taken.end())};
}

std::uint64_t SharedPool::overflows(std::size_t worker) const {
  return inboxes_.at(worker)->overflows.load(std::memory_order_relaxed);
}

std::size_t SharedPool::pending(std::size_t worker) const {
  const Inbox& inbox = *inboxes_.at(worker);
  std::lock_guard lock(inbox.mutex);
  return inbox.records.size();
}

}  // namespace vivipar
