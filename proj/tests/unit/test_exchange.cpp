#include <doctest.h>

#include <atomic>
#include <memory>
#include <thread>

#include "support.hpp"
#include "vivipar/engine.hpp"
#include "vivipar/exchange.hpp"

using namespace vivipar;
using testing::cnf;
using testing::lits;

TEST_CASE("export filter") {
  const ExportFilter filter;
  CHECK(filter.accepts(5, 3));
  CHECK(filter.accepts(30, 4));
  CHECK_FALSE(filter.accepts(5, 7));
  CHECK_FALSE(filter.accepts(31, 2));
}

TEST_CASE("link cell publication") {
  LinkCell link(0);
  CHECK(link.poll() == nullptr);
  CHECK_FALSE(poll_improvement(link).has_value());

  link.publish(0, lits({1, 2}));
  CHECK(link.published());
  CHECK(poll_improvement(link) == lits({1, 2}));
  CHECK(poll_improvement(link) == poll_improvement(link));
  CHECK(link.poll() == link.poll());
  CHECK_THROWS_AS(link.publish(0, lits({1})), DoublePublish);
  CHECK(poll_improvement(link) == lits({1, 2}));
}

TEST_CASE("link cell rejects foreign writers") {
  LinkCell link(3);
  CHECK_THROWS_AS(link.publish(1, lits({1})), std::logic_error);
  CHECK_FALSE(link.published());
  link.publish(3, lits({-1}));
  CHECK(poll_improvement(link) == lits({-1}));
}

TEST_CASE("link cell publish is visible to another thread") {
  auto link = std::make_shared<LinkCell>(0);
  std::thread writer([link] { link->publish(0, lits({1, 2})); });
  writer.join();
  std::optional<LitVec> seen;
  std::thread reader([&] { seen = poll_improvement(*link); });
  reader.join();
  CHECK(seen == lits({1, 2}));
}

TEST_CASE("link cell stress: one writer, eight readers") {
  constexpr std::size_t kCells = 4096;
  constexpr std::size_t kReaders = 8;
  std::vector<LinkHandle> cells;
  for (std::size_t i = 0; i < kCells; ++i) cells.push_back(std::make_shared<LinkCell>(0));

  // Cell i carries (i % 29) + 2 literals; the last literal encodes the sum of the others.
  auto expected = [](std::size_t i) {
    LitVec c;
    std::uint32_t sum = 0;
    const std::size_t len = i % 29 + 1;
    for (std::size_t k = 0; k < len; ++k) {
      const Lit l = Lit::make(static_cast<Var>(1 + (i + 7 * k) % 1000), (k + i) % 2 == 1);
      sum += l.code();
      c.push_back(l);
    }
    c.push_back(Lit::from_code(sum));
    return c;
  };

  std::atomic<bool> done{false};
  std::atomic<std::uint64_t> polls{0};
  std::atomic<std::uint64_t> torn{0};
  std::atomic<std::uint64_t> published_seen{0};
  std::vector<std::thread> readers;
  for (std::size_t r = 0; r < kReaders; ++r) {
    readers.emplace_back([&, r] {
      std::uint64_t local = 0;
      std::size_t i = r;
      while (!done.load(std::memory_order_acquire) || local < 20000) {
        const LitVec* seen = cells[i % kCells]->poll();
        if (seen != nullptr) {
          published_seen.fetch_add(1, std::memory_order_relaxed);
          std::uint32_t sum = 0;
          for (std::size_t k = 0; k + 1 < seen->size(); ++k) sum += (*seen)[k].code();
          if (seen->size() != (i % kCells) % 29 + 2 || seen->back().code() != sum) torn.fetch_add(1);
        }
        ++local;
        i += 13;
      }
      polls.fetch_add(local);
    });
  }
  std::thread writer([&] {
    for (std::size_t i = 0; i < kCells; ++i) cells[i]->publish(0, expected(i));
    done.store(true, std::memory_order_release);
  });
  writer.join();
  for (std::thread& t : readers) t.join();

  CHECK(torn.load() == 0);
  CHECK(polls.load() + kCells >= 100000);
  CHECK(published_seen.load() > 0);
  for (std::size_t i = 0; i < kCells; ++i) CHECK(*cells[i]->poll() == expected(i));
}

TEST_CASE("shared pool delivery") {
  SharedPool pool(3, 4);
  CHECK(pool.drain(1).empty());

  pool.publish({lits({1, 2}), 2, 0, nullptr});
  pool.publish({lits({3, 4}), 3, 0, nullptr});
  CHECK(pool.pending(0) == 0);
  CHECK(pool.pending(1) == 2);
  const auto got = pool.drain(1);
  REQUIRE(got.size() == 2);
  CHECK(got[0].lits == lits({1, 2}));
  CHECK(got[1].lits == lits({3, 4}));
  CHECK(got[0].origin == 0);
  CHECK(pool.drain(1).empty());
  CHECK(pool.drain(2).size() == 2);
  CHECK(pool.drain(0).empty());
}

TEST_CASE("shared pool drops the oldest record on overflow") {
  SharedPool pool(2, 3);
  for (int i = 1; i <= 5; ++i) pool.publish({lits({i, i + 1}), 2, 0, nullptr});
  CHECK(pool.overflows(1) == 2);
  CHECK(pool.overflows(0) == 0);
  const auto got = pool.drain(1);
  REQUIRE(got.size() == 3);
  CHECK(got.front().lits == lits({3, 4}));
  CHECK(got.back().lits == lits({5, 6}));
  CHECK_THROWS(SharedPool(0));
  CHECK_THROWS(SharedPool(2, 0));
}

TEST_CASE("shared pool under concurrent producers loses nothing") {
  constexpr std::size_t kWorkers = 4;
  constexpr int kPerProducer = 5000;
  SharedPool pool(kWorkers);
  std::vector<std::thread> producers;
  for (std::size_t w = 1; w < kWorkers; ++w) {
    producers.emplace_back([&pool, w] {
      for (int i = 0; i < kPerProducer; ++i) pool.publish({lits({i + 1, -(i + 2)}), 2, w, nullptr});
    });
  }
  std::size_t received = 0;
  bool fifo = true;
  std::vector<int> next(kWorkers, 1);
  auto consume = [&] {
    for (const SharedClause& r : pool.drain(0)) {
      ++received;
      if (r.lits[0].to_dimacs() != next[r.origin]) fifo = false;
      next[r.origin] = r.lits[0].to_dimacs() + 1;
    }
  };
  while (received < (kWorkers - 1) * kPerProducer) {
    consume();
    std::this_thread::yield();
  }
  for (std::thread& t : producers) t.join();
  consume();
  CHECK(received == (kWorkers - 1) * kPerProducer);
  CHECK(fifo);
  CHECK(pool.overflows(0) == 0);
}

TEST_CASE("import: clause satisfied at level 0 is dropped") {
  Engine e(cnf(3, {{1}}));
  CHECK(e.import_clause(lits({1, 2}), 2, nullptr, true) == Engine::ImportResult::Dropped);
  CHECK(e.num_learned() == 0);
  CHECK(e.stats().clauses_imported == 0);
}

TEST_CASE("import: attached clauses are learned and imported") {
  Engine e(cnf(4, {}));
  auto link = std::make_shared<LinkCell>(1);
  CHECK(e.import_clause(lits({1, 2, 3}), 2, link, true) == Engine::ImportResult::Attached);
  CHECK(e.import_clause(lits({2, 3, 4}), 5, nullptr, false) == Engine::ImportResult::Attached);
  const auto learned = e.learned_clauses();
  REQUIRE(learned.size() == 2);
  for (ClauseRef c : learned) {
    CHECK(e.clause(c).meta.imported);
    CHECK(e.clause(c).meta.learned);
  }
  CHECK(e.clause(learned[0]).meta.link == link);
  CHECK_FALSE(e.clause(learned[0]).meta.standby);
  CHECK(e.clause(learned[1]).meta.standby);
  CHECK(e.stats().clauses_imported == 2);
  CHECK(e.check_invariants());
}

TEST_CASE("import: unit clause is asserted at level 0") {
  Engine e(cnf(3, {}));
  e.assume(Lit::positive(3));
  CHECK(e.import_clause(lits({-2}), 1, nullptr, true) == Engine::ImportResult::Unit);
  CHECK(e.decision_level() == 0);
  CHECK(e.value(Lit::negative(2)) == Value::True);
  CHECK(e.level(2) == 0);
}

TEST_CASE("import: two-watched clause that is unit under the trail propagates") {
  Engine e(cnf(4, {}));
  e.assume(Lit::negative(1));
  e.assume(Lit::negative(2));
  e.assume(Lit::positive(4));
  CHECK(e.import_clause(lits({1, 2, 3}), 2, nullptr, true) == Engine::ImportResult::Unit);
  CHECK(e.decision_level() == 2);
  CHECK(e.value(Lit::positive(3)) == Value::True);
  CHECK(e.level(3) == 2);
  CHECK(e.check_invariants());
}

TEST_CASE("import: falsified clause is turned into a conflict and solved") {
  // -3 is implied at the level of -2, so two literals are false at the top level.
  Engine e(cnf(3, {{2, -3}}));
  e.assume(Lit::negative(1));
  e.assume(Lit::negative(2));
  REQUIRE(e.propagate() == kNoClause);
  CHECK(e.import_clause(lits({1, 2, 3}), 3, nullptr, true) == Engine::ImportResult::Conflict);
  CHECK(e.decision_level() == 2);
  CHECK(e.solve() == SolveStatus::Sat);
  CHECK((e.model()[1] || e.model()[2] || e.model()[3]));
}

TEST_CASE("import: lazily watched clause wakes up on conflict") {
  Engine e(cnf(3, {}));
  CHECK(e.import_clause(lits({1, 2, 3}), 6, nullptr, false) == Engine::ImportResult::Attached);
  e.assume(Lit::negative(1));
  CHECK(e.propagate() == kNoClause);
  e.assume(Lit::negative(2));
  CHECK(e.propagate() == kNoClause);
  CHECK(e.value(Lit::positive(3)) == Value::Unassigned);  // standby never propagates
  e.assume(Lit::negative(3));
  const ClauseRef conflict = e.propagate();
  REQUIRE(conflict != kNoClause);
  CHECK_FALSE(e.clause(conflict).meta.standby);
  const Engine::Analysis a = e.analyze(conflict);
  CHECK(a.learned.size() >= 1);
}

TEST_CASE("import: root-falsified clause makes the engine unsat") {
  Engine e(cnf(2, {{-1}, {-2}}));
  CHECK(e.import_clause(lits({1, 2}), 2, nullptr, true) == Engine::ImportResult::Conflict);
  CHECK(e.status() == SolveStatus::Unsat);
}
