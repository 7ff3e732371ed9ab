#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "empgram/parallel.hpp"

using namespace empgram;

TEST_CASE("every index runs once") {
  for (std::size_t threads : {1, 2, 4, 9}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK(resolve_threads(0) >= 1);
  CHECK(resolve_threads(3) == 3);
}

TEST_CASE("lowest failing index is rethrown") {
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL("no exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}
