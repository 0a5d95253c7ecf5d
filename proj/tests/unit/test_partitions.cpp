#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "nbpk/partitions.hpp"
#include "oracles.hpp"

using namespace nbpk;

TEST_CASE("configuration parsing and editing") {
  const auto c = Configuration::parse("3, 2,1");
  CHECK(c.blocks() == 3);
  CHECK(c.total() == 6);
  CHECK(c.to_string() == "3,2,1");
  CHECK(c.without_one(0) == Configuration({2, 2, 1}));
  CHECK(c.without_one(2) == Configuration({3, 2}));
  CHECK(c.with_increment(1) == Configuration({3, 3, 1}));
  CHECK(c.with_new_block() == Configuration({3, 2, 1, 1}));
  CHECK(Configuration({1, 3, 2}).sorted_counts() == std::vector<int>{3, 2, 1});
  for (const char* bad : {"", "3,,1", "3,a", "0,1", "-2", "1.5"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Configuration::parse(bad), std::invalid_argument);
  }
  CHECK_THROWS_AS(Configuration({1}).without_one(0), std::invalid_argument);
  CHECK_THROWS_AS(Configuration(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("AFS vectors") {
  const auto m = afs(Configuration({2, 1, 2, 1, 1}));
  CHECK(m.n() == 7);
  CHECK(m[1] == 3);
  CHECK(m[2] == 2);
  CHECK(m[3] == 0);
  CHECK(m.blocks() == 5);
  CHECK(m.to_configuration() == Configuration({2, 2, 1, 1, 1}));
  CHECK(m.to_string() == "3,2,0,0,0,0,0");
  CHECK_THROWS_AS(AfsVector({1, 1}), std::invalid_argument);  // 1 + 2 != 2
  CHECK_THROWS_AS(AfsVector({-1, 1}), std::invalid_argument);
}

TEST_CASE("enumeration sizes follow the partition numbers") {
  const std::vector<int> partition_numbers{1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176};
  for (int n = 1; n <= 15; ++n) {
    int count = 0;
    for_each_partition(n, [&](std::span<const int>) { ++count; });
    CHECK(count == partition_numbers[n - 1]);
  }
  // Number of partitions of 20 into exactly 4 parts is 64.
  const auto groups = enumerate_afs(20);
  CHECK(groups[3].size() == 64);
  CHECK_THROWS_AS(enumerate_afs(kMaxEnumerationSize + 1), std::invalid_argument);
  int big = 0;
  for_each_partition(60, [&](std::span<const int>) { ++big; });
  CHECK(big == 966467);
}

TEST_CASE("enumeration order within a block count is reverse lexicographic") {
  const auto groups = enumerate_afs(7);
  const auto& three = groups[2];
  std::vector<std::vector<int>> seen;
  for (const auto& m : three) {
    const auto c = m.to_configuration();
    seen.emplace_back(c.counts().begin(), c.counts().end());
  }
  const std::vector<std::vector<int>> expected{{5, 1, 1}, {4, 2, 1}, {3, 3, 1}, {3, 2, 2}};
  CHECK(seen == expected);
}

TEST_CASE("partition coefficients count set partitions") {
  for (int n = 1; n <= 8; ++n) {
    std::map<std::vector<int>, long> brute;
    oracle::for_each_set_partition(n, [&](const std::vector<int>& sizes) {
      auto sorted = sizes;
      std::sort(sorted.rbegin(), sorted.rend());
      ++brute[sorted];
    });
    for (const auto& group : enumerate_afs(n)) {
      for (const auto& m : group) {
        const auto c = m.to_configuration();
        const std::vector<int> key(c.counts().begin(), c.counts().end());
        CHECK(std::exp(log_partition_coefficient(m)) == doctest::Approx(static_cast<double>(brute.at(key))));
      }
    }
  }
}
