// Reference values computed independently of the library's closed forms.
#ifndef NBPK_TESTS_ORACLES_HPP
#define NBPK_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

// Two-parameter Poisson-Dirichlet EPPF via rising factorials, written out
// term by term rather than through log-gamma differences.
inline double pd_log_eppf(double alpha, double theta, const std::vector<int>& counts) {
  int n = 0;
  for (int c : counts) n += c;
  double value = 0.0;
  for (std::size_t i = 1; i < counts.size(); ++i) value += std::log(theta + static_cast<double>(i) * alpha);
  for (int c : counts) {
    for (int j = 1; j < c; ++j) value += std::log(j - alpha);
  }
  for (int j = 1; j < n; ++j) value -= std::log(theta + j);
  return value;
}

// Every set partition of {0, ..., n-1} as block sizes in order of first
// appearance, via restricted growth strings.
inline void for_each_set_partition(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> label(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int blocks) {
    if (pos == n) {
      std::vector<int> sizes(blocks, 0);
      for (int l : label) ++sizes[l];
      visit(sizes);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      label[pos] = b;
      rec(pos + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
}

// All compositions (ordered block sizes) of n.
inline std::vector<std::vector<int>> compositions(int n) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> parts{1};
    for (int j = 0; j < n - 1; ++j) {
      if (mask & (1u << j)) {
        parts.push_back(1);
      } else {
        ++parts.back();
      }
    }
    out.push_back(parts);
  }
  return out;
}

inline double chi_square_statistic(const std::vector<double>& probabilities, const std::vector<long>& counts) {
  long total = 0;
  for (long c : counts) total += c;
  double stat = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const double expected = probabilities[j] * static_cast<double>(total);
    stat += (counts[j] - expected) * (counts[j] - expected) / expected;
  }
  return stat;
}

struct MeanAndError {
  double mean;
  double standard_error;
};

inline MeanAndError mean_and_error(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace oracle

#endif  // NBPK_TESTS_ORACLES_HPP
