#include "nbpk/partitions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nbpk/special_functions.hpp"

namespace nbpk {

Configuration::Configuration(std::vector<int> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw std::invalid_argument("configuration needs at least one block");
  for (int c : counts_) {
    if (c < 1) throw std::invalid_argument("configuration block sizes must be positive");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), 0);
}

Configuration Configuration::parse(std::string_view text) {
  std::vector<int> counts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view field = text.substr(pos, end - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw std::invalid_argument("malformed configuration: '" + std::string(text) + "'");
    }
    counts.push_back(value);
    pos = end + 1;
  }
  return Configuration(std::move(counts));
}

Configuration Configuration::without_one(std::size_t i) const {
  if (total_ < 2) throw std::invalid_argument("cannot remove an observation from a single-observation configuration");
  std::vector<int> counts = counts_;
  if (--counts.at(i) == 0) counts.erase(counts.begin() + static_cast<std::ptrdiff_t>(i));
  return Configuration(std::move(counts));
}

Configuration Configuration::with_increment(std::size_t i) const {
  std::vector<int> counts = counts_;
  ++counts.at(i);
  return Configuration(std::move(counts));
}

Configuration Configuration::with_new_block() const {
  std::vector<int> counts = counts_;
  counts.push_back(1);
  return Configuration(std::move(counts));
}

std::vector<int> Configuration::sorted_counts() const {
  std::vector<int> sorted = counts_;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted;
}

std::string Configuration::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(counts_[i]);
  }
  return out;
}

AfsVector::AfsVector(std::vector<int> multiplicities) : m_(std::move(multiplicities)) {
  if (m_.empty()) throw std::invalid_argument("AFS vector must have length n >= 1");
  long weighted = 0;
  for (std::size_t j = 0; j < m_.size(); ++j) {
    if (m_[j] < 0) throw std::invalid_argument("AFS multiplicities must be nonnegative");
    weighted += static_cast<long>(j + 1) * m_[j];
  }
  if (weighted != static_cast<long>(m_.size())) {
    throw std::invalid_argument("AFS vector must satisfy sum_j j m_j = n");
  }
}

int AfsVector::blocks() const { return std::accumulate(m_.begin(), m_.end(), 0); }

Configuration AfsVector::to_configuration() const {
  std::vector<int> counts;
  for (int j = n(); j >= 1; --j) counts.insert(counts.end(), m_[j - 1], j);
  return Configuration(std::move(counts));
}

std::string AfsVector::to_string() const {
  std::string out;
  for (std::size_t j = 0; j < m_.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(m_[j]);
  }
  return out;
}

AfsVector afs(const Configuration& config) {
  std::vector<int> m(config.total(), 0);
  for (int c : config.counts()) ++m[c - 1];
  return AfsVector(std::move(m));
}

void for_each_partition(int n, const std::function<void(std::span<const int>)>& visit) {
  if (n < 1) throw std::invalid_argument("partitions: n must be positive");
  // Classic descending-parts successor: start from (n) and end at (1, ..., 1).
  std::vector<int> parts{n};
  while (true) {
    visit(parts);
    int ones = 0;
    while (!parts.empty() && parts.back() == 1) {
      parts.pop_back();
      ++ones;
    }
    if (parts.empty()) return;
    const int reduced = --parts.back();
    int remainder = ones + 1;
    while (remainder > reduced) {
      parts.push_back(reduced);
      remainder -= reduced;
    }
    if (remainder > 0) parts.push_back(remainder);
  }
}

std::vector<std::vector<AfsVector>> enumerate_afs(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_afs: n must be positive");
  if (n > kMaxEnumerationSize) {
    throw std::invalid_argument("enumerate_afs: n = " + std::to_string(n) +
                                " is too large to materialise; iterate with for_each_partition");
  }
  std::vector<std::vector<AfsVector>> groups(n);
  for_each_partition(n, [&](std::span<const int> parts) {
    std::vector<int> m(n, 0);
    for (int p : parts) ++m[p - 1];
    groups[parts.size() - 1].emplace_back(std::move(m));
  });
  return groups;
}

double log_partition_coefficient(const AfsVector& m) {
  double value = log_gamma(m.n() + 1.0);
  for (int j = 1; j <= m.n(); ++j) {
    const int mj = m[j];
    if (mj == 0) continue;
    value -= mj * log_gamma(j + 1.0) + log_gamma(mj + 1.0);
  }
  return value;
}

}  // namespace nbpk
