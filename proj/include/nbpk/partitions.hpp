#ifndef NBPK_PARTITIONS_HPP
#define NBPK_PARTITIONS_HPP

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nbpk {

/// Block sizes (n_1, ..., n_k) of a partition of n observations, in order of
/// appearance. Every block is nonempty and k >= 1.
class Configuration {
 public:
  explicit Configuration(std::vector<int> counts);

  /// Parses "3,2,1". Throws std::invalid_argument on malformed input.
  static Configuration parse(std::string_view text);

  std::span<const int> counts() const { return counts_; }
  int operator[](std::size_t i) const { return counts_[i]; }
  int blocks() const { return static_cast<int>(counts_.size()); }
  int total() const { return total_; }

  /// n - e_i; the block is dropped when it empties. Requires total() >= 2.
  Configuration without_one(std::size_t i) const;
  Configuration with_increment(std::size_t i) const;
  Configuration with_new_block() const;

  /// Counts sorted in decreasing order; equal for any two permutations.
  std::vector<int> sorted_counts() const;

  std::string to_string() const;
  bool operator==(const Configuration&) const = default;

 private:
  std::vector<int> counts_;
  int total_ = 0;
};

/// Multiplicity representation m = (m_1, ..., m_n) with m_j the number of
/// blocks of size j.
class AfsVector {
 public:
  explicit AfsVector(std::vector<int> multiplicities);

  std::span<const int> multiplicities() const { return m_; }
  int operator[](std::size_t j) const { return m_[j - 1]; }  // 1-based, as m_j
  int n() const { return static_cast<int>(m_.size()); }
  int blocks() const;

  /// Block sizes in decreasing order.
  Configuration to_configuration() const;
  std::string to_string() const;
  bool operator==(const AfsVector&) const = default;

 private:
  std::vector<int> m_;
};

AfsVector afs(const Configuration& config);

/// Largest n accepted by enumerate_afs; beyond it use for_each_partition.
inline constexpr int kMaxEnumerationSize = 40;

/// All partitions of n in multiplicity form, grouped by number of blocks:
/// element [k - 1] holds A_{nk}. Within each group the partitions appear in
/// reverse lexicographic order of their decreasing block sizes.
std::vector<std::vector<AfsVector>> enumerate_afs(int n);

/// Streams every partition of n (as decreasing block sizes) in reverse
/// lexicographic order, without materialising the list.
void for_each_partition(int n, const std::function<void(std::span<const int>)>& visit);

/// log of n! / prod_j (j!)^{m_j} m_j!, the number of set partitions of [n]
/// whose block sizes have multiplicities m.
double log_partition_coefficient(const AfsVector& m);

}  // namespace nbpk

#endif  // NBPK_PARTITIONS_HPP
