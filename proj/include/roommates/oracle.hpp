#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "roommates/bigrational.hpp"
#include "roommates/cycletype.hpp"

namespace roommates {

/// Agents are 0-based. Row i lists the other n-1 agents, most preferred
/// first; i itself is implicitly last. rank(i, j) is the 0-based position of
/// j in row i, with rank(i, i) = n - 1.
class PreferenceTable {
public:
  explicit PreferenceTable(std::vector<std::vector<int>> rows);

  int n() const { return n_; }
  const std::vector<int>& row(int agent) const { return rows_[static_cast<size_t>(agent)]; }
  int rank(int agent, int other) const { return ranks_[static_cast<size_t>(agent * n_ + other)]; }
  bool prefers(int agent, int a, int b) const { return rank(agent, a) < rank(agent, b); }

  /// Text format: line i holds agent i's ranking, 1-based, self omitted.
  static PreferenceTable parse(std::string_view text);
  static PreferenceTable read_file(const std::string& path);
  std::string to_text() const;

  friend bool operator==(const PreferenceTable& a, const PreferenceTable& b) { return a.rows_ == b.rows_; }

private:
  int n_;
  std::vector<std::vector<int>> rows_;
  std::vector<int> ranks_;
};

/// Bijection on {0..n-1}: images[i] = pi(i).
class Permutation {
public:
  explicit Permutation(std::vector<int> images);

  /// Cycle notation with 1-based agents, e.g. "(1,2,3)(4)"; agents not
  /// mentioned are fixed. n is the permutation size.
  static Permutation parse_cycles(std::string_view text, int n);
  static Permutation from_cycles(const std::vector<std::vector<int>>& cycles, int n);

  int n() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<size_t>(i)]; }
  int inverse(int i) const { return inverse_[static_cast<size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }

  /// Cycles, each starting at its smallest element, ordered by that element.
  std::vector<std::vector<int>> cycles() const;
  CycleType cycle_type() const;
  std::vector<int> fixed_points() const;
  std::vector<int> two_cycle_elements() const;
  bool is_perfect_matching() const;
  std::string to_string() const;

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.images_ == b.images_; }
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.images_ < b.images_; }

private:
  std::vector<int> images_;
  std::vector<int> inverse_;
};

/// No unmatched pair both prefer each other to their partners. Throws
/// std::invalid_argument unless m is a fixed-point-free involution.
bool is_stable_matching(const PreferenceTable& t, const Permutation& m);

/// Conditions: (a) nobody prefers their successor pi(i) to their predecessor
/// pi^-1(i); (b) if i prefers j to pi(i) then j prefers pi(j) to i, for
/// j outside {i, pi(i), pi^-1(i)}.
bool is_stable_permutation(const PreferenceTable& t, const Permutation& p);

/// Every stable permutation of t, in lexicographic order of images.
std::vector<Permutation> stable_permutations(const PreferenceTable& t);

inline constexpr int kSolvableBudget = 12;

/// Even n: a stable perfect matching exists. Odd n: a stable permutation of
/// type [1^1, 2^((n-1)/2)] exists. Brute-force enumeration with partial
/// blocking-pair pruning; throws std::invalid_argument for n > kSolvableBudget.
bool is_solvable(const PreferenceTable& t);

/// Exact solvable fraction over all ((n-1)!)^n tables, n in {2, 3, 4}.
BigRational exhaustive_p(int n);

/// Seedable generator for preference tables. mt19937_64 output is fixed by the
/// standard; bounded draws use rejection sampling so that streams are
/// identical on every platform.
class TableRng {
public:
  explicit TableRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform permutation of v (Fisher-Yates from the back).
  void shuffle(std::vector<int>& v);

private:
  std::mt19937_64 engine_;
};

/// Derived per-partition seed (SplitMix64 of seed and index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

PreferenceTable random_table(int n, TableRng& rng);
PreferenceTable random_table(int n, std::uint64_t seed);

struct McEstimate {
  double estimate = 0;
  double stderr_ = 0;
  std::uint64_t successes = 0;
  std::uint64_t samples = 0;
};

/// Sample mean of is_solvable over random tables. Samples are split into
/// fixed-size partitions with derived seeds, so the result does not depend on
/// the thread count.
McEstimate mc_estimate(int n, std::uint64_t samples, std::uint64_t seed, int threads = 1);

inline constexpr std::uint64_t kMcPartitionSize = 1 << 14;

/// Tan's second fact for every even cycle of length >= 4 in p: replacing it
/// by either alternating matching keeps the permutation stable. Throws
/// std::invalid_argument unless p is stable for t and has such a cycle.
bool check_tan_fact2(const PreferenceTable& t, const Permutation& p);

/// Tan's third fact: all stable permutations of t share the same odd cycles
/// (as vertex cycles up to rotation).
bool check_tan_fact3(const PreferenceTable& t);

}  // namespace roommates
