#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roommates/bigrational.hpp"

namespace roommates {

/// Cycle type of a permutation of {1..n}: multiplicities a_k of each cycle
/// length k. Only lengths with a_k >= 1 are stored, ascending in k.
class CycleType {
public:
  struct Part {
    int length;
    int multiplicity;
    friend auto operator<=>(const Part&, const Part&) = default;
  };

  CycleType() = default;

  /// From (length, multiplicity) pairs in any order. Repeated lengths are
  /// merged. Throws std::invalid_argument for non-positive entries.
  static CycleType from_parts(std::vector<Part> parts);

  /// From an integer partition given as a list of cycle lengths.
  static CycleType from_lengths(const std::vector<int>& lengths);

  /// Parses "k^a,k^a,..." (whitespace ignored, "k" alone means k^1).
  /// When expected_n > 0 the total size must match.
  static CycleType parse(std::string_view text, int expected_n = 0);

  int n() const { return n_; }
  int multiplicity(int length) const;
  const std::vector<Part>& parts() const { return parts_; }

  /// Cycle lengths in non-increasing order (the partition of n).
  std::vector<int> lengths_descending() const;

  /// Canonical form, e.g. "1^1,2^2,3^1".
  std::string to_string() const;

  friend bool operator==(const CycleType&, const CycleType&) = default;
  friend auto operator<=>(const CycleType& a, const CycleType& b) {
    return a.parts_ <=> b.parts_;
  }

private:
  std::vector<Part> parts_;
  int n_ = 0;
};

enum class CycleFamily {
  EvenOnly,          // E_n: even cycles only (n even)
  OddWitness,        // O_n: at most one fixed point and at least one odd cycle (n even)
  OneFixedEven,      // E^1_n: exactly one fixed point, all other cycles even (n odd)
  OddCycleAtLeast3,  // O^3_n: at least one odd cycle of length >= 3 (n odd)
};

std::string_view family_name(CycleFamily family);
bool is_member(const CycleType& a, CycleFamily family);

/// Every partition of n exactly once, reverse-lexicographic on the
/// non-increasing part lists ([n] first, [1^n] last).
std::vector<CycleType> enumerate_partitions(int n);

/// Members of a family in enumeration order. Throws std::invalid_argument
/// when the parity of n does not match the family.
std::vector<CycleType> family_members(int n, CycleFamily family);

/// Partition number p(n) by Euler's pentagonal recurrence; p(n) = 0 for n < 0.
std::uint64_t partition_number(int n);

/// Cardinality the family should have, from partition numbers alone.
std::uint64_t predicted_family_size(int n, CycleFamily family);

/// c(a) = n! / prod_k (a_k! k^a_k).
BigInteger count_permutations(const CycleType& a);

/// e(a): number of even cycles of length >= 4.
int even_cycle_sign_exponent(const CycleType& a);

/// f(a) = n(n-3)/2 + a_1 + a_2: penalty factors in the stability integrand.
int factor_count(const CycleType& a);

}  // namespace roommates
