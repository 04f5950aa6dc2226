#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roommates/bigrational.hpp"

namespace roommates {

/// Exponent vector packed as 4-bit slots in a 64-bit word; slot v holds the
/// exponent of x_v. The packed word orders, hashes and shifts cheaply.
class Monomial {
public:
  static constexpr int kMaxVars = 16;
  static constexpr int kMaxExponent = 15;

  constexpr Monomial() = default;
  static constexpr Monomial from_packed(std::uint64_t packed) { return Monomial(packed); }
  static Monomial from_exponents(const std::vector<int>& exponents);

  int exponent(int var) const { return static_cast<int>((packed_ >> (4 * var)) & 0xF); }
  Monomial with_exponent(int var, int exponent) const;
  Monomial times(const Monomial& other) const;
  std::uint64_t packed() const { return packed_; }
  int total_degree() const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

private:
  constexpr explicit Monomial(std::uint64_t packed) : packed_(packed) {}
  std::uint64_t packed_ = 0;
};

/// Multivariate polynomial over exact rationals with a fixed variable slot
/// count. Integrated variables stay as slots but leave the live set.
class SparsePoly {
public:
  using TermMap = std::map<Monomial, BigRational>;

  explicit SparsePoly(int varcount = 0);
  static SparsePoly constant(int varcount, const BigRational& value);
  static SparsePoly variable(int varcount, int var);

  int varcount() const { return varcount_; }
  bool is_live(int var) const { return (live_mask_ >> var) & 1U; }
  std::vector<int> live_variables() const;
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Value of a polynomial with no live variables (throws otherwise).
  BigRational constant_value() const;

  void add_term(const Monomial& m, const BigRational& c);
  SparsePoly& operator+=(const SparsePoly& other);
  SparsePoly& operator*=(const BigRational& scalar);
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);

  /// Multiplies in (1 - x_i x_j), or (1 - x_i) when j < 0.
  void multiply_penalty(int i, int j = -1);

  friend SparsePoly integrate_variable(const SparsePoly& p, int var);
  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

private:
  int varcount_ = 0;
  std::uint32_t live_mask_ = 0;
  TermMap terms_;
};

/// Integral of p over x_var in [0,1]: x_var^b -> 1/(b+1). Throws
/// std::invalid_argument if var is out of range or already integrated.
SparsePoly integrate_variable(const SparsePoly& p, int var);

/// Factorised integrand: prod (1 - x_i x_j) * prod (1 - x_u) * prod x_l, with
/// unit-substituted variables already eliminated (never live).
struct FactorList {
  int varcount = 0;
  std::vector<std::pair<int, int>> bilinear_pairs;  // (1 - x_i x_j), i < j
  std::vector<int> unary_factors;                   // (1 - x_u): a pair whose partner was set to 1
  std::vector<int> linear_vars;                     // prefactor x_l
  std::vector<int> unit_substitutions;              // x_f := 1

  /// Normalises ordering and validates the invariants; throws
  /// std::invalid_argument on duplicate pairs, out-of-range indices or
  /// factors mentioning a unit-substituted variable.
  void normalize();
  std::vector<int> live_variables() const;
  int penalty_factor_count() const {
    return static_cast<int>(bilinear_pairs.size() + unary_factors.size());
  }
  /// Same integrand with variable v renamed to relabel[v].
  FactorList relabeled(const std::vector<int>& relabel) const;
};

enum class Strategy { EarlyElimination, CoefficientWise };
enum class OrderRule { Greedy, Baseline };

std::string_view strategy_name(Strategy s);

/// Greedy order: repeatedly take the live variable with the fewest
/// not-yet-multiplied factors mentioning it (lowest index on ties).
std::vector<int> elimination_order(const FactorList& f);
/// Descending variable index, as in the plain iterative scheme.
std::vector<int> baseline_order(const FactorList& f);

struct IntegrationOptions {
  std::uint64_t term_limit = std::uint64_t{1} << 28;
  OrderRule order = OrderRule::Greedy;
  std::string label;  // names the integrand in error messages
};

struct IntegrationResult {
  BigRational value;
  std::uint64_t peak_terms = 0;
};

class ResourceLimitError : public std::runtime_error {
public:
  ResourceLimitError(std::string label, Strategy strategy, std::uint64_t terms, std::uint64_t limit);
  const std::string& label() const { return label_; }
  Strategy strategy() const { return strategy_; }

private:
  std::string label_;
  Strategy strategy_;
};

/// Exact integral of the factor list over the unit cube of its live
/// variables. Both strategies return the same value.
IntegrationResult evaluate_integral(const FactorList& f, Strategy strategy, const IntegrationOptions& options = {});

/// Full expansion into a SparsePoly (reference path; exponential in size).
SparsePoly expand(const FactorList& f);

/// Reference evaluation: full rational expansion, then integration in `order`.
BigRational integrate_reference(const FactorList& f, const std::vector<int>& order);

}  // namespace roommates
