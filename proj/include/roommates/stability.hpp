#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roommates/bigrational.hpp"
#include "roommates/cycletype.hpp"
#include "roommates/polyint.hpp"

namespace roommates {

inline constexpr const char* kEngineVersion = "1.0.0";

/// The stability integrand of a cycle type under its canonical layout.
///
/// Layout: 2-cycles occupy consecutive variable pairs (0,1), (2,3), ...;
/// longer cycles follow in ascending length, each on consecutive indices
/// v, v+1, ..., v+k-1 (cyclic order); a fixed point, if any, takes the last
/// index and is substituted by 1.
struct IntegrandSpec {
  int n = 0;
  CycleType cycle_type;
  bool identically_zero = false;      // two or more fixed points
  FactorList factors;                 // empty when identically_zero
  std::vector<std::vector<int>> cycles;  // variable indices of each cycle, in cyclic order
};

IntegrandSpec build_integrand(const CycleType& a);

enum class StrategyChoice { Early, CoefficientWise, Auto };
enum class Route { Direct, Complement, Both };

std::string_view route_name(Route r);

/// One JSON document per cycle type under a directory. Unreadable, corrupt or
/// version-mismatched entries read as misses. Writes go through a temporary
/// file and an atomic rename.
class ResultCache {
public:
  struct Entry {
    CycleType cycle_type;
    BigRational value;
    std::string strategy;
    double elapsed_s = 0;
  };

  explicit ResultCache(std::filesystem::path directory);

  const std::filesystem::path& directory() const { return directory_; }
  std::filesystem::path path_for(const CycleType& a) const;
  static std::string file_name(const CycleType& a);

  std::optional<Entry> load(const CycleType& a) const;
  void store(const Entry& entry) const;

private:
  std::filesystem::path directory_;
};

struct EngineConfig {
  StrategyChoice strategy = StrategyChoice::Auto;
  std::uint64_t term_limit = std::uint64_t{1} << 28;
  int threads = 1;
  const ResultCache* cache = nullptr;
};

struct TypeResult {
  CycleType cycle_type;
  BigRational probability;
  BigInteger count;  // c(a)
  int sign = 1;      // (-1)^e(a)
  int factor_count = 0;
  double elapsed_s = 0;
  std::string strategy;  // "early", "coeffwise", "zero"
  std::uint64_t peak_terms = 0;
  bool cache_hit = false;
  bool in_complement = false;  // belongs to the complement sum
};

/// Exact P(a) with bookkeeping. Consults and updates config.cache.
/// Throws ResourceLimitError (naming the cycle type) if every allowed
/// strategy exceeds the term limit.
TypeResult integral_P(const CycleType& a, const EngineConfig& config = {});

struct ProbabilityResult {
  int n = 0;
  Route route = Route::Direct;
  BigRational value;
  BigRational complement;
  std::vector<TypeResult> per_type;  // direct-sum types first, then complement types, each in enumeration order
};

/// Raised when some integral fails; carries every per-type result that did
/// complete.
class ProbabilityError : public std::runtime_error {
public:
  enum class Kind { ResourceLimit, Contradiction };
  ProbabilityError(Kind kind, const std::string& what, ProbabilityResult partial)
      : std::runtime_error(what), kind_(kind), partial_(std::move(partial)) {}
  Kind kind() const { return kind_; }
  const ProbabilityResult& partial() const { return partial_; }

private:
  Kind kind_;
  ProbabilityResult partial_;
};

/// p_n for even n >= 2: Direct sums over E_n, Complement computes 1 - sum over
/// O_n, Both computes both and requires exact agreement.
ProbabilityResult p_even(int n, Route route, const EngineConfig& config = {});

/// p_n for odd n >= 3: Direct over E^1_n, Complement over O^3_n.
ProbabilityResult p_odd(int n, Route route, const EngineConfig& config = {});

/// Dispatches on the parity of n.
ProbabilityResult probability(int n, Route route, const EngineConfig& config = {});

}  // namespace roommates
