// Exact unit-cube integration of factorised stability integrands.
//
// The working polynomial keeps integer coefficients over one shared
// denominator. Terms live in a vector sorted by packed exponent key, so
// multiplying by (1 - x_i x_j) is a linear merge of the list with a shifted
// copy of itself (adding a constant to every key preserves the order).
// Integrating x_v scales coefficients by lcm/(b+1), re-sorts on the key with
// slot v cleared and folds equal keys.

#include <algorithm>
#include <array>
#include <numeric>

#include "roommates/polyint.hpp"

namespace roommates {

namespace {

struct Factor {
  int a;
  int b;  // -1 for a unary factor (1 - x_a)
};

std::uint64_t unit_key(int var) { return std::uint64_t{1} << (4 * var); }

std::uint64_t factor_delta(const Factor& f) { return unit_key(f.a) + (f.b >= 0 ? unit_key(f.b) : 0); }

struct Term {
  std::uint64_t key;
  mpz_class coeff;
};

class ScaledPoly {
public:
  std::vector<Term> terms;  // sorted by key, no zero coefficients
  mpz_class denom = 1;

  void multiply_penalty(std::uint64_t delta) {
    const size_t n = terms.size();
    std::vector<Term> out;
    out.reserve(2 * n);
    size_t a = 0, b = 0;
    // Term a is read before term b of the same index, so a copies and b moves.
    while (b < n) {
      const std::uint64_t shifted = terms[b].key + delta;
      if (a < n && terms[a].key < shifted) {
        out.push_back({terms[a].key, terms[a].coeff});
        ++a;
      } else if (a >= n || terms[a].key > shifted) {
        Term t{shifted, std::move(terms[b].coeff)};
        mpz_neg(t.coeff.get_mpz_t(), t.coeff.get_mpz_t());
        out.push_back(std::move(t));
        ++b;
      } else {
        mpz_class diff = terms[a].coeff - terms[b].coeff;
        if (sgn(diff) != 0) out.push_back({shifted, std::move(diff)});
        ++a;
        ++b;
      }
    }
    terms = std::move(out);
  }

  void integrate(int var) {
    const int shift = 4 * var;
    unsigned present = 0;
    for (const Term& t : terms) present |= 1U << ((t.key >> shift) & 0xF);
    unsigned long lcm = 1;
    for (unsigned b = 0; b <= 15; ++b)
      if (present & (1U << b)) lcm = std::lcm(lcm, static_cast<unsigned long>(b + 1));
    std::array<unsigned long, 16> scale{};
    for (unsigned b = 0; b <= 15; ++b) scale[b] = lcm / (b + 1);

    const std::uint64_t clear = ~(std::uint64_t{0xF} << shift);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> order(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) order[i] = {terms[i].key & clear, static_cast<std::uint32_t>(i)};
    std::sort(order.begin(), order.end());

    std::vector<Term> out;
    out.reserve(order.size());
    for (size_t i = 0; i < order.size();) {
      const std::uint64_t key = order[i].first;
      mpz_class acc = 0;
      for (; i < order.size() && order[i].first == key; ++i) {
        const Term& t = terms[order[i].second];
        mpz_addmul_ui(acc.get_mpz_t(), t.coeff.get_mpz_t(), scale[(t.key >> shift) & 0xF]);
      }
      if (sgn(acc) != 0) out.push_back({key, std::move(acc)});
    }
    terms = std::move(out);
    denom *= lcm;
    reduce();
  }

  BigRational value() const {
    if (terms.empty()) return BigRational(0);
    return BigRational(terms.front().coeff, denom);
  }

private:
  void reduce() {
    mpz_class g = denom;
    for (const Term& t : terms) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
      if (g == 1) return;
    }
    for (Term& t : terms) mpz_divexact(t.coeff.get_mpz_t(), t.coeff.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(denom.get_mpz_t(), denom.get_mpz_t(), g.get_mpz_t());
  }
};

std::vector<int> greedy_order(const std::vector<int>& live, const std::vector<Factor>& factors) {
  std::vector<int> pending(Monomial::kMaxVars, 0);
  std::vector<std::vector<size_t>> touching(Monomial::kMaxVars);
  for (size_t i = 0; i < factors.size(); ++i) {
    ++pending[factors[i].a];
    touching[factors[i].a].push_back(i);
    if (factors[i].b >= 0) {
      ++pending[factors[i].b];
      touching[factors[i].b].push_back(i);
    }
  }
  std::vector<bool> multiplied(factors.size(), false);
  std::vector<int> remaining = live;
  std::vector<int> order;
  while (!remaining.empty()) {
    auto best = std::min_element(remaining.begin(), remaining.end(), [&](int x, int y) {
      return pending[x] != pending[y] ? pending[x] < pending[y] : x < y;
    });
    const int v = *best;
    remaining.erase(best);
    order.push_back(v);
    for (size_t i : touching[v]) {
      if (multiplied[i]) continue;
      multiplied[i] = true;
      --pending[factors[i].a];
      if (factors[i].b >= 0) --pending[factors[i].b];
    }
  }
  return order;
}

std::vector<Factor> penalty_factors(const FactorList& f) {
  std::vector<Factor> out;
  for (auto [i, j] : f.bilinear_pairs) out.push_back({i, j});
  for (int u : f.unary_factors) out.push_back({u, -1});
  return out;
}

struct Run {
  Strategy strategy;
  const IntegrationOptions& options;
  std::uint64_t peak = 0;

  void observe(size_t terms) {
    peak = std::max<std::uint64_t>(peak, terms);
    if (terms > options.term_limit) throw ResourceLimitError(options.label, strategy, terms, options.term_limit);
  }

  BigRational eliminate(ScaledPoly poly, const std::vector<int>& live, const std::vector<Factor>& factors) {
    std::vector<int> order;
    if (options.order == OrderRule::Greedy) {
      order = greedy_order(live, factors);
    } else {
      order = live;
      std::sort(order.rbegin(), order.rend());
    }
    std::vector<std::vector<size_t>> touching(Monomial::kMaxVars);
    for (size_t i = 0; i < factors.size(); ++i) {
      touching[factors[i].a].push_back(i);
      if (factors[i].b >= 0) touching[factors[i].b].push_back(i);
    }
    std::vector<bool> multiplied(factors.size(), false);
    observe(poly.terms.size());
    for (int v : order) {
      for (size_t i : touching[v]) {
        if (multiplied[i]) continue;
        multiplied[i] = true;
        poly.multiply_penalty(factor_delta(factors[i]));
        observe(poly.terms.size());
      }
      poly.integrate(v);
      if (poly.terms.empty()) return BigRational(0);
    }
    return poly.value();
  }
};

std::uint64_t linear_key(const FactorList& f, int skip) {
  std::uint64_t key = 0;
  for (int l : f.linear_vars)
    if (l != skip) key += unit_key(l);
  return key;
}

BigRational early_elimination(const FactorList& f, Run& run) {
  ScaledPoly start;
  start.terms.push_back({linear_key(f, -1), mpz_class(1)});
  return run.eliminate(std::move(start), f.live_variables(), penalty_factors(f));
}

void subsets_of_size(const std::vector<int>& vars, size_t k, size_t from, std::uint64_t key,
                     std::vector<std::uint64_t>& out) {
  if (k == 0) {
    out.push_back(key);
    return;
  }
  for (size_t i = from; i + k <= vars.size(); ++i) subsets_of_size(vars, k - 1, i + 1, key + unit_key(vars[i]), out);
}

// Expands the integrand in powers of the pivot variable p:
//   prod_{j in N} (1 - x_p x_j) [(1 - x_p)] x_p^l = sum_k (-1)^k e_k(y) x_p^(k+l)
// where y = {x_j : j in N} plus a constant 1 for a unary factor on p. Each
// coefficient is integrated separately against the remaining factors.
BigRational coefficient_wise(const FactorList& f, Run& run) {
  std::vector<int> live = f.live_variables();
  if (live.empty()) return BigRational(1);
  const int pivot = live.back();
  live.pop_back();

  std::vector<int> neighbours;
  std::vector<Factor> rest;
  for (auto [i, j] : f.bilinear_pairs) {
    if (i == pivot) neighbours.push_back(j);
    else if (j == pivot) neighbours.push_back(i);
    else rest.push_back({i, j});
  }
  bool unary_on_pivot = false;
  for (int u : f.unary_factors) {
    if (u == pivot) unary_on_pivot = true;
    else rest.push_back({u, -1});
  }
  const bool linear_pivot = std::find(f.linear_vars.begin(), f.linear_vars.end(), pivot) != f.linear_vars.end();
  const std::uint64_t lead = linear_key(f, pivot);

  BigRational total;
  const size_t max_k = neighbours.size() + (unary_on_pivot ? 1 : 0);
  for (size_t k = 0; k <= max_k; ++k) {
    std::vector<std::uint64_t> keys;
    if (k <= neighbours.size()) subsets_of_size(neighbours, k, 0, lead, keys);
    if (unary_on_pivot && k >= 1) subsets_of_size(neighbours, k - 1, 0, lead, keys);
    std::sort(keys.begin(), keys.end());
    ScaledPoly start;
    start.terms.reserve(keys.size());
    for (std::uint64_t key : keys) start.terms.push_back({key, mpz_class(1)});

    const BigRational part = run.eliminate(std::move(start), live, rest);
    const long weight_den = static_cast<long>(k) + (linear_pivot ? 1 : 0) + 1;
    BigRational weight(BigInteger(k % 2 == 0 ? 1 : -1), BigInteger(weight_den));
    total += weight * part;
  }
  return total;
}

}  // namespace

std::string_view strategy_name(Strategy s) { return s == Strategy::EarlyElimination ? "early" : "coeffwise"; }

ResourceLimitError::ResourceLimitError(std::string label, Strategy strategy, std::uint64_t terms, std::uint64_t limit)
    : std::runtime_error("integrand " + (label.empty() ? std::string("<unnamed>") : "[" + label + "]") + " reached " +
                         std::to_string(terms) + " live terms, above the limit of " + std::to_string(limit) +
                         " (strategy " + std::string(strategy_name(strategy)) + ")"),
      label_(std::move(label)),
      strategy_(strategy) {}

std::vector<int> elimination_order(const FactorList& f) { return greedy_order(f.live_variables(), penalty_factors(f)); }

std::vector<int> baseline_order(const FactorList& f) {
  std::vector<int> order = f.live_variables();
  std::sort(order.rbegin(), order.rend());
  return order;
}

IntegrationResult evaluate_integral(const FactorList& f, Strategy strategy, const IntegrationOptions& options) {
  FactorList normalized = f;
  normalized.normalize();
  std::array<int, Monomial::kMaxVars> degree{};
  for (auto [i, j] : normalized.bilinear_pairs) ++degree[i], ++degree[j];
  for (int u : normalized.unary_factors) ++degree[u];
  for (int l : normalized.linear_vars) ++degree[l];
  for (int d : degree)
    if (d > Monomial::kMaxExponent) throw std::invalid_argument("variable degree exceeds packed exponent range");
  Run run{strategy, options};
  IntegrationResult result;
  result.value = strategy == Strategy::EarlyElimination ? early_elimination(normalized, run)
                                                         : coefficient_wise(normalized, run);
  result.peak_terms = run.peak;
  return result;
}

}  // namespace roommates
