#include "roommates/stability.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <set>
#include <thread>

namespace roommates {

std::string_view route_name(Route r) {
  switch (r) {
    case Route::Direct: return "direct";
    case Route::Complement: return "complement";
    case Route::Both: return "both";
  }
  return "?";
}

IntegrandSpec build_integrand(const CycleType& a) {
  IntegrandSpec spec;
  spec.n = a.n();
  spec.cycle_type = a;

  int next = 0;
  auto place = [&](int length) {
    std::vector<int> cycle(static_cast<size_t>(length));
    for (int t = 0; t < length; ++t) cycle[static_cast<size_t>(t)] = next++;
    spec.cycles.push_back(std::move(cycle));
  };
  for (int m = 0; m < a.multiplicity(2); ++m) place(2);
  for (const auto& part : a.parts())
    if (part.length >= 3)
      for (int m = 0; m < part.multiplicity; ++m) place(part.length);
  for (int m = 0; m < a.multiplicity(1); ++m) place(1);

  if (a.multiplicity(1) >= 2) {
    spec.identically_zero = true;
    return spec;
  }

  const int n = spec.n;
  std::set<std::pair<int, int>> neighbours;
  int fixed = -1;
  FactorList& f = spec.factors;
  f.varcount = n;
  for (const auto& cycle : spec.cycles) {
    const size_t k = cycle.size();
    if (k == 1) {
      fixed = cycle[0];
      continue;
    }
    for (size_t t = 0; t < k; ++t) {
      const int u = cycle[t], v = cycle[(t + 1) % k];
      neighbours.insert({std::min(u, v), std::max(u, v)});
    }
    if (k >= 3) f.linear_vars.insert(f.linear_vars.end(), cycle.begin(), cycle.end());
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (neighbours.count({i, j})) continue;
      if (j == fixed) f.unary_factors.push_back(i);
      else if (i == fixed) f.unary_factors.push_back(j);
      else f.bilinear_pairs.emplace_back(i, j);
    }
  }
  if (fixed >= 0) f.unit_substitutions.push_back(fixed);
  f.normalize();
  return spec;
}

TypeResult integral_P(const CycleType& a, const EngineConfig& config) {
  TypeResult r;
  r.cycle_type = a;
  r.count = count_permutations(a);
  r.sign = even_cycle_sign_exponent(a) % 2 == 0 ? 1 : -1;
  r.factor_count = factor_count(a);

  if (a.multiplicity(1) >= 2) {
    r.strategy = "zero";
    return r;
  }
  if (config.cache) {
    if (auto hit = config.cache->load(a)) {
      r.probability = hit->value;
      r.strategy = hit->strategy;
      r.elapsed_s = hit->elapsed_s;
      r.cache_hit = true;
      return r;
    }
  }

  const IntegrandSpec spec = build_integrand(a);
  IntegrationOptions options;
  options.term_limit = config.term_limit;
  options.label = a.to_string();

  const auto start = std::chrono::steady_clock::now();
  auto run = [&](Strategy s) {
    IntegrationResult res = evaluate_integral(spec.factors, s, options);
    r.probability = std::move(res.value);
    r.peak_terms = res.peak_terms;
    r.strategy = std::string(strategy_name(s));
  };
  switch (config.strategy) {
    case StrategyChoice::Early: run(Strategy::EarlyElimination); break;
    case StrategyChoice::CoefficientWise: run(Strategy::CoefficientWise); break;
    case StrategyChoice::Auto:
      try {
        run(Strategy::EarlyElimination);
      } catch (const ResourceLimitError&) {
        run(Strategy::CoefficientWise);
      }
      break;
  }
  r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (config.cache) config.cache->store({a, r.probability, r.strategy, r.elapsed_s});
  return r;
}

namespace {

// Runs integral_P over `types` on config.threads workers. Results keep the
// input order; failures are reported per slot.
std::vector<std::optional<TypeResult>> run_integrals(const std::vector<CycleType>& types, const EngineConfig& config,
                                                     std::exception_ptr& first_error) {
  std::vector<std::optional<TypeResult>> out(types.size());
  std::vector<std::exception_ptr> errors(types.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (size_t i = cursor++; i < types.size(); i = cursor++) {
      try {
        out[i] = integral_P(types[i], config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(config.threads, static_cast<int>(types.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e && !first_error) first_error = e;
  return out;
}

ProbabilityResult assemble(int n, Route route, CycleFamily direct_family, CycleFamily complement_family,
                           const EngineConfig& config) {
  ProbabilityResult result;
  result.n = n;
  result.route = route;

  std::vector<CycleType> types;
  size_t direct_count = 0;
  if (route != Route::Complement) {
    types = family_members(n, direct_family);
    direct_count = types.size();
  }
  if (route != Route::Direct) {
    for (auto& a : family_members(n, complement_family)) types.push_back(std::move(a));
  }

  std::exception_ptr error;
  auto computed = run_integrals(types, config, error);

  BigRational direct_sum, complement_sum;
  for (size_t i = 0; i < computed.size(); ++i) {
    if (!computed[i]) continue;
    TypeResult& r = *computed[i];
    r.in_complement = i >= direct_count;
    const BigRational term = BigRational(BigInteger(r.count * r.sign)) * r.probability;
    (r.in_complement ? complement_sum : direct_sum) += term;
    result.per_type.push_back(std::move(r));
  }

  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const ResourceLimitError& e) {
      throw ProbabilityError(ProbabilityError::Kind::ResourceLimit, e.what(), std::move(result));
    }
  }

  switch (route) {
    case Route::Direct:
      result.value = direct_sum;
      result.complement = BigRational(1) - direct_sum;
      break;
    case Route::Complement:
      result.complement = complement_sum;
      result.value = BigRational(1) - complement_sum;
      break;
    case Route::Both:
      result.value = direct_sum;
      result.complement = complement_sum;
      if (direct_sum + complement_sum != BigRational(1)) {
        const std::string msg = "direct route gives p_" + std::to_string(n) + " = " + direct_sum.to_string() +
                                " but complement route gives " + (BigRational(1) - complement_sum).to_string();
        throw ProbabilityError(ProbabilityError::Kind::Contradiction, msg, std::move(result));
      }
      break;
  }
  return result;
}

}  // namespace

ProbabilityResult p_even(int n, Route route, const EngineConfig& config) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("p_even needs an even n >= 2, got " + std::to_string(n));
  return assemble(n, route, CycleFamily::EvenOnly, CycleFamily::OddWitness, config);
}

ProbabilityResult p_odd(int n, Route route, const EngineConfig& config) {
  if (n < 3 || n % 2 != 1) throw std::invalid_argument("p_odd needs an odd n >= 3, got " + std::to_string(n));
  return assemble(n, route, CycleFamily::OneFixedEven, CycleFamily::OddCycleAtLeast3, config);
}

ProbabilityResult probability(int n, Route route, const EngineConfig& config) {
  return n % 2 == 0 ? p_even(n, route, config) : p_odd(n, route, config);
}

}  // namespace roommates
