#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "roommates/cycletype.hpp"
#include "roommates/oracle.hpp"
#include "roommates/roommates.h"
#include "roommates/stability.hpp"

using namespace roommates;

struct rm_engine {
  EngineConfig config;
  std::optional<ResultCache> cache;
  int max_n = 12;
};

struct rm_report {
  struct Row {
    std::string cycle_type, probability, count, strategy;
    TypeResult source;
  };
  int n = 0;
  std::string value;
  std::string complement;
  std::vector<Row> rows;
};

struct rm_type_list {
  struct Entry {
    std::string cycle_type, count;
    int e, f;
  };
  std::vector<Entry> entries;
  std::uint64_t predicted = 0;
};

namespace {

thread_local std::string last_error;

rm_status fail(rm_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
rm_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const ResourceLimitError& e) {
    return fail(RM_ERR_RESOURCE_LIMIT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(RM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(RM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(RM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RM_ERR_RESOURCE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(RM_ERR_INTERNAL, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::unique_ptr<rm_report> make_report(const ProbabilityResult& r, bool with_totals) {
  auto report = std::make_unique<rm_report>();
  report->n = r.n;
  if (with_totals) {
    report->value = r.value.to_string();
    report->complement = r.complement.to_string();
  }
  for (const TypeResult& t : r.per_type)
    report->rows.push_back({t.cycle_type.to_string(), t.probability.to_string(), t.count.get_str(), t.strategy, t});
  return report;
}

Route to_route(rm_route r) {
  switch (r) {
    case RM_ROUTE_DIRECT: return Route::Direct;
    case RM_ROUTE_COMPLEMENT: return Route::Complement;
    case RM_ROUTE_BOTH: return Route::Both;
  }
  throw std::invalid_argument("unknown route");
}

}  // namespace

extern "C" {

const char* rm_version(void) { return kEngineVersion; }
const char* rm_last_error(void) { return last_error.c_str(); }
void rm_string_free(char* s) { std::free(s); }

rm_status rm_engine_create(rm_engine** out) {
  return guarded([&] {
    if (!out) return fail(RM_ERR_INVALID_ARGUMENT, "null output pointer");
    *out = new rm_engine();
    return RM_OK;
  });
}

void rm_engine_destroy(rm_engine* engine) { delete engine; }

rm_status rm_engine_set_threads(rm_engine* engine, int threads) {
  if (!engine || threads < 1) return fail(RM_ERR_INVALID_ARGUMENT, "threads must be >= 1");
  engine->config.threads = threads;
  return RM_OK;
}

rm_status rm_engine_set_strategy(rm_engine* engine, rm_strategy strategy) {
  if (!engine) return fail(RM_ERR_INVALID_ARGUMENT, "null engine");
  switch (strategy) {
    case RM_STRATEGY_EARLY: engine->config.strategy = StrategyChoice::Early; return RM_OK;
    case RM_STRATEGY_COEFFWISE: engine->config.strategy = StrategyChoice::CoefficientWise; return RM_OK;
    case RM_STRATEGY_AUTO: engine->config.strategy = StrategyChoice::Auto; return RM_OK;
  }
  return fail(RM_ERR_INVALID_ARGUMENT, "unknown strategy");
}

rm_status rm_engine_set_term_limit(rm_engine* engine, uint64_t max_terms) {
  if (!engine || max_terms == 0) return fail(RM_ERR_INVALID_ARGUMENT, "term limit must be positive");
  engine->config.term_limit = max_terms;
  return RM_OK;
}

rm_status rm_engine_set_cache_dir(rm_engine* engine, const char* directory) {
  return guarded([&] {
    if (!engine) return fail(RM_ERR_INVALID_ARGUMENT, "null engine");
    if (!directory || !*directory) {
      engine->cache.reset();
    } else {
      engine->cache.emplace(directory);
    }
    engine->config.cache = engine->cache ? &*engine->cache : nullptr;
    return RM_OK;
  });
}

rm_status rm_engine_set_max_n(rm_engine* engine, int max_n) {
  if (!engine || max_n < 2 || max_n > Monomial::kMaxVars)
    return fail(RM_ERR_INVALID_ARGUMENT, "max n must lie in [2, " + std::to_string(Monomial::kMaxVars) + "]");
  engine->max_n = max_n;
  return RM_OK;
}

rm_status rm_compute_probability(rm_engine* engine, int n, rm_route route, rm_report** out) {
  return guarded([&] {
    if (!engine || !out) return fail(RM_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    if (n < 2 || n > engine->max_n)
      return fail(RM_ERR_INVALID_ARGUMENT,
                  "n must lie in [2, " + std::to_string(engine->max_n) + "], got " + std::to_string(n));
    try {
      *out = make_report(probability(n, to_route(route), engine->config), true).release();
      return RM_OK;
    } catch (const ProbabilityError& e) {
      *out = make_report(e.partial(), false).release();
      return fail(e.kind() == ProbabilityError::Kind::ResourceLimit ? RM_ERR_RESOURCE_LIMIT : RM_ERR_CONTRADICTION,
                  e.what());
    }
  });
}

rm_status rm_compute_integral(rm_engine* engine, const char* cycle_type, rm_report** out) {
  return guarded([&] {
    if (!engine || !out || !cycle_type) return fail(RM_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    const CycleType a = CycleType::parse(cycle_type);
    if (a.n() > Monomial::kMaxVars)
      return fail(RM_ERR_INVALID_ARGUMENT, "cycle types above size " + std::to_string(Monomial::kMaxVars) +
                                               " are not supported");
    ProbabilityResult single;
    single.n = a.n();
    single.per_type.push_back(integral_P(a, engine->config));
    single.value = single.per_type.front().probability;
    single.complement = BigRational(1) - single.value;
    *out = make_report(single, true).release();
    return RM_OK;
  });
}

void rm_report_destroy(rm_report* report) { delete report; }
int rm_report_n(const rm_report* report) { return report ? report->n : 0; }
const char* rm_report_value(const rm_report* report) { return report ? report->value.c_str() : ""; }
const char* rm_report_complement(const rm_report* report) { return report ? report->complement.c_str() : ""; }
size_t rm_report_row_count(const rm_report* report) { return report ? report->rows.size() : 0; }

rm_status rm_report_get_row(const rm_report* report, size_t index, rm_report_row* out) {
  if (!report || !out || index >= report->rows.size()) return fail(RM_ERR_INVALID_ARGUMENT, "row index out of range");
  const auto& row = report->rows[index];
  out->cycle_type = row.cycle_type.c_str();
  out->probability = row.probability.c_str();
  out->count = row.count.c_str();
  out->sign = row.source.sign;
  out->factor_count = row.source.factor_count;
  out->elapsed_s = row.source.elapsed_s;
  out->strategy = row.strategy.c_str();
  out->peak_terms = row.source.peak_terms;
  out->cache_hit = row.source.cache_hit ? 1 : 0;
  out->in_complement = row.source.in_complement ? 1 : 0;
  return RM_OK;
}

rm_status rm_enumerate(int n, rm_family family, rm_type_list** out) {
  return guarded([&] {
    if (!out) return fail(RM_ERR_INVALID_ARGUMENT, "null output pointer");
    *out = nullptr;
    if (n < 1) return fail(RM_ERR_INVALID_ARGUMENT, "n must be positive");
    auto list = std::make_unique<rm_type_list>();
    std::vector<CycleType> types;
    if (family == RM_FAMILY_ALL) {
      types = enumerate_partitions(n);
      list->predicted = partition_number(n);
    } else {
      CycleFamily f{};
      switch (family) {
        case RM_FAMILY_EVEN: f = CycleFamily::EvenOnly; break;
        case RM_FAMILY_ODD: f = CycleFamily::OddWitness; break;
        case RM_FAMILY_FIXED_EVEN: f = CycleFamily::OneFixedEven; break;
        case RM_FAMILY_ODD3: f = CycleFamily::OddCycleAtLeast3; break;
        default: return fail(RM_ERR_INVALID_ARGUMENT, "unknown family");
      }
      types = family_members(n, f);
      list->predicted = predicted_family_size(n, f);
    }
    for (const auto& a : types)
      list->entries.push_back({a.to_string(), count_permutations(a).get_str(), even_cycle_sign_exponent(a), factor_count(a)});
    *out = list.release();
    return RM_OK;
  });
}

void rm_type_list_destroy(rm_type_list* list) { delete list; }
size_t rm_type_list_size(const rm_type_list* list) { return list ? list->entries.size() : 0; }
uint64_t rm_type_list_predicted_size(const rm_type_list* list) { return list ? list->predicted : 0; }
uint64_t rm_partition_number(int n) { return partition_number(n); }

rm_status rm_type_list_entry(const rm_type_list* list, size_t index, rm_type_entry* out) {
  if (!list || !out || index >= list->entries.size()) return fail(RM_ERR_INVALID_ARGUMENT, "entry index out of range");
  const auto& e = list->entries[index];
  out->cycle_type = e.cycle_type.c_str();
  out->count = e.count.c_str();
  out->sign_exponent = e.e;
  out->factor_count = e.f;
  return RM_OK;
}

rm_status rm_exhaustive_probability(int n, char** fraction_out) {
  return guarded([&] {
    if (!fraction_out) return fail(RM_ERR_INVALID_ARGUMENT, "null output pointer");
    *fraction_out = duplicate(exhaustive_p(n).to_string());
    return RM_OK;
  });
}

rm_status rm_mc_estimate(int n, uint64_t samples, uint64_t seed, int threads, rm_mc_result* out) {
  return guarded([&] {
    if (!out) return fail(RM_ERR_INVALID_ARGUMENT, "null output pointer");
    if (threads < 1) return fail(RM_ERR_INVALID_ARGUMENT, "threads must be >= 1");
    const McEstimate m = mc_estimate(n, samples, seed, threads);
    *out = {m.estimate, m.stderr_, m.successes, m.samples};
    return RM_OK;
  });
}

rm_status rm_table_is_solvable(const char* table_text, int* solvable) {
  return guarded([&] {
    if (!table_text || !solvable) return fail(RM_ERR_INVALID_ARGUMENT, "null argument");
    *solvable = is_solvable(PreferenceTable::parse(table_text)) ? 1 : 0;
    return RM_OK;
  });
}

rm_status rm_fraction_to_decimal(const char* fraction, int digits, char** out) {
  return guarded([&] {
    if (!fraction || !out) return fail(RM_ERR_INVALID_ARGUMENT, "null argument");
    if (digits < 1) return fail(RM_ERR_INVALID_ARGUMENT, "digits must be >= 1");
    *out = duplicate(BigRational::parse(fraction).to_decimal(digits));
    return RM_OK;
  });
}

rm_status rm_fraction_to_double(const char* fraction, double* out) {
  return guarded([&] {
    if (!fraction || !out) return fail(RM_ERR_INVALID_ARGUMENT, "null argument");
    *out = BigRational::parse(fraction).to_double();
    return RM_OK;
  });
}

}  // extern "C"
