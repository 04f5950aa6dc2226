// roommates: command-line front end over the C API.
//
//   roommates exact     --n 8 [--route both]
//   roommates integral  --type "2^1,4^1"
//   roommates enumerate --n 12 --family even
//   roommates verify    --n 4 --mode exhaustive
//   roommates mc        --n 6 --samples 1000000 --seed 1
//
// Exit codes: 0 success, 1 other failure, 2 usage, 3 resource limit,
// 4 verification contradiction.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roommates/roommates.h"

namespace {

using nlohmann::ordered_json;

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kResource = 3, kContradiction = 4 };

struct RunConfig {
  int n = 0;
  std::string route = "direct";
  std::string strategy = "auto";
  int threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  std::string cache_dir;
  bool no_cache = false;
  std::uint64_t term_limit = std::uint64_t{1} << 28;
  int decimals = 20;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  std::string format = "text";
  bool allow_large_n = false;
  std::string type;
  std::string family = "all";
  std::string mode;
  double sigma = 4.0;
};

int exit_for(rm_status s) {
  switch (s) {
    case RM_OK: return kOk;
    case RM_ERR_INVALID_ARGUMENT: return kUsage;
    case RM_ERR_RESOURCE_LIMIT: return kResource;
    case RM_ERR_CONTRADICTION: return kContradiction;
    default: return kFailure;
  }
}

int report_error(rm_status s) {
  std::cerr << "error: " << rm_last_error() << '\n';
  return exit_for(s);
}

struct Engine {
  rm_engine* handle = nullptr;
  ~Engine() { rm_engine_destroy(handle); }
};
struct Report {
  rm_report* handle = nullptr;
  ~Report() { rm_report_destroy(handle); }
};
struct TypeList {
  rm_type_list* handle = nullptr;
  ~TypeList() { rm_type_list_destroy(handle); }
};

std::string take_string(char* s) {
  std::string out = s ? s : "";
  rm_string_free(s);
  return out;
}

std::string decimal(const std::string& fraction, int digits) {
  char* out = nullptr;
  if (rm_fraction_to_decimal(fraction.c_str(), digits, &out) != RM_OK) return "?";
  return take_string(out);
}

double to_double(const std::string& fraction) {
  double d = 0;
  rm_fraction_to_double(fraction.c_str(), &d);
  return d;
}

std::string default_cache_dir() {
  if (const char* env = std::getenv("ROOMMATES_CACHE_DIR")) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::string(xdg) + "/roommates";
  if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/roommates";
  return "";
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

rm_status configure(const RunConfig& cfg, Engine& engine) {
  rm_status s = rm_engine_create(&engine.handle);
  if (s != RM_OK) return s;
  if ((s = rm_engine_set_threads(engine.handle, cfg.threads)) != RM_OK) return s;
  const rm_strategy strategy = cfg.strategy == "early"       ? RM_STRATEGY_EARLY
                               : cfg.strategy == "coeffwise" ? RM_STRATEGY_COEFFWISE
                                                             : RM_STRATEGY_AUTO;
  if ((s = rm_engine_set_strategy(engine.handle, strategy)) != RM_OK) return s;
  if ((s = rm_engine_set_term_limit(engine.handle, cfg.term_limit)) != RM_OK) return s;
  const std::string dir = cfg.no_cache ? "" : (cfg.cache_dir.empty() ? default_cache_dir() : cfg.cache_dir);
  if ((s = rm_engine_set_cache_dir(engine.handle, dir.c_str())) != RM_OK) return s;
  if (cfg.allow_large_n && (s = rm_engine_set_max_n(engine.handle, 16)) != RM_OK) return s;
  return RM_OK;
}

std::vector<rm_report_row> rows_of(const rm_report* report) {
  std::vector<rm_report_row> rows(rm_report_row_count(report));
  for (size_t i = 0; i < rows.size(); ++i) rm_report_get_row(report, i, &rows[i]);
  return rows;
}

ordered_json fraction_json(const std::string& fraction, int digits) {
  return {{"fraction", fraction}, {"decimal", decimal(fraction, digits)}};
}

ordered_json per_type_json(const std::vector<rm_report_row>& rows, int digits) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    out.push_back({{"type", r.cycle_type},
                   {"P", fraction_json(r.probability, digits)},
                   {"c", r.count},
                   {"sign", r.sign},
                   {"f", r.factor_count},
                   {"elapsed_s", r.elapsed_s},
                   {"strategy", r.strategy},
                   {"sum", r.in_complement ? "complement" : "direct"}});
  }
  return out;
}

ordered_json volatile_json(const std::vector<rm_report_row>& rows, const std::string& started, double total) {
  ordered_json per = ordered_json::array();
  for (const auto& r : rows)
    per.push_back({{"type", r.cycle_type}, {"cache_hit", r.cache_hit != 0}, {"peak_terms", r.peak_terms}});
  return {{"timestamps", {{"started", started}, {"finished", utc_now()}}}, {"total_elapsed_s", total}, {"per_type", per}};
}

void print_csv(const std::vector<rm_report_row>& rows, int digits) {
  std::cout << "type,P,decimal,c,sign,f,elapsed_s,strategy,sum\n";
  for (const auto& r : rows) {
    std::cout << '"' << r.cycle_type << "\"," << r.probability << ',' << decimal(r.probability, digits) << ','
              << r.count << ',' << r.sign << ',' << r.factor_count << ',' << r.elapsed_s << ',' << r.strategy << ','
              << (r.in_complement ? "complement" : "direct") << '\n';
  }
}

void print_table(const std::vector<rm_report_row>& rows, int digits) {
  std::cout << std::left << std::setw(18) << "type" << std::setw(digits + 6) << "P(a)" << std::right << std::setw(14)
            << "c(a)" << std::setw(6) << "sign" << std::setw(6) << "f(a)" << "  " << std::left << std::setw(10)
            << "strategy" << std::setw(12) << "elapsed_s" << "sum\n";
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(18) << ("[" + std::string(r.cycle_type) + "]") << std::setw(digits + 6)
              << decimal(r.probability, digits) << std::right << std::setw(14) << r.count << std::setw(6)
              << (r.sign > 0 ? "+" : "-") << std::setw(6) << r.factor_count << "  " << std::left << std::setw(10)
              << r.strategy << std::setw(12) << std::fixed << std::setprecision(4) << r.elapsed_s
              << std::defaultfloat << (r.in_complement ? "complement" : "direct") << '\n';
  }
  std::cout << "exact values:\n";
  for (const auto& r : rows) std::cout << "  P([" << r.cycle_type << "]) = " << r.probability << '\n';
}

int cmd_exact(const RunConfig& cfg) {
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  Engine engine;
  if (rm_status s = configure(cfg, engine); s != RM_OK) return report_error(s);
  const rm_route route = cfg.route == "both" ? RM_ROUTE_BOTH : cfg.route == "complement" ? RM_ROUTE_COMPLEMENT
                                                                                          : RM_ROUTE_DIRECT;
  Report report;
  const rm_status status = rm_compute_probability(engine.handle, cfg.n, route, &report.handle);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (status != RM_OK && !report.handle) return report_error(status);
  const auto rows = rows_of(report.handle);
  const std::string value = rm_report_value(report.handle);
  const std::string complement = rm_report_complement(report.handle);

  if (cfg.format == "json") {
    ordered_json doc = {{"command", "exact"}, {"n", cfg.n}, {"route", cfg.route}};
    if (status == RM_OK) {
      doc["value"] = fraction_json(value, cfg.decimals);
      doc["complement"] = fraction_json(complement, cfg.decimals);
    } else {
      doc["error"] = rm_last_error();
    }
    doc["per_type"] = per_type_json(rows, cfg.decimals);
    doc["volatile"] = volatile_json(rows, started, total);
    std::cout << doc.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    print_csv(rows, cfg.decimals);
  } else {
    if (status == RM_OK) {
      std::cout << "p_" << cfg.n << " = " << value << '\n'
                << "    = " << decimal(value, cfg.decimals) << '\n'
                << "1 - p_" << cfg.n << " = " << complement << '\n'
                << "route: " << cfg.route << (route == RM_ROUTE_BOTH ? " (direct and complement sums agree)" : "")
                << "\n\n";
    } else {
      std::cout << "p_" << cfg.n << ": incomplete, partial table follows\n\n";
    }
    print_table(rows, cfg.decimals);
    std::cout << "total elapsed: " << std::fixed << std::setprecision(3) << total << " s\n";
  }
  return status == RM_OK ? kOk : report_error(status);
}

int cmd_integral(const RunConfig& cfg) {
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  Engine engine;
  if (rm_status s = configure(cfg, engine); s != RM_OK) return report_error(s);
  Report report;
  if (rm_status s = rm_compute_integral(engine.handle, cfg.type.c_str(), &report.handle); s != RM_OK)
    return report_error(s);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto rows = rows_of(report.handle);
  const rm_report_row& r = rows.front();

  if (cfg.format == "json") {
    ordered_json doc = {{"command", "integral"}, {"n", rm_report_n(report.handle)}};
    doc["value"] = fraction_json(r.probability, cfg.decimals);
    doc["per_type"] = per_type_json(rows, cfg.decimals);
    doc["volatile"] = volatile_json(rows, started, total);
    std::cout << doc.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    print_csv(rows, cfg.decimals);
  } else {
    std::cout << "P([" << r.cycle_type << "]) = " << r.probability << '\n'
              << "    = " << decimal(r.probability, cfg.decimals) << '\n'
              << "n = " << rm_report_n(report.handle) << ", f(a) = " << r.factor_count << ", c(a) = " << r.count
              << '\n'
              << "strategy: " << r.strategy << (r.cache_hit ? " (cached)" : "") << ", elapsed " << std::fixed
              << std::setprecision(4) << r.elapsed_s << " s\n";
  }
  return kOk;
}

int cmd_enumerate(const RunConfig& cfg) {
  const rm_family family = cfg.family == "even"         ? RM_FAMILY_EVEN
                           : cfg.family == "odd"        ? RM_FAMILY_ODD
                           : cfg.family == "fixed-even" ? RM_FAMILY_FIXED_EVEN
                           : cfg.family == "odd3"       ? RM_FAMILY_ODD3
                                                        : RM_FAMILY_ALL;
  TypeList list;
  if (rm_status s = rm_enumerate(cfg.n, family, &list.handle); s != RM_OK) return report_error(s);
  const size_t size = rm_type_list_size(list.handle);
  const std::uint64_t predicted = rm_type_list_predicted_size(list.handle);
  std::vector<rm_type_entry> entries(size);
  for (size_t i = 0; i < size; ++i) rm_type_list_entry(list.handle, i, &entries[i]);

  if (cfg.format == "json") {
    ordered_json types = ordered_json::array();
    for (const auto& e : entries)
      types.push_back({{"type", e.cycle_type}, {"c", e.count}, {"e", e.sign_exponent}, {"f", e.factor_count}});
    ordered_json doc = {{"command", "enumerate"}, {"n", cfg.n},           {"family", cfg.family},
                        {"types", types},         {"count", size},        {"predicted", predicted},
                        {"match", size == predicted}};
    std::cout << doc.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    std::cout << "type,c,e,f\n";
    for (const auto& e : entries)
      std::cout << '"' << e.cycle_type << "\"," << e.count << ',' << e.sign_exponent << ',' << e.factor_count << '\n';
  } else {
    std::cout << std::left << std::setw(22) << "type" << std::right << std::setw(16) << "c(a)" << std::setw(6) << "e(a)"
              << std::setw(6) << "f(a)" << '\n';
    for (const auto& e : entries)
      std::cout << std::left << std::setw(22) << ("[" + std::string(e.cycle_type) + "]") << std::right << std::setw(16)
                << e.count << std::setw(6) << e.sign_exponent << std::setw(6) << e.factor_count << '\n';
    std::cout << "count: " << size << " (predicted " << predicted << ", " << (size == predicted ? "match" : "MISMATCH")
              << ")\n";
  }
  return kOk;
}

int cmd_mc(const RunConfig& cfg) {
  rm_mc_result mc{};
  if (rm_status s = rm_mc_estimate(cfg.n, cfg.samples, cfg.seed, cfg.threads, &mc); s != RM_OK) return report_error(s);
  if (cfg.format == "json") {
    ordered_json doc = {{"command", "mc"},          {"n", cfg.n},
                        {"samples", mc.samples},    {"seed", cfg.seed},
                        {"successes", mc.successes}, {"estimate", mc.estimate},
                        {"stderr", mc.standard_error}};
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "n = " << cfg.n << ", samples = " << mc.samples << ", seed = " << cfg.seed << '\n'
              << "solvable: " << mc.successes << '\n'
              << "estimate: " << std::setprecision(10) << mc.estimate << " +- " << mc.standard_error << '\n';
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  std::string mode = cfg.mode.empty() ? (cfg.n <= 4 ? "exhaustive" : "mc") : cfg.mode;
  const bool run_exhaustive = mode == "exhaustive" || mode == "all";
  const bool run_mc = mode == "mc" || mode == "all";
  if (run_mc && cfg.samples == 0) {
    std::cerr << "error: --samples must be positive\n";
    return kUsage;
  }
  if (run_exhaustive && (cfg.n < 2 || cfg.n > 4)) {
    std::cerr << "error: exhaustive verification supports n in {2, 3, 4}\n";
    return kUsage;
  }

  Engine engine;
  if (rm_status s = configure(cfg, engine); s != RM_OK) return report_error(s);
  Report report;
  if (rm_status s = rm_compute_probability(engine.handle, cfg.n, RM_ROUTE_DIRECT, &report.handle); s != RM_OK)
    return report_error(s);
  const std::string exact = rm_report_value(report.handle);

  bool contradiction = false;
  ordered_json checks = ordered_json::array();
  std::ostringstream text;
  text << "engine: p_" << cfg.n << " = " << exact << " = " << decimal(exact, cfg.decimals) << '\n';

  if (run_exhaustive) {
    char* raw = nullptr;
    if (rm_status s = rm_exhaustive_probability(cfg.n, &raw); s != RM_OK) return report_error(s);
    const std::string oracle = take_string(raw);
    const bool match = oracle == exact;
    contradiction |= !match;
    checks.push_back({{"mode", "exhaustive"}, {"oracle", oracle}, {"match", match}});
    text << "exhaustive: " << oracle << (match ? "  exact match" : "  MISMATCH") << '\n';
  }
  if (run_mc) {
    rm_mc_result mc{};
    if (rm_status s = rm_mc_estimate(cfg.n, cfg.samples, cfg.seed, cfg.threads, &mc); s != RM_OK)
      return report_error(s);
    const double target = to_double(exact);
    double z = 0;
    bool ok;
    if (mc.standard_error > 0) {
      z = (mc.estimate - target) / mc.standard_error;
      ok = std::abs(z) <= cfg.sigma;
    } else {
      ok = mc.estimate == target;
    }
    contradiction |= !ok;
    checks.push_back({{"mode", "mc"},
                      {"samples", mc.samples},
                      {"seed", cfg.seed},
                      {"estimate", mc.estimate},
                      {"stderr", mc.standard_error},
                      {"sigma_distance", z},
                      {"threshold", cfg.sigma},
                      {"match", ok}});
    text << "monte carlo: " << std::setprecision(10) << mc.estimate << " +- " << mc.standard_error << " ("
         << mc.samples << " samples, seed " << cfg.seed << "), distance " << std::setprecision(3) << z
         << " sigma" << (ok ? "  within " : "  OUTSIDE ") << cfg.sigma << " sigma\n";
  }

  if (cfg.format == "json") {
    ordered_json doc = {{"command", "verify"}, {"n", cfg.n}, {"value", fraction_json(exact, cfg.decimals)},
                        {"checks", checks},    {"ok", !contradiction}};
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << text.str() << (contradiction ? "verification FAILED\n" : "verification passed\n");
  }
  return contradiction ? kContradiction : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solvability probabilities for random stable roommates instances"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rm_version()));
  RunConfig cfg;

  const std::vector<std::string> formats{"text", "json", "csv"};
  auto add_engine_flags = [&](CLI::App* cmd) {
    cmd->add_option("--strategy", cfg.strategy, "early, coeffwise or auto (early, retry coeffwise)")
        ->check(CLI::IsMember({"early", "coeffwise", "auto"}));
    cmd->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--cache-dir", cfg.cache_dir, "result cache directory (env ROOMMATES_CACHE_DIR)");
    cmd->add_flag("--no-cache", cfg.no_cache, "do not read or write the result cache");
    cmd->add_option("--term-limit", cfg.term_limit, "maximum live polynomial terms")->check(CLI::PositiveNumber);
  };
  auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_option("--decimals", cfg.decimals, "decimal digits")->check(CLI::PositiveNumber);
    cmd->add_option("--format", cfg.format, "text, json or csv")->check(CLI::IsMember(formats));
  };

  auto* exact = app.add_subcommand("exact", "compute p_n exactly");
  exact->add_option("--n", cfg.n, "instance size")->required();
  exact->add_option("--route", cfg.route, "direct, complement or both")
      ->check(CLI::IsMember({"direct", "complement", "both"}));
  exact->add_flag("--allow-large-n", cfg.allow_large_n, "permit n above 12 (up to 16)");
  add_engine_flags(exact);
  add_output_flags(exact);

  auto* integral = app.add_subcommand("integral", "compute P(a) for one cycle type");
  integral->add_option("--type", cfg.type, "cycle type, e.g. \"2^1,4^1\"")->required();
  add_engine_flags(integral);
  add_output_flags(integral);

  auto* enumerate = app.add_subcommand("enumerate", "list cycle types of a family");
  enumerate->add_option("--n", cfg.n, "size")->required();
  enumerate->add_option("--family", cfg.family, "all, even, odd, fixed-even or odd3")
      ->check(CLI::IsMember({"all", "even", "odd", "fixed-even", "odd3"}));
  enumerate->add_option("--format", cfg.format, "text, json or csv")->check(CLI::IsMember(formats));

  auto* verify = app.add_subcommand("verify", "cross-check the engine against the oracles");
  verify->add_option("--n", cfg.n, "instance size")->required();
  verify->add_option("--mode", cfg.mode, "exhaustive, mc or all")->check(CLI::IsMember({"exhaustive", "mc", "all"}));
  verify->add_option("--samples", cfg.samples, "Monte Carlo samples");
  verify->add_option("--seed", cfg.seed, "Monte Carlo seed");
  verify->add_option("--sigma", cfg.sigma, "allowed distance in standard errors")->check(CLI::PositiveNumber);
  add_engine_flags(verify);
  add_output_flags(verify);

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of p_n");
  mc->add_option("--n", cfg.n, "instance size")->required();
  mc->add_option("--samples", cfg.samples, "number of random instances");
  mc->add_option("--seed", cfg.seed, "seed");
  mc->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  mc->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (exact->parsed()) return cmd_exact(cfg);
  if (integral->parsed()) return cmd_integral(cfg);
  if (enumerate->parsed()) return cmd_enumerate(cfg);
  if (verify->parsed()) return cmd_verify(cfg);
  if (mc->parsed()) return cmd_mc(cfg);
  return kUsage;
}
