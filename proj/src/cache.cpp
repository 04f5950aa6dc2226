#include <atomic>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <json.hpp>

#include "roommates/stability.hpp"

namespace roommates {

namespace fs = std::filesystem;

ResultCache::ResultCache(fs::path directory) : directory_(std::move(directory)) {}

std::string ResultCache::file_name(const CycleType& a) {
  std::string name = a.to_string();
  for (char& c : name) {
    if (c == '^') c = 'p';
    else if (c == ',') c = '_';
  }
  return name + ".json";
}

fs::path ResultCache::path_for(const CycleType& a) const { return directory_ / file_name(a); }

std::optional<ResultCache::Entry> ResultCache::load(const CycleType& a) const {
  std::ifstream in(path_for(a));
  if (!in) return std::nullopt;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.at("engine_version").get<std::string>() != kEngineVersion) return std::nullopt;
    if (doc.at("cycle_type").get<std::string>() != a.to_string()) return std::nullopt;
    if (doc.at("n").get<int>() != a.n()) return std::nullopt;
    Entry e;
    e.cycle_type = a;
    e.value = BigRational::parse(doc.at("fraction").get<std::string>());
    if (e.value < BigRational(0) || e.value > BigRational(1)) return std::nullopt;
    e.strategy = doc.at("strategy").get<std::string>();
    e.elapsed_s = doc.at("elapsed_s").get<double>();
    return e;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void ResultCache::store(const Entry& entry) const {
  nlohmann::json doc = {
      {"cycle_type", entry.cycle_type.to_string()},
      {"n", entry.cycle_type.n()},
      {"fraction", entry.value.to_string()},
      {"strategy", entry.strategy},
      {"elapsed_s", entry.elapsed_s},
      {"engine_version", kEngineVersion},
  };
  fs::create_directories(directory_);
  static std::atomic<unsigned> counter{0};
  std::ostringstream tmp_name;
  tmp_name << file_name(entry.cycle_type) << ".tmp." << ::getpid() << '.'
           << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << counter++;
  const fs::path tmp = directory_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
  }
  fs::rename(tmp, path_for(entry.cycle_type));
}

}  // namespace roommates
