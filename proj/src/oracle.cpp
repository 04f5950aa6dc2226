#include "roommates/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace roommates {

// ---------------------------------------------------------------- tables

PreferenceTable::PreferenceTable(std::vector<std::vector<int>> rows) : n_(static_cast<int>(rows.size())), rows_(std::move(rows)) {
  if (n_ < 1) throw std::invalid_argument("preference table needs at least one agent");
  ranks_.assign(static_cast<size_t>(n_ * n_), -1);
  for (int i = 0; i < n_; ++i) {
    const auto& r = rows_[static_cast<size_t>(i)];
    if (static_cast<int>(r.size()) != n_ - 1)
      throw std::invalid_argument("row " + std::to_string(i + 1) + " must rank " + std::to_string(n_ - 1) + " agents");
    for (int pos = 0; pos < n_ - 1; ++pos) {
      const int j = r[static_cast<size_t>(pos)];
      if (j < 0 || j >= n_ || j == i || ranks_[static_cast<size_t>(i * n_ + j)] != -1)
        throw std::invalid_argument("row " + std::to_string(i + 1) + " is not a ranking of the other agents");
      ranks_[static_cast<size_t>(i * n_ + j)] = pos;
    }
    ranks_[static_cast<size_t>(i * n_ + i)] = n_ - 1;
  }
}

PreferenceTable PreferenceTable::parse(std::string_view text) {
  std::vector<std::vector<int>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<int> row;
    std::string tok;
    while (ls >> tok) {
      size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw std::invalid_argument("bad agent '" + tok + "' in preference table");
      row.push_back(v - 1);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return PreferenceTable(std::move(rows));
}

PreferenceTable PreferenceTable::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string PreferenceTable::to_text() const {
  std::string out;
  for (const auto& r : rows_) {
    for (size_t k = 0; k < r.size(); ++k) {
      if (k) out.push_back(' ');
      out += std::to_string(r[k] + 1);
    }
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------- permutations

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)), inverse_(images_.size(), -1) {
  const int n = static_cast<int>(images_.size());
  for (int i = 0; i < n; ++i) {
    const int v = images_[static_cast<size_t>(i)];
    if (v < 0 || v >= n || inverse_[static_cast<size_t>(v)] != -1) throw std::invalid_argument("not a permutation");
    inverse_[static_cast<size_t>(v)] = i;
  }
}

Permutation Permutation::from_cycles(const std::vector<std::vector<int>>& cycles, int n) {
  std::vector<int> images(static_cast<size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (const auto& c : cycles) {
    for (size_t t = 0; t < c.size(); ++t) {
      const int v = c[t];
      if (v < 0 || v >= n || seen[static_cast<size_t>(v)]) throw std::invalid_argument("bad cycle list");
      seen[static_cast<size_t>(v)] = true;
      images[static_cast<size_t>(v)] = c[(t + 1) % c.size()];
    }
  }
  return Permutation(std::move(images));
}

Permutation Permutation::parse_cycles(std::string_view text, int n) {
  std::vector<std::vector<int>> cycles;
  std::vector<int>* current = nullptr;
  std::string number;
  auto flush = [&] {
    if (number.empty()) return;
    if (!current) throw std::invalid_argument("agent outside parentheses in '" + std::string(text) + "'");
    current->push_back(std::stoi(number) - 1);
    number.clear();
  };
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      number.push_back(c);
    } else if (c == '(') {
      if (current) throw std::invalid_argument("nested parentheses");
      cycles.emplace_back();
      current = &cycles.back();
    } else if (c == ')') {
      flush();
      current = nullptr;
    } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      throw std::invalid_argument("unexpected character in cycle notation '" + std::string(text) + "'");
    }
  }
  if (current) throw std::invalid_argument("unterminated cycle");
  return from_cycles(cycles, n);
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(images_.size(), false);
  for (int s = 0; s < n(); ++s) {
    if (seen[static_cast<size_t>(s)]) continue;
    std::vector<int> c;
    for (int v = s; !seen[static_cast<size_t>(v)]; v = (*this)(v)) {
      seen[static_cast<size_t>(v)] = true;
      c.push_back(v);
    }
    out.push_back(std::move(c));
  }
  return out;
}

CycleType Permutation::cycle_type() const {
  std::vector<int> lengths;
  for (const auto& c : cycles()) lengths.push_back(static_cast<int>(c.size()));
  return CycleType::from_lengths(lengths);
}

std::vector<int> Permutation::fixed_points() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if ((*this)(i) == i) out.push_back(i);
  return out;
}

std::vector<int> Permutation::two_cycle_elements() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if ((*this)(i) != i && (*this)(i) == inverse(i)) out.push_back(i);
  return out;
}

bool Permutation::is_perfect_matching() const {
  return static_cast<int>(two_cycle_elements().size()) == n();
}

std::string Permutation::to_string() const {
  std::string out;
  for (const auto& c : cycles()) {
    out.push_back('(');
    for (size_t t = 0; t < c.size(); ++t) {
      if (t) out.push_back(',');
      out += std::to_string(c[t] + 1);
    }
    out.push_back(')');
  }
  return out;
}

// -------------------------------------------------------------- stability

bool is_stable_matching(const PreferenceTable& t, const Permutation& m) {
  if (m.n() != t.n()) throw std::invalid_argument("matching and table sizes differ");
  if (!m.is_perfect_matching()) throw std::invalid_argument("not a perfect matching: " + m.to_string());
  for (int i = 0; i < t.n(); ++i)
    for (int j = i + 1; j < t.n(); ++j)
      if (m(i) != j && t.prefers(i, j, m(i)) && t.prefers(j, i, m(j))) return false;
  return true;
}

bool is_stable_permutation(const PreferenceTable& t, const Permutation& p) {
  if (p.n() != t.n()) throw std::invalid_argument("permutation and table sizes differ");
  const int n = t.n();
  for (int i = 0; i < n; ++i)
    if (t.prefers(i, p(i), p.inverse(i))) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i || j == p(i) || j == p.inverse(i)) continue;
      if (t.prefers(i, j, p(i)) && !t.prefers(j, p(j), i)) return false;
    }
  }
  return true;
}

namespace {

class StablePermutationSearch {
public:
  explicit StablePermutationSearch(const PreferenceTable& t)
      : t_(t), n_(t.n()), image_(static_cast<size_t>(n_), -1), preimage_(static_cast<size_t>(n_), -1) {}

  std::vector<Permutation> run() {
    extend(0);
    return std::move(found_);
  }

private:
  bool blocks(int i, int j) const {
    return t_.rank(i, j) < t_.rank(i, image_[static_cast<size_t>(i)]) &&
           t_.rank(j, i) < t_.rank(j, image_[static_cast<size_t>(j)]);
  }

  bool consistent(int i, int v) const {
    // i prefers its predecessor to v
    const int pred = preimage_[static_cast<size_t>(i)];
    if (pred >= 0 && t_.prefers(i, v, pred)) return false;
    // v's successor is known and v now has predecessor i
    const int succ = image_[static_cast<size_t>(v)];
    if (succ >= 0 && v != i && t_.prefers(v, succ, i)) return false;
    for (int j = 0; j < i; ++j)
      if (blocks(i, j)) return false;
    return true;
  }

  void extend(int i) {
    if (i == n_) {
      found_.emplace_back(image_);
      return;
    }
    for (int v = 0; v < n_; ++v) {
      if (preimage_[static_cast<size_t>(v)] >= 0) continue;
      image_[static_cast<size_t>(i)] = v;
      preimage_[static_cast<size_t>(v)] = i;
      if (consistent(i, v)) extend(i + 1);
      preimage_[static_cast<size_t>(v)] = -1;
      image_[static_cast<size_t>(i)] = -1;
    }
  }

  const PreferenceTable& t_;
  int n_;
  std::vector<int> image_;
  std::vector<int> preimage_;
  std::vector<Permutation> found_;
};

// Enumerates involutions with at most the designated fixed point, pruning as
// soon as two matched agents form a blocking pair.
class MatchingSearch {
public:
  explicit MatchingSearch(const PreferenceTable& t) : t_(t), n_(t.n()), partner_(static_cast<size_t>(n_), -1) {}

  bool exists(int fixed_point) {
    std::fill(partner_.begin(), partner_.end(), -1);
    if (fixed_point >= 0) partner_[static_cast<size_t>(fixed_point)] = fixed_point;
    return extend();
  }

private:
  bool blocking(int i, int k) const {
    return t_.rank(i, k) < t_.rank(i, partner_[static_cast<size_t>(i)]) &&
           t_.rank(k, i) < t_.rank(k, partner_[static_cast<size_t>(k)]);
  }

  bool extend() {
    int i = 0;
    while (i < n_ && partner_[static_cast<size_t>(i)] >= 0) ++i;
    if (i == n_) return true;
    for (int j = i + 1; j < n_; ++j) {
      if (partner_[static_cast<size_t>(j)] >= 0) continue;
      partner_[static_cast<size_t>(i)] = j;
      partner_[static_cast<size_t>(j)] = i;
      bool ok = true;
      for (int k = 0; k < n_ && ok; ++k) {
        if (k == i || k == j || partner_[static_cast<size_t>(k)] < 0) continue;
        ok = !blocking(i, k) && !blocking(j, k);
      }
      if (ok && extend()) return true;
      partner_[static_cast<size_t>(i)] = -1;
      partner_[static_cast<size_t>(j)] = -1;
    }
    return false;
  }

  const PreferenceTable& t_;
  int n_;
  std::vector<int> partner_;
};

std::vector<std::vector<int>> odd_cycles(const Permutation& p) {
  std::vector<std::vector<int>> out;
  for (auto& c : p.cycles())
    if (c.size() % 2 == 1) out.push_back(std::move(c));
  return out;
}

}  // namespace

std::vector<Permutation> stable_permutations(const PreferenceTable& t) { return StablePermutationSearch(t).run(); }

bool is_solvable(const PreferenceTable& t) {
  const int n = t.n();
  if (n > kSolvableBudget)
    throw std::invalid_argument("is_solvable enumerates matchings only up to n = " + std::to_string(kSolvableBudget));
  MatchingSearch search(t);
  if (n % 2 == 0) return search.exists(-1);
  for (int f = 0; f < n; ++f)
    if (search.exists(f)) return true;
  return false;
}

BigRational exhaustive_p(int n) {
  if (n < 2 || n > 4) throw std::invalid_argument("exhaustive_p supports n in {2, 3, 4}");
  std::vector<std::vector<std::vector<int>>> choices(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<int> others;
    for (int j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    do choices[static_cast<size_t>(i)].push_back(others);
    while (std::next_permutation(others.begin(), others.end()));
  }
  const size_t per_row = choices[0].size();
  std::vector<size_t> digit(static_cast<size_t>(n), 0);
  std::uint64_t total = 0, solvable = 0;
  while (true) {
    std::vector<std::vector<int>> rows(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rows[static_cast<size_t>(i)] = choices[static_cast<size_t>(i)][digit[static_cast<size_t>(i)]];
    ++total;
    if (is_solvable(PreferenceTable(std::move(rows)))) ++solvable;
    size_t k = 0;
    while (k < digit.size() && ++digit[k] == per_row) digit[k++] = 0;
    if (k == digit.size()) break;
  }
  return BigRational(BigInteger(static_cast<unsigned long>(solvable)), BigInteger(static_cast<unsigned long>(total)));
}

// ----------------------------------------------------------- random model

std::uint64_t TableRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

void TableRng::shuffle(std::vector<int>& v) {
  for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PreferenceTable random_table(int n, TableRng& rng) {
  if (n < 2) throw std::invalid_argument("random_table needs n >= 2");
  std::vector<std::vector<int>> rows(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = rows[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j)
      if (j != i) row.push_back(j);
    rng.shuffle(row);
  }
  return PreferenceTable(std::move(rows));
}

PreferenceTable random_table(int n, std::uint64_t seed) {
  TableRng rng(seed);
  return random_table(n, rng);
}

McEstimate mc_estimate(int n, std::uint64_t samples, std::uint64_t seed, int threads) {
  if (samples == 0) throw std::invalid_argument("mc_estimate needs at least one sample");
  if (n < 2 || n > kSolvableBudget)
    throw std::invalid_argument("mc_estimate supports 2 <= n <= " + std::to_string(kSolvableBudget));
  const std::uint64_t partitions = (samples + kMcPartitionSize - 1) / kMcPartitionSize;
  std::atomic<std::uint64_t> cursor{0};
  std::atomic<std::uint64_t> successes{0};
  auto worker = [&] {
    for (std::uint64_t p = cursor++; p < partitions; p = cursor++) {
      TableRng rng(derive_seed(seed, p));
      const std::uint64_t count = std::min(kMcPartitionSize, samples - p * kMcPartitionSize);
      std::uint64_t local = 0;
      for (std::uint64_t s = 0; s < count; ++s)
        if (is_solvable(random_table(n, rng))) ++local;
      successes += local;
    }
  };
  const int workers = static_cast<int>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, partitions)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  McEstimate out;
  out.samples = samples;
  out.successes = successes;
  out.estimate = static_cast<double>(out.successes) / static_cast<double>(samples);
  out.stderr_ = std::sqrt(out.estimate * (1 - out.estimate) / static_cast<double>(samples));
  return out;
}

// ------------------------------------------------------------- Tan facts

bool check_tan_fact2(const PreferenceTable& t, const Permutation& p) {
  if (!is_stable_permutation(t, p)) throw std::invalid_argument("permutation is not stable for the table");
  bool any = false;
  for (const auto& c : p.cycles()) {
    const size_t k = c.size();
    if (k < 4 || k % 2 != 0) continue;
    any = true;
    for (size_t offset : {size_t{0}, size_t{1}}) {
      std::vector<int> images = p.images();
      for (size_t s = 0; s < k; s += 2) {
        const int a = c[(s + offset) % k], b = c[(s + offset + 1) % k];
        images[static_cast<size_t>(a)] = b;
        images[static_cast<size_t>(b)] = a;
      }
      if (!is_stable_permutation(t, Permutation(std::move(images)))) return false;
    }
  }
  if (!any) throw std::invalid_argument("permutation has no even cycle of length >= 4");
  return true;
}

bool check_tan_fact3(const PreferenceTable& t) {
  const auto perms = stable_permutations(t);
  if (perms.empty()) return false;
  const auto reference = odd_cycles(perms.front());
  for (const auto& p : perms)
    if (odd_cycles(p) != reference) return false;
  return true;
}

}  // namespace roommates
