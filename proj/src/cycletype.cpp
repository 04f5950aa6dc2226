#include "roommates/cycletype.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <stdexcept>

namespace roommates {

CycleType CycleType::from_parts(std::vector<Part> parts) {
  std::map<int, int> merged;
  for (const Part& p : parts) {
    if (p.length < 1) throw std::invalid_argument("cycle length must be positive");
    if (p.multiplicity < 1) throw std::invalid_argument("cycle multiplicity must be positive");
    merged[p.length] += p.multiplicity;
  }
  CycleType out;
  for (auto [k, a] : merged) {
    out.parts_.push_back({k, a});
    out.n_ += k * a;
  }
  return out;
}

CycleType CycleType::from_lengths(const std::vector<int>& lengths) {
  std::vector<Part> parts;
  parts.reserve(lengths.size());
  for (int k : lengths) parts.push_back({k, 1});
  return from_parts(std::move(parts));
}

CycleType CycleType::parse(std::string_view text, int expected_n) {
  std::string compact;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  if (!compact.empty() && compact.front() == '[' && compact.back() == ']')
    compact = compact.substr(1, compact.size() - 2);
  if (compact.empty()) throw std::invalid_argument("empty cycle type");

  auto read_int = [&](std::string_view s, std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(s) + "' in cycle type '" +
                                  std::string(text) + "'");
    return value;
  };

  std::vector<Part> parts;
  std::string_view rest = compact;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto caret = item.find('^');
    Part p{};
    if (caret == std::string_view::npos) {
      p = {read_int(item, "cycle length"), 1};
    } else {
      p = {read_int(item.substr(0, caret), "cycle length"), read_int(item.substr(caret + 1), "multiplicity")};
    }
    if (p.length < 1) throw std::invalid_argument("cycle length must be positive in '" + std::string(text) + "'");
    if (p.multiplicity < 1) throw std::invalid_argument("multiplicity must be positive in '" + std::string(text) + "'");
    parts.push_back(p);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  CycleType out = from_parts(std::move(parts));
  if (expected_n > 0 && out.n() != expected_n)
    throw std::invalid_argument("cycle type '" + std::string(text) + "' has size " + std::to_string(out.n()) +
                                ", expected " + std::to_string(expected_n));
  return out;
}

int CycleType::multiplicity(int length) const {
  for (const Part& p : parts_)
    if (p.length == length) return p.multiplicity;
  return 0;
}

std::vector<int> CycleType::lengths_descending() const {
  std::vector<int> out;
  for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) out.insert(out.end(), it->multiplicity, it->length);
  return out;
}

std::string CycleType::to_string() const {
  std::string out;
  for (const Part& p : parts_) {
    if (!out.empty()) out.push_back(',');
    out += std::to_string(p.length) + "^" + std::to_string(p.multiplicity);
  }
  return out;
}

std::string_view family_name(CycleFamily family) {
  switch (family) {
    case CycleFamily::EvenOnly: return "even";
    case CycleFamily::OddWitness: return "odd";
    case CycleFamily::OneFixedEven: return "fixed-even";
    case CycleFamily::OddCycleAtLeast3: return "odd3";
  }
  return "?";
}

bool is_member(const CycleType& a, CycleFamily family) {
  const int fixed = a.multiplicity(1);
  bool any_odd = false, odd_at_least_3 = false, others_even = true;
  for (const auto& p : a.parts()) {
    if (p.length % 2 == 1) {
      any_odd = true;
      if (p.length >= 3) odd_at_least_3 = true;
    }
    if (p.length != 1 && p.length % 2 == 1) others_even = false;
  }
  switch (family) {
    case CycleFamily::EvenOnly: return !any_odd;
    case CycleFamily::OddWitness: return fixed <= 1 && any_odd;
    case CycleFamily::OneFixedEven: return fixed == 1 && others_even;
    case CycleFamily::OddCycleAtLeast3: return odd_at_least_3;
  }
  return false;
}

namespace {

void enumerate_into(int remaining, int max_part, std::vector<int>& prefix, std::vector<CycleType>& out) {
  if (remaining == 0) {
    out.push_back(CycleType::from_lengths(prefix));
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    enumerate_into(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

void require_parity(int n, CycleFamily family) {
  const bool wants_even = family == CycleFamily::EvenOnly || family == CycleFamily::OddWitness;
  if (n < 1) throw std::invalid_argument("n must be positive");
  if ((n % 2 == 0) != wants_even)
    throw std::invalid_argument("family '" + std::string(family_name(family)) + "' requires " +
                                (wants_even ? "even" : "odd") + " n, got " + std::to_string(n));
}

}  // namespace

std::vector<CycleType> enumerate_partitions(int n) {
  std::vector<CycleType> out;
  if (n <= 0) return out;
  std::vector<int> prefix;
  enumerate_into(n, n, prefix, out);
  return out;
}

std::vector<CycleType> family_members(int n, CycleFamily family) {
  require_parity(n, family);
  std::vector<CycleType> out;
  for (auto& a : enumerate_partitions(n))
    if (is_member(a, family)) out.push_back(std::move(a));
  return out;
}

std::uint64_t partition_number(int n) {
  if (n < 0) return 0;
  std::vector<std::uint64_t> p(static_cast<size_t>(n) + 1, 0);
  p[0] = 1;
  for (int m = 1; m <= n; ++m) {
    std::int64_t acc = 0;
    for (int k = 1;; ++k) {
      const int g1 = k * (3 * k - 1) / 2;
      if (g1 > m) break;
      const std::int64_t sign = (k % 2 == 1) ? 1 : -1;
      acc += sign * static_cast<std::int64_t>(p[static_cast<size_t>(m - g1)]);
      const int g2 = k * (3 * k + 1) / 2;
      if (g2 <= m) acc += sign * static_cast<std::int64_t>(p[static_cast<size_t>(m - g2)]);
    }
    p[static_cast<size_t>(m)] = static_cast<std::uint64_t>(acc);
  }
  return p[static_cast<size_t>(n)];
}

std::uint64_t predicted_family_size(int n, CycleFamily family) {
  require_parity(n, family);
  switch (family) {
    case CycleFamily::EvenOnly: return partition_number(n / 2);
    case CycleFamily::OddWitness: return partition_number(n) - partition_number(n - 2) - partition_number(n / 2);
    case CycleFamily::OneFixedEven: return partition_number((n - 1) / 2);
    case CycleFamily::OddCycleAtLeast3: {
      // complement: partitions whose odd parts are all 1 (any number of 1s, rest even)
      std::uint64_t without = 0;
      for (int ones = n % 2; ones <= n; ones += 2) without += partition_number((n - ones) / 2);
      return partition_number(n) - without;
    }
  }
  return 0;
}

BigInteger count_permutations(const CycleType& a) {
  BigInteger denom = 1;
  for (const auto& p : a.parts()) {
    BigInteger power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(p.length), static_cast<unsigned long>(p.multiplicity));
    denom *= factorial(static_cast<unsigned>(p.multiplicity)) * power;
  }
  return factorial(static_cast<unsigned>(a.n())) / denom;
}

int even_cycle_sign_exponent(const CycleType& a) {
  int e = 0;
  for (const auto& p : a.parts())
    if (p.length >= 4 && p.length % 2 == 0) e += p.multiplicity;
  return e;
}

int factor_count(const CycleType& a) {
  const int n = a.n();
  return n * (n - 3) / 2 + a.multiplicity(1) + a.multiplicity(2);
}

}  // namespace roommates
