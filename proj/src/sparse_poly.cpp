#include <algorithm>
#include <set>

#include "roommates/polyint.hpp"

namespace roommates {

namespace {

void check_var(int var, int varcount) {
  if (var < 0 || var >= varcount)
    throw std::invalid_argument("variable index " + std::to_string(var) + " out of range [0," +
                                std::to_string(varcount) + ")");
}

}  // namespace

Monomial Monomial::from_exponents(const std::vector<int>& exponents) {
  if (exponents.size() > static_cast<size_t>(kMaxVars)) throw std::invalid_argument("too many variables");
  Monomial m;
  for (size_t v = 0; v < exponents.size(); ++v) m = m.with_exponent(static_cast<int>(v), exponents[v]);
  return m;
}

Monomial Monomial::with_exponent(int var, int exponent) const {
  check_var(var, kMaxVars);
  if (exponent < 0 || exponent > kMaxExponent) throw std::overflow_error("monomial exponent out of range");
  const std::uint64_t mask = std::uint64_t{0xF} << (4 * var);
  return Monomial((packed_ & ~mask) | (static_cast<std::uint64_t>(exponent) << (4 * var)));
}

Monomial Monomial::times(const Monomial& other) const {
  std::uint64_t out = 0;
  for (int v = 0; v < kMaxVars; ++v) {
    const int e = exponent(v) + other.exponent(v);
    if (e > kMaxExponent) throw std::overflow_error("monomial exponent out of range");
    out |= static_cast<std::uint64_t>(e) << (4 * v);
  }
  return Monomial(out);
}

int Monomial::total_degree() const {
  int d = 0;
  for (int v = 0; v < kMaxVars; ++v) d += exponent(v);
  return d;
}

SparsePoly::SparsePoly(int varcount) : varcount_(varcount) {
  if (varcount < 0 || varcount > Monomial::kMaxVars) throw std::invalid_argument("unsupported variable count");
  live_mask_ = (1U << varcount) - 1U;
}

SparsePoly SparsePoly::constant(int varcount, const BigRational& value) {
  SparsePoly p(varcount);
  p.add_term(Monomial(), value);
  return p;
}

SparsePoly SparsePoly::variable(int varcount, int var) {
  check_var(var, varcount);
  SparsePoly p(varcount);
  p.add_term(Monomial().with_exponent(var, 1), BigRational(1));
  return p;
}

std::vector<int> SparsePoly::live_variables() const {
  std::vector<int> out;
  for (int v = 0; v < varcount_; ++v)
    if (is_live(v)) out.push_back(v);
  return out;
}

BigRational SparsePoly::constant_value() const {
  if (live_mask_ != 0) throw std::logic_error("polynomial still has live variables");
  auto it = terms_.find(Monomial());
  return it == terms_.end() ? BigRational(0) : it->second;
}

void SparsePoly::add_term(const Monomial& m, const BigRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& other) {
  if (other.varcount_ != varcount_) throw std::invalid_argument("variable count mismatch");
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  live_mask_ |= other.live_mask_;
  return *this;
}

SparsePoly& SparsePoly::operator*=(const BigRational& scalar) {
  if (scalar.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= scalar;
  return *this;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
  if (a.varcount_ != b.varcount_) throw std::invalid_argument("variable count mismatch");
  SparsePoly out(a.varcount_);
  out.live_mask_ = a.live_mask_ | b.live_mask_;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma.times(mb), ca * cb);
  return out;
}

void SparsePoly::multiply_penalty(int i, int j) {
  check_var(i, varcount_);
  Monomial shift = Monomial().with_exponent(i, 1);
  if (j >= 0) {
    check_var(j, varcount_);
    shift = shift.times(Monomial().with_exponent(j, 1));
  }
  TermMap out = terms_;
  for (const auto& [m, c] : terms_) {
    const Monomial shifted = m.times(shift);
    auto [it, inserted] = out.try_emplace(shifted, -c);
    if (!inserted) {
      it->second -= c;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  terms_ = std::move(out);
}

SparsePoly integrate_variable(const SparsePoly& p, int var) {
  check_var(var, p.varcount_);
  if (!p.is_live(var)) throw std::invalid_argument("variable " + std::to_string(var) + " already integrated");
  SparsePoly out(p.varcount_);
  out.live_mask_ = p.live_mask_ & ~(1U << var);
  for (const auto& [m, c] : p.terms_) {
    const int b = m.exponent(var);
    out.add_term(m.with_exponent(var, 0), c / BigRational(b + 1));
  }
  return out;
}

void FactorList::normalize() {
  if (varcount < 0 || varcount > Monomial::kMaxVars) throw std::invalid_argument("unsupported variable count");
  std::set<int> unit(unit_substitutions.begin(), unit_substitutions.end());
  auto check = [&](int v) {
    check_var(v, varcount);
    if (unit.count(v)) throw std::invalid_argument("factor mentions unit-substituted variable " + std::to_string(v));
  };
  for (auto& [i, j] : bilinear_pairs) {
    check(i);
    check(j);
    if (i == j) throw std::invalid_argument("degenerate pair");
    if (i > j) std::swap(i, j);
  }
  for (int u : unary_factors) check(u);
  for (int l : linear_vars) check(l);
  for (int f : unit_substitutions) check_var(f, varcount);
  std::sort(bilinear_pairs.begin(), bilinear_pairs.end());
  if (std::adjacent_find(bilinear_pairs.begin(), bilinear_pairs.end()) != bilinear_pairs.end())
    throw std::invalid_argument("duplicate bilinear pair");
  for (auto* list : {&unary_factors, &linear_vars, &unit_substitutions}) {
    std::sort(list->begin(), list->end());
    if (std::adjacent_find(list->begin(), list->end()) != list->end())
      throw std::invalid_argument("duplicate variable in factor list");
  }
}

std::vector<int> FactorList::live_variables() const {
  std::vector<int> out;
  for (int v = 0; v < varcount; ++v)
    if (std::find(unit_substitutions.begin(), unit_substitutions.end(), v) == unit_substitutions.end())
      out.push_back(v);
  return out;
}

FactorList FactorList::relabeled(const std::vector<int>& relabel) const {
  if (relabel.size() != static_cast<size_t>(varcount)) throw std::invalid_argument("relabeling has wrong size");
  FactorList out;
  out.varcount = varcount;
  for (auto [i, j] : bilinear_pairs) out.bilinear_pairs.emplace_back(relabel[i], relabel[j]);
  for (int u : unary_factors) out.unary_factors.push_back(relabel[u]);
  for (int l : linear_vars) out.linear_vars.push_back(relabel[l]);
  for (int f : unit_substitutions) out.unit_substitutions.push_back(relabel[f]);
  out.normalize();
  return out;
}

SparsePoly expand(const FactorList& f) {
  SparsePoly p(f.varcount);
  Monomial lead;
  for (int l : f.linear_vars) lead = lead.with_exponent(l, 1);
  p.add_term(lead, BigRational(1));
  for (auto [i, j] : f.bilinear_pairs) p.multiply_penalty(i, j);
  for (int u : f.unary_factors) p.multiply_penalty(u);
  for (int s : f.unit_substitutions) p = integrate_variable(p, s);  // slot is never used, so this just drops it
  return p;
}

BigRational integrate_reference(const FactorList& f, const std::vector<int>& order) {
  SparsePoly p = expand(f);
  for (int v : order) p = integrate_variable(p, v);
  return p.constant_value();
}

}  // namespace roommates
