#include "szego/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace szego {

namespace {
constexpr uint8_t kNone = 0xff;
}

// Monomials of degree <= 3 over m variables, stored as sorted variable-id
// triples (kNone pads unused slots). Product and lookup tables are built once
// per variable count and shared.
class Jet::Tables {
 public:
  explicit Tables(int m) : m_(m) {
    // enumerate by degree
    monos_.push_back({kNone, kNone, kNone});
    for (uint8_t a = 0; a < m; ++a) monos_.push_back({a, kNone, kNone});
    for (uint8_t a = 0; a < m; ++a)
      for (uint8_t b = a; b < m; ++b) monos_.push_back({a, b, kNone});
    for (uint8_t a = 0; a < m; ++a)
      for (uint8_t b = a; b < m; ++b)
        for (uint8_t c = b; c < m; ++c) monos_.push_back({a, b, c});
    count_ = static_cast<int>(monos_.size());

    lookup_.assign(static_cast<size_t>(m + 1) * (m + 1) * (m + 1), -1);
    for (int i = 0; i < count_; ++i) lookup_[key(monos_[i])] = i;

    prod_.assign(static_cast<size_t>(count_) * count_, -1);
    for (int i = 0; i < count_; ++i) {
      for (int j = 0; j < count_; ++j) {
        if (degree(i) + degree(j) > 3) continue;
        std::array<uint8_t, 3> merged = {kNone, kNone, kNone};
        int pos = 0;
        for (auto v : monos_[i])
          if (v != kNone) merged[pos++] = v;
        for (auto v : monos_[j])
          if (v != kNone) merged[pos++] = v;
        std::sort(merged.begin(), merged.begin() + pos);
        std::array<uint8_t, 3> sorted = {kNone, kNone, kNone};
        for (int t = 0; t < pos; ++t) sorted[t] = merged[t];
        prod_[static_cast<size_t>(i) * count_ + j] = lookup_[key(sorted)];
      }
    }

    fact_.resize(count_);
    for (int i = 0; i < count_; ++i) {
      double f = 1.0;
      const auto& mo = monos_[i];
      // multiplicity factorials; degree <= 3 so only pairs/triples matter
      if (mo[0] != kNone && mo[0] == mo[1]) f *= 2.0;
      if (mo[1] != kNone && mo[1] == mo[2]) f *= (mo[0] == mo[1]) ? 3.0 : 2.0;
      fact_[i] = f;
    }
  }

  int degree(int i) const {
    const auto& mo = monos_[i];
    return (mo[0] != kNone) + (mo[1] != kNone) + (mo[2] != kNone);
  }
  int count() const { return count_; }
  int vars() const { return m_; }
  int product(int i, int j) const { return prod_[static_cast<size_t>(i) * count_ + j]; }
  double factorial(int i) const { return fact_[i]; }
  const std::array<uint8_t, 3>& mono(int i) const { return monos_[i]; }

  int index_of(std::array<uint8_t, 3> sorted) const { return lookup_[key(sorted)]; }

  static std::shared_ptr<const Tables> get(int m) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const Tables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto tab = std::make_shared<const Tables>(m);
    cache[m] = tab;
    return tab;
  }

 private:
  size_t key(const std::array<uint8_t, 3>& mo) const {
    auto enc = [&](uint8_t v) -> size_t { return v == kNone ? 0 : v + 1u; };
    size_t mm = m_ + 1;
    return (enc(mo[0]) * mm + enc(mo[1])) * mm + enc(mo[2]);
  }

  int m_;
  int count_;
  std::vector<std::array<uint8_t, 3>> monos_;
  std::vector<int> lookup_;
  std::vector<int> prod_;
  std::vector<double> fact_;
};

Jet::Jet(std::shared_ptr<const Tables> tab)
    : nvars_(tab->vars()), tab_(std::move(tab)), coeff_(tab_->count()) {}

Jet Jet::constant(int nvars, Complex value) {
  Jet j(Tables::get(nvars));
  j.coeff_[0] = value;
  return j;
}

Jet Jet::variable(int nvars, int index, Complex value) {
  if (index < 0 || index >= nvars) throw PreconditionError("jet variable index out of range");
  Jet j(Tables::get(nvars));
  j.coeff_[0] = value;
  j.coeff_[1 + index] = 1.0;
  return j;
}

Jet Jet::operator+(const Jet& o) const {
  Jet r(*this);
  for (size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] += o.coeff_[i];
  return r;
}

Jet Jet::operator-(const Jet& o) const {
  Jet r(*this);
  for (size_t i = 0; i < coeff_.size(); ++i) r.coeff_[i] -= o.coeff_[i];
  return r;
}

Jet Jet::operator-() const {
  Jet r(*this);
  for (auto& c : r.coeff_) c = -c;
  return r;
}

Jet Jet::operator+(Complex c) const {
  Jet r(*this);
  r.coeff_[0] += c;
  return r;
}

Jet Jet::operator-(Complex c) const {
  Jet r(*this);
  r.coeff_[0] -= c;
  return r;
}

Jet Jet::operator*(Complex c) const {
  Jet r(*this);
  for (auto& x : r.coeff_) x *= c;
  return r;
}

Jet Jet::operator*(const Jet& o) const {
  Jet r(tab_);
  const int n = tab_->count();
  for (int i = 0; i < n; ++i) {
    Complex a = coeff_[i];
    if (a == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      int p = tab_->product(i, j);
      if (p < 0) continue;
      r.coeff_[p] += a * o.coeff_[j];
    }
  }
  return r;
}

Jet Jet::compose(const std::array<Complex, 4>& d) const {
  // p = this - value; result = d0 + d1 p + d2/2 p^2 + d3/6 p^3
  Jet p(*this);
  p.coeff_[0] = 0.0;
  Jet p2 = p * p;
  Jet p3 = p2 * p;
  Jet r = p * d[1] + p2 * (d[2] / 2.0) + p3 * (d[3] / 6.0);
  r.coeff_[0] += d[0];
  return r;
}

Jet Jet::exp() const {
  Complex e = std::exp(value());
  return compose({e, e, e, e});
}

Jet Jet::log() const {
  Complex v = value();
  if (v == 0.0) throw NumericalError("jet log of zero");
  return compose({std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)});
}

Jet Jet::inverse() const {
  Complex v = value();
  if (v == 0.0) throw NumericalError("jet inverse of zero");
  Complex v2 = v * v;
  return compose({1.0 / v, -1.0 / v2, 2.0 / (v2 * v), -6.0 / (v2 * v2)});
}

Jet Jet::operator/(const Jet& o) const { return *this * o.inverse(); }

Jet Jet::pow_int(int k) const {
  if (k < 0) return inverse().pow_int(-k);
  Jet r = Jet::constant(nvars_, 1.0);
  Jet base(*this);
  while (k > 0) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

Jet Jet::wirt_conj() const {
  if (nvars_ % 2 != 0) throw PreconditionError("wirt_conj needs an even variable count");
  const int n = nvars_ / 2;
  Jet r(tab_);
  for (int i = 0; i < tab_->count(); ++i) {
    auto mo = tab_->mono(i);
    std::array<uint8_t, 3> sw = mo;
    for (auto& v : sw)
      if (v != kNone) v = static_cast<uint8_t>((v + n) % nvars_);
    std::sort(sw.begin(), sw.end());  // kNone = 0xff sorts last
    r.coeff_[tab_->index_of(sw)] = std::conj(coeff_[i]);
  }
  return r;
}

Complex Jet::derivative(std::span<const int> vars) const {
  if (vars.size() > 3) throw PreconditionError("derivative order above 3 is not stored");
  std::array<uint8_t, 3> mo = {kNone, kNone, kNone};
  for (size_t i = 0; i < vars.size(); ++i) mo[i] = static_cast<uint8_t>(vars[i]);
  std::sort(mo.begin(), mo.end());
  int idx = tab_->index_of(mo);
  return coeff_[idx] * tab_->factorial(idx);
}

}  // namespace szego
