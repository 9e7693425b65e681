#pragma once

// Exact polynomial arithmetic over the rationals: a dense univariate type
// for the accompanying sequences and a sparse multivariate type for surface
// equations. Degrees stay tiny (bounded by leaf counts), so no clever
// algorithms are needed, only exactness.

#include <gdf/rational.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gdf {

inline Rat rat_pow(const Rat& x, int e) {
  Rat r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Dense univariate polynomial, low degree first, tagged with a variable
// name. Mixing tags in binary operations is an error.
class RatPoly {
 public:
  RatPoly() : var_("u") {}
  explicit RatPoly(std::string var) : var_(std::move(var)) {}
  RatPoly(std::vector<Rat> coeffs, std::string var = "u")
      : c_(std::move(coeffs)), var_(std::move(var)) {
    normalize();
  }

  static RatPoly zero(std::string var = "u") { return RatPoly(std::move(var)); }
  static RatPoly one(std::string var = "u") { return RatPoly({Rat(1)}, std::move(var)); }
  static RatPoly variable(std::string var = "u") {
    return RatPoly({Rat(0), Rat(1)}, std::move(var));
  }
  // x - alpha
  static RatPoly linear(const Rat& alpha, std::string var = "u") {
    return RatPoly({-alpha, Rat(1)}, std::move(var));
  }
  static RatPoly from_roots(const std::vector<Rat>& roots, std::string var = "u") {
    RatPoly out = one(var);
    for (const Rat& a : roots) out = out * linear(a, var);
    return out;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  const Rat& leading() const {
    if (c_.empty()) throw std::invalid_argument("zero polynomial has no leading coefficient");
    return c_.back();
  }
  Rat coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Rat(0);
  }
  const std::vector<Rat>& coeffs() const { return c_; }
  const std::string& var() const { return var_; }

  friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    a.require_same_var(b);
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return RatPoly(std::move(c), a.var_);
  }
  friend RatPoly operator-(const RatPoly& a) {
    std::vector<Rat> c = a.c_;
    for (Rat& x : c) x = -x;
    return RatPoly(std::move(c), a.var_);
  }
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    a.require_same_var(b);
    if (a.is_zero() || b.is_zero()) return zero(a.var_);
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return RatPoly(std::move(c), a.var_);
  }
  friend RatPoly operator*(const Rat& s, const RatPoly& a) {
    std::vector<Rat> c = a.c_;
    for (Rat& x : c) x *= s;
    return RatPoly(std::move(c), a.var_);
  }

  Rat evaluate(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  RatPoly derivative() const {
    if (c_.size() <= 1) return zero(var_);
    std::vector<Rat> c(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = Rat(static_cast<long>(i)) * c_[i];
    return RatPoly(std::move(c), var_);
  }

  // quotient and remainder; the divisor must be nonzero
  friend std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
    a.require_same_var(b);
    if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
    RatPoly rem = a;
    std::vector<Rat> quo;
    if (a.degree() >= b.degree()) quo.assign(a.degree() - b.degree() + 1, Rat(0));
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
      const int k = rem.degree() - b.degree();
      const Rat c = rem.leading() / b.leading();
      quo[k] = c;
      std::vector<Rat> rc = rem.c_;
      for (int j = 0; j <= b.degree(); ++j) rc[k + j] -= c * b.c_[j];
      rem = RatPoly(std::move(rc), a.var_);
    }
    return {RatPoly(std::move(quo), a.var_), rem};
  }

  friend RatPoly exact_divide(const RatPoly& a, const RatPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw std::invalid_argument("polynomial division is not exact");
    return q;
  }

  friend bool divides(const RatPoly& b, const RatPoly& a) {
    if (b.is_zero()) return a.is_zero();
    return divmod(a, b).second.is_zero();
  }

  // monic greatest common divisor; gcd(0, 0) = 0
  friend RatPoly gcd_monic(RatPoly a, RatPoly b) {
    a.require_same_var(b);
    while (!b.is_zero()) {
      RatPoly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    if (a.is_zero()) return a;
    return (Rat(1) / a.leading()) * a;
  }

  // no repeated roots; false for the zero polynomial
  bool is_squarefree() const {
    if (is_zero()) return false;
    if (degree() == 0) return true;
    return gcd_monic(*this, derivative()).degree() == 0;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      if (c_[k] == 0) continue;
      const bool neg = c_[k] < 0;
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      const Rat mag = abs(c_[k]);
      if (k == 0) {
        out += rat_str(mag);
      } else {
        if (mag != 1) out += rat_str(mag) + "*";
        out += var_;
        if (k > 1) out += "^" + std::to_string(k);
      }
    }
    return out;
  }

  bool operator==(const RatPoly& o) const { return var_ == o.var_ && c_ == o.c_; }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  void require_same_var(const RatPoly& o) const {
    if (var_ != o.var_)
      throw std::invalid_argument("polynomial variables differ: " + var_ + " vs " + o.var_);
  }

  std::vector<Rat> c_;
  std::string var_;
};

// Sparse multivariate polynomial over a fixed number of variables,
// identified by position. Names are supplied only for printing.
class MultiPoly {
 public:
  explicit MultiPoly(size_t arity) : arity_(arity) {}

  static MultiPoly zero(size_t arity) { return MultiPoly(arity); }
  static MultiPoly constant(size_t arity, const Rat& c) {
    MultiPoly p(arity);
    p.add_term(std::vector<int>(arity, 0), c);
    return p;
  }
  static MultiPoly monomial(size_t arity, const Rat& c, std::vector<int> exps) {
    if (exps.size() != arity) throw std::invalid_argument("monomial exponent count mismatch");
    for (int e : exps)
      if (e < 0) throw std::invalid_argument("negative exponent");
    MultiPoly p(arity);
    p.add_term(std::move(exps), c);
    return p;
  }
  static MultiPoly variable(size_t arity, size_t index) {
    std::vector<int> e(arity, 0);
    e.at(index) = 1;
    return monomial(arity, Rat(1), std::move(e));
  }
  // p(x_index) as a polynomial in the larger variable set
  static MultiPoly from_univariate(const RatPoly& p, size_t arity, size_t index) {
    if (index >= arity) throw std::invalid_argument("variable index out of range");
    MultiPoly out(arity);
    for (int k = 0; k <= p.degree(); ++k) {
      if (p.coeff(k) == 0) continue;
      std::vector<int> e(arity, 0);
      e[index] = k;
      out.add_term(std::move(e), p.coeff(k));
    }
    return out;
  }

  size_t arity() const { return arity_; }
  const std::map<std::vector<int>, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // same polynomial over a larger variable set; new variables come last
  MultiPoly padded(size_t new_arity) const {
    if (new_arity < arity_) throw std::invalid_argument("cannot shrink variable set");
    MultiPoly out(new_arity);
    for (const auto& [e, c] : terms_) {
      std::vector<int> e2 = e;
      e2.resize(new_arity, 0);
      out.add_term(std::move(e2), c);
    }
    return out;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    a.require_same_arity(b);
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
  }
  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly out(a.arity_);
    for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, -c);
    return out;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.require_same_arity(b);
    MultiPoly out(a.arity_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        std::vector<int> e(a.arity_);
        for (size_t i = 0; i < a.arity_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(std::move(e), ca * cb);
      }
    return out;
  }

  Rat evaluate(const std::vector<Rat>& x) const {
    if (x.size() != arity_) throw std::invalid_argument("evaluation point arity mismatch");
    Rat acc = 0;
    for (const auto& [e, c] : terms_) {
      Rat t = c;
      for (size_t i = 0; i < arity_; ++i) t *= rat_pow(x[i], e[i]);
      acc += t;
    }
    return acc;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (names.size() != arity_) throw std::invalid_argument("variable name count mismatch");
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      const bool neg = c < 0;
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      const Rat mag = abs(c);
      std::string body;
      const bool all_zero =
          std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
      if (mag != 1 || all_zero) body = rat_str(mag);
      for (size_t i = 0; i < arity_; ++i) {
        if (e[i] == 0) continue;
        if (!body.empty()) body += "*";
        body += names[i];
        if (e[i] > 1) body += "^" + std::to_string(e[i]);
      }
      out += body;
    }
    return out;
  }

  bool operator==(const MultiPoly& o) const {
    return arity_ == o.arity_ && terms_ == o.terms_;
  }

 private:
  void add_term(std::vector<int> e, const Rat& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (c != 0) terms_.emplace(std::move(e), c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  void require_same_arity(const MultiPoly& o) const {
    if (arity_ != o.arity_) throw std::invalid_argument("polynomial arities differ");
  }

  size_t arity_;
  std::map<std::vector<int>, Rat> terms_;
};

}  // namespace gdf
