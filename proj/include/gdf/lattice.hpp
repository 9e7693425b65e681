#pragma once

// Integer lattices in Z^n given by generators, with exact membership,
// witness extraction, and canonical coset representatives. Everything runs
// on a column-style Hermite normal form over GMP integers; no rational
// arithmetic is involved.

#include <gdf/rational.hpp>

#include <optional>
#include <stdexcept>
#include <vector>

namespace gdf {

class IntLattice {
 public:
  static Int to_int(long long x) { return Int(static_cast<long>(x)); }

  IntLattice(size_t n, std::vector<std::vector<long long>> generators)
      : n_(n), gens_(std::move(generators)) {
    for (const auto& g : gens_)
      if (g.size() != n_)
        throw std::invalid_argument("lattice generator has wrong length");
    const size_t m = gens_.size();
    h_.assign(n_, std::vector<Int>(m, 0));
    for (size_t j = 0; j < m; ++j)
      for (size_t i = 0; i < n_; ++i) h_[i][j] = to_int(gens_[j][i]);
    u_.assign(m, std::vector<Int>(m, 0));
    for (size_t j = 0; j < m; ++j) u_[j][j] = 1;
    hermite_reduce();
  }

  size_t ambient_dim() const { return n_; }
  const std::vector<std::vector<long long>>& generators() const { return gens_; }
  size_t rank() const { return pivots_.size(); }

  bool contains(const std::vector<long long>& v) const { return solve(v).has_value(); }

  // Integer coefficients over the original generators, if v is a member.
  std::optional<std::vector<long long>> decompose(const std::vector<long long>& v) const {
    auto y = solve(v);
    if (!y) return std::nullopt;
    const size_t m = gens_.size();
    std::vector<long long> out(m, 0);
    for (size_t j = 0; j < m; ++j) {
      Int acc = 0;
      for (size_t k = 0; k < m; ++k) acc += u_[j][k] * (*y)[k];
      if (!acc.fits_slong_p())
        throw std::overflow_error("lattice witness does not fit a machine integer");
      out[j] = acc.get_si();
    }
    return out;
  }

  // Canonical representative of v + L: at every pivot row the coordinate is
  // reduced into [0, pivot); the result depends only on the coset.
  std::vector<long long> reduce(const std::vector<long long>& v) const {
    check_len(v);
    std::vector<Int> x(n_);
    for (size_t i = 0; i < n_; ++i) x[i] = to_int(v[i]);
    for (const auto& [row, col] : pivots_) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), x[row].get_mpz_t(), h_[row][col].get_mpz_t());
      for (size_t i = 0; i < n_; ++i) x[i] -= q * h_[i][col];
    }
    std::vector<long long> out(n_);
    for (size_t i = 0; i < n_; ++i) {
      if (!x[i].fits_slong_p())
        throw std::overflow_error("reduced vector does not fit a machine integer");
      out[i] = x[i].get_si();
    }
    return out;
  }

 private:
  void check_len(const std::vector<long long>& v) const {
    if (v.size() != n_)
      throw std::invalid_argument("vector length does not match lattice dimension");
  }

  void col_axpy(size_t dst, size_t src, const Int& q) {
    for (size_t i = 0; i < n_; ++i) h_[i][dst] -= q * h_[i][src];
    for (size_t j = 0; j < u_.size(); ++j) u_[j][dst] -= q * u_[j][src];
  }

  void col_swap(size_t a, size_t b) {
    if (a == b) return;
    for (size_t i = 0; i < n_; ++i) std::swap(h_[i][a], h_[i][b]);
    for (size_t j = 0; j < u_.size(); ++j) std::swap(u_[j][a], u_[j][b]);
  }

  void col_negate(size_t a) {
    for (size_t i = 0; i < n_; ++i) h_[i][a] = -h_[i][a];
    for (size_t j = 0; j < u_.size(); ++j) u_[j][a] = -u_[j][a];
  }

  void hermite_reduce() {
    const size_t m = gens_.size();
    size_t r = 0;
    for (size_t i = 0; i < n_ && r < m; ++i) {
      // clear row i to a single nonzero entry among columns >= r
      while (true) {
        size_t best = m;
        for (size_t j = r; j < m; ++j) {
          if (h_[i][j] == 0) continue;
          if (best == m || cmpabs(h_[i][j], h_[i][best]) < 0) best = j;
        }
        if (best == m) break;  // row empty
        col_swap(r, best);
        bool cleared = true;
        for (size_t j = r + 1; j < m; ++j) {
          if (h_[i][j] == 0) continue;
          Int q;
          // floor division leaves remainders strictly below the pivot
          mpz_fdiv_q(q.get_mpz_t(), h_[i][j].get_mpz_t(), h_[i][r].get_mpz_t());
          col_axpy(j, r, q);
          if (h_[i][j] != 0) cleared = false;
        }
        if (cleared) break;
      }
      if (h_[i][r] == 0) continue;
      if (h_[i][r] < 0) col_negate(r);
      for (size_t j = 0; j < r; ++j) {  // normalize entries left of the pivot
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), h_[i][j].get_mpz_t(), h_[i][r].get_mpz_t());
        col_axpy(j, r, q);
      }
      pivots_.push_back({i, r});
      ++r;
    }
  }

  static int cmpabs(const Int& a, const Int& b) {
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
  }

  // Coefficients over the normal-form columns, if v lies in the lattice.
  std::optional<std::vector<Int>> solve(const std::vector<long long>& v) const {
    check_len(v);
    std::vector<Int> x(n_);
    for (size_t i = 0; i < n_; ++i) x[i] = to_int(v[i]);
    std::vector<Int> y(gens_.size(), 0);
    for (const auto& [row, col] : pivots_) {
      if (!mpz_divisible_p(x[row].get_mpz_t(), h_[row][col].get_mpz_t()))
        return std::nullopt;
      Int q = x[row] / h_[row][col];
      y[col] = q;
      for (size_t i = 0; i < n_; ++i) x[i] -= q * h_[i][col];
    }
    for (size_t i = 0; i < n_; ++i)
      if (x[i] != 0) return std::nullopt;
    return y;
  }

  size_t n_;
  std::vector<std::vector<long long>> gens_;
  std::vector<std::vector<Int>> h_;  // normal form, columns span the lattice
  std::vector<std::vector<Int>> u_;  // gens * u_ == h_ columnwise
  std::vector<std::pair<size_t, size_t>> pivots_;  // (row, column), rows increasing
};

}  // namespace gdf
