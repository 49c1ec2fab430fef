#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace gridlag {

// A generator is a permutation packed four bits per column (n <= 16).
using Gen = std::uint64_t;

inline int gen_at(Gen g, int c) { return int((g >> (4 * c)) & 0xF); }
inline Gen gen_set(Gen g, int c, int r) {
  return (g & ~(Gen(0xF) << (4 * c))) | (Gen(r) << (4 * c));
}
inline Gen gen_swap(Gen g, int i, int j) {
  int a = gen_at(g, i), b = gen_at(g, j);
  return gen_set(gen_set(g, i, b), j, a);
}
inline Gen pack(const std::vector<int>& perm) {
  Gen g = 0;
  for (size_t c = 0; c < perm.size(); ++c) g |= Gen(perm[c]) << (4 * c);
  return g;
}
inline std::vector<int> unpack(Gen g, int n) {
  std::vector<int> p(n);
  for (int c = 0; c < n; ++c) p[c] = gen_at(g, c);
  return p;
}
inline bool gen_valid(Gen g, int n) {
  unsigned seen = 0;
  for (int c = 0; c < n; ++c) seen |= 1u << gen_at(g, c);
  return seen == (1u << n) - 1 && (n == 16 || (g >> (4 * n)) == 0);
}
inline int gen_row_col(Gen g, int n, int r) {
  for (int c = 0; c < n; ++c)
    if (gen_at(g, c) == r) return c;
  return -1;
}

// Lexicographic order on the permutation, column 0 most significant.
inline bool gen_less(Gen a, Gen b, int n) {
  for (int c = 0; c < n; ++c) {
    int u = gen_at(a, c), v = gen_at(b, c);
    if (u != v) return u < v;
  }
  return false;
}

struct Bigrading {
  int maslov = 0;
  int alexander2 = 0;
  friend bool operator==(const Bigrading&, const Bigrading&) = default;
  friend auto operator<=>(const Bigrading&, const Bigrading&) = default;
};

// Planar point sets for the J pairing, stored doubled so markings are integral.
struct Pt {
  int u, v;
};

inline int I_count(const std::vector<Pt>& P, const std::vector<Pt>& Q) {
  int k = 0;
  for (auto& p : P)
    for (auto& q : Q)
      if (p.u < q.u && p.v < q.v) ++k;
  return k;
}

// Twice J(P, Q); J itself lies in (1/2)Z.
inline int j_pairing2(const std::vector<Pt>& P, const std::vector<Pt>& Q) { return I_count(P, Q) + I_count(Q, P); }

inline std::vector<Pt> gen_points(Gen g, int n) {
  std::vector<Pt> p;
  for (int c = 0; c < n; ++c) p.push_back({2 * c, 2 * gen_at(g, c)});
  return p;
}
inline std::vector<Pt> marking_points(const std::vector<int>& m) {
  std::vector<Pt> p;
  for (size_t c = 0; c < m.size(); ++c) p.push_back({int(2 * c + 1), 2 * m[c] + 1});
  return p;
}

// Precomputed per-grid data.  With w_M(c, r) = #{d >= c : m_d >= r} + #{d < c : m_d < r},
//   M_M(x) = noninv(x) - sum_c w_M(c, x_c) + J(M,M) + 1,
//   2A(x)  = M_O(x) - M_X(x) - (n - l).
class GridComplex {
 public:
  explicit GridComplex(GridDiagram g) : g_(std::move(g)) {
    validate(g_);
    n_ = g_.n;
    ell_ = component_count(g_);
    for (int c = 0; c < n_; ++c)
      for (int r = 0; r < n_; ++r) {
        int wo = 0, wx = 0;
        for (int d = 0; d < n_; ++d) {
          if (d >= c) {
            wo += g_.o[d] >= r;
            wx += g_.x[d] >= r;
          } else {
            wo += g_.o[d] < r;
            wx += g_.x[d] < r;
          }
        }
        wO_[c][r] = wo;
        wX_[c][r] = wx;
      }
    auto O = marking_points(g_.o), X = marking_points(g_.x);
    jOO2_ = j_pairing2(O, O);
    jXX2_ = j_pairing2(X, X);
    for (int c = 0; c < n_; ++c) {
      mark_row_[c][0] = g_.x[c];
      mark_row_[c][1] = g_.o[c];
    }
  }

  const GridDiagram& grid() const { return g_; }
  int n() const { return n_; }
  int components() const { return ell_; }
  int wO(int c, int r) const { return wO_[c][r]; }
  int wX(int c, int r) const { return wX_[c][r]; }
  int jOO2() const { return jOO2_; }
  int jXX2() const { return jXX2_; }

  int maslov_O(Gen x) const {
    int s = noninv(x);
    for (int c = 0; c < n_; ++c) s -= wO_[c][gen_at(x, c)];
    return s + jOO2_ / 2 + 1;
  }
  int maslov_X(Gen x) const {
    int s = noninv(x);
    for (int c = 0; c < n_; ++c) s -= wX_[c][gen_at(x, c)];
    return s + jXX2_ / 2 + 1;
  }
  Bigrading grading(Gen x) const {
    int mo = maslov_O(x), mx = maslov_X(x);
    return {mo, mo - mx - (n_ - ell_)};
  }

  Gen x_plus() const {
    Gen g = 0;
    for (int c = 0; c < n_; ++c) g = gen_set(g, (c + 1) % n_, (g_.x[c] + 1) % n_);
    return g;
  }
  Gen x_minus() const { return pack(g_.x); }

  // Rectangles of the tilde differential: x -> swap(x, i, j), lower-left corner
  // (i, x_i), upper-right corner (j, x_j), empty of markings and of x-points.
  template <class F>
  void for_each_rect_out(Gen x, F&& f) const {
    for (int i = 0; i < n_; ++i) scan_from(x, i, gen_at(x, i), false, f);
  }
  // Rectangles into y: x = swap(y, i, j) with y's corners at upper-left (i, y_i)
  // and lower-right (j, y_j).
  template <class F>
  void for_each_rect_in(Gen y, F&& f) const {
    for (int i = 0; i < n_; ++i) scan_from(y, i, gen_at(y, i), true, f);
  }

  std::vector<Gen> differential(Gen x) const {
    std::vector<Gen> out;
    for_each_rect_out(x, [&](int, int, Gen y) { out.push_back(y); });
    return reduce_mod2(std::move(out));
  }
  std::vector<Gen> codifferential(Gen y) const {
    std::vector<Gen> out;
    for_each_rect_in(y, [&](int, int, Gen x) { out.push_back(x); });
    return reduce_mod2(std::move(out));
  }

  static std::vector<Gen> reduce_mod2(std::vector<Gen> v) {
    std::sort(v.begin(), v.end());
    std::vector<Gen> out;
    for (size_t i = 0; i < v.size();) {
      size_t j = i;
      while (j < v.size() && v[j] == v[i]) ++j;
      if ((j - i) & 1) out.push_back(v[i]);
      i = j;
    }
    return out;
  }

 private:
  int noninv(Gen x) const {
    int s = 0;
    for (int a = 0; a < n_; ++a) {
      int ra = gen_at(x, a);
      for (int b = a + 1; b < n_; ++b) s += ra < gen_at(x, b);
    }
    return s;
  }

  // Walk right from column i.  Heights are measured cyclically from the base
  // row; forward scans go up from x_i, reverse scans go down from y_i.
  template <class F>
  void scan_from(Gen x, int i, int base, bool reverse, F& f) const {
    // rel(m): index of marking square row m counted away from the base circle.
    auto rel = [&](int r) { return reverse ? detail::mod(base - 1 - r, n_) : detail::mod(r - base, n_); };
    int mark_lim = n_;  // rectangle height h must satisfy h <= mark_lim
    int pt_lim = n_;    // and h < pt_lim
    for (int s = 1; s < n_; ++s) {
      int tcol = (i + s - 1) % n_;  // square column entering the rectangle
      for (int k = 0; k < 2; ++k) mark_lim = std::min(mark_lim, rel(mark_row_[tcol][k]));
      if (s > 1) {
        int q = gen_at(x, tcol);
        int hq = reverse ? detail::mod(base - q, n_) : detail::mod(q - base, n_);
        pt_lim = std::min(pt_lim, hq);
      }
      if (mark_lim == 0 || pt_lim <= 1) break;
      int j = (i + s) % n_;
      int xj = gen_at(x, j);
      int h = reverse ? detail::mod(base - xj, n_) : detail::mod(xj - base, n_);
      if (h <= mark_lim && h < pt_lim) f(i, j, gen_swap(x, i, j));
    }
  }

  GridDiagram g_;
  int n_ = 0, ell_ = 1;
  int wO_[max_grid][max_grid]{};
  int wX_[max_grid][max_grid]{};
  int mark_row_[max_grid][2]{};
  int jOO2_ = 0, jXX2_ = 0;
};

// Classical invariants read off the canonical cycles.
struct Classical {
  int tb = 0, r = 0, components = 1;
  Bigrading plus, minus;
};

inline Classical classical_invariants(const GridComplex& C) {
  Classical k;
  k.plus = C.grading(C.x_plus());
  k.minus = C.grading(C.x_minus());
  k.components = C.components();
  int sum = k.plus.maslov + k.minus.maslov, diff = k.minus.maslov - k.plus.maslov;
  if ((sum & 1) || (diff & 1)) throw std::logic_error("canonical cycle Maslov gradings have mixed parity");
  k.tb = sum / 2 - 1;
  k.r = diff / 2;
  // Alexander reading must agree: 2A(x+-) = tb -+ r + |L|.
  if (k.plus.alexander2 != k.tb - k.r + k.components || k.minus.alexander2 != k.tb + k.r + k.components)
    throw std::logic_error("Maslov and Alexander readings of (tb, r) disagree");
  return k;
}

inline Classical classical_invariants(const GridDiagram& g) { return classical_invariants(GridComplex(g)); }

// Depth-first enumeration of generators in one bigrading, column by column.
// Partial sums of the per-column terms plus completion bounds prune subtrees:
//   Maslov    = noninversions + sum of -w_O + const,
//   2A        = sum over columns of (w_X - w_O) + const.
class BigradingEnumerator {
 public:
  BigradingEnumerator(const GridComplex& C, Bigrading b) : C_(C), b_(b), n_(C.n()) {
    constM_ = C.jOO2() / 2 + 1;
    constA_ = (C.jOO2() - C.jXX2()) / 2 - (n_ - C.components());
    for (int c = 0; c < n_; ++c)
      for (int r = 0; r < n_; ++r) {
        mo_[c][r] = -C.wO(c, r);
        da_[c][r] = C.wX(c, r) - C.wO(c, r);
      }
  }

  // Calls f(gen) for each generator in the bigrading, in lexicographic order.
  // Returns false if f asked to stop (by returning false).
  template <class F>
  bool run(F&& f, int first_row = -1) const {
    State st;
    st.free_rows = (1u << n_) - 1;
    if (first_row >= 0) {
      if (!place(st, 0, first_row)) return true;
      return dfs(st, 1, f);
    }
    return dfs(st, 0, f);
  }

  std::vector<Gen> collect() const {
    std::vector<Gen> out;
    run([&](Gen g) {
      out.push_back(g);
      return true;
    });
    return out;
  }

  // Parallel by first-column row; merged in row order so output matches run().
  std::vector<Gen> collect_parallel(int threads) const {
    if (threads <= 1) return collect();
    std::vector<std::vector<Gen>> parts(n_);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, n_); ++t)
      pool.emplace_back([&] {
        for (int r; (r = next++) < n_;)
          run(
              [&](Gen g) {
                parts[r].push_back(g);
                return true;
              },
              r);
      });
    for (auto& th : pool) th.join();
    std::vector<Gen> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  }

 private:
  struct State {
    unsigned free_rows = 0;
    int m = 0;   // noninversions with a placed left member, plus sum -w_O
    int a = 0;   // sum of w_X - w_O
    Gen g = 0;
  };

  bool place(State& st, int c, int r) const {
    // Every pair of columns is counted when its left member is placed: the
    // later columns take exactly the rows still free.
    st.free_rows &= ~(1u << r);
    st.m += __builtin_popcount(st.free_rows >> (r + 1)) + mo_[c][r];
    st.a += da_[c][r];
    st.g = gen_set(st.g, c, r);
    return feasible(st, c + 1);
  }

  bool feasible(const State& st, int c) const {
    int left = n_ - c;
    int mlo = st.m, mhi = st.m + left * (left - 1) / 2, alo = st.a, ahi = st.a;
    for (int cc = c; cc < n_; ++cc) {
      int lm = 1 << 20, hm = -(1 << 20), la = 1 << 20, ha = -(1 << 20);
      for (unsigned fr = st.free_rows; fr; fr &= fr - 1) {
        int r = __builtin_ctz(fr);
        lm = std::min(lm, mo_[cc][r]);
        hm = std::max(hm, mo_[cc][r]);
        la = std::min(la, da_[cc][r]);
        ha = std::max(ha, da_[cc][r]);
      }
      mlo += lm;
      mhi += hm;
      alo += la;
      ahi += ha;
    }
    int tm = b_.maslov - constM_, ta = b_.alexander2 - constA_;
    return tm >= mlo && tm <= mhi && ta >= alo && ta <= ahi;
  }

  template <class F>
  bool dfs(const State& st, int c, F& f) const {
    if (c == n_) {
      if (st.m == b_.maslov - constM_ && st.a == b_.alexander2 - constA_) return f(st.g);
      return true;
    }
    for (unsigned fr = st.free_rows; fr; fr &= fr - 1) {
      int r = __builtin_ctz(fr);
      State nx = st;
      if (!place(nx, c, r)) continue;
      if (!dfs(nx, c + 1, f)) return false;
    }
    return true;
  }

  const GridComplex& C_;
  Bigrading b_;
  int n_;
  int constM_ = 0, constA_ = 0;
  int mo_[max_grid][max_grid]{};
  int da_[max_grid][max_grid]{};
};

// All n! generators bucketed by bigrading (small n only).
inline std::map<Bigrading, std::vector<Gen>> all_generators_by_bigrading(const GridComplex& C) {
  std::map<Bigrading, std::vector<Gen>> out;
  std::vector<int> p(C.n());
  std::iota(p.begin(), p.end(), 0);
  do {
    Gen g = pack(p);
    out[C.grading(g)].push_back(g);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace gridlag
