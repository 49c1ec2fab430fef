#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace gridlag {

// Sparse matrix over F2, column-major; each column is a sorted list of rows.
struct BooleanMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<int>> col;

  BooleanMatrix() = default;
  BooleanMatrix(int r, int c) : rows(r), cols(c), col(c) {}

  void normalize() {
    for (auto& c : col) {
      std::sort(c.begin(), c.end());
      std::vector<int> out;
      for (size_t i = 0; i < c.size();) {
        size_t j = i;
        while (j < c.size() && c[j] == c[i]) ++j;
        if ((j - i) & 1) out.push_back(c[i]);
        i = j;
      }
      c = std::move(out);
    }
  }

  BooleanMatrix transposed() const {
    BooleanMatrix t(cols, rows);
    for (int j = 0; j < cols; ++j)
      for (int i : col[j]) t.col[i].push_back(j);
    return t;
  }

  std::vector<int> apply(const std::vector<int>& y) const {  // y: column indices
    std::vector<int> acc;
    for (int j : y) acc.insert(acc.end(), col.at(j).begin(), col.at(j).end());
    return xor_reduce(std::move(acc));
  }

  static std::vector<int> xor_reduce(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    std::vector<int> out;
    for (size_t i = 0; i < v.size();) {
      size_t j = i;
      while (j < v.size() && v[j] == v[i]) ++j;
      if ((j - i) & 1) out.push_back(v[i]);
      i = j;
    }
    return out;
  }
};

namespace detail {

inline void sym_diff_into(std::vector<int>& a, const std::vector<int>& b, std::vector<int>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

// Column reduction with pivot = least row index.  pivot_of_row[r] is the
// reduced column whose pivot is r, or -1.  When track is set, hist[j] records
// which original columns sum to reduced column j.
struct Echelon {
  std::vector<std::vector<int>> red;
  std::vector<std::vector<int>> hist;
  std::vector<int> pivot_of_row;
  int rank = 0;
};

inline Echelon reduce_columns(const BooleanMatrix& M, bool track) {
  Echelon E;
  E.red = M.col;
  if (track) {
    E.hist.resize(M.cols);
    for (int j = 0; j < M.cols; ++j) E.hist[j] = {j};
  }
  E.pivot_of_row.assign(M.rows, -1);
  std::vector<int> scratch;
  for (int j = 0; j < M.cols; ++j) {
    auto& c = E.red[j];
    while (!c.empty()) {
      int p = c.front();
      int k = E.pivot_of_row[p];
      if (k < 0) {
        E.pivot_of_row[p] = j;
        ++E.rank;
        break;
      }
      sym_diff_into(c, E.red[k], scratch);
      if (track) sym_diff_into(E.hist[j], E.hist[k], scratch);
    }
  }
  return E;
}

}  // namespace detail

inline int rank(const BooleanMatrix& M) { return detail::reduce_columns(M, false).rank; }

struct SolveResult {
  bool in_image = false;
  std::vector<int> witness;  // columns y with M y = v
  std::vector<int> cochain;  // rows w with w^T M = 0 and w.v = 1
};

inline bool verify_witness(const BooleanMatrix& M, const std::vector<int>& v, const std::vector<int>& y) {
  return M.apply(y) == BooleanMatrix::xor_reduce(v);
}

inline bool verify_cochain(const BooleanMatrix& M, const std::vector<int>& v, const std::vector<int>& w) {
  std::vector<char> in(M.rows, 0);
  for (int r : w) in.at(r) ^= 1;
  for (const auto& c : M.col) {
    int s = 0;
    for (int r : c) s ^= in[r];
    if (s) return false;
  }
  int s = 0;
  for (int r : BooleanMatrix::xor_reduce(v)) s ^= in[r];
  return s == 1;
}

// Decides whether v lies in the column space and returns a checkable witness
// either way.  Both certificates are re-verified before returning.
inline SolveResult solve_in_image(const BooleanMatrix& M, std::vector<int> v) {
  for (int r : v)
    if (r < 0 || r >= M.rows) throw std::invalid_argument("solve_in_image: vector index out of range");
  v = BooleanMatrix::xor_reduce(std::move(v));
  const auto orig = v;
  auto E = detail::reduce_columns(M, true);
  std::vector<int> y, scratch;
  // Clear every pivot row from v, smallest first; a pivot column only touches
  // rows at or above its pivot, so cleared rows stay cleared.
  for (size_t pos = 0; pos < v.size();) {
    int k = E.pivot_of_row[v[pos]];
    if (k < 0) {
      ++pos;
      continue;
    }
    detail::sym_diff_into(v, E.red[k], scratch);
    detail::sym_diff_into(y, E.hist[k], scratch);
  }
  SolveResult res;
  if (v.empty()) {
    res.in_image = true;
    res.witness = std::move(y);
    if (!verify_witness(M, orig, res.witness)) throw std::logic_error("solve_in_image: witness failed to verify");
    return res;
  }
  // v now avoids all pivot rows.  Start from its least row and walk pivots
  // downward, adding a pivot row whenever the cochain pairs oddly with that
  // reduced column; lower pivots never meet higher columns.
  std::vector<char> w(M.rows, 0);
  w[v.front()] = 1;
  std::vector<std::pair<int, int>> piv;  // (pivot row, column)
  for (int r = 0; r < M.rows; ++r)
    if (E.pivot_of_row[r] >= 0) piv.push_back({r, E.pivot_of_row[r]});
  for (auto it = piv.rbegin(); it != piv.rend(); ++it) {
    int s = 0;
    for (int r : E.red[it->second]) s ^= w[r];
    if (s) w[it->first] ^= 1;
  }
  for (int r = 0; r < M.rows; ++r)
    if (w[r]) res.cochain.push_back(r);
  if (!verify_cochain(M, orig, res.cochain)) throw std::logic_error("solve_in_image: cochain failed to verify");
  return res;
}

}  // namespace gridlag
