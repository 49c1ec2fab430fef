#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "complex.hpp"
#include "f2.hpp"

namespace gridlag {

struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Verdict { zero, nonzero, inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::zero: return "zero";
    case Verdict::nonzero: return "nonzero";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// Outcome of "is x^sign a boundary".  zero: witness chain in the slice one
// Maslov grading up whose boundary is the cycle.  nonzero: cochain on the
// cycle's slice that kills every boundary but pairs to 1 with the cycle.
struct VanishingCertificate {
  Verdict verdict = Verdict::inconclusive;
  char sign = '+';
  GridDiagram grid;
  Bigrading bigrading;
  Gen target = 0;
  std::vector<Gen> witness;
  std::vector<Gen> cochain;
  std::size_t rows = 0, cols = 0;  // size of the solved system
  std::string note;
};

inline Gen canonical_cycle(const GridComplex& C, char sign) { return sign == '+' ? C.x_plus() : C.x_minus(); }

namespace detail {

inline void sort_lex(std::vector<Gen>& v, int n) {
  std::sort(v.begin(), v.end(), [n](Gen a, Gen b) { return gen_less(a, b, n); });
}

inline BooleanMatrix build_boundary(const GridComplex& C, const std::vector<Gen>& src, const std::vector<Gen>& tgt) {
  std::unordered_map<Gen, int> row_of;
  row_of.reserve(tgt.size() * 2);
  for (int i = 0; i < int(tgt.size()); ++i) row_of[tgt[i]] = i;
  BooleanMatrix M(int(tgt.size()), int(src.size()));
  for (int j = 0; j < int(src.size()); ++j)
    C.for_each_rect_out(src[j], [&](int, int, Gen y) {
      auto it = row_of.find(y);
      if (it == row_of.end()) throw std::logic_error("boundary leaves the target slice");
      M.col[j].push_back(it->second);
    });
  M.normalize();
  return M;
}

inline VanishingCertificate solve_for(const GridComplex& C, char sign, std::vector<Gen> src, std::vector<Gen> tgt) {
  const int n = C.n();
  VanishingCertificate cert;
  cert.sign = sign;
  cert.grid = C.grid();
  cert.target = canonical_cycle(C, sign);
  cert.bigrading = C.grading(cert.target);
  sort_lex(src, n);
  sort_lex(tgt, n);
  auto M = build_boundary(C, src, tgt);
  int trow = int(std::find(tgt.begin(), tgt.end(), cert.target) - tgt.begin());
  if (trow == int(tgt.size())) throw std::logic_error("canonical cycle missing from its own slice");
  auto sol = solve_in_image(M, {trow});
  cert.rows = tgt.size();
  cert.cols = src.size();
  if (sol.in_image) {
    cert.verdict = Verdict::zero;
    for (int j : sol.witness) cert.witness.push_back(src[j]);
    sort_lex(cert.witness, n);
  } else {
    cert.verdict = Verdict::nonzero;
    for (int r : sol.cochain) cert.cochain.push_back(tgt[r]);
    sort_lex(cert.cochain, n);
  }
  return cert;
}

}  // namespace detail

// Connected component of a set of generators in the bipartite rectangle graph
// between a slice and the slice one Maslov grading above.  Returns false if the
// budget is exceeded.
inline bool rectangle_component(const GridComplex& C, const std::vector<Gen>& seed, std::size_t budget,
                                std::vector<Gen>& src, std::vector<Gen>& tgt) {
  std::unordered_set<Gen> rows(seed.begin(), seed.end()), cols;
  std::vector<Gen> frontier(rows.begin(), rows.end()), next_cols, next_rows;
  while (!frontier.empty()) {
    next_cols.clear();
    for (Gen y : frontier)
      C.for_each_rect_in(y, [&](int, int, Gen x) {
        if (cols.insert(x).second) next_cols.push_back(x);
      });
    next_rows.clear();
    for (Gen x : next_cols)
      C.for_each_rect_out(x, [&](int, int, Gen y) {
        if (rows.insert(y).second) next_rows.push_back(y);
      });
    frontier.swap(next_rows);
    if (rows.size() + cols.size() > budget) {
      src.assign(cols.begin(), cols.end());
      tgt.assign(rows.begin(), rows.end());
      return false;
    }
  }
  src.assign(cols.begin(), cols.end());
  tgt.assign(rows.begin(), rows.end());
  return true;
}

// Whether a homogeneous chain is a boundary; nullopt if over budget.
inline std::optional<bool> chain_is_boundary(const GridComplex& C, std::vector<Gen> v,
                                             std::size_t budget = 100000000) {
  v = GridComplex::reduce_mod2(std::move(v));
  if (v.empty()) return true;
  std::vector<Gen> src, tgt;
  if (!rectangle_component(C, v, budget, src, tgt)) return std::nullopt;
  auto M = detail::build_boundary(C, src, tgt);
  std::unordered_map<Gen, int> row_of;
  for (int i = 0; i < int(tgt.size()); ++i) row_of[tgt[i]] = i;
  std::vector<int> rv;
  for (Gen g : v) rv.push_back(row_of.at(g));
  return solve_in_image(M, rv).in_image;
}

// Whether [x^sign] vanishes in the tilde homology.  Only the connected
// component of x^sign in the bipartite rectangle graph between the slices
// (M+1, A) and (M, A) is materialized; the boundary matrix is block diagonal
// over components, so the answer is the same as on the full slices.
inline VanishingCertificate class_is_zero(const GridComplex& C, char sign, std::size_t budget = 100000000) {
  Gen v = canonical_cycle(C, sign);
  std::vector<Gen> src, tgt;
  if (!rectangle_component(C, {v}, budget, src, tgt)) {
    VanishingCertificate cert;
    cert.sign = sign;
    cert.grid = C.grid();
    cert.target = v;
    cert.bigrading = C.grading(v);
    cert.verdict = Verdict::inconclusive;
    cert.rows = tgt.size();
    cert.cols = src.size();
    cert.note = "generator budget of " + std::to_string(budget) + " exceeded";
    return cert;
  }
  return detail::solve_for(C, sign, std::move(src), std::move(tgt));
}

inline VanishingCertificate class_is_zero(const GridDiagram& g, char sign, std::size_t budget = 100000000) {
  return class_is_zero(GridComplex(g), sign, budget);
}

// Same question answered on the two full slices; used to cross-check the
// component shortcut.
inline VanishingCertificate class_is_zero_by_slices(const GridComplex& C, char sign, int threads = 1) {
  Gen v = canonical_cycle(C, sign);
  Bigrading b = C.grading(v);
  auto tgt = BigradingEnumerator(C, b).collect_parallel(threads);
  auto src = BigradingEnumerator(C, {b.maslov + 1, b.alexander2}).collect_parallel(threads);
  return detail::solve_for(C, sign, std::move(src), std::move(tgt));
}

// Re-checks a certificate against its grid from scratch.
inline bool replay(const VanishingCertificate& cert) {
  if (cert.verdict == Verdict::inconclusive) return false;
  GridComplex C(cert.grid);
  if (cert.target != canonical_cycle(C, cert.sign)) return false;
  Bigrading b = C.grading(cert.target);
  if (b != cert.bigrading) return false;
  if (cert.verdict == Verdict::zero) {
    std::vector<Gen> acc;
    for (Gen s : cert.witness) {
      if (!gen_valid(s, C.n()) || C.grading(s) != Bigrading{b.maslov + 1, b.alexander2}) return false;
      auto d = C.differential(s);
      acc.insert(acc.end(), d.begin(), d.end());
    }
    return GridComplex::reduce_mod2(std::move(acc)) == std::vector<Gen>{cert.target};
  }
  std::unordered_set<Gen> W;
  for (Gen w : cert.cochain) {
    if (!gen_valid(w, C.n()) || C.grading(w) != b) return false;
    W.insert(w);
  }
  if (W.size() != cert.cochain.size() || !W.count(cert.target)) return false;
  // Any source meeting supp(w) has a rectangle into some w; check them all.
  std::unordered_set<Gen> sources;
  for (Gen w : cert.cochain) C.for_each_rect_in(w, [&](int, int, Gen s) { sources.insert(s); });
  for (Gen s : sources) {
    int parity = 0;
    for (Gen y : C.differential(s)) parity ^= int(W.count(y));
    if (parity) return false;
  }
  return true;
}

inline nlohmann::json gen_to_json(Gen g, int n) {
  auto p = unpack(g, n);
  for (int& v : p) ++v;
  return p;
}

inline Gen gen_from_json(const nlohmann::json& j, int n) {
  auto p = j.get<std::vector<int>>();
  if (int(p.size()) != n) throw grid_error(grid_errc::length_mismatch, "generator has wrong length");
  for (int& v : p) --v;
  if (!detail::is_perm(p)) throw grid_error(grid_errc::not_permutation, "generator is not a permutation");
  return pack(p);
}

inline nlohmann::json certificate_to_json(const VanishingCertificate& c) {
  nlohmann::json j;
  j["grid"] = grid_to_json(c.grid);
  j["grid_hash"] = grid_hash(c.grid);
  j["sign"] = std::string(1, c.sign);
  j["bigrading"] = {{"maslov", c.bigrading.maslov}, {"alexander2", c.bigrading.alexander2}};
  j["verdict"] = verdict_name(c.verdict);
  j["system"] = {{"rows", c.rows}, {"cols", c.cols}};
  auto list = [&](const std::vector<Gen>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Gen g : v) a.push_back(gen_to_json(g, c.grid.n));
    return a;
  };
  if (c.verdict == Verdict::zero) j["witness"] = list(c.witness);
  if (c.verdict == Verdict::nonzero) j["cochain"] = list(c.cochain);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline VanishingCertificate certificate_from_json(const nlohmann::json& j) {
  VanishingCertificate c;
  try {
    c.grid = grid_from_json(j.at("grid"));
    if (j.contains("grid_hash") && j.at("grid_hash").get<std::string>() != grid_hash(c.grid))
      throw grid_error(grid_errc::syntax, "certificate grid hash mismatch");
    auto s = j.at("sign").get<std::string>();
    if (s != "+" && s != "-") throw grid_error(grid_errc::syntax, "certificate sign must be + or -");
    c.sign = s[0];
    c.bigrading = {j.at("bigrading").at("maslov").get<int>(), j.at("bigrading").at("alexander2").get<int>()};
    auto v = j.at("verdict").get<std::string>();
    c.verdict = v == "zero" ? Verdict::zero : v == "nonzero" ? Verdict::nonzero : Verdict::inconclusive;
    GridComplex C(c.grid);
    c.target = canonical_cycle(C, c.sign);
    if (j.contains("witness"))
      for (auto& g : j["witness"]) c.witness.push_back(gen_from_json(g, c.grid.n));
    if (j.contains("cochain"))
      for (auto& g : j["cochain"]) c.cochain.push_back(gen_from_json(g, c.grid.n));
  } catch (const nlohmann::json::exception& e) {
    throw grid_error(grid_errc::syntax, std::string("bad certificate JSON: ") + e.what());
  }
  return c;
}

// dim of tilde homology per bigrading, from all n! generators.
inline std::map<Bigrading, int> homology_dimensions(const GridComplex& C, std::size_t budget = 100000000) {
  std::size_t total = 1;
  for (int k = 2; k <= C.n(); ++k) {
    total *= std::size_t(k);
    if (total > budget) throw budget_exceeded("homology_dimensions: n! exceeds the generator budget");
  }
  auto buckets = all_generators_by_bigrading(C);
  std::map<Bigrading, int> rk;  // rank of the boundary leaving bigrading b
  for (auto& [b, src] : buckets) {
    auto it = buckets.find({b.maslov - 1, b.alexander2});
    if (it == buckets.end()) {
      rk[b] = 0;
      continue;
    }
    rk[b] = rank(detail::build_boundary(C, src, it->second));
  }
  std::map<Bigrading, int> dims;
  for (auto& [b, src] : buckets) {
    int in = 0;
    if (auto it = rk.find({b.maslov + 1, b.alexander2}); it != rk.end()) in = it->second;
    int d = int(src.size()) - rk[b] - in;
    if (d) dims[b] = d;
  }
  return dims;
}

inline std::map<Bigrading, int> homology_dimensions(const GridDiagram& g, std::size_t budget = 100000000) {
  return homology_dimensions(GridComplex(g), budget);
}

}  // namespace gridlag
