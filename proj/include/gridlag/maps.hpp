#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "complex.hpp"
#include "grid.hpp"
#include "homology.hpp"

namespace gridlag {

inline Gen gen_inverse(Gen g, int n) {
  Gen h = 0;
  for (int c = 0; c < n; ++c) h = gen_set(h, gen_at(g, c), c);
  return h;
}

// ---------------------------------------------------------------------------
// Chain maps

// A linear map S(source) -> F2<S(target)>, evaluated column by column.
struct ChainMapRecord {
  GridDiagram source, target;
  Bigrading bidegree;  // (Maslov delta, doubled Alexander delta)
  std::string label;
  std::function<std::vector<Gen>(Gen)> column;

  std::vector<Gen> operator()(Gen x) const { return column(x); }

  std::vector<Gen> apply(const std::vector<Gen>& chain) const {
    std::vector<Gen> acc;
    for (Gen x : chain) {
      auto c = column(x);
      acc.insert(acc.end(), c.begin(), c.end());
    }
    return GridComplex::reduce_mod2(std::move(acc));
  }
};

inline ChainMapRecord identity_map(const GridDiagram& g) {
  return {g, g, {0, 0}, "identity", [](Gen x) { return std::vector<Gen>{x}; }};
}

// outer after inner; inner.target must be outer.source.
inline ChainMapRecord compose(const ChainMapRecord& outer, const ChainMapRecord& inner) {
  if (!(inner.target == outer.source)) throw std::invalid_argument("compose: grids do not match");
  auto o = std::make_shared<ChainMapRecord>(outer);
  auto i = std::make_shared<ChainMapRecord>(inner);
  return {inner.source, outer.target,
          {inner.bidegree.maslov + outer.bidegree.maslov, inner.bidegree.alexander2 + outer.bidegree.alexander2},
          outer.label + " o " + inner.label, [o, i](Gen x) { return o->apply((*i)(x)); }};
}

// Every generator when n! is small, otherwise a deterministic random sample
// that always contains x+ and x-.
inline std::vector<Gen> check_domain(const GridDiagram& g, std::size_t exhaustive_limit = 40320,
                                     std::size_t sample = 2000, std::uint64_t seed = 1) {
  std::size_t fact = 1;
  for (int k = 2; k <= g.n && fact <= exhaustive_limit; ++k) fact *= k;
  std::vector<int> p(g.n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Gen> out;
  if (fact <= exhaustive_limit) {
    do out.push_back(pack(p));
    while (std::next_permutation(p.begin(), p.end()));
    return out;
  }
  GridComplex C(g);
  out = {C.x_plus(), C.x_minus()};
  std::mt19937_64 rng(seed);
  while (out.size() < sample + 2) {
    std::shuffle(p.begin(), p.end(), rng);
    out.push_back(pack(p));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Columns of f on a domain, computed in parallel over source generators.
inline std::vector<std::pair<Gen, std::vector<Gen>>> materialize(const ChainMapRecord& f,
                                                                  const std::vector<Gen>& domain,
                                                                  int threads = 1) {
  std::vector<std::pair<Gen, std::vector<Gen>>> out(domain.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = {domain[i], f(domain[i])};
  };
  threads = std::max(1, threads);
  if (threads == 1 || domain.size() < 64) {
    work(0, domain.size());
    return out;
  }
  std::vector<std::thread> pool;
  std::size_t step = (domain.size() + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * step, hi = std::min(domain.size(), lo + step);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

// Generators x in the domain with d(f(x)) != f(d(x)).
inline std::vector<Gen> chain_map_defects(const ChainMapRecord& f, const std::vector<Gen>& domain) {
  GridComplex S(f.source), T(f.target);
  std::vector<Gen> bad;
  for (Gen x : domain) {
    std::vector<Gen> lhs;
    for (Gen y : f(x)) {
      auto d = T.differential(y);
      lhs.insert(lhs.end(), d.begin(), d.end());
    }
    if (GridComplex::reduce_mod2(std::move(lhs)) != f.apply(S.differential(x))) bad.push_back(x);
  }
  return bad;
}

// Generators x whose image has a term off the declared bidegree.
inline std::vector<Gen> homogeneity_defects(const ChainMapRecord& f, const std::vector<Gen>& domain) {
  GridComplex S(f.source), T(f.target);
  std::vector<Gen> bad;
  for (Gen x : domain) {
    Bigrading want = S.grading(x);
    want.maslov += f.bidegree.maslov;
    want.alexander2 += f.bidegree.alexander2;
    for (Gen y : f(x))
      if (T.grading(y) != want) {
        bad.push_back(x);
        break;
      }
  }
  return bad;
}

enum class Preservation { exact, homologous, not_preserved, unknown };

inline const char* preservation_name(Preservation p) {
  switch (p) {
    case Preservation::exact: return "exact";
    case Preservation::homologous: return "homologous";
    case Preservation::not_preserved: return "not preserved";
    case Preservation::unknown: return "unknown";
  }
  return "?";
}

// How f(x^sign(source)) relates to x^sign(target).
inline Preservation preservation(const ChainMapRecord& f, char sign, std::size_t budget = 100000000) {
  GridComplex S(f.source), T(f.target);
  Gen xs = canonical_cycle(S, sign), xt = canonical_cycle(T, sign);
  auto img = f(xs);
  if (img == std::vector<Gen>{xt}) return Preservation::exact;
  img.push_back(xt);
  auto r = chain_is_boundary(T, img, budget);
  if (!r) return Preservation::unknown;
  return *r ? Preservation::homologous : Preservation::not_preserved;
}

inline nlohmann::json record_to_json(const ChainMapRecord& f, const std::vector<Gen>& domain, int threads = 1) {
  nlohmann::json j;
  j["label"] = f.label;
  j["source"] = grid_to_json(f.source);
  j["target"] = grid_to_json(f.target);
  j["source_hash"] = grid_hash(f.source);
  j["target_hash"] = grid_hash(f.target);
  j["bidegree"] = {{"maslov", f.bidegree.maslov}, {"alexander2", f.bidegree.alexander2}};
  auto cols = materialize(f, domain, threads);
  nlohmann::json arr = nlohmann::json::array();
  for (auto& [x, ys] : cols) {
    if (ys.empty()) continue;
    std::sort(ys.begin(), ys.end(), [n = f.target.n](Gen a, Gen b) { return gen_less(a, b, n); });
    nlohmann::json terms = nlohmann::json::array();
    for (Gen y : ys) terms.push_back(gen_to_json(y, f.target.n));
    arr.push_back({{"from", gen_to_json(x, f.source.n)}, {"to", terms}});
  }
  j["columns"] = arr;
  j["domain_size"] = domain.size();
  return j;
}

// ---------------------------------------------------------------------------
// Pinches

enum class PinchCase { I, II };  // I: the two moved markings are X's; II: O's

inline const char* pinch_case_name(PinchCase c) { return c == PinchCase::I ? "I" : "II"; }

// Which side of the middle crossing line the point a is placed.  a cannot sit
// on the line itself (the triple point drawn in the figures): there the
// pentagon count is not a chain map.  Either generic placement is; "right"
// carries x+ exactly and x- up to homology, "left" the reverse.
enum class Resolution { right, left };

struct PinchSite {
  PinchCase kind = PinchCase::I;
  int c = 0;  // column of the row-k special marking in G-; its partner is in column c+1
  int k = 0;  // the two rows are k-1 and k
};

namespace detail {

inline std::vector<int>& special_row(GridDiagram& g, PinchCase kind) { return kind == PinchCase::I ? g.x : g.o; }
inline const std::vector<int>& special_row(const GridDiagram& g, PinchCase kind) {
  return kind == PinchCase::I ? g.x : g.o;
}

}  // namespace detail

// G+ from G-: rows r and r+1 (0-based lower row r), where G- has the special
// marking of row r+1 in some column c and the one of row r in column c+1.  G+
// swaps them.  With no case given, X's are tried before O's.
inline std::pair<GridDiagram, PinchSite> pinch(const GridDiagram& gm, int r, std::optional<PinchCase> kind = {}) {
  const int n = gm.n;
  const int lo = detail::mod(r, n), hi = detail::mod(r + 1, n);
  std::string why;
  for (PinchCase pc : {PinchCase::I, PinchCase::II}) {
    if (kind && *kind != pc) continue;
    const auto& m = detail::special_row(gm, pc);
    const char* name = pc == PinchCase::I ? "X" : "O";
    int c = int(std::find(m.begin(), m.end(), hi) - m.begin());
    int c1 = int(std::find(m.begin(), m.end(), lo) - m.begin());
    if (c1 != detail::mod(c + 1, n)) {
      if (why.empty())
        why = std::string(name) + " markings of rows " + std::to_string(lo + 1) + "," + std::to_string(hi + 1) +
              " sit in columns " + std::to_string(c1 + 1) + "," + std::to_string(c + 1) +
              (c == detail::mod(c1 + 1, n) ? " (reverse saddle; swap the grids)" : " (not adjacent)");
      continue;
    }
    GridDiagram gp = gm;
    auto& mp = detail::special_row(gp, pc);
    mp[c] = lo;
    mp[c1] = hi;
    try {
      validate(gp);
    } catch (const grid_error&) {
      if (why.empty()) why = "pinched grid would put an X and an O in one square";
      continue;
    }
    return {gp, PinchSite{pc, c, hi}};
  }
  throw grid_error(grid_errc::illegal_move, "not in pinch position: " + why);
}

// Recognizes a pinch pair; G+ and G- must differ exactly in two markings of
// one type, in adjacent columns and adjacent rows.
inline PinchSite detect_pinch(const GridDiagram& gp, const GridDiagram& gm) {
  if (gp.n != gm.n) throw grid_error(grid_errc::illegal_move, "not in pinch position: grid sizes differ");
  const int n = gp.n;
  std::vector<int> dx, dox;
  for (int c = 0; c < n; ++c) {
    if (gp.x[c] != gm.x[c]) dx.push_back(c);
    if (gp.o[c] != gm.o[c]) dox.push_back(c);
  }
  if (dx.empty() && dox.empty()) throw grid_error(grid_errc::illegal_move, "not in pinch position: grids are identical");
  if (!dx.empty() && !dox.empty())
    throw grid_error(grid_errc::illegal_move,
                     "not in pinch position: both X and O markings differ (mixed pair breaks orientation); first X "
                     "mismatch in column " + std::to_string(dx[0] + 1) + ", first O mismatch in column " +
                         std::to_string(dox[0] + 1));
  PinchCase kind = dx.empty() ? PinchCase::II : PinchCase::I;
  const auto& d = dx.empty() ? dox : dx;
  if (d.size() != 2)
    throw grid_error(grid_errc::illegal_move, "not in pinch position: " + std::to_string(d.size()) +
                                                  " columns differ, first mismatch in column " +
                                                  std::to_string(d[0] + 1));
  int c = detail::mod(d[1] + 1, n) == d[0] ? d[1] : d[0];
  if (detail::mod(c + 1, n) != (c == d[0] ? d[1] : d[0]))
    throw grid_error(grid_errc::illegal_move, "not in pinch position: differing columns " + std::to_string(d[0] + 1) +
                                                  " and " + std::to_string(d[1] + 1) + " are not adjacent");
  const auto& mm = detail::special_row(gm, kind);
  int k = mm[c];
  auto [expect, site] = pinch(gm, k - 1, kind);  // throws with a diagnostic if the pattern is wrong
  if (!(expect == gp))
    throw grid_error(grid_errc::illegal_move, "not in pinch position: column " + std::to_string(c + 1) +
                                                  " does not match the pinch pattern");
  return site;
}

// ---------------------------------------------------------------------------
// Combined diagrams

// Source and target grids drawn on one torus; they differ only along one
// horizontal circle: beta (source) and gamma (target), meeting at a and b.
// Positions along the circle are in quarter columns: vertical line v at 4v,
// the centre of column t at 4t+2.  On the arc (b, a) beta runs above gamma.
struct CombinedDiagram {
  enum class Kind { pinch_I, pinch_II, commutation } kind = Kind::pinch_I;
  GridDiagram source, target;
  int k = 0;                                 // beta/gamma replace the circle at the bottom of row k
  int pa = 0, pb = 0;                        // positions of a and b
  std::vector<int> strip;                    // positions of markings between beta and gamma
  std::vector<std::array<int, 2>> ordinary;  // (column, row) of every other marking
};

inline CombinedDiagram combine_pinch(const GridDiagram& gp, const GridDiagram& gm, Resolution res = Resolution::right) {
  auto site = detect_pinch(gp, gm);
  const int n = gp.n, N = 4 * n;
  CombinedDiagram D;
  D.kind = site.kind == PinchCase::I ? CombinedDiagram::Kind::pinch_I : CombinedDiagram::Kind::pinch_II;
  D.source = gp;
  D.target = gm;
  D.k = site.k;
  int c1 = detail::mod(site.c + 1, n);
  D.strip = {4 * site.c + 2, 4 * c1 + 2};
  // a beside the line between the two special columns, b just past the next line.
  // Offsets read off the local pictures; worth a second look.  The scan in
  // the acceptance run shows no placement carries both x+ and x- exactly.
  D.pa = detail::mod(4 * c1 + (res == Resolution::right ? 1 : -1), N);
  D.pb = detail::mod(4 * c1 + 5, N);
  for (int t = 0; t < n; ++t) {
    bool sp = t == site.c || t == c1;
    if (!(sp && site.kind == PinchCase::I)) D.ordinary.push_back({t, gp.x[t]});
    if (!(sp && site.kind == PinchCase::II)) D.ordinary.push_back({t, gp.o[t]});
  }
  return D;
}

// Rows r and r+1 of g interchanged; all four markings of the two rows lie in
// the strip.  a is where beta climbs above gamma going right: just inside the
// first column whose marking is in the upper row.
inline CombinedDiagram combine_row_commutation(const GridDiagram& g, int r) {
  const int n = g.n, N = 4 * n;
  CombinedDiagram D;
  D.kind = CombinedDiagram::Kind::commutation;
  D.source = g;
  D.target = commute_rows(g, r);
  const int lo = detail::mod(r, n), hi = detail::mod(r + 1, n);
  D.k = hi;
  std::vector<std::pair<int, char>> lab;
  for (int t = 0; t < n; ++t) {
    for (int row : {g.x[t], g.o[t]}) {
      if (row == hi) lab.push_back({t, 'u'});
      else if (row == lo) lab.push_back({t, 'd'});
      else D.ordinary.push_back({t, row});
    }
  }
  std::sort(lab.begin(), lab.end());
  for (auto& [t, s] : lab) D.strip.push_back(4 * t + 2);
  for (int q = 0; q < 4; ++q) {
    auto [t1, s1] = lab[(q + 1) % 4];
    if (lab[q].second == 'd' && s1 == 'u') D.pa = detail::mod(4 * t1 + 1, N);
    if (lab[q].second == 'u' && s1 == 'd') D.pb = detail::mod(4 * t1 + 1, N);
  }
  return D;
}

namespace detail {

inline bool cyc_in(int a, int start, int len, int n) { return mod(a - start, n) < len; }

// Pentagons out of x: one corner is the point of x on beta, one is a, the
// other three are x- and y-points; empty of every marking and of x.
inline std::vector<Gen> pentagons(const CombinedDiagram& D, Gen x) {
  const int n = D.source.n, N = 4 * n, k = D.k;
  auto inB1 = [&](int p) { return 0 < mod(p - D.pb, N) && mod(p - D.pb, N) < mod(D.pa - D.pb, N); };
  const int i = gen_row_col(x, n, k);
  std::vector<Gen> out;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const int h = gen_at(x, j);
    for (char typ : {'U', 'D'}) {
      int s0, w, r0, hh;
      if (typ == 'U') {  // rightwards from x_i along beta through a, region above
        if (mod(D.pa - 4 * i, N) > mod(4 * j - 4 * i, N)) continue;
        s0 = i, w = mod(j - i, n), r0 = k, hh = mod(h - k, n);
      } else {  // leftwards through a, region below
        if (mod(4 * i - D.pa, N) > mod(4 * i - 4 * j, N)) continue;
        s0 = j, w = mod(i - j, n), r0 = h, hh = mod(k - h, n);
      }
      bool ok = true;
      for (auto [mc, mr] : D.ordinary)
        if (cyc_in(mc, s0, w, n) && cyc_in(mr, r0, hh, n)) {
          ok = false;
          break;
        }
      for (int t = 0; ok && t < n; ++t)
        if (t != i && t != j && cyc_in(t, s0 + 1, w - 1, n) && cyc_in(gen_at(x, t), r0 + 1, hh - 1, n)) ok = false;
      // A strip marking lies in the region iff the boundary passes above it
      // (U) or below it (D) at its column.
      for (int m : D.strip) {
        if (!ok) break;
        if (!cyc_in(m / 4, s0, w, n)) continue;
        bool on_beta = typ == 'U' ? mod(m - 4 * i, N) < mod(D.pa - 4 * i, N) : mod(4 * i - m, N) < mod(4 * i - D.pa, N);
        bool top = on_beta == inB1(m);
        if (typ == 'U' ? !top : top) ok = false;
      }
      if (ok) out.push_back(gen_swap(x, i, j));
    }
  }
  return GridComplex::reduce_mod2(std::move(out));
}

// The thin triangle between beta and gamma from the point of x on beta to b;
// at most one, with the same generator as its other vertex set.
inline std::vector<Gen> triangles(const CombinedDiagram& D, Gen x) {
  const int n = D.source.n, N = 4 * n;
  const int p = 4 * gen_row_col(x, n, D.k);
  auto inB1 = [&](int q) { return 0 < mod(q - D.pb, N) && mod(q - D.pb, N) < mod(D.pa - D.pb, N); };
  int lo = inB1(p) ? D.pb : p, hi = inB1(p) ? p : D.pb;
  for (int m : D.strip)
    if (0 < mod(m - lo, N) && mod(m - lo, N) < mod(hi - lo, N)) return {};
  return {x};
}

inline Bigrading pinch_bidegree(const GridDiagram& gp, const GridDiagram& gm) {
  int lp = component_count(gp), lm = component_count(gm);
  return {-1, lm == lp + 1 ? 0 : -2};
}

}  // namespace detail

inline ChainMapRecord pentagon_map(const CombinedDiagram& D) {
  if (D.kind == CombinedDiagram::Kind::pinch_II)
    throw grid_error(grid_errc::illegal_move, "pentagon map needs a case I pinch (two X markings differ)");
  auto d = std::make_shared<CombinedDiagram>(D);
  bool pinch = D.kind == CombinedDiagram::Kind::pinch_I;
  return {D.source, D.target, pinch ? detail::pinch_bidegree(D.source, D.target) : Bigrading{0, 0},
          pinch ? "pentagon" : "commutation", [d](Gen x) { return detail::pentagons(*d, x); }};
}

inline ChainMapRecord triangle_map(const CombinedDiagram& D) {
  if (D.kind != CombinedDiagram::Kind::pinch_II)
    throw grid_error(grid_errc::illegal_move, "triangle map needs a case II pinch (two O markings differ)");
  auto d = std::make_shared<CombinedDiagram>(D);
  return {D.source, D.target, detail::pinch_bidegree(D.source, D.target), "triangle",
          [d](Gen x) { return detail::triangles(*d, x); }};
}

inline ChainMapRecord pinch_map(const GridDiagram& gp, const GridDiagram& gm, Resolution res = Resolution::right) {
  auto D = combine_pinch(gp, gm, res);
  return D.kind == CombinedDiagram::Kind::pinch_I ? pentagon_map(D) : triangle_map(D);
}

// ---------------------------------------------------------------------------
// Births

struct BirthData {
  int c = 0;  // column of X1 in G-
  int r = 0;  // rows r, r+1 and columns c+1, c+2 are new in G+
  // In G+: a = lattice point (c+1, r+2), b = lattice point (c+2, r+1).
};

// Two rows and two columns inserted just below and right of the X in column c,
// carrying a split tb = -1 unknot.
inline std::pair<GridDiagram, BirthData> birth_insert(const GridDiagram& gm, int c) {
  if (c < 0 || c >= gm.n) throw grid_error(grid_errc::illegal_move, "birth column out of range");
  if (gm.n + 2 > max_grid) throw grid_error(grid_errc::too_large, "birth would exceed the maximum grid size");
  const int n = gm.n, r = gm.x[c];
  auto cs = [&](int t) { return t <= c ? t : t + 2; };
  auto rs = [&](int v) { return v < r ? v : v + 2; };
  GridDiagram gp;
  gp.n = n + 2;
  gp.x.assign(n + 2, 0);
  gp.o.assign(n + 2, 0);
  for (int t = 0; t < n; ++t) {
    gp.x[cs(t)] = rs(gm.x[t]);
    gp.o[cs(t)] = rs(gm.o[t]);
  }
  gp.x[c + 1] = r;
  gp.o[c + 1] = r + 1;
  gp.x[c + 2] = r + 1;
  gp.o[c + 2] = r;
  validate(gp);
  return {gp, BirthData{c, r}};
}

namespace detail {

// e o psi o Pi: only generators through b with a missing contribute, via the
// rectangle from the point in column c+1 to a that contains exactly the four
// new markings and exactly one interior point, b.
inline std::vector<Gen> birth_column(const GridDiagram& gp, const BirthData& bd, Gen x) {
  const int N = gp.n, c = bd.c, r = bd.r, i = c + 1;
  if (gen_at(x, c + 2) != r + 1 || gen_at(x, i) == r + 2) return {};
  const int j = gen_row_col(x, N, r + 2);
  const int lo = gen_at(x, i), w = mod(j - i, N), h = mod(r + 2 - lo, N);
  for (int t = 0; t < N; ++t) {
    if (!cyc_in(t, i, w, N)) continue;
    bool special = t == c + 1 || t == c + 2;
    if (cyc_in(gp.x[t], lo, h, N) != special || cyc_in(gp.o[t], lo, h, N) != special) return {};
  }
  for (int t = 0; t < N; ++t) {
    if (t == i || t == j) continue;
    bool inside = cyc_in(t, i + 1, w - 1, N) && cyc_in(gen_at(x, t), lo + 1, h - 1, N);
    if (inside != (t == c + 2)) return {};
  }
  Gen y = gen_swap(x, i, j);
  Gen out = 0;
  int col = 0;
  for (int t = 0; t < N; ++t) {
    if (t == c + 1 || t == c + 2) continue;
    int v = gen_at(y, t);
    out = gen_set(out, col++, v <= r ? v : v - 2);
  }
  return {out};
}

}  // namespace detail

inline ChainMapRecord birth_map(const GridDiagram& gp, const GridDiagram& gm, const BirthData& bd) {
  if (gp.n != gm.n + 2) throw std::invalid_argument("birth_map: grid sizes do not match a birth");
  auto g = std::make_shared<GridDiagram>(gp);
  return {gp, gm, {1, 0}, "birth", [g, bd](Gen x) { return detail::birth_column(*g, bd, x); }};
}

// ---------------------------------------------------------------------------
// Isotopies

// Relabeling map from the translated grid back to g.
inline ChainMapRecord translation_map(const GridDiagram& g, int dx, int dy) {
  auto h = cyclic_translate(g, dx, dy);
  const int n = g.n;
  return {h, g, {0, 0}, "translate", [n, dx, dy](Gen y) {
            Gen x = 0;
            for (int c = 0; c < n; ++c) x = gen_set(x, c, detail::mod(gen_at(y, detail::mod(c + dx, n)) - dy, n));
            return std::vector<Gen>{x};
          }};
}

// Commutation pentagon map from g to the grid with rows r, r+1 swapped.
inline ChainMapRecord row_commutation_map(const GridDiagram& g, int r) {
  return pentagon_map(combine_row_commutation(g, r));
}

// Column commutation, conjugated through the transpose.
inline ChainMapRecord column_commutation_map(const GridDiagram& g, int c) {
  auto inner = row_commutation_map(transpose(g), c);
  auto f = std::make_shared<ChainMapRecord>(inner);
  const int n = g.n;
  return {g, commute_columns(g, c), {0, 0}, "commutation", [f, n](Gen x) {
            auto ys = (*f)(gen_inverse(x, n));
            for (auto& y : ys) y = gen_inverse(y, n);
            std::sort(ys.begin(), ys.end());
            return ys;
          }};
}

// ---------------------------------------------------------------------------
// Move scripts

enum class MoveKind { translate, commute_columns, commute_rows, stabilize, destabilize, pinch, birth };

struct Move {
  MoveKind kind = MoveKind::translate;
  int a = 0, b = 0;  // translate: (dx, dy); otherwise a is a 0-based column or row
  Quadrant quadrant = Quadrant::NE;
  std::optional<PinchCase> pinch_case;
};

struct script_error : std::runtime_error {
  int step;  // 0-based; -1 for a malformed script
  script_error(int s, const std::string& what)
      : std::runtime_error(s < 0 ? what : "step " + std::to_string(s + 1) + ": " + what), step(s) {}
};

inline Move move_from_json(const nlohmann::json& j, int step = -1) {
  auto need = [&](const char* key) -> int {
    if (!j.contains(key) || !j[key].is_number_integer())
      throw script_error(step, std::string("missing integer field '") + key + "'");
    return j[key].get<int>();
  };
  if (!j.is_object() || !j.contains("move") || !j["move"].is_string()) throw script_error(step, "move record needs a \"move\" name");
  std::string name = j["move"];
  Move m;
  try {
    if (name == "cyclic_translate") {
      m.kind = MoveKind::translate;
      m.a = j.value("dx", 0);
      m.b = j.value("dy", 0);
    } else if (name == "commute_columns") {
      m.kind = MoveKind::commute_columns;
      m.a = need("column") - 1;
    } else if (name == "commute_rows") {
      m.kind = MoveKind::commute_rows;
      m.a = need("row") - 1;
    } else if (name == "stabilize" || name == "destabilize") {
      m.kind = name == "stabilize" ? MoveKind::stabilize : MoveKind::destabilize;
      m.a = need("column") - 1;
      m.quadrant = parse_quadrant(j.value("type", std::string("X:NE")));
    } else if (name == "pinch") {
      m.kind = MoveKind::pinch;
      m.a = need("row_pair") - 1;
      if (j.contains("case")) {
        std::string c = j["case"];
        if (c == "I") m.pinch_case = PinchCase::I;
        else if (c == "II") m.pinch_case = PinchCase::II;
        else throw script_error(step, "pinch case must be \"I\" or \"II\"");
      }
    } else if (name == "birth") {
      m.kind = MoveKind::birth;
      m.a = need("x1_column") - 1;
    } else {
      throw script_error(step, "unknown move '" + name + "'");
    }
  } catch (const grid_error& e) {
    throw script_error(step, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw script_error(step, e.what());
  }
  return m;
}

inline nlohmann::json move_to_json(const Move& m) {
  switch (m.kind) {
    case MoveKind::translate: return {{"move", "cyclic_translate"}, {"dx", m.a}, {"dy", m.b}};
    case MoveKind::commute_columns: return {{"move", "commute_columns"}, {"column", m.a + 1}};
    case MoveKind::commute_rows: return {{"move", "commute_rows"}, {"row", m.a + 1}};
    case MoveKind::stabilize:
    case MoveKind::destabilize:
      return {{"move", m.kind == MoveKind::stabilize ? "stabilize" : "destabilize"},
              {"column", m.a + 1},
              {"type", std::string("X:") + quadrant_name(m.quadrant)}};
    case MoveKind::pinch: {
      nlohmann::json j = {{"move", "pinch"}, {"row_pair", m.a + 1}};
      if (m.pinch_case) j["case"] = pinch_case_name(*m.pinch_case);
      return j;
    }
    case MoveKind::birth: return {{"move", "birth"}, {"x1_column", m.a + 1}};
  }
  return {};
}

// Accepts a bare array of moves or {"moves": [...]}.
inline std::vector<Move> parse_script(const nlohmann::json& j) {
  const nlohmann::json* arr = &j;
  if (j.is_object() && j.contains("moves")) arr = &j["moves"];
  if (!arr->is_array()) throw script_error(-1, "script must be a JSON array of moves");
  std::vector<Move> out;
  for (int i = 0; i < int(arr->size()); ++i) out.push_back(move_from_json((*arr)[i], i));
  return out;
}

struct ScriptStep {
  Move move;
  GridDiagram before, after;
  std::optional<ChainMapRecord> map;  // after -> before
};

struct ScriptResult {
  GridDiagram g_minus, g_plus;
  std::vector<ScriptStep> steps;
  int births = 0, pinches = 0;
  std::optional<ChainMapRecord> phi;  // G+ -> G-, when every step carries a map
  std::string note;

  int chi() const { return births - pinches; }
  // (chi, chi + |L-| - |L+|): the bidegree the composite must have.
  Bigrading expected_bidegree() const {
    return {chi(), chi() + component_count(g_minus) - component_count(g_plus)};
  }
};

// Replays a script from G- and composes the elementary maps in reverse order.
inline ScriptResult compose_script(const GridDiagram& gm, const std::vector<Move>& script,
                                   Resolution res = Resolution::right) {
  ScriptResult R;
  R.g_minus = gm;
  GridDiagram g = gm;
  ChainMapRecord phi = identity_map(gm);
  bool composable = true;
  for (int s = 0; s < int(script.size()); ++s) {
    const Move& m = script[s];
    ScriptStep st{m, g, g, std::nullopt};
    try {
      switch (m.kind) {
        case MoveKind::translate:
          st.map = translation_map(g, m.a, m.b);
          break;
        case MoveKind::commute_rows:
          st.after = commute_rows(g, m.a);
          st.map = row_commutation_map(st.after, m.a);
          break;
        case MoveKind::commute_columns:
          st.after = commute_columns(g, m.a);
          st.map = column_commutation_map(st.after, m.a);
          break;
        case MoveKind::stabilize:
          st.after = stabilize(g, m.a, m.quadrant);
          break;
        case MoveKind::destabilize:
          st.after = destabilize(g, m.a, m.quadrant);
          break;
        case MoveKind::pinch: {
          st.after = pinch(g, m.a, m.pinch_case).first;
          st.map = pinch_map(st.after, g, res);
          ++R.pinches;
          break;
        }
        case MoveKind::birth: {
          auto [gp, bd] = birth_insert(g, m.a);
          st.after = gp;
          st.map = birth_map(gp, g, bd);
          ++R.births;
          break;
        }
      }
      if (st.map) st.after = st.map->source;
    } catch (const grid_error& e) {
      throw script_error(s, e.what());
    }
    if (st.map && composable)
      phi = compose(phi, *st.map);
    else if (!st.map && composable) {
      composable = false;
      R.note = "no composite map: step " + std::to_string(s + 1) + " is a (de)stabilization";
    }
    g = st.after;
    R.steps.push_back(std::move(st));
  }
  R.g_plus = g;
  if (composable) {
    phi.label = script.empty() ? "identity" : "composite";
    R.phi = phi;
  }
  return R;
}

}  // namespace gridlag
