#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gridlag {

inline constexpr int max_grid = 16;

enum class grid_errc {
  syntax,
  not_permutation,
  length_mismatch,
  shared_square,
  too_small,
  too_large,
  illegal_move,
};

struct grid_error : std::runtime_error {
  grid_errc code;
  grid_error(grid_errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

// Toroidal n x n grid. Rows/columns are 0-based internally; the text and JSON
// formats are 1-based and column-major (x[c] is the row of the X in column c).
struct GridDiagram {
  int n = 0;
  std::vector<int> x;
  std::vector<int> o;

  friend bool operator==(const GridDiagram&, const GridDiagram&) = default;

  int x_col_of_row(int r) const { return int(std::find(x.begin(), x.end(), r) - x.begin()); }
  int o_col_of_row(int r) const { return int(std::find(o.begin(), o.end(), r) - o.begin()); }
};

namespace detail {

inline bool is_perm(const std::vector<int>& v) {
  std::vector<char> seen(v.size(), 0);
  for (int a : v) {
    if (a < 0 || a >= int(v.size()) || seen[a]) return false;
    seen[a] = 1;
  }
  return true;
}

inline int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace detail

inline void validate(const GridDiagram& g) {
  if (g.n < 2) throw grid_error(grid_errc::too_small, "grid number must be at least 2");
  if (g.n > max_grid)
    throw grid_error(grid_errc::too_large, "grid number " + std::to_string(g.n) + " exceeds " +
                                               std::to_string(max_grid));
  if (int(g.x.size()) != g.n || int(g.o.size()) != g.n)
    throw grid_error(grid_errc::length_mismatch, "X and O lists must both have length n");
  if (!detail::is_perm(g.x)) throw grid_error(grid_errc::not_permutation, "X list is not a permutation of 1..n");
  if (!detail::is_perm(g.o)) throw grid_error(grid_errc::not_permutation, "O list is not a permutation of 1..n");
  for (int c = 0; c < g.n; ++c)
    if (g.x[c] == g.o[c])
      throw grid_error(grid_errc::shared_square, "shared square in column " + std::to_string(c + 1));
}

inline GridDiagram make_grid(std::vector<int> x1, std::vector<int> o1) {
  GridDiagram g;
  if (x1.size() != o1.size())
    throw grid_error(grid_errc::length_mismatch, "X has " + std::to_string(x1.size()) + " entries, O has " +
                                                     std::to_string(o1.size()));
  g.n = int(x1.size());
  for (int& v : x1) --v;
  for (int& v : o1) --v;
  g.x = std::move(x1);
  g.o = std::move(o1);
  validate(g);
  return g;
}

// Accepts "X={2,1} O={1,2}" (whitespace-insensitive, either order, '[' or '{').
// Lines starting with '#' are comments.
inline GridDiagram parse_grid(std::string_view text) {
  std::vector<int> lists[2];
  bool have[2] = {false, false};
  int line = 1, col = 1;
  size_t i = 0;
  auto fail = [&](const std::string& msg) -> GridDiagram {
    throw grid_error(grid_errc::syntax, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                            ": " + msg);
  };
  auto adv = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto skip_ws = [&] {
    while (i < text.size()) {
      if (text[i] == '#') {
        while (i < text.size() && text[i] != '\n') adv();
      } else if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',' || text[i] == ';') {
        adv();
      } else {
        break;
      }
    }
  };
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    char label = char(std::toupper(static_cast<unsigned char>(text[i])));
    if (label != 'X' && label != 'O') return fail(std::string("expected 'X' or 'O', found '") + text[i] + "'");
    int which = label == 'X' ? 0 : 1;
    if (have[which]) return fail(std::string("duplicate ") + label + " list");
    adv();
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) adv();
    if (i < text.size() && (text[i] == '=' || text[i] == ':')) adv();
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) adv();
    if (i >= text.size() || (text[i] != '{' && text[i] != '[')) return fail("expected '{' or '['");
    char close = text[i] == '{' ? '}' : ']';
    adv();
    while (true) {
      while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) adv();
      if (i >= text.size()) return fail("unterminated list");
      if (text[i] == close) {
        adv();
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return fail(std::string("unexpected '") + text[i] + "'");
      long v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + (text[i] - '0');
        if (v > 1000) return fail("entry out of range");
        adv();
      }
      lists[which].push_back(int(v));
    }
    have[which] = true;
  }
  if (!have[0] || !have[1]) return fail("need both an X list and an O list");
  for (auto& l : lists)
    for (int v : l)
      if (v < 1 || v > int(l.size()))
        throw grid_error(grid_errc::not_permutation, "entry " + std::to_string(v) + " outside 1.." +
                                                         std::to_string(l.size()));
  return make_grid(std::move(lists[0]), std::move(lists[1]));
}

inline std::string serialize_grid(const GridDiagram& g) {
  std::string s = "X={";
  for (int c = 0; c < g.n; ++c) s += (c ? "," : "") + std::to_string(g.x[c] + 1);
  s += "} O={";
  for (int c = 0; c < g.n; ++c) s += (c ? "," : "") + std::to_string(g.o[c] + 1);
  return s + "}";
}

inline nlohmann::json grid_to_json(const GridDiagram& g) {
  std::vector<int> x(g.x), o(g.o);
  for (int& v : x) ++v;
  for (int& v : o) ++v;
  return {{"n", g.n}, {"x", x}, {"o", o}};
}

inline GridDiagram grid_from_json(const nlohmann::json& j) {
  try {
    auto g = make_grid(j.at("x").get<std::vector<int>>(), j.at("o").get<std::vector<int>>());
    if (j.contains("n") && j.at("n").get<int>() != g.n)
      throw grid_error(grid_errc::length_mismatch, "declared n disagrees with list length");
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw grid_error(grid_errc::syntax, std::string("bad grid JSON: ") + e.what());
  }
}

// Either format; JSON if the first non-space character is '{' followed by '"'.
inline GridDiagram read_grid(std::string_view text) {
  auto p = text.find_first_not_of(" \t\r\n");
  if (p != std::string_view::npos && text[p] == '{') {
    auto q = text.find_first_not_of(" \t\r\n", p + 1);
    if (q != std::string_view::npos && text[q] == '"') {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw grid_error(grid_errc::syntax, e.what());
      }
      return grid_from_json(j);
    }
  }
  return parse_grid(text);
}

// FNV-1a over the serialized form; used to tie certificates to grids.
inline std::string grid_hash(const GridDiagram& g) {
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : serialize_grid(g)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

// Cycles of c -> x^{-1}(o[c]).
inline int component_count(const GridDiagram& g) {
  std::vector<int> xinv(g.n);
  for (int c = 0; c < g.n; ++c) xinv[g.x[c]] = c;
  std::vector<char> seen(g.n, 0);
  int cycles = 0;
  for (int c = 0; c < g.n; ++c) {
    if (seen[c]) continue;
    ++cycles;
    for (int t = c; !seen[t]; t = xinv[g.o[t]]) seen[t] = 1;
  }
  return cycles;
}

// Column c of each component, by component; used by the composite bookkeeping.
inline std::vector<int> component_labels(const GridDiagram& g) {
  std::vector<int> xinv(g.n), lab(g.n, -1);
  for (int c = 0; c < g.n; ++c) xinv[g.x[c]] = c;
  int k = 0;
  for (int c = 0; c < g.n; ++c) {
    if (lab[c] >= 0) continue;
    for (int t = c; lab[t] < 0; t = xinv[g.o[t]]) lab[t] = k;
    ++k;
  }
  return lab;
}

inline GridDiagram cyclic_translate(const GridDiagram& g, int dx, int dy) {
  GridDiagram h = g;
  for (int c = 0; c < g.n; ++c) {
    int nc = detail::mod(c + dx, g.n);
    h.x[nc] = detail::mod(g.x[c] + dy, g.n);
    h.o[nc] = detail::mod(g.o[c] + dy, g.n);
  }
  return h;
}

// Reflection in the diagonal: column c <-> row c.
inline GridDiagram transpose(const GridDiagram& g) {
  GridDiagram h = g;
  for (int c = 0; c < g.n; ++c) {
    h.x[g.x[c]] = c;
    h.o[g.o[c]] = c;
  }
  return h;
}

// Orientation reversal of the traced link.
inline GridDiagram swap_markings(const GridDiagram& g) {
  GridDiagram h = g;
  std::swap(h.x, h.o);
  return h;
}

namespace detail {

// Four marking columns of two adjacent rows must be distinct and must not
// interleave on the circle.
inline bool rows_commutable(const GridDiagram& g, int lower, int upper) {
  int a0 = g.x_col_of_row(upper), a1 = g.o_col_of_row(upper);
  int b0 = g.x_col_of_row(lower), b1 = g.o_col_of_row(lower);
  if (a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1) return false;
  auto inside = [&](int t) {  // strictly inside the arc a0 -> a1 going right
    return mod(t - a0, g.n) < mod(a1 - a0, g.n);
  };
  return inside(b0) == inside(b1);
}

}  // namespace detail

// Swaps rows r and r+1 (0-based, cyclic).
inline GridDiagram commute_rows(const GridDiagram& g, int r) {
  int lower = detail::mod(r, g.n), upper = detail::mod(r + 1, g.n);
  if (!detail::rows_commutable(g, lower, upper))
    throw grid_error(grid_errc::illegal_move, "rows " + std::to_string(lower + 1) + " and " +
                                                  std::to_string(upper + 1) + " interleave; commutation not allowed");
  GridDiagram h = g;
  for (int c = 0; c < g.n; ++c) {
    for (int* v : {&h.x[c], &h.o[c]}) {
      if (*v == lower)
        *v = upper;
      else if (*v == upper)
        *v = lower;
    }
  }
  return h;
}

// Swaps columns c and c+1 (0-based, cyclic).
inline GridDiagram commute_columns(const GridDiagram& g, int c) {
  int a = detail::mod(c, g.n), b = detail::mod(c + 1, g.n);
  auto t = transpose(g);
  if (!detail::rows_commutable(t, a, b))
    throw grid_error(grid_errc::illegal_move, "columns " + std::to_string(a + 1) + " and " +
                                                  std::to_string(b + 1) + " interleave; commutation not allowed");
  GridDiagram h = g;
  std::swap(h.x[a], h.x[b]);
  std::swap(h.o[a], h.o[b]);
  return h;
}

// Stabilization type names the empty square of the 2x2 block that replaces the
// X in column c; the two new X's sit on the other diagonal, the new O opposite
// the empty square.  Empirically X:NE raises r (S+) and X:SW lowers it (S-);
// X:NW and X:SE leave (tb, r) unchanged.
enum class Quadrant { NW, NE, SW, SE };

inline Quadrant parse_quadrant(std::string_view s) {
  if (s.size() >= 2 && (s[0] == 'X' || s[0] == 'x') && s[1] == ':') s.remove_prefix(2);
  if (s == "NW") return Quadrant::NW;
  if (s == "NE") return Quadrant::NE;
  if (s == "SW") return Quadrant::SW;
  if (s == "SE") return Quadrant::SE;
  throw grid_error(grid_errc::syntax, "unknown stabilization type '" + std::string(s) + "'");
}

inline const char* quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::NW: return "X:NW";
    case Quadrant::NE: return "X:NE";
    case Quadrant::SW: return "X:SW";
    case Quadrant::SE: return "X:SE";
  }
  return "?";
}

namespace detail {
inline std::array<int, 2> quad_offset(Quadrant q) {
  switch (q) {
    case Quadrant::NW: return {0, 1};
    case Quadrant::NE: return {1, 1};
    case Quadrant::SW: return {0, 0};
    case Quadrant::SE: return {1, 0};
  }
  return {0, 0};
}
}  // namespace detail

inline GridDiagram stabilize(const GridDiagram& g, int c, Quadrant type) {
  validate(g);
  if (c < 0 || c >= g.n) throw grid_error(grid_errc::illegal_move, "stabilization column out of range");
  if (g.n + 1 > max_grid) throw grid_error(grid_errc::too_large, "stabilization would exceed the maximum grid size");
  const int n = g.n, r = g.x[c];
  auto q = detail::quad_offset(type);
  std::array<int, 2> opp{1 - q[0], 1 - q[1]};
  auto cs = [&](int t) { return t < c ? t : t + 1; };
  auto rs = [&](int v) { return v < r ? v : v + 1; };
  GridDiagram h;
  h.n = n + 1;
  h.x.assign(n + 1, -1);
  h.o.assign(n + 1, -1);
  int row_r_o = g.o_col_of_row(r);
  for (int t = 0; t < n; ++t) {
    if (t == c) continue;
    h.x[cs(t)] = rs(g.x[t]);
    if (t != row_r_o) h.o[cs(t)] = rs(g.o[t]);
  }
  h.x[c + 1 - q[0]] = r + q[1];
  h.x[c + q[0]] = r + 1 - q[1];
  h.o[c + opp[0]] = r + opp[1];
  h.o[c + q[0]] = rs(g.o[c]);
  h.o[cs(row_r_o)] = r + q[1];
  validate(h);
  return h;
}

// Inverse of stabilize(., c, type): the block occupies columns c, c+1.
inline GridDiagram destabilize(const GridDiagram& h, int c, Quadrant type) {
  validate(h);
  const int n = h.n - 1;
  if (n < 2) throw grid_error(grid_errc::illegal_move, "cannot destabilize a 2x2 grid");
  if (c < 0 || c + 1 >= h.n) throw grid_error(grid_errc::illegal_move, "destabilization column out of range");
  auto q = detail::quad_offset(type);
  std::array<int, 2> opp{1 - q[0], 1 - q[1]};
  int r = h.x[c + 1 - q[0]] - q[1];
  bool ok = r >= 0 && r + 1 < h.n && h.x[c + q[0]] == r + 1 - q[1] && h.o[c + opp[0]] == r + opp[1];
  if (!ok)
    throw grid_error(grid_errc::illegal_move, "no " + std::string(quadrant_name(type)) +
                                                  " stabilization block at column " + std::to_string(c + 1));
  int outer_o_col = h.o_col_of_row(r + q[1]);
  auto ci = [&](int t) { return t <= c ? t : t - 1; };
  auto ri = [&](int v) { return v <= r ? v : v - 1; };
  GridDiagram g;
  g.n = n;
  g.x.assign(n, -1);
  g.o.assign(n, -1);
  for (int t = 0; t < h.n; ++t) {
    if (t == c || t == c + 1) continue;
    g.x[ci(t)] = ri(h.x[t]);
    g.o[ci(t)] = t == outer_o_col ? r : ri(h.o[t]);
  }
  g.x[c] = r;
  g.o[c] = ri(h.o[c + q[0]]);
  validate(g);
  return g;
}

inline std::string ascii_grid(const GridDiagram& g) {
  std::string s;
  for (int r = g.n - 1; r >= 0; --r) {
    for (int c = 0; c < g.n; ++c) s += g.x[c] == r ? 'X' : g.o[c] == r ? 'O' : '.';
    s += '\n';
  }
  return s;
}

}  // namespace gridlag
