#include <doctest.h>

#include <map>

#include "support.hpp"

using namespace gridlag;
using testing::all_gens;
using testing::random_grid;

namespace {

// Gradings straight from the planar J pairing, in doubled coordinates:
// generator points at (2c, 2r), markings at (2c+1, 2r+1).
int twoJ(const std::vector<std::array<int, 2>>& P, const std::vector<std::array<int, 2>>& Q) {
  int k = 0;
  for (auto& p : P)
    for (auto& q : Q) k += (p[0] < q[0] && p[1] < q[1]) + (q[0] < p[0] && q[1] < p[1]);
  return k;
}

int maslov_oracle(const std::vector<int>& perm, const std::vector<int>& marks) {
  std::vector<std::array<int, 2>> X, M;
  for (int c = 0; c < int(perm.size()); ++c) X.push_back({2 * c, 2 * perm[c]});
  for (int c = 0; c < int(marks.size()); ++c) M.push_back({2 * c + 1, 2 * marks[c] + 1});
  int s = twoJ(X, X) - 2 * twoJ(X, M) + twoJ(M, M);
  REQUIRE(s % 2 == 0);
  return s / 2 + 1;
}

bool in_arc(int a, int start, int len, int n) { return ((a - start) % n + n) % n < len; }

// Differential by trying every rectangle between every pair of generators.
std::vector<Gen> differential_oracle(const GridDiagram& g, Gen x) {
  const int n = g.n;
  std::vector<Gen> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int xi = gen_at(x, i), xj = gen_at(x, j);
      int w = ((j - i) % n + n) % n, h = ((xj - xi) % n + n) % n;
      bool empty = true;
      for (int c = 0; c < n; ++c)
        if (in_arc(c, i, w, n) && (in_arc(g.x[c], xi, h, n) || in_arc(g.o[c], xi, h, n))) empty = false;
      for (int c = 0; c < n; ++c)
        if (c != i && c != j && in_arc(c, i + 1, w - 1, n) && in_arc(gen_at(x, c), xi + 1, h - 1, n)) empty = false;
      if (empty) out.push_back(gen_swap(x, i, j));
    }
  return GridComplex::reduce_mod2(out);
}

}  // namespace

TEST_SUITE("complex") {
  TEST_CASE("generator packing") {
    std::mt19937_64 rng(1);
    for (int n = 2; n <= max_grid; ++n) {
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      Gen g = pack(p);
      CHECK(unpack(g, n) == p);
      CHECK(gen_valid(g, n));
      CHECK(unpack(gen_swap(g, 0, n - 1), n)[0] == p[n - 1]);
      CHECK(gen_row_col(g, n, p[1]) == 1);
    }
    CHECK_FALSE(gen_valid(pack({0, 0, 1}), 3));
  }

  TEST_CASE("unknot gradings") {
    GridComplex C(parse_grid("X={2,1} O={1,2}"));
    auto k = classical_invariants(C);
    CHECK(k.tb == -1);
    CHECK(k.r == 0);
    CHECK(k.components == 1);
    CHECK(k.plus == Bigrading{0, 0});
    CHECK(k.minus == Bigrading{0, 0});
  }

  TEST_CASE("gradings agree with the planar J pairing") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 40; ++t) {
      auto g = random_grid(2 + t % 5, rng);
      GridComplex C(g);
      int ell = component_count(g);
      for (Gen x : all_gens(g.n)) {
        auto p = unpack(x, g.n);
        int mo = maslov_oracle(p, g.o), mx = maslov_oracle(p, g.x);
        CHECK(C.maslov_O(x) == mo);
        CHECK(C.maslov_X(x) == mx);
        CHECK(C.grading(x) == Bigrading{mo, mo - mx - (g.n - ell)});
      }
    }
  }

  TEST_CASE("differential matches brute-force rectangles") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; ++t) {
      auto g = random_grid(2 + t % 5, rng);
      GridComplex C(g);
      std::map<Gen, std::vector<Gen>> co;
      for (Gen x : all_gens(g.n)) {
        auto d = C.differential(x);
        CHECK(d == differential_oracle(g, x));
        for (Gen y : d) co[y].push_back(x);
      }
      for (auto& [y, xs] : co) {
        std::sort(xs.begin(), xs.end());
        CHECK(C.codifferential(y) == xs);
      }
    }
  }

  TEST_CASE("d^2 = 0 on every grid up to 4x4") {
    for (int n = 2; n <= 4; ++n) {
      std::vector<int> x(n), o(n);
      std::iota(x.begin(), x.end(), 0);
      int grids = 0;
      do {
        std::iota(o.begin(), o.end(), 0);
        do {
          bool clash = false;
          for (int c = 0; c < n; ++c) clash |= x[c] == o[c];
          if (clash) continue;
          ++grids;
          GridComplex C(GridDiagram{n, x, o});
          for (Gen g : all_gens(n)) {
            std::vector<Gen> dd;
            for (Gen y : C.differential(g)) {
              auto d = C.differential(y);
              dd.insert(dd.end(), d.begin(), d.end());
            }
            CHECK(GridComplex::reduce_mod2(dd).empty());
          }
        } while (std::next_permutation(o.begin(), o.end()));
      } while (std::next_permutation(x.begin(), x.end()));
      CHECK(grids > 0);
    }
  }

  TEST_CASE("rectangles drop Maslov by one and keep Alexander") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 30; ++t) {
      auto g = random_grid(3 + t % 4, rng);
      GridComplex C(g);
      for (Gen x : all_gens(g.n)) {
        auto b = C.grading(x);
        C.for_each_rect_out(x, [&](int, int, Gen y) { CHECK(C.grading(y) == Bigrading{b.maslov - 1, b.alexander2}); });
      }
    }
  }

  TEST_CASE("canonical cycles are cycles and read tb, r consistently") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
      auto g = random_grid(2 + t % 12, rng);
      GridComplex C(g);
      CHECK(C.differential(C.x_plus()).empty());
      CHECK(C.differential(C.x_minus()).empty());
      CHECK_NOTHROW(classical_invariants(C));
    }
  }

  TEST_CASE("classical invariants under stabilization") {
    // X:NE and X:SW are the Legendrian stabilizations, the others isotopies
    std::mt19937_64 rng(6);
    for (int t = 0; t < 100; ++t) {
      auto g = random_grid(2 + t % 8, rng);
      auto k = classical_invariants(g);
      int c = int(rng() % g.n);
      auto p = classical_invariants(stabilize(g, c, Quadrant::NE));
      auto m = classical_invariants(stabilize(g, c, Quadrant::SW));
      CHECK(p.tb == k.tb - 1);
      CHECK(p.r == k.r + 1);
      CHECK(m.tb == k.tb - 1);
      CHECK(m.r == k.r - 1);
      for (auto q : {Quadrant::NW, Quadrant::SE}) {
        auto s = classical_invariants(stabilize(g, c, q));
        CHECK(s.tb == k.tb);
        CHECK(s.r == k.r);
      }
    }
  }

  TEST_CASE("orientation reversal swaps X and O and negates r") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
      auto g = random_grid(2 + t % 10, rng);
      auto k = classical_invariants(g), s = classical_invariants(swap_markings(g));
      CHECK(s.tb == k.tb);
      CHECK(s.r == -k.r);
    }
  }

  TEST_CASE("gradings are invariant under cyclic translation") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 40; ++t) {
      auto g = random_grid(2 + t % 6, rng);
      int dx = int(rng() % g.n), dy = int(rng() % g.n);
      GridComplex C(g), T(cyclic_translate(g, dx, dy));
      for (Gen x : all_gens(g.n)) {
        Gen y = 0;
        for (int c = 0; c < g.n; ++c) y = gen_set(y, (c + dx) % g.n, (gen_at(x, c) + dy) % g.n);
        CHECK(T.grading(y) == C.grading(x));
      }
      CHECK(classical_invariants(T).tb == classical_invariants(C).tb);
      CHECK(classical_invariants(T).r == classical_invariants(C).r);
    }
  }

  TEST_CASE("enumerator finds exactly the generators of a bigrading") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
      auto g = random_grid(2 + t % 6, rng);
      GridComplex C(g);
      auto all = all_generators_by_bigrading(C);
      std::size_t total = 0, fact = 1;
      for (int k = 2; k <= g.n; ++k) fact *= k;
      for (auto& [b, gens] : all) {
        total += gens.size();
        auto found = BigradingEnumerator(C, b).collect();
        auto want = gens;
        std::sort(want.begin(), want.end());
        std::sort(found.begin(), found.end());
        CHECK(found == want);
        auto par = BigradingEnumerator(C, b).collect_parallel(3);
        CHECK(par == BigradingEnumerator(C, b).collect());
      }
      CHECK(total == fact);
      // an empty bigrading stays empty
      CHECK(BigradingEnumerator(C, {1000, 0}).collect().empty());
    }
  }
}
