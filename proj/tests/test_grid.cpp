#include <doctest.h>

#include "support.hpp"

using namespace gridlag;
using testing::random_grid;

namespace {

// Components of the planar graph whose vertices are markings, joined along
// columns (X to O) and rows (O to X).
int traced_components(const GridDiagram& g) {
  std::vector<int> parent(2 * g.n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int c = 0; c < g.n; ++c) unite(c, g.n + c);  // X_c -- O_c
  for (int r = 0; r < g.n; ++r) unite(g.x_col_of_row(r), g.n + g.o_col_of_row(r));
  int k = 0;
  for (int v = 0; v < 2 * g.n; ++v) k += find(v) == v;
  return k;
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("parse the text format") {
    auto g = parse_grid("X={2,1} O={1,2}");
    CHECK(g.n == 2);
    CHECK(g.x == std::vector<int>{1, 0});
    CHECK(g.o == std::vector<int>{0, 1});
    auto h = parse_grid("# comment\n o: [1, 2]\n x = [2, 1]\n");
    CHECK(h == g);
    CHECK(serialize_grid(g) == "X={2,1} O={1,2}");
  }

  TEST_CASE("parse errors carry a position") {
    try {
      parse_grid("X={1,2,3}\nO={2,3,x}\n");
      FAIL("expected a syntax error");
    } catch (const grid_error& e) {
      CHECK(e.code == grid_errc::syntax);
      CHECK(std::string(e.what()).find("line 2, column 8") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_grid("X={1,2} O={1,2}"), grid_error);
    auto code = [](const char* s) {
      try {
        parse_grid(s);
      } catch (const grid_error& e) {
        return e.code;
      }
      return grid_errc::illegal_move;
    };
    CHECK(code("X={1,2} O={1,2}") == grid_errc::shared_square);
    CHECK(code("X={1,1} O={2,2}") == grid_errc::not_permutation);
    CHECK(code("X={1,2,3} O={2,1}") == grid_errc::length_mismatch);
    CHECK(code("X={1} O={1}") == grid_errc::too_small);
    CHECK(code("X={2,1}") == grid_errc::syntax);
    CHECK(code("X={2,1} X={1,2}") == grid_errc::syntax);
  }

  TEST_CASE("text and JSON round trips") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
      auto g = random_grid(2 + t % 15, rng);
      CHECK(parse_grid(serialize_grid(g)) == g);
      CHECK(grid_from_json(grid_to_json(g)) == g);
      CHECK(read_grid(grid_to_json(g).dump()) == g);
      CHECK(read_grid(serialize_grid(g)) == g);
      CHECK(grid_hash(g) == grid_hash(parse_grid(serialize_grid(g))));
    }
    CHECK(grid_hash(parse_grid("X={2,1} O={1,2}")) != grid_hash(parse_grid("X={1,2} O={2,1}")));
    CHECK_THROWS_AS(read_grid(R"({"n": 3, "x": [2,1], "o": [1,2]})"), grid_error);
  }

  TEST_CASE("component count") {
    CHECK(component_count(parse_grid("X={2,1,4,3} O={1,2,3,4}")) == 2);
    CHECK(component_count(parse_grid("X={2,1} O={1,2}")) == 1);
    std::mt19937_64 rng(12);
    for (int t = 0; t < 300; ++t) {
      auto g = random_grid(2 + t % 12, rng);
      CHECK(component_count(g) == traced_components(g));
      auto lab = component_labels(g);
      CHECK(*std::max_element(lab.begin(), lab.end()) + 1 == component_count(g));
    }
  }

  TEST_CASE("translation, transpose and marking swap") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
      auto g = random_grid(2 + t % 8, rng);
      int dx = int(rng() % 20) - 10, dy = int(rng() % 20) - 10;
      auto h = cyclic_translate(g, dx, dy);
      CHECK(cyclic_translate(h, -dx, -dy) == g);
      CHECK(cyclic_translate(g, g.n, -g.n) == g);
      CHECK(component_count(h) == component_count(g));
      CHECK(transpose(transpose(g)) == g);
      CHECK(component_count(transpose(g)) == component_count(g));
      CHECK(swap_markings(swap_markings(g)) == g);
    }
  }

  TEST_CASE("commutation legality") {
    // rows 1 and 2 interleave: X/O of row 2 in columns 1,3 and of row 1 in 2,4
    auto g = parse_grid("X={2,1,4,3} O={4,3,2,1}");
    CHECK_THROWS_AS(commute_rows(g, 0), grid_error);
    // shared column endpoints are not a legal commutation
    auto s = parse_grid("X={2,3,1} O={1,2,3}");
    CHECK_THROWS_AS(commute_rows(s, 0), grid_error);
    std::mt19937_64 rng(14);
    int legal = 0;
    for (int t = 0; t < 400; ++t) {
      auto h = random_grid(4 + t % 5, rng);
      int r = int(rng() % h.n);
      try {
        auto k = commute_rows(h, r);
        ++legal;
        CHECK(commute_rows(k, r) == h);
        CHECK(component_count(k) == component_count(h));
        CHECK(transpose(commute_columns(transpose(h), r)) == k);
      } catch (const grid_error& e) {
        CHECK(e.code == grid_errc::illegal_move);
      }
    }
    CHECK(legal > 50);
  }

  TEST_CASE("stabilization and destabilization") {
    std::mt19937_64 rng(15);
    for (int t = 0; t < 200; ++t) {
      auto g = random_grid(2 + t % 8, rng);
      int c = int(rng() % g.n);
      for (auto q : {Quadrant::NW, Quadrant::NE, Quadrant::SW, Quadrant::SE}) {
        auto h = stabilize(g, c, q);
        CHECK(h.n == g.n + 1);
        CHECK(component_count(h) == component_count(g));
        CHECK(destabilize(h, c, q) == g);
      }
    }
    CHECK(parse_quadrant("X:NE") == Quadrant::NE);
    CHECK(parse_quadrant("SW") == Quadrant::SW);
    CHECK_THROWS_AS(parse_quadrant("X:UP"), grid_error);
    CHECK_THROWS_AS(destabilize(parse_grid("X={2,1} O={1,2}"), 0, Quadrant::NE), grid_error);
  }

  TEST_CASE("ascii rendering") {
    CHECK(ascii_grid(parse_grid("X={2,1} O={1,2}")) == "XO\nOX\n");
  }
}
