#include <doctest.h>

#include "support.hpp"

using namespace gridlag;
using testing::corpus;

TEST_SUITE("obstruction") {
  TEST_CASE("classical feasibility") {
    auto u = corpus("unknot2.grid");
    auto v = classical_feasibility(u, u, 0);
    CHECK(v.status == Status::not_obstructed);
    CHECK(v.required_chi == 0);

    auto rot = classical_feasibility(u, stabilize(u, 0, Quadrant::NE));
    CHECK(rot.status == Status::obstructed);
    REQUIRE_FALSE(rot.reasons.empty());
    CHECK(rot.reasons[0].find("rotation") != std::string::npos);

    // unknot (tb -1) below a tb 1 knot: chi = -2, so genus 1 and only genus 1
    auto a = corpus("m12n199_a.grid");
    CHECK(classical_feasibility(u, a).required_chi == -2);
    CHECK(classical_feasibility(u, a, 1).status == Status::not_obstructed);
    auto g2 = classical_feasibility(u, a, 2);
    CHECK(g2.status == Status::obstructed);
    CHECK(g2.reasons[0].find("Thurston-Bennequin") != std::string::npos);
    CHECK_THROWS(classical_feasibility(u, a, -1));
  }

  TEST_CASE("identity is not obstructed") {
    auto u = corpus("unknot2.grid");
    auto R = grid_obstruction(u, u);
    CHECK(R.grid == Status::not_obstructed);
    CHECK(R.combined == Status::not_obstructed);
    CHECK(R.grid_reasons.empty());
    CHECK(filling_obstruction(u).combined == Status::not_obstructed);
  }

  TEST_CASE("m(12n199): each direction is obstructed by one invariant") {
    auto a = corpus("m12n199_a.grid"), b = corpus("m12n199_b.grid");
    auto ba = grid_obstruction(b, a);
    CHECK(ba.grid == Status::obstructed);
    REQUIRE(ba.grid_reasons.size() == 1);
    CHECK(ba.grid_reasons[0].find("lambda+") == 0);
    CHECK(ba.classical.status == Status::not_obstructed);
    auto ab = grid_obstruction(a, b);
    CHECK(ab.grid == Status::obstructed);
    REQUIRE(ab.grid_reasons.size() == 1);
    CHECK(ab.grid_reasons[0].find("lambda-") == 0);
    // every certificate in a report replays
    for (const auto* e : {&*ba.lower, &ba.upper}) {
      CHECK(replay(e->plus));
      CHECK(replay(e->minus));
    }
  }

  TEST_CASE("unknot to a vanishing grid is obstructed") {
    auto u = corpus("unknot2.grid"), a = corpus("m12n199_a.grid");
    auto R = grid_obstruction(u, a, 100000000, 1, 1);
    CHECK(R.combined == Status::obstructed);
    CHECK(R.classical.status == Status::not_obstructed);
    CHECK(R.grid_reasons.at(0).find("lambda+") == 0);
  }

  TEST_CASE("positive stabilization of a non-vanishing grid is obstructed") {
    auto b = corpus("m12n199_b.grid");
    auto R = grid_obstruction(b, stabilize(b, 0, Quadrant::NE));
    CHECK(R.grid == Status::obstructed);
    CHECK(R.grid_reasons.at(0).find("lambda+") == 0);
  }

  TEST_CASE("fillings") {
    auto u = corpus("unknot2.grid");
    CHECK(filling_obstruction(stabilize(u, 0, Quadrant::NE)).combined == Status::obstructed);
    CHECK(filling_obstruction(corpus("m12n199_a.grid")).combined == Status::obstructed);
  }

  TEST_CASE("budget exhaustion is its own state") {
    auto a = corpus("m12n199_a.grid"), b = corpus("m12n199_b.grid");
    auto R = grid_obstruction(b, a, 5);
    CHECK(R.grid == Status::inconclusive);
    CHECK(R.combined == Status::inconclusive);
    CHECK(R.notes.size() == 4);
    CHECK(filling_obstruction(a, 5).combined == Status::inconclusive);
    // a classical obstruction still stands without the grid invariants
    auto u = corpus("unknot2.grid");
    auto S = grid_obstruction(u, stabilize(stabilize(u, 0, Quadrant::NE), 0, Quadrant::NW), 1);
    CHECK(S.classical.status == Status::obstructed);
    CHECK(S.combined == Status::obstructed);
  }

  TEST_CASE("reports are independent of the thread count") {
    auto a = corpus("m12n199_a.grid"), b = corpus("m12n199_b.grid");
    auto one = report_to_json(grid_obstruction(b, a, 100000000, 1));
    auto four = report_to_json(grid_obstruction(b, a, 100000000, 4));
    CHECK(one == four);
    CHECK(one["verdict"] == "obstructed");
    CHECK(report_to_text(grid_obstruction(b, a)).find("verdict: obstructed") != std::string::npos);
  }
}
