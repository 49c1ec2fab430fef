#include <doctest.h>

#include <map>

#include "support.hpp"

using namespace gridlag;
using testing::all_gens;
using testing::corpus;
using testing::random_grid;

namespace {

// Dense F2 elimination on bit rows, independent of the sparse solver.
struct Dense {
  std::vector<std::vector<bool>> basis;  // reduced rows, leading bit distinct
  std::vector<int> lead;

  static int first(const std::vector<bool>& v) {
    for (int i = 0; i < int(v.size()); ++i)
      if (v[i]) return i;
    return -1;
  }
  std::vector<bool> reduce(std::vector<bool> v) const {
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (v[lead[k]])
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] ^ basis[k][i];
    return v;
  }
  bool add(std::vector<bool> v) {
    v = reduce(std::move(v));
    int f = first(v);
    if (f < 0) return false;
    for (auto& b : basis)
      if (b[f])
        for (std::size_t i = 0; i < v.size(); ++i) b[i] = b[i] ^ v[i];
    basis.push_back(v);
    lead.push_back(f);
    return true;
  }
};

struct Oracle {
  std::map<Bigrading, int> dims;
  bool plus_zero = false, minus_zero = false;
};

Oracle dense_oracle(const GridDiagram& g) {
  GridComplex C(g);
  auto gens = all_gens(g.n);
  std::map<Gen, int> idx;
  for (int i = 0; i < int(gens.size()); ++i) idx[gens[i]] = i;
  std::map<Bigrading, int> count, rank_out;  // rank of d leaving each bigrading
  Dense image;
  std::map<Bigrading, Dense> per;
  for (Gen x : gens) {
    auto b = C.grading(x);
    ++count[b];
    std::vector<bool> v(gens.size());
    for (Gen y : C.differential(x)) v[idx[y]] = true;
    if (per[b].add(v)) ++rank_out[b];
    image.add(v);
  }
  Oracle o;
  for (auto& [b, k] : count) {
    int in = rank_out.count({b.maslov + 1, b.alexander2}) ? rank_out[{b.maslov + 1, b.alexander2}] : 0;
    int h = k - rank_out[b] - in;
    if (h) o.dims[b] = h;
  }
  auto boundary = [&](Gen x) {
    std::vector<bool> v(gens.size());
    v[idx[x]] = true;
    return Dense::first(image.reduce(v)) < 0;
  };
  o.plus_zero = boundary(C.x_plus());
  o.minus_zero = boundary(C.x_minus());
  return o;
}

}  // namespace

TEST_SUITE("homology") {
  TEST_CASE("unknot baseline") {
    auto g = parse_grid("X={2,1} O={1,2}");
    auto dims = homology_dimensions(g);
    CHECK(dims == std::map<Bigrading, int>{{{0, 0}, 1}, {{-1, -2}, 1}});
    for (char s : {'+', '-'}) {
      auto c = class_is_zero(g, s);
      CHECK(c.verdict == Verdict::nonzero);
      CHECK(replay(c));
    }
  }

  TEST_CASE("unknot grids carry one copy of V per extra column") {
    // Destabilization-free unknots: isotopy-type stabilizations of the 2x2 grid.
    std::mt19937_64 rng(31);
    auto g = parse_grid("X={2,1} O={1,2}");
    for (int n = 3; n <= 6; ++n) {
      g = stabilize(g, int(rng() % g.n), rng() % 2 ? Quadrant::NW : Quadrant::SE);
      auto dims = homology_dimensions(g);
      std::map<Bigrading, int> want;
      long binom = 1;
      for (int k = 0; k <= n - 1; ++k) {
        want[{-k, -2 * k}] = int(binom);
        binom = binom * (n - 1 - k) / (k + 1);
      }
      CHECK(dims == want);
      CHECK(class_is_zero(g, '+').verdict == Verdict::nonzero);
      CHECK(class_is_zero(g, '-').verdict == Verdict::nonzero);
    }
  }

  TEST_CASE("homology and vanishing agree with dense elimination") {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 60; ++t) {
      auto g = random_grid(2 + t % 4, rng);
      auto o = dense_oracle(g);
      CHECK(homology_dimensions(g) == o.dims);
      auto p = class_is_zero(g, '+'), m = class_is_zero(g, '-');
      CHECK((p.verdict == Verdict::zero) == o.plus_zero);
      CHECK((m.verdict == Verdict::zero) == o.minus_zero);
      CHECK(replay(p));
      CHECK(replay(m));
    }
  }

  TEST_CASE("component shortcut agrees with full slices") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 60; ++t) {
      auto g = random_grid(3 + t % 5, rng);
      GridComplex C(g);
      for (char s : {'+', '-'}) {
        auto a = class_is_zero(C, s), b = class_is_zero_by_slices(C, s, 1 + t % 3);
        CHECK(a.verdict == b.verdict);
        CHECK(replay(a));
        CHECK(replay(b));
        CHECK(b.rows >= a.rows);
      }
    }
  }

  TEST_CASE("boundaries are boundaries") {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 40; ++t) {
      auto g = random_grid(4 + t % 3, rng);
      GridComplex C(g);
      auto gens = all_gens(g.n);
      Gen x = gens[rng() % gens.size()];
      auto d = C.differential(x);
      auto r = chain_is_boundary(C, d);
      REQUIRE(r.has_value());
      CHECK(*r);
    }
  }

  TEST_CASE("stabilization kills the matching invariant") {
    std::mt19937_64 rng(35);
    for (int t = 0; t < 20; ++t) {
      auto g = random_grid(2 + t % 5, rng);
      int c = int(rng() % g.n);
      auto vp = class_is_zero(g, '+').verdict, vm = class_is_zero(g, '-').verdict;
      auto sp = stabilize(g, c, Quadrant::NE), sm = stabilize(g, c, Quadrant::SW);
      CHECK(class_is_zero(sp, '+').verdict == Verdict::zero);
      CHECK(class_is_zero(sp, '-').verdict == vm);
      CHECK(class_is_zero(sm, '-').verdict == Verdict::zero);
      CHECK(class_is_zero(sm, '+').verdict == vp);
    }
  }

  TEST_CASE("orientation reversal exchanges the invariants; transpose keeps them") {
    std::mt19937_64 rng(36);
    for (int t = 0; t < 60; ++t) {
      auto g = random_grid(3 + t % 4, rng);
      auto vp = class_is_zero(g, '+').verdict, vm = class_is_zero(g, '-').verdict;
      auto s = swap_markings(g), tr = transpose(g);
      CHECK(class_is_zero(s, '+').verdict == vm);
      CHECK(class_is_zero(s, '-').verdict == vp);
      CHECK(class_is_zero(tr, '+').verdict == vp);
      CHECK(class_is_zero(tr, '-').verdict == vm);
    }
  }

  TEST_CASE("m(12n199) and m(14n5047) grids") {
    struct Case {
      const char* file;
      Verdict plus, minus;
    };
    for (auto [file, vp, vm] : {Case{"m12n199_a.grid", Verdict::zero, Verdict::nonzero},
                                Case{"m12n199_b.grid", Verdict::nonzero, Verdict::zero},
                                Case{"m14n5047_a.grid", Verdict::zero, Verdict::nonzero},
                                Case{"m14n5047_b.grid", Verdict::nonzero, Verdict::zero}}) {
      CAPTURE(file);
      auto g = corpus(file);
      auto k = classical_invariants(g);
      CHECK(k.components == 1);
      auto p = class_is_zero(g, '+'), m = class_is_zero(g, '-');
      CHECK(p.verdict == vp);
      CHECK(m.verdict == vm);
      CHECK(replay(p));
      CHECK(replay(m));
      CHECK(replay(certificate_from_json(certificate_to_json(p))));
      CHECK(replay(certificate_from_json(certificate_to_json(m))));
      // the reversed grid shows the mirrored pattern
      CHECK(class_is_zero(swap_markings(g), '+').verdict == vm);
    }
    auto a = classical_invariants(corpus("m12n199_a.grid")), b = classical_invariants(corpus("m12n199_b.grid"));
    CHECK(a.tb == 1);
    CHECK(b.tb == 1);
    CHECK(a.r == 0);
    CHECK(b.r == 0);
  }

  TEST_CASE("tampered certificates fail replay") {
    auto g = corpus("m12n199_a.grid");
    auto z = class_is_zero(g, '+');
    REQUIRE(z.verdict == Verdict::zero);
    auto bad = z;
    bad.witness.pop_back();
    CHECK_FALSE(replay(bad));
    bad = z;
    bad.grid = corpus("m12n199_b.grid");
    CHECK_FALSE(replay(bad));
    bad = z;
    bad.sign = '-';
    CHECK_FALSE(replay(bad));

    auto nz = class_is_zero(g, '-');
    REQUIRE(nz.verdict == Verdict::nonzero);
    bad = nz;
    bad.cochain.erase(bad.cochain.begin());
    CHECK_FALSE(replay(bad));
    bad = nz;
    bad.verdict = Verdict::zero;
    CHECK_FALSE(replay(bad));

    auto j = certificate_to_json(z);
    j["grid_hash"] = "0000000000000000";
    CHECK_THROWS(certificate_from_json(j));
  }

  TEST_CASE("budget exhaustion is inconclusive, never a verdict") {
    auto g = corpus("m12n199_a.grid");
    auto c = class_is_zero(g, '+', 10);
    CHECK(c.verdict == Verdict::inconclusive);
    CHECK_FALSE(replay(c));
    CHECK(c.note.find("budget") != std::string::npos);
    CHECK_THROWS_AS(homology_dimensions(corpus("m12n199_a.grid"), 1000), budget_exceeded);
  }
}
