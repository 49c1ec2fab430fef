#pragma once

#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "complex.hpp"
#include "grid.hpp"
#include "homology.hpp"

namespace gridlag {

// "not obstructed" never means a cobordism exists; the criterion only goes one way.
enum class Status { not_obstructed, obstructed, inconclusive };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::not_obstructed: return "not obstructed";
    case Status::obstructed: return "obstructed";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Endpoint {
  GridDiagram grid;
  Classical classical;
  VanishingCertificate plus, minus;
};

struct ClassicalVerdict {
  Status status = Status::not_obstructed;
  int required_chi = 0;  // tb(L-) - tb(L+)
  std::vector<std::string> reasons;
};

struct ObstructionReport {
  std::optional<Endpoint> lower;  // absent for filling questions
  Endpoint upper;
  ClassicalVerdict classical;
  Status grid = Status::not_obstructed;
  std::vector<std::string> grid_reasons;  // which hypothesis fired
  Status combined = Status::not_obstructed;
  std::vector<std::string> notes;
};

// tb(L+) - tb(L-) = -chi and r(L+) = r(L-); with a genus and knot ends, chi = -2g.
inline ClassicalVerdict classical_feasibility(const Classical& lo, const Classical& hi, std::optional<int> genus = {}) {
  ClassicalVerdict v;
  v.required_chi = lo.tb - hi.tb;
  if (lo.r != hi.r)
    v.reasons.push_back("rotation mismatch: r(L+) = " + std::to_string(hi.r) + " but r(L-) = " + std::to_string(lo.r));
  if (genus) {
    if (*genus < 0) throw std::invalid_argument("genus must be nonnegative");
    if (lo.components == 1 && hi.components == 1 && v.required_chi != -2 * *genus)
      v.reasons.push_back("Thurston-Bennequin mismatch: tb(L+) - tb(L-) = " + std::to_string(hi.tb - lo.tb) +
                          " but a genus " + std::to_string(*genus) + " cobordism between knots needs " +
                          std::to_string(2 * *genus));
  }
  if (!v.reasons.empty()) v.status = Status::obstructed;
  return v;
}

inline ClassicalVerdict classical_feasibility(const GridDiagram& gm, const GridDiagram& gp,
                                              std::optional<int> genus = {}) {
  return classical_feasibility(classical_invariants(gm), classical_invariants(gp), genus);
}

inline Endpoint analyse_endpoint(const GridDiagram& g, std::size_t budget, bool parallel) {
  Endpoint e;
  e.grid = g;
  GridComplex C(g);
  e.classical = classical_invariants(C);
  if (parallel) {
    auto fm = std::async(std::launch::async, [&] { return class_is_zero(C, '-', budget); });
    e.plus = class_is_zero(C, '+', budget);
    e.minus = fm.get();
  } else {
    e.plus = class_is_zero(C, '+', budget);
    e.minus = class_is_zero(C, '-', budget);
  }
  return e;
}

namespace detail {

// One hypothesis: the invariant vanishes on top and not on the bottom.
inline Status bullet(const VanishingCertificate& top, const VanishingCertificate& bottom) {
  if (top.verdict == Verdict::zero && bottom.verdict == Verdict::nonzero) return Status::obstructed;
  if (top.verdict == Verdict::nonzero || bottom.verdict == Verdict::zero) return Status::not_obstructed;
  return Status::inconclusive;
}

inline Status combine(Status a, Status b) {
  if (a == Status::obstructed || b == Status::obstructed) return Status::obstructed;
  if (a == Status::inconclusive || b == Status::inconclusive) return Status::inconclusive;
  return Status::not_obstructed;
}

}  // namespace detail

// Obstruction to a decomposable cobordism from L- (bottom) to L+ (top).
inline ObstructionReport grid_obstruction(const GridDiagram& gm, const GridDiagram& gp,
                                          std::size_t budget = 100000000, int threads = 1,
                                          std::optional<int> genus = {}) {
  ObstructionReport R;
  bool par = threads > 1;
  if (par) {
    auto fl = std::async(std::launch::async, [&] { return analyse_endpoint(gm, budget, par); });
    R.upper = analyse_endpoint(gp, budget, par);
    R.lower = fl.get();
  } else {
    R.lower = analyse_endpoint(gm, budget, false);
    R.upper = analyse_endpoint(gp, budget, false);
  }
  R.classical = classical_feasibility(R.lower->classical, R.upper.classical, genus);
  Status sp = detail::bullet(R.upper.plus, R.lower->plus);
  Status sm = detail::bullet(R.upper.minus, R.lower->minus);
  if (sp == Status::obstructed) R.grid_reasons.push_back("lambda+ vanishes on L+ but not on L-");
  if (sm == Status::obstructed) R.grid_reasons.push_back("lambda- vanishes on L+ but not on L-");
  R.grid = detail::combine(sp, sm);
  R.combined = detail::combine(R.classical.status, R.grid);
  for (const auto* c : {&R.lower->plus, &R.lower->minus, &R.upper.plus, &R.upper.minus})
    if (c->verdict == Verdict::inconclusive) R.notes.push_back(c->note);
  return R;
}

// Obstruction to a decomposable filling: either invariant vanishing suffices.
inline ObstructionReport filling_obstruction(const GridDiagram& g, std::size_t budget = 100000000, int threads = 1) {
  ObstructionReport R;
  R.upper = analyse_endpoint(g, budget, threads > 1);
  if (R.upper.plus.verdict == Verdict::zero) R.grid_reasons.push_back("lambda+ vanishes");
  if (R.upper.minus.verdict == Verdict::zero) R.grid_reasons.push_back("lambda- vanishes");
  if (!R.grid_reasons.empty())
    R.grid = Status::obstructed;
  else if (R.upper.plus.verdict == Verdict::inconclusive || R.upper.minus.verdict == Verdict::inconclusive)
    R.grid = Status::inconclusive;
  R.combined = R.grid;
  for (const auto* c : {&R.upper.plus, &R.upper.minus})
    if (c->verdict == Verdict::inconclusive) R.notes.push_back(c->note);
  return R;
}

inline nlohmann::json endpoint_to_json(const Endpoint& e) {
  return {{"grid", grid_to_json(e.grid)},
          {"grid_hash", grid_hash(e.grid)},
          {"tb", e.classical.tb},
          {"r", e.classical.r},
          {"components", e.classical.components},
          {"lambda_plus", verdict_name(e.plus.verdict)},
          {"lambda_minus", verdict_name(e.minus.verdict)},
          {"certificates", {{"plus", certificate_to_json(e.plus)}, {"minus", certificate_to_json(e.minus)}}}};
}

inline nlohmann::json report_to_json(const ObstructionReport& R) {
  nlohmann::json j;
  if (R.lower) {
    j["lower"] = endpoint_to_json(*R.lower);
    j["classical"] = {{"verdict", status_name(R.classical.status)},
                      {"required_chi", R.classical.required_chi},
                      {"reasons", R.classical.reasons}};
  }
  j[R.lower ? "upper" : "grid"] = endpoint_to_json(R.upper);
  j["grid_verdict"] = status_name(R.grid);
  j["grid_reasons"] = R.grid_reasons;
  j["verdict"] = status_name(R.combined);
  j["notes"] = R.notes;
  return j;
}

inline std::string report_to_text(const ObstructionReport& R) {
  std::ostringstream os;
  auto ep = [&](const char* name, const Endpoint& e) {
    os << name << ": n=" << e.grid.n << " components=" << e.classical.components << " tb=" << e.classical.tb
       << " r=" << e.classical.r << " lambda+=" << verdict_name(e.plus.verdict)
       << " lambda-=" << verdict_name(e.minus.verdict) << "\n";
  };
  if (R.lower) {
    ep("L-", *R.lower);
    ep("L+", R.upper);
    os << "classical: " << status_name(R.classical.status) << " (chi would be " << R.classical.required_chi << ")\n";
    for (auto& r : R.classical.reasons) os << "  " << r << "\n";
  } else {
    ep("L", R.upper);
  }
  os << "grid: " << status_name(R.grid) << "\n";
  for (auto& r : R.grid_reasons) os << "  " << r << "\n";
  os << "verdict: " << status_name(R.combined) << "\n";
  for (auto& n : R.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace gridlag
