#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <gridlag/gridlag.hpp>

using namespace gridlag;
using nlohmann::json;

namespace {

enum Exit { ok = 0, input_failure = 2, inconclusive = 3, internal = 4 };

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::size_t budget = 100000000;
  int threads = 1;
  std::string format = "text";
  std::string cert_out;
  std::optional<int> genus;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error(path + ": cannot write");
  out << text;
}

GridDiagram load_grid(const std::string& path) {
  auto text = read_file(path);
  try {
    return read_grid(text);
  } catch (const grid_error& e) {
    throw input_error(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw input_error(path + ": " + e.what());
  }
}

std::string half(int twice) {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

json bigrading_json(Bigrading b) { return {{"maslov", b.maslov}, {"alexander2", b.alexander2}}; }

void emit(const RunConfig& cfg, const json& j, const std::string& text) {
  if (cfg.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int cmd_info(const RunConfig& cfg, const std::string& path) {
  auto g = load_grid(path);
  GridComplex C(g);
  auto cl = classical_invariants(C);
  json j = {{"n", g.n},
            {"components", cl.components},
            {"tb", cl.tb},
            {"r", cl.r},
            {"grid_hash", grid_hash(g)},
            {"x_plus", bigrading_json(cl.plus)},
            {"x_minus", bigrading_json(cl.minus)}};
  std::ostringstream os;
  os << "n=" << g.n << " components=" << cl.components << " tb=" << cl.tb << " r=" << cl.r << "\n"
     << "x+: M=" << cl.plus.maslov << " A=" << half(cl.plus.alexander2) << "\n"
     << "x-: M=" << cl.minus.maslov << " A=" << half(cl.minus.alexander2) << "\n"
     << ascii_grid(g);
  emit(cfg, j, os.str());
  return ok;
}

int cmd_invariants(const RunConfig& cfg, const std::string& path, const std::string& signs) {
  auto g = load_grid(path);
  GridComplex C(g);
  json j = {{"grid_hash", grid_hash(g)}}, certs;
  std::ostringstream os;
  bool undecided = false;
  for (char s : {'+', '-'}) {
    if (signs != "both" && signs[0] != s) continue;
    auto cert = class_is_zero(C, s, cfg.budget);
    undecided |= cert.verdict == Verdict::inconclusive;
    std::string key = s == '+' ? "plus" : "minus";
    j[key] = {{"verdict", verdict_name(cert.verdict)},
              {"bigrading", bigrading_json(cert.bigrading)},
              {"system", {{"rows", cert.rows}, {"cols", cert.cols}}}};
    certs[key] = certificate_to_json(cert);
    os << "lambda" << s << ": " << verdict_name(cert.verdict) << "  (M=" << cert.bigrading.maslov
       << " A=" << half(cert.bigrading.alexander2) << ", system " << cert.rows << "x" << cert.cols << ")";
    if (!cert.note.empty()) os << "  " << cert.note;
    os << "\n";
  }
  if (!cfg.cert_out.empty()) write_file(cfg.cert_out, certs.dump(2) + "\n");
  emit(cfg, j, os.str());
  return undecided ? inconclusive : ok;
}

int cmd_obstruct(const RunConfig& cfg, const std::string& lower, const std::string& upper) {
  auto gm = load_grid(lower), gp = load_grid(upper);
  auto R = grid_obstruction(gm, gp, cfg.budget, cfg.threads, cfg.genus);
  auto j = report_to_json(R);
  if (!cfg.cert_out.empty()) write_file(cfg.cert_out, j.dump(2) + "\n");
  if (cfg.format == "json") {
    // certificates go to --cert-out; keep stdout readable
    for (const char* side : {"lower", "upper"}) j[side].erase("certificates");
  }
  emit(cfg, j, report_to_text(R));
  return ok;
}

int cmd_filling(const RunConfig& cfg, const std::string& path) {
  auto R = filling_obstruction(load_grid(path), cfg.budget, cfg.threads);
  auto j = report_to_json(R);
  if (!cfg.cert_out.empty()) write_file(cfg.cert_out, j.dump(2) + "\n");
  if (cfg.format == "json") j["grid"].erase("certificates");
  emit(cfg, j, report_to_text(R));
  return ok;
}

int cmd_script(const RunConfig& cfg, const std::string& grid_path, const std::string& script_path,
               const std::string& out_grid, const std::string& record_path, const std::string& resolution) {
  auto gm = load_grid(grid_path);
  std::vector<Move> script;
  try {
    script = parse_script(json::parse(read_file(script_path)));
  } catch (const json::exception& e) {
    throw input_error(script_path + ": " + e.what());
  } catch (const script_error& e) {
    throw input_error(script_path + ": " + e.what());
  }
  ScriptResult R;
  try {
    R = compose_script(gm, script, resolution == "left" ? Resolution::left : Resolution::right);
  } catch (const script_error& e) {
    throw input_error(script_path + ": " + e.what());
  }

  json j;
  std::ostringstream os;
  json steps = json::array();
  for (int s = 0; s < int(R.steps.size()); ++s) {
    const auto& st = R.steps[s];
    json js = {{"move", move_to_json(st.move)}, {"n", st.after.n}, {"components", component_count(st.after)}};
    os << "step " << s + 1 << ": " << move_to_json(st.move).dump() << " -> n=" << st.after.n
       << " components=" << component_count(st.after);
    if (!st.map) {  // no chain map; report the invariants on both sides instead
      for (const auto* side : {&st.before, &st.after}) {
        GridComplex C(*side);
        std::string p = verdict_name(class_is_zero(C, '+', cfg.budget).verdict);
        std::string m = verdict_name(class_is_zero(C, '-', cfg.budget).verdict);
        js[side == &st.before ? "before" : "after"] = {{"lambda_plus", p}, {"lambda_minus", m}};
        os << (side == &st.before ? "  before " : "  after ") << "lambda+=" << p << " lambda-=" << m;
      }
    }
    os << "\n";
    steps.push_back(js);
  }
  j["steps"] = steps;
  j["g_plus"] = grid_to_json(R.g_plus);
  j["chi"] = R.chi();
  auto want = R.expected_bidegree();
  j["expected_bidegree"] = bigrading_json(want);
  os << "G+: " << serialize_grid(R.g_plus) << "\n"
     << "chi=" << R.chi() << " expected bidegree (" << want.maslov << "," << half(want.alexander2) << ")\n";
  if (!out_grid.empty()) write_file(out_grid, serialize_grid(R.g_plus) + "\n");

  bool pass = true;
  if (R.phi) {
    auto dom = check_domain(R.g_plus);
    bool bideg = R.phi->bidegree == want;
    auto chain = chain_map_defects(*R.phi, dom);
    auto homog = homogeneity_defects(*R.phi, dom);
    auto pp = preservation(*R.phi, '+', cfg.budget), pm = preservation(*R.phi, '-', cfg.budget);
    auto held = [](Preservation p) { return p == Preservation::exact || p == Preservation::homologous; };
    pass = bideg && chain.empty() && homog.empty() && held(pp) && held(pm);
    j["phi"] = {{"bidegree", bigrading_json(R.phi->bidegree)},
                {"bidegree_check", bideg},
                {"checked_generators", dom.size()},
                {"chain_map_defects", chain.size()},
                {"homogeneity_defects", homog.size()},
                {"x_plus", preservation_name(pp)},
                {"x_minus", preservation_name(pm)}};
    os << "Phi bidegree (" << R.phi->bidegree.maslov << "," << half(R.phi->bidegree.alexander2) << "): "
       << (bideg ? "pass" : "FAIL") << "\n"
       << "chain map on " << dom.size() << " generators: " << (chain.empty() ? "pass" : "FAIL") << "\n"
       << "homogeneous: " << (homog.empty() ? "pass" : "FAIL") << "\n"
       << "x+ preserved: " << preservation_name(pp) << "\n"
       << "x- preserved: " << preservation_name(pm) << "\n";
    if (!record_path.empty()) write_file(record_path, record_to_json(*R.phi, dom, cfg.threads).dump(2) + "\n");
  } else {
    j["note"] = R.note;
    os << R.note << "\n";
  }
  j["pass"] = pass;
  emit(cfg, j, os.str());
  return pass ? ok : internal;
}

int cmd_replay(const RunConfig& cfg, const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw input_error(path + ": " + e.what());
  }
  // a bare certificate, {"plus":..,"minus":..}, or an obstruction report
  std::vector<std::pair<std::string, json>> found;
  std::function<void(const json&, const std::string&)> walk = [&](const json& v, const std::string& at) {
    if (!v.is_object()) return;
    if (v.contains("verdict") && v.contains("grid") && v.contains("sign")) {
      found.push_back({at.empty() ? "certificate" : at, v});
      return;
    }
    for (auto& [k, sub] : v.items()) walk(sub, at.empty() ? k : at + "." + k);
  };
  walk(j, "");
  if (found.empty()) throw input_error(path + ": no certificates found");
  bool all = true;
  json out = json::object();
  std::ostringstream os;
  for (auto& [name, c] : found) {
    bool good = false;
    try {
      good = replay(certificate_from_json(c));
    } catch (const std::exception&) {
    }
    all &= good;
    out[name] = good;
    os << name << ": " << (good ? "replays" : "does NOT replay") << "\n";
  }
  emit(cfg, out, os.str());
  return all ? ok : input_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid homology invariants of Legendrian links and cobordism obstructions"};
  app.require_subcommand(1);
  RunConfig cfg;
  double budget = 1e8;
  int genus = -1;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--budget", budget, "generator budget for one homology question")->check(CLI::PositiveNumber);
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
  };

  std::string g1, g2, signs = "both", out_grid, record, resolution = "right";
  auto* info = app.add_subcommand("info", "n, components, tb, r and gradings of x+/x-");
  info->add_option("grid", g1, "grid file")->required();
  common(info);

  auto* inv = app.add_subcommand("invariants", "decide whether lambda+/lambda- vanish");
  inv->add_option("grid", g1, "grid file")->required();
  inv->add_option("--sign", signs, "which invariant")->check(CLI::IsMember({"+", "-", "both"}));
  inv->add_option("--cert-out", cfg.cert_out, "write certificates to this JSON file");
  common(inv);

  auto* obs = app.add_subcommand("obstruct", "obstruct a decomposable cobordism from the lower to the upper link");
  obs->add_option("lower", g1, "grid of the negative end")->required();
  obs->add_option("upper", g2, "grid of the positive end")->required();
  obs->add_option("--genus", genus, "genus of the cobordism (knots only)")->check(CLI::NonNegativeNumber);
  obs->add_option("--cert-out", cfg.cert_out, "write the full report with certificates to this JSON file");
  common(obs);

  auto* fill = app.add_subcommand("filling", "obstruct a decomposable filling");
  fill->add_option("grid", g1, "grid file")->required();
  fill->add_option("--cert-out", cfg.cert_out, "write the full report with certificates to this JSON file");
  common(fill);

  auto* scr = app.add_subcommand("script", "replay a move script and check the composite map");
  scr->add_option("grid", g1, "grid of the negative end")->required();
  scr->add_option("script", g2, "JSON move script")->required();
  scr->add_option("--out-grid", out_grid, "write the resulting grid here");
  scr->add_option("--record", record, "write the composite map record (JSON) here");
  scr->add_option("--resolution", resolution, "pentagon placement of a")->check(CLI::IsMember({"right", "left"}));
  common(scr);

  auto* rep = app.add_subcommand("replay", "re-verify certificates from a JSON file");
  rep->add_option("file", g1, "certificate or report JSON")->required();
  common(rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return input_failure;
  }
  cfg.budget = std::size_t(budget);
  if (genus >= 0) cfg.genus = genus;

  try {
    if (info->parsed()) return cmd_info(cfg, g1);
    if (inv->parsed()) return cmd_invariants(cfg, g1, signs);
    if (obs->parsed()) return cmd_obstruct(cfg, g1, g2);
    if (fill->parsed()) return cmd_filling(cfg, g1);
    if (scr->parsed()) return cmd_script(cfg, g1, g2, out_grid, record, resolution);
    if (rep->parsed()) return cmd_replay(cfg, g1);
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_failure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal;
  }
  return internal;
}
