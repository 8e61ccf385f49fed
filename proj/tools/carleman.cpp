// carleman: command line front end. Every command writes manifest.json into
// --out; `run --manifest` replays one.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "carleman/approx.hpp"
#include "carleman/catalog.hpp"
#include "carleman/cplane.hpp"
#include "carleman/divide.hpp"
#include "carleman/error.hpp"
#include "carleman/io.hpp"
#include "carleman/numeric.hpp"
#include "carleman/version.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace carleman;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitViolation = 3;

struct RunConfig {
  std::string command;
  std::vector<std::string> args;  // as given, without the program name
  std::size_t K = 256;
  std::size_t grid = 512;
  double eps0 = 0.4;
  std::size_t levels = 5;
  std::string out = "out";
  double tol = 1e-9;

  // command inputs
  std::string seq, f, g, h, weight, mode = "R";
  std::vector<std::string> matrix_seqs;
  std::string matrix_x;
  std::size_t target = 0;
  int j = 2;
  bool biconj = false;
  double eps = 0.4;
  std::string manifest;
};

void write_manifest(const RunConfig& c) {
  ordered_json m;
  m["version"] = kVersion;
  m["command"] = c.command;
  m["args"] = c.args;
  m["parameters"] = {{"K", c.K},       {"grid", c.grid}, {"eps0", c.eps0},
                     {"levels", c.levels}, {"out", c.out},   {"tol", c.tol}};
  write_file(fs::path(c.out) / "manifest.json", m.dump(2) + "\n");
}

void say(const std::string& s) { std::cout << s << "\n"; }

// ---------------------------------------------------------------- commands

int cmd_check_sequence(const RunConfig& c) {
  auto M = sequence_from_spec(c.seq, c.K);
  auto text = sequence_report_json(M);
  write_file(fs::path(c.out) / "sequence.json", text);
  std::cout << text;
  return kExitOk;
}

int cmd_conjugate(const RunConfig& c) {
  auto w = weight_function_from_spec(c.weight);
  const auto& wc = w.certificates();
  int rc = kExitOk;
  for (auto [name, ck] : {std::pair{"omega1", &wc.omega1}, {"omega2", &wc.omega2}, {"omega3", &wc.omega3},
                          {"omega4", &wc.omega4}, {"concave", &wc.concave}}) {
    say(std::string(name) + (ck->ok ? " ok" : " FAILED") + " witness " + format_double(ck->witness));
    if (!ck->ok) rc = kExitViolation;
  }
  auto s = logspace(0.5, 500.0, 400);
  auto yc = young_conjugate(w, s);
  write_file(fs::path(c.out) / "conjugate.csv", conjugate_csv(yc).str());
  write_file(fs::path(c.out) / "weight.json", weight_function_json(w));
  if (c.biconj) {
    // at the maximizer nodes phi** = phi for convex phi
    std::vector<double> u = yc.argmax_u;
    u.erase(std::unique(u.begin(), u.end()), u.end());
    auto bb = biconjugate(yc, u);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::fabs(bb[i] - w.phi(u[i])));
    say("biconjugate max node error " + format_double(worst));
    if (worst > c.tol) rc = kExitViolation;
  }
  if (!c.matrix_x.empty()) {
    auto xs = parse_number_list(c.matrix_x);
    AssociatedMatrix am;
    try {
      am = associated_matrix(w, xs, c.K);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FctmodViolation) throw;
      say(std::string("fctmod FAILED: ") + e.what());
      return kExitViolation;
    }
    CsvTable t;
    t.header.push_back("k");
    for (std::size_t i = 0; i < am.matrix.size(); ++i) t.header.push_back("x=" + format_double(am.matrix.x(i)));
    for (std::size_t k = 0; k <= c.K; ++k) {
      std::vector<double> row{double(k)};
      for (std::size_t i = 0; i < am.matrix.size(); ++i) row.push_back(am.matrix.at(i).log_M(k));
      t.rows.push_back(std::move(row));
    }
    write_file(fs::path(c.out) / "matrix.csv", t.str());
    say("fctmod verified: worst log slack " + format_double(am.fctmod.worst_slack) + " over " +
        std::to_string(am.fctmod.pairs) + " pairs");
  }
  return rc;
}

HoloForwardOptions forward_options(const RunConfig& c) { return {c.eps0, c.levels, c.grid}; }

int cmd_divide(const RunConfig& c) {
  std::optional<SmoothFn1D> f;
  SmoothFn1D g, h;
  if (!c.f.empty()) {
    f = function_from_spec(c.f);
    g = SmoothFn1D::power(*f, unsigned(c.j));
    h = SmoothFn1D::power(*f, unsigned(c.j + 1));
  } else {
    if (c.g.empty() || c.h.empty()) throw Error(ErrorCode::ParseError, "divide needs --f or both --g and --h");
    g = function_from_spec(c.g);
    h = function_from_spec(c.h);
  }
  std::vector<std::pair<double, WeightSequence>> members;
  if (c.matrix_seqs.empty()) {
    members.push_back({1.0, sequence_from_spec(c.seq, c.K)});
  } else {
    for (std::size_t i = 0; i < c.matrix_seqs.size(); ++i)
      members.push_back({double(i + 1), sequence_from_spec(c.matrix_seqs[i], c.K)});
  }
  auto mode = c.mode == "B" ? RegularityMode::B : RegularityMode::R;
  auto chain = chain_select(WeightMatrix(std::move(members)), c.j, mode, c.target);
  DivideOptions opt;
  opt.forward = forward_options(c);
  auto rep = joris_divide(f ? &*f : nullptr, g, h, c.j, chain.members, opt);
  if (rep.f_name.empty()) rep.f_name = f ? f->name() : g.name() + "/" + h.name();

  write_file(fs::path(c.out) / "division.json", division_json(rep));
  write_file(fs::path(c.out) / "division.csv", division_csv(rep).str());
  CsvTable rec{{"x", "recovered", "floor"}, {}};
  for (std::size_t q = 0; q < rep.x.size(); ++q)
    rec.rows.push_back({rep.x[q], rep.recovered[q], double(rep.floor_region[q])});
  write_file(fs::path(c.out) / "recovered.csv", rec.str());

  std::size_t floor_nodes = 0;
  double fx_lo = kInf, fx_hi = -kInf;
  for (std::size_t q = 0; q < rep.x.size(); ++q)
    if (rep.floor_region[q]) {
      ++floor_nodes;
      fx_lo = std::min(fx_lo, rep.x[q]);
      fx_hi = std::max(fx_hi, rep.x[q]);
    }
  say("k = " + std::to_string(rep.k) + ", s = " + format_double(rep.s) + ", floor nodes " +
      std::to_string(floor_nodes) +
      (floor_nodes ? " in [" + format_double(fx_lo) + ", " + format_double(fx_hi) + "]" : std::string()));
  for (const auto& v : rep.verdicts) say(v.name + (v.ok ? " ok" : " FAILED") + (v.note.empty() ? "" : ": " + v.note));
  return rep.ok() ? kExitOk : kExitViolation;
}

int cmd_forward(const RunConfig& c) {
  auto f = function_from_spec(c.f);
  auto M = sequence_from_spec(c.seq, c.K);
  std::array<WeightSequence, 3> chain{M, M, M.scaled(std::log(2.0), M.label() + "*2^k")};
  auto fam = holo_forward(f, chain, forward_options(c));
  write_file(fs::path(c.out) / "family.json", family_json(fam));
  write_file(fs::path(c.out) / "family.csv", family_csv(fam).str());
  int rc = kExitOk;
  for (const auto& s : three_lines_family(fam)) {
    if (!s.result.holds) rc = kExitViolation;
    say("three-lines eps " + format_double(s.eps) + (s.result.holds ? " ok" : " FAILED"));
  }
  say("c1 " + format_double(fam.c1) + " c2 " + format_double(fam.c2) + " correlation " +
      format_double(fam.correlation) + (fam.at_floor ? " (floor)" : ""));
  return rc;
}

int cmd_dbar_map(const RunConfig& c) {
  auto f = function_from_spec(c.f);
  auto M = sequence_from_spec(c.seq, c.K);
  Grid g = Grid::for_ellipse(c.eps0, c.grid);
  auto ext = almost_analytic_ext(f, M, derivative_growth(f, M), g, c.eps);
  write_file(fs::path(c.out) / "dbar.csv", gridfn_csv(ext.dbarF).str());
  write_file(fs::path(c.out) / "dbar.json", gridfn_json(ext.dbarF));
  say("rho " + format_double(ext.rho) + " C " + format_double(ext.C_measured) +
      (ext.cap_binds ? " cap binds below d = " + format_double(ext.d_floor) : std::string()));
  return kExitOk;
}

int dispatch(std::vector<std::string> args);

int cmd_run(const RunConfig& c) {
  std::ifstream in(c.manifest);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open manifest '" + c.manifest + "'");
  ordered_json m;
  try {
    m = ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
  if (!m.contains("args") || m["command"] == "run") throw Error(ErrorCode::ParseError, "manifest has no replayable command");
  return dispatch(m["args"].get<std::vector<std::string>>());
}

// ------------------------------------------------------------------ parsing

int dispatch(std::vector<std::string> args) {
  RunConfig c;
  c.args = args;
  CLI::App app{"weight sequences, holomorphic approximation and division by powers", "carleman"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.add_option("--K", c.K, "truncation length")->check(CLI::Range(8, 4096));
  app.add_option("--grid", c.grid, "grid cells across [-X, X]")->check(CLI::Range(8, 8192));
  app.add_option("--eps0", c.eps0, "largest ellipse parameter")->check(CLI::PositiveNumber);
  app.add_option("--levels", c.levels, "dyadic levels")->check(CLI::Range(1, 16));
  app.add_option("--out", c.out, "output directory");
  app.add_option("--tol", c.tol, "tolerance for pass/fail checks")->check(CLI::PositiveNumber);
  app.fallthrough();

  auto* cs = app.add_subcommand("check-sequence", "certificate bundle of a weight sequence");
  cs->add_option("seq", c.seq, "builtin name or JSON path")->required();

  auto* cj = app.add_subcommand("conjugate", "Young conjugate of a weight function");
  cj->add_option("weight", c.weight, "builtin name or JSON path")->required();
  cj->add_option("--matrix", c.matrix_x, "x list, e.g. x=0.5,1,2, for the associated matrix");
  cj->add_flag("--biconjugate", c.biconj, "report the biconjugation error");

  auto* dv = app.add_subcommand("divide", "recover f from f^j and f^(j+1)");
  dv->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  dv->add_option("--f", c.f, "function spec; g = f^j and h = f^(j+1)");
  dv->add_option("--g", c.g, "g spec");
  dv->add_option("--h", c.h, "h spec");
  dv->add_option("--j", c.j, "power")->check(CLI::Range(1, 64));
  dv->add_option("--seq", c.seq, "weight sequence")->default_val("gevrey:2");
  dv->add_option("--matrix", c.matrix_seqs, "ordered matrix members (repeatable)");
  dv->add_option("--mode", c.mode, "chain regularity mode")->check(CLI::IsMember({"R", "B"}));
  dv->add_option("--target", c.target, "end member for mode B");

  auto* fw = app.add_subcommand("forward", "holomorphic approximation family of f");
  fw->add_option("--f", c.f, "function spec")->required();
  fw->add_option("--seq", c.seq, "weight sequence")->default_val("gevrey:2");

  auto* dm = app.add_subcommand("dbar-map", "dbar of the almost analytic extension on the grid");
  dm->add_option("--f", c.f, "function spec")->required();
  dm->add_option("--seq", c.seq, "weight sequence")->default_val("gevrey:2");
  dm->add_option("--eps", c.eps, "start of the cutoff")->check(CLI::PositiveNumber);

  auto* rn = app.add_subcommand("run", "replay a manifest");
  rn->add_option("--manifest", c.manifest, "manifest.json")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }
  if (c.matrix_x.rfind("x=", 0) == 0) c.matrix_x = c.matrix_x.substr(2);

  try {
    if (*rn) return cmd_run(c);
    c.command = app.get_subcommands().front()->get_name();
    write_manifest(c);
    if (*cs) return cmd_check_sequence(c);
    if (*cj) return cmd_conjugate(c);
    if (*dv) return cmd_divide(c);
    if (*fw) return cmd_forward(c);
    if (*dm) return cmd_dbar_map(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::ParseError) return kExitParse;
    if (e.code() == ErrorCode::HypothesisFailed || e.code() == ErrorCode::FctmodViolation ||
        e.code() == ErrorCode::ViolationFound)
      return kExitViolation;
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(std::vector<std::string>(argv + 1, argv + argc)); }
