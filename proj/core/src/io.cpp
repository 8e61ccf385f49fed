#include "carleman/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "carleman/error.hpp"
#include "json.hpp"

namespace carleman {

namespace {

using nlohmann::ordered_json;

ordered_json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json nums(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

ordered_json check(const Check& c) {
  ordered_json j;
  j["ok"] = c.ok;
  j["witness"] = num(c.witness);
  j["tol"] = num(c.tol);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

ordered_json certificates(const WeightSequence& M) {
  const auto& c = M.certificates();
  ordered_json j;
  j["log_convex"] = check(c.log_convex);
  j["m_log_convex"] = check(c.m_log_convex);
  j["root_increasing"] = check(c.root_increasing);
  j["m_root_increasing"] = check(c.m_root_increasing);
  j["first_nonconvex"] = c.first_nonconvex;
  return j;
}

ordered_json sequence(const WeightSequence& M) {
  ordered_json j;
  j["label"] = M.label();
  j["K"] = M.K();
  j["logM"] = nums(M.M().logv);
  j["certificates"] = certificates(M);
  return j;
}

ordered_json three_lines(const ThreeLinesResult& r) {
  ordered_json j;
  j["a3"] = num(r.a3);
  j["a4"] = num(r.a4);
  j["certified"] = num(r.certified);
  j["measured"] = num(r.measured);
  j["lipschitz"] = num(r.lipschitz);
  j["slack"] = num(r.slack);
  j["holds"] = r.holds;
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_double(r[i]);
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  out << text;
}

std::string sequence_json(const WeightSequence& M) { return sequence(M).dump(2) + "\n"; }

std::string sequence_report_json(const WeightSequence& M) {
  ordered_json j = sequence(M);
  auto q = is_quasianalytic(M);
  ordered_json jq;
  jq["quasianalytic"] = q.quasianalytic;
  jq["partial_sum"] = num(q.partial_sum);
  jq["tail_bound"] = num(q.tail_bound);
  jq["tail_available"] = q.tail_available;
  jq["slope"] = num(q.slope);
  jq["model"] = to_string(q.model);
  jq["exponent"] = num(q.exponent);
  j["quasianalytic"] = jq;
  auto d = is_derivation_closed(M);
  j["derivation_closed"] = {{"ok", d.ok}, {"C", num(d.C)}, {"C_prime", num(d.C_prime)}};
  auto mg = moderate_growth_constant(M, M);
  j["moderate_growth"] = {{"value", num(mg.value)},
                          {"log_head", num(mg.log_head)},
                          {"log_tail", num(mg.log_tail)},
                          {"divergent", mg.divergent}};
  return j.dump(2) + "\n";
}

std::string weight_function_json(const WeightFunction& w) {
  ordered_json j;
  j["name"] = w.name();
  j["grid"] = nums(w.grid());
  j["vals"] = nums(w.vals());
  const auto& c = w.certificates();
  j["certificates"] = {{"omega1", check(c.omega1)},
                       {"omega2", check(c.omega2)},
                       {"omega3", check(c.omega3)},
                       {"omega4", check(c.omega4)},
                       {"concave", check(c.concave)}};
  return j.dump(2) + "\n";
}

std::string gridfn_json(const GridFn& f) {
  ordered_json j;
  j["shape"] = {f.grid.nx, f.grid.ny};
  j["box"] = {num(f.grid.X), num(f.grid.Y)};
  j["h"] = num(f.grid.h);
  ordered_json re = ordered_json::array(), im = ordered_json::array();
  for (const auto& v : f.v) {
    re.push_back(num(v.real()));
    im.push_back(num(v.imag()));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j.dump() + "\n";
}

std::string reduction_json(const ReductionResult& r) {
  ordered_json j;
  j["S"] = sequence(r.S);
  j["N"] = sequence(r.N);
  j["log_beta"] = nums(r.beta.logv);
  j["log_delta"] = nums(r.delta.logv);
  j["log_C"] = num(r.log_C);
  j["log_C_S"] = num(r.log_C_S);
  const auto& a = r.audit;
  j["audit"] = {{"ok", a.ok()},
                {"first_failure", a.first_failure()},
                {"divergent", check(a.divergent)},
                {"zero_sequence", check(a.zero_sequence)},
                {"decreasing", check(a.decreasing)},
                {"nqthm", check(a.nqthm)},
                {"L_le_S", check(a.L_le_S)},
                {"S_lhd_M", check(a.S_lhd_M)},
                {"s_log_convex", check(a.s_log_convex)},
                {"moderate_growth", check(a.moderate_growth)},
                {"derivation", check(a.derivation)},
                {"nonquasianalytic", check(a.nonquasianalytic)},
                {"nq_required", a.nq_required}};
  return j.dump(2) + "\n";
}

std::string family_json(const ApproxFamily& fam) {
  ordered_json j;
  j["f"] = fam.f_name;
  j["chain"] = fam.chain;
  j["grid"] = {{"nx", fam.grid.nx}, {"ny", fam.grid.ny}, {"h", num(fam.grid.h)}};
  j["K"] = num(fam.K);
  j["c1"] = num(fam.c1);
  j["c2"] = num(fam.c2);
  j["c2_pred"] = num(fam.c2_pred);
  j["correlation"] = num(fam.correlation);
  j["at_floor"] = fam.at_floor;
  j["B0"] = num(fam.B0);
  j["B1"] = num(fam.B1);
  j["B2"] = num(fam.B2);
  j["Cgeom"] = num(fam.Cgeom);
  j["d_floor"] = num(fam.d_floor);
  ordered_json lv = ordered_json::array();
  for (const auto& L : fam.levels)
    lv.push_back({{"eps", num(L.eps)},
                  {"err", num(L.err)},
                  {"sup_omega", num(L.sup_omega)},
                  {"w_sup", num(L.w_sup)},
                  {"v_bound", num(L.v_bound)},
                  {"nodes", L.nodes.size()}});
  j["levels"] = std::move(lv);
  return j.dump(2) + "\n";
}

std::string division_json(const DivisionReport& rep) {
  ordered_json j;
  j["f"] = rep.f_name;
  j["j"] = rep.j;
  j["k"] = rep.k;
  j["s"] = num(rep.s);
  j["chain"] = rep.chain;
  j["has_truth"] = rep.has_truth;
  for (auto [name, v] : {std::pair{"K", rep.K}, {"c1", rep.c1}, {"c2", rep.c2}, {"c3", rep.c3},
                         {"c5", rep.c5}, {"c6", rep.c6}, {"c7", rep.c7}})
    j[name] = num(v);
  j["correlation"] = num(rep.correlation);
  j["at_floor"] = rep.at_floor;
  j["powers_residual"] = num(rep.powers_residual);
  j["grid_h"] = num(rep.grid_h);
  ordered_json lv = ordered_json::array();
  for (const auto& D : rep.levels) {
    ordered_json l;
    l["eps"] = num(D.eps);
    l["delta"] = num(D.delta);
    l["r"] = num(D.r);
    l["admissible"] = D.admissible;
    l["P_sup"] = num(D.P_sup);
    l["shrink"] = three_lines(D.shrink);
    l["u_sup"] = num(D.u_sup);
    l["u_bound"] = num(D.u_bound);
    l["err_u"] = num(D.err_u);
    l["v_sup"] = num(D.v_sup);
    l["err_final"] = num(D.err_final);
    l["err_final_x"] = num(D.err_final_x);
    l["bound_final"] = num(D.bound_final);
    l["dbar_flat"] = num(D.dbar_flat);
    l["floor_nodes"] = D.floor_nodes;
    lv.push_back(std::move(l));
  }
  j["levels"] = std::move(lv);
  j["x"] = nums(rep.x);
  j["recovered"] = nums(rep.recovered);
  ordered_json fl = ordered_json::array();
  for (char c : rep.floor_region) fl.push_back(bool(c));
  j["floor_region"] = std::move(fl);
  ordered_json vs = ordered_json::array();
  for (const auto& v : rep.verdicts) vs.push_back({{"name", v.name}, {"ok", v.ok}, {"note", v.note}});
  j["verdicts"] = std::move(vs);
  j["ok"] = rep.ok();
  return j.dump(2) + "\n";
}

CsvTable conjugate_csv(const YoungConjugate& c) {
  CsvTable t{{"s", "phi_star"}, {}};
  for (std::size_t i = 0; i < c.s.size(); ++i) t.rows.push_back({c.s[i], c.vals[i]});
  return t;
}

CsvTable reduction_csv(const PositiveSequence& L, const WeightSequence& M, const ReductionResult& r) {
  CsvTable t{{"k", "log_L", "log_S", "log_M"}, {}};
  const std::size_t K = std::min({L.K(), M.K(), r.S.K()});
  for (std::size_t k = 0; k <= K; ++k) t.rows.push_back({double(k), L[k], r.S.log_M(k), M.log_M(k)});
  return t;
}

CsvTable family_csv(const ApproxFamily& fam) {
  CsvTable t{{"eps", "error", "bound"}, {}};
  AssocFns m(fam.m3);
  for (const auto& L : fam.levels) t.rows.push_back({L.eps, L.err, fam.c1 * m.h(fam.c2 * L.eps).h});
  return t;
}

CsvTable division_csv(const DivisionReport& rep) {
  CsvTable t{{"eps", "delta", "r", "err_u", "err_final", "bound_final"}, {}};
  for (const auto& D : rep.levels) t.rows.push_back({D.eps, D.delta, D.r, D.err_u, D.err_final, D.bound_final});
  return t;
}

CsvTable gridfn_csv(const GridFn& f) {
  CsvTable t{{"x", "y", "re", "im", "abs"}, {}};
  for (std::size_t k = 0; k < f.v.size(); ++k) {
    cplx z = f.grid.z(k);
    t.rows.push_back({z.real(), z.imag(), f.v[k].real(), f.v[k].imag(), std::abs(f.v[k])});
  }
  return t;
}

}  // namespace carleman
