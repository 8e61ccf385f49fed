#pragma once

// JSON and CSV serialization. Numbers are written with 17 significant digits
// so that equal results give byte-identical files; non-finite values become
// the strings "inf", "-inf" and "nan".

#include <filesystem>
#include <string>
#include <vector>

#include "carleman/approx.hpp"
#include "carleman/construct.hpp"
#include "carleman/cplane.hpp"
#include "carleman/divide.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/wfun.hpp"

namespace carleman {

std::string format_double(double v);  // %.17g

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

void write_file(const std::filesystem::path& path, const std::string& text);

// {"label", "logM", "K", "certificates": {...}}
std::string sequence_json(const WeightSequence& M);
// certificates plus quasianalyticity, derivation closedness and mg(M, M)
std::string sequence_report_json(const WeightSequence& M);
// {"name", "grid", "vals"}
std::string weight_function_json(const WeightFunction& w);
// {"shape": [nx, ny], "box": [X, Y], "h", "re": [...], "im": [...]}, row-major in y
std::string gridfn_json(const GridFn& f);
std::string reduction_json(const ReductionResult& r);
std::string family_json(const ApproxFamily& fam);
std::string division_json(const DivisionReport& rep);

CsvTable conjugate_csv(const YoungConjugate& c);          // s, phi*(s)
// k, log L, log S, log M
CsvTable reduction_csv(const PositiveSequence& L, const WeightSequence& M, const ReductionResult& r);
CsvTable family_csv(const ApproxFamily& fam);             // eps, error, bound
CsvTable division_csv(const DivisionReport& rep);         // eps, delta, r, err_u, err_final, bound_final
CsvTable gridfn_csv(const GridFn& f);                     // x, y, re, im, abs

}  // namespace carleman
