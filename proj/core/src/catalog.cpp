#include "carleman/catalog.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "carleman/construct.hpp"
#include "carleman/error.hpp"
#include "json.hpp"

namespace carleman {

namespace {

using nlohmann::json;

double number(const std::string& s, const std::string& spec) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad number in '" + spec + "'");
  }
}

bool starts_with(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "'" + path + "': " + e.what());
  }
}

bool looks_like_path(const std::string& spec) {
  return spec.find('/') != std::string::npos || (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json");
}

WeightSequence sequence_from(const json& j) {
  try {
    std::vector<double> logM = j.at("logM").get<std::vector<double>>();
    std::string label = j.value("label", std::string("json"));
    if (j.contains("K")) {
      std::size_t K = j.at("K").get<std::size_t>();
      if (K + 1 > logM.size()) throw Error(ErrorCode::ParseError, "sequence JSON: K exceeds logM");
      logM.resize(K + 1);
    }
    return WeightSequence::make(std::move(logM), std::move(label));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("sequence JSON: ") + e.what());
  }
}

}  // namespace

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item, s));
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty list '" + s + "'");
  return out;
}

WeightSequence sequence_from_spec(const std::string& spec, std::size_t K) {
  if (K < 7) throw Error(ErrorCode::InvalidArgument, "sequence_from_spec: K < 7");
  std::vector<double> logM(K + 1, 0.0);
  if (spec == "factorial") {
    for (std::size_t k = 0; k <= K; ++k) logM[k] = std::lgamma(double(k) + 1.0);
    return WeightSequence::make(std::move(logM), spec);
  }
  if (starts_with(spec, "gevrey:")) {
    double s = number(spec.substr(7), spec);
    if (!(s > 0)) throw Error(ErrorCode::ParseError, "gevrey order must be positive");
    for (std::size_t k = 0; k <= K; ++k) logM[k] = s * std::lgamma(double(k) + 1.0);
    return WeightSequence::make(std::move(logM), spec);
  }
  if (starts_with(spec, "q:")) {
    double n = number(spec.substr(2), spec);
    if (n != std::floor(n) || n < 0 || n > 4) throw Error(ErrorCode::ParseError, "q:n needs n in 0..4");
    return family_Q(int(n), K);
  }
  if (spec == "exp-k2") {
    for (std::size_t k = 0; k <= K; ++k) logM[k] = double(k) * double(k);
    return WeightSequence::make(std::move(logM), spec);
  }
  if (looks_like_path(spec)) {
    auto seq = sequence_from(load_json_file(spec));
    return seq.K() > K ? seq.truncated(K) : seq;
  }
  throw Error(ErrorCode::ParseError, "unknown sequence '" + spec + "'");
}

WeightSequence sequence_from_json(const std::string& text) {
  try {
    return sequence_from(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("sequence JSON: ") + e.what());
  }
}

SmoothFn1D function_from_spec(const std::string& spec) {
  if (spec == "bump:gevrey2") return SmoothFn1D::lacunary(2.0, 1.0, 20, spec);
  if (starts_with(spec, "lacunary:")) {
    double s = number(spec.substr(9), spec);
    if (!(s > 0)) throw Error(ErrorCode::ParseError, "lacunary order must be positive");
    return SmoothFn1D::lacunary(s, 1.0, 20, spec);
  }
  if (spec == "linear") return SmoothFn1D::polynomial({0.0, 1.0}, spec);
  if (spec == "zero") return SmoothFn1D();
  if (spec == "cauchy2") return SmoothFn1D::rational_pole(1.0, 2.0, 1.0, spec);
  if (starts_with(spec, "poly:")) return SmoothFn1D::polynomial(parse_number_list(spec.substr(5)), spec);
  throw Error(ErrorCode::ParseError, "unknown function '" + spec + "'");
}

WeightFunction weight_function_from_spec(const std::string& spec) {
  if (!looks_like_path(spec)) return mk_weight_function(spec);
  json j = load_json_file(spec);
  try {
    return WeightFunction::from_samples(j.at("grid").get<std::vector<double>>(),
                                        j.at("vals").get<std::vector<double>>(),
                                        j.value("name", std::string("json")));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("weight function JSON: ") + e.what());
  }
}

}  // namespace carleman
