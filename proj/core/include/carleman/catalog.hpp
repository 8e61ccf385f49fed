#pragma once

// Named inputs: sequences, test functions and weight functions, addressable
// by a short spec string or a JSON file path.

#include <cstddef>
#include <string>
#include <vector>

#include "carleman/seqcore.hpp"
#include "carleman/smooth_fn.hpp"
#include "carleman/wfun.hpp"

namespace carleman {

// factorial, gevrey:s, q:n, exp-k2 (M_k = exp(k^2)), or a JSON file
// {"label": str, "logM": [float], "K": int}. K truncates built-ins.
WeightSequence sequence_from_spec(const std::string& spec, std::size_t K = 256);

// JSON text of the schema above; "K" may shorten logM but not extend it.
WeightSequence sequence_from_json(const std::string& text);

// bump:gevrey2 (lacunary Gevrey-2 function), lacunary:s, linear, zero,
// cauchy2 (1/(2-x)), poly:c0,c1,...
SmoothFn1D function_from_spec(const std::string& spec);

// power:a, log2, t-over-log, or a JSON file {"grid": [float], "vals": [float], "name": str}
WeightFunction weight_function_from_spec(const std::string& spec);

// "0.5,1,2" -> {0.5, 1, 2}; throws ParseError
std::vector<double> parse_number_list(const std::string& s);

}  // namespace carleman
