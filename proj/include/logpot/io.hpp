#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "logpot/ergodic.hpp"
#include "logpot/oprl.hpp"
#include "logpot/opuc.hpp"
#include "logpot/potential.hpp"
#include "logpot/setgeom.hpp"

namespace logpot::io {

using Json = nlohmann::ordered_json;

// Bad command-line input. `code` is the machine-readable tag printed on
// stderr (E_SET_PARSE, E_INPUT_PARSE, E_USAGE).
class InputError : public std::runtime_error {
 public:
  InputError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Arguments starting with '{' or '[' are inline JSON, anything else a path.
Json load_json(const std::string& arg, const char* error_code);

// {"intervals": [[a, b], ...]}
IntervalUnion parse_set(const std::string& arg);
Json set_to_json(const IntervalUnion& e);

// {"a": [...], "b": [...]} or a generator
// {"generator": "free" | "sparse" | "random_sign" | "block", "n": N, "seed": S}.
JacobiParams parse_jacobi(const std::string& arg);

// {"alpha": [[re, im], ...]} (plain numbers are real).
VerblunskyParams parse_alpha(const std::string& arg);

// {"atoms": [[x, w], ...], "ac": [{"interval": [a, b], "density": "uniform" |
// "arcsine" | "semicircle", "mass": m}], "dyadic": {"y": y}}; every key
// optional, at least one present. The result is discretized.
DiscretizedMeasure parse_measure(const std::string& arg);

// A complex literal: "3", "-2.5", "0+0.0001i", "2-1i", "5i".
std::complex<double> parse_complex(const std::string& text);
// {"z": [...]} or {"points": [...]} or a bare array; entries are numbers,
// [re, im] pairs or complex strings.
std::vector<std::complex<double>> parse_points(const std::string& arg);

// {"kind": "free" | "anderson" | "almost_mathieu" | "decaying_random",
//  "parameters": {...}, "seed": S}. Unknown keys are rejected.
ErgodicFamily parse_family(const Json& j);

// "%.17g"
std::string fmt(double x);
// JSON text with every floating-point number printed by fmt, two-space
// indentation, keys in insertion order.
std::string dump(const Json& j);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace logpot::io
