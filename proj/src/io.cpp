#include "logpot/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include "logpot/error.hpp"

namespace logpot::io {

namespace {

constexpr const char* kSetParse = "E_SET_PARSE";
constexpr const char* kInputParse = "E_INPUT_PARSE";

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed, const char* code,
                         const std::string& where) {
  if (!j.is_object()) throw InputError(code, where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!ok.count(key)) throw InputError(code, "unknown key \"" + key + "\" in " + where);
  }
}

double number(const Json& j, const char* code, const std::string& what) {
  if (!j.is_number()) throw InputError(code, what + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(code, what + " must be finite");
  return x;
}

std::vector<double> number_array(const Json& j, const char* code, const std::string& what) {
  if (!j.is_array()) throw InputError(code, what + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, code, what + " entry"));
  return out;
}

std::size_t count(const Json& j, const char* code, const std::string& what) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw InputError(code, what + " must be an integer");
  const auto v = j.get<long long>();
  if (v < 0) throw InputError(code, what + " must be >= 0");
  return static_cast<std::size_t>(v);
}

std::complex<double> complex_entry(const Json& j, const char* code) {
  if (j.is_number()) return {number(j, code, "point"), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2) return {number(j[0], code, "real part"), number(j[1], code, "imaginary part")};
  throw InputError(code, "points are numbers, [re, im] pairs or complex strings");
}

void dump_into(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        dump_into(value, out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out += ", ";
          dump_into(j[k], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += inner;
        dump_into(j[k], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? fmt(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json load_json(const std::string& arg, const char* error_code) {
  std::string text;
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw InputError(error_code, "cannot read " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(error_code, std::string("invalid JSON: ") + e.what());
  }
}

IntervalUnion parse_set(const std::string& arg) {
  const Json j = load_json(arg, kSetParse);
  reject_unknown_keys(j, {"intervals"}, kSetParse, "set");
  if (!j.contains("intervals") || !j["intervals"].is_array()) {
    throw InputError(kSetParse, "set needs an \"intervals\" array");
  }
  std::vector<std::pair<double, double>> raw;
  for (const auto& iv : j["intervals"]) {
    if (!iv.is_array() || iv.size() != 2) throw InputError(kSetParse, "each interval is a pair [a, b]");
    raw.emplace_back(number(iv[0], kSetParse, "interval end"), number(iv[1], kSetParse, "interval end"));
  }
  try {
    return IntervalUnion::normalize(raw);
  } catch (const Error& e) {
    throw InputError(kSetParse, e.what());
  }
}

Json set_to_json(const IntervalUnion& e) {
  Json arr = Json::array();
  for (const auto& iv : e.intervals()) arr.push_back(Json::array({iv.lo, iv.hi}));
  return Json{{"intervals", arr}};
}

JacobiParams parse_jacobi(const std::string& arg) {
  const Json j = load_json(arg, kInputParse);
  if (j.is_object() && j.contains("generator")) {
    reject_unknown_keys(j, {"generator", "n", "seed"}, kInputParse, "jacobi generator");
    const std::string g = j["generator"].is_string() ? j["generator"].get<std::string>() : "";
    if (!j.contains("n")) throw InputError(kInputParse, "jacobi generator needs \"n\"");
    const std::size_t n = count(j["n"], kInputParse, "n");
    if (g == "free") return free_jacobi(n);
    if (g == "sparse") return sparse_perturbation_jacobi(n);
    if (g == "block") return block_jacobi(n);
    if (g == "random_sign") {
      const std::uint64_t seed = j.contains("seed") ? count(j["seed"], kInputParse, "seed") : 0;
      return random_sign_jacobi(n, seed);
    }
    throw InputError(kInputParse, "unknown jacobi generator \"" + g + "\"");
  }
  reject_unknown_keys(j, {"a", "b"}, kInputParse, "jacobi parameters");
  if (!j.contains("a") || !j.contains("b")) throw InputError(kInputParse, "jacobi parameters need \"a\" and \"b\"");
  JacobiParams p{number_array(j["a"], kInputParse, "a"), number_array(j["b"], kInputParse, "b")};
  if (p.a.size() != p.b.size()) throw InputError(kInputParse, "\"a\" and \"b\" must have equal length");
  for (double a : p.a) {
    if (!(a > 0.0)) throw InputError(kInputParse, "off-diagonal a_n must be positive");
  }
  return p;
}

VerblunskyParams parse_alpha(const std::string& arg) {
  const Json j = load_json(arg, kInputParse);
  reject_unknown_keys(j, {"alpha"}, kInputParse, "alpha file");
  if (!j.contains("alpha") || !j["alpha"].is_array()) throw InputError(kInputParse, "need an \"alpha\" array");
  std::vector<cplx> a;
  for (const auto& x : j["alpha"]) a.push_back(complex_entry(x, kInputParse));
  try {
    return VerblunskyParams::from(std::move(a));
  } catch (const Error& e) {
    throw InputError(kInputParse, e.what());
  }
}

DiscretizedMeasure parse_measure(const std::string& arg) {
  const Json j = load_json(arg, kInputParse);
  reject_unknown_keys(j, {"atoms", "ac", "dyadic"}, kInputParse, "measure");
  if (j.empty()) throw InputError(kInputParse, "measure has no parts");
  std::vector<double> nodes, weights;
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array()) throw InputError(kInputParse, "\"atoms\" must be an array of [x, w]");
    for (const auto& p : j["atoms"]) {
      if (!p.is_array() || p.size() != 2) throw InputError(kInputParse, "each atom is [x, w]");
      nodes.push_back(number(p[0], kInputParse, "atom location"));
      const double w = number(p[1], kInputParse, "atom weight");
      if (!(w > 0.0)) throw InputError(kInputParse, "atom weights must be positive");
      weights.push_back(w);
    }
  }
  if (j.contains("dyadic")) {
    reject_unknown_keys(j["dyadic"], {"y"}, kInputParse, "dyadic");
    const double y = number(j["dyadic"].value("y", Json()), kInputParse, "dyadic y");
    if (!(y > 0.0 && y < 1.0)) throw InputError(kInputParse, "dyadic y must lie in (0, 1)");
    const auto d = to_measure(dyadic_atoms(y));
    nodes.insert(nodes.end(), d.nodes.begin(), d.nodes.end());
    weights.insert(weights.end(), d.weights.begin(), d.weights.end());
  }
  if (j.contains("ac")) {
    if (!j["ac"].is_array()) throw InputError(kInputParse, "\"ac\" must be an array");
    MeasureSpec spec;
    for (const auto& c : j["ac"]) {
      reject_unknown_keys(c, {"interval", "density", "mass"}, kInputParse, "ac component");
      if (!c.contains("interval") || !c["interval"].is_array() || c["interval"].size() != 2) {
        throw InputError(kInputParse, "ac component needs \"interval\": [a, b]");
      }
      const double a = number(c["interval"][0], kInputParse, "interval end");
      const double b = number(c["interval"][1], kInputParse, "interval end");
      if (!(b > a)) throw InputError(kInputParse, "ac interval needs a < b");
      const double mass = c.contains("mass") ? number(c["mass"], kInputParse, "mass") : 1.0;
      if (!(mass > 0.0)) throw InputError(kInputParse, "mass must be positive");
      const std::string kind = c.value("density", std::string("uniform"));
      const double mid = 0.5 * (a + b), r = 0.5 * (b - a);
      AcComponent comp{Interval{a, b}, nullptr, EndpointSingularity::None};
      if (kind == "uniform") {
        comp.density = [=](double) { return mass / (b - a); };
      } else if (kind == "arcsine") {
        comp.singularity = EndpointSingularity::Both;
        comp.density = [=](double x) { return mass / (std::numbers::pi * std::sqrt((x - a) * (b - x))); };
      } else if (kind == "semicircle") {
        comp.singularity = EndpointSingularity::Both;
        comp.density = [=](double x) {
          const double t = (x - mid) / r;
          return mass * 2.0 / (std::numbers::pi * r) * std::sqrt(std::max(0.0, 1.0 - t * t));
        };
      } else {
        throw InputError(kInputParse, "unknown density \"" + kind + "\"");
      }
      spec.ac_components.push_back(std::move(comp));
    }
    const auto d = discretize(spec, 256);
    nodes.insert(nodes.end(), d.nodes.begin(), d.nodes.end());
    weights.insert(weights.end(), d.weights.begin(), d.weights.end());
  }
  if (nodes.empty()) throw InputError(kInputParse, "measure has no mass");
  return DiscretizedMeasure::from_atoms(std::move(nodes), std::move(weights));
}

std::complex<double> parse_complex(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s += c;
  }
  auto fail = [&]() { return InputError(kInputParse, "cannot parse complex number \"" + text + "\""); };
  if (s.empty()) throw fail();
  auto to_double = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != t.size() || !std::isfinite(v)) throw fail();
    return v;
  };
  if (s.back() != 'i') return {to_double(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_double(s)};
  return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

std::vector<std::complex<double>> parse_points(const std::string& arg) {
  const Json j = load_json(arg, kInputParse);
  const Json* arr = &j;
  if (j.is_object()) {
    reject_unknown_keys(j, {"z", "points"}, kInputParse, "points file");
    if (j.contains("z")) arr = &j["z"];
    else if (j.contains("points")) arr = &j["points"];
    else throw InputError(kInputParse, "points file needs \"z\" or \"points\"");
  }
  if (!arr->is_array() || arr->empty()) throw InputError(kInputParse, "points must be a non-empty array");
  std::vector<std::complex<double>> out;
  for (const auto& p : *arr) out.push_back(complex_entry(p, kInputParse));
  return out;
}

ErgodicFamily parse_family(const Json& j) {
  reject_unknown_keys(j, {"kind", "parameters", "seed"}, kInputParse, "family config");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError(kInputParse, "family config needs \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  const Json params = j.contains("parameters") ? j["parameters"] : Json::object();
  const std::uint64_t seed = j.contains("seed") ? count(j["seed"], kInputParse, "seed") : 0;
  auto get = [&](const char* key, double fallback) {
    return params.contains(key) ? number(params[key], kInputParse, key) : fallback;
  };
  try {
    if (kind == "free") {
      reject_unknown_keys(params, {}, kInputParse, "free parameters");
      return ErgodicFamily::free_family();
    }
    if (kind == "anderson") {
      reject_unknown_keys(params, {"a", "b_lo", "b_hi"}, kInputParse, "anderson parameters");
      return ErgodicFamily::anderson(get("b_lo", -1.0), get("b_hi", 1.0), seed, get("a", 1.0));
    }
    if (kind == "almost_mathieu") {
      reject_unknown_keys(params, {"lambda", "freq", "phase"}, kInputParse, "almost_mathieu parameters");
      double freq = golden_frequency();
      if (params.contains("freq") && !(params["freq"].is_string() && params["freq"] == "golden")) {
        freq = number(params["freq"], kInputParse, "freq");
      }
      return ErgodicFamily::almost_mathieu(get("lambda", 4.0), freq, get("phase", 0.0));
    }
    if (kind == "decaying_random") {
      reject_unknown_keys(params, {"lambda", "gamma"}, kInputParse, "decaying_random parameters");
      return ErgodicFamily::decaying_random(get("lambda", 1.0), get("gamma", 0.6), seed);
    }
  } catch (const Error& e) {
    throw InputError(kInputParse, e.what());
  }
  throw InputError(kInputParse, "unknown family kind \"" + kind + "\"");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const Json& j) {
  std::string out;
  dump_into(j, out, 0);
  out += "\n";
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  const fs::path tmp = dir / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("E_OUTPUT", "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("E_OUTPUT", "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("E_OUTPUT", "cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace logpot::io
