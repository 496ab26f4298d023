#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "logpot/chebfek.hpp"
#include "logpot/ergodic.hpp"
#include "logpot/error.hpp"
#include "logpot/io.hpp"
#include "logpot/oprl.hpp"
#include "logpot/opuc.hpp"
#include "logpot/potential.hpp"
#include "logpot/suite.hpp"

#ifndef LOGPOT_GOLDEN_FILE
#define LOGPOT_GOLDEN_FILE "tests/golden/regression.json"
#endif

using namespace logpot;
using io::fmt;
using io::InputError;
using io::Json;

namespace {

struct Output {
  std::string path;
  std::string format;  // csv | json; empty means infer from the extension

  bool wanted() const { return !path.empty(); }
  bool json() const {
    if (!format.empty()) return format == "json";
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  }
};

void add_output(CLI::App* cmd, Output& out, const std::string& what) {
  cmd->add_option("--out", out.path, what + " (written atomically)");
  cmd->add_option("--format", out.format, "csv or json (default: from the extension, else csv)")
      ->check(CLI::IsMember({"csv", "json"}));
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t k = 0; k < header.size(); ++k) s += (k ? "," : "") + header[k];
  s += "\n";
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) s += (k ? "," : "") + fmt(r[k]);
    s += "\n";
  }
  return s;
}

// A table goes to --out as CSV or JSON ({"columns": [...], "rows": [[...]]}).
void emit_table(const Output& out, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
  if (!out.wanted()) {
    std::cout << csv(header, rows);
    return;
  }
  if (out.json()) {
    Json j{{"columns", header}, {"rows", rows}};
    io::write_atomic(out.path, io::dump(j));
  } else {
    io::write_atomic(out.path, csv(header, rows));
  }
}

void print(const Json& j) { std::cout << io::dump(j); }

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InputError("E_USAGE", "--n expects a comma-separated list of positive integers, got \"" + text + "\"");
    }
  }
  if (out.empty()) throw InputError("E_USAGE", "--n list is empty");
  return out;
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    std::size_t u1 = 0, u2 = 0;
    const std::string left = text.substr(0, comma), right = text.substr(comma + 1);
    const double lo = std::stod(left, &u1);
    const double hi = std::stod(right, &u2);
    if (u1 != left.size() || u2 != right.size()) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::exception&) {
    throw InputError("E_USAGE", "--range expects lo,hi, got \"" + text + "\"");
  }
}

// Family flags shared by lyapunov, dos and thouless. --config takes a JSON
// file {"kind", "parameters", "seed"} and excludes the individual flags.
struct FamilyArgs {
  std::string config;
  std::string family{"free"};
  std::optional<double> lambda, a, phase, decay;
  std::string freq{"golden"};
  std::string range;
  std::uint64_t seed{0};

  void attach(CLI::App* cmd) {
    auto* cfg = cmd->add_option("--config", config, "family config JSON");
    cmd->add_option("--family", family, "free | anderson | am | decaying")->excludes(cfg);
    cmd->add_option("--lambda", lambda, "almost Mathieu coupling or decaying amplitude")->excludes(cfg);
    cmd->add_option("--freq", freq, "almost Mathieu frequency, or 'golden'")->excludes(cfg);
    cmd->add_option("--phase", phase, "almost Mathieu phase")->excludes(cfg);
    cmd->add_option("--range", range, "anderson potential range lo,hi")->excludes(cfg);
    cmd->add_option("--a", a, "anderson off-diagonal")->excludes(cfg);
    cmd->add_option("--decay", decay, "decaying random exponent")->excludes(cfg);
    cmd->add_option("--seed", seed, "random seed")->excludes(cfg);
  }

  ErgodicFamily build() const {
    if (!config.empty()) return io::parse_family(io::load_json(config, "E_INPUT_PARSE"));
    Json params = Json::object();
    std::string kind = family;
    if (kind == "am" || kind == "almost_mathieu") {
      kind = "almost_mathieu";
      if (lambda) params["lambda"] = *lambda;
      if (freq != "golden") {
        try {
          std::size_t used = 0;
          params["freq"] = std::stod(freq, &used);
          if (used != freq.size()) throw std::invalid_argument(freq);
        } catch (const std::exception&) {
          throw InputError("E_USAGE", "--freq expects a number or 'golden'");
        }
      }
      if (phase) params["phase"] = *phase;
    } else if (kind == "anderson") {
      if (!range.empty()) {
        const auto [lo, hi] = parse_range(range);
        params["b_lo"] = lo;
        params["b_hi"] = hi;
      }
      if (a) params["a"] = *a;
    } else if (kind == "decaying" || kind == "decaying_random") {
      kind = "decaying_random";
      if (lambda) params["lambda"] = *lambda;
      if (decay) params["gamma"] = *decay;
    } else if (kind != "free") {
      throw InputError("E_USAGE", "unknown family \"" + family + "\"");
    }
    return io::parse_family(Json{{"kind", kind}, {"parameters", params}, {"seed", seed}});
  }
};

Json lyapunov_json(const LyapunovEstimate& g, std::complex<double> z, std::size_t n, std::size_t samples) {
  return Json{{"z", complex_json(z)}, {"n", n},           {"samples", samples},
              {"gamma", g.gamma},     {"std_error", g.std_error}, {"per_sample", g.per_sample}};
}

int run_suite(const std::string& name, bool update, const std::string& golden, const suite::SuiteOptions& opt) {
  if (name == "acceptance") {
    int failed = 0, ran = 0;
    suite::run_acceptance(opt, [&](const suite::CriterionResult& r) {
      std::cout << suite::format_line(r) << std::endl;
      ++ran;
      if (!r.pass) ++failed;
    });
    std::cout << (failed ? "FAIL" : "PASS") << ": " << ran - failed << "/" << ran << " criteria passed" << std::endl;
    return failed ? 1 : 0;
  }
  if (update) {
    suite::update_regression(golden);
    std::cout << "updated " << golden << "\n";
    return 0;
  }
  const auto r = suite::compare_regression(golden);
  if (r.identical) {
    std::cout << "PASS regression: output identical to " << golden << "\n";
    return 0;
  }
  for (const auto& d : r.differences) std::cout << "FAIL " << d << "\n";
  std::cout << "FAIL regression: output differs from " << golden << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logarithmic potential theory and orthogonal polynomial toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string set_arg, points_arg, jacobi_arg, measure_arg, alpha_arg, z_arg, z_file, n_list_arg = "100,1000,10000";
  Output out;
  std::size_t grid = 512, n = 0, samples = 1, degree = 0, balayage_grid = 4096;
  int m = 64;
  double eta = 2.0, capacity_scale = 1.0;
  bool restricted = false, update = false;
  std::string suite_name, golden = LOGPOT_GOLDEN_FILE;
  FamilyArgs fam;

  auto* cap = app.add_subcommand("capacity", "logarithmic capacity of a finite interval union");
  cap->add_option("--set", set_arg, "set JSON (file or inline)")->required();

  auto* equ = app.add_subcommand("equilibrium", "equilibrium measure density");
  equ->add_option("--set", set_arg, "set JSON")->required();
  equ->add_option("--grid", grid, "density samples per interval")->check(CLI::PositiveNumber);
  add_output(equ, out, "density table");

  auto* grn = app.add_subcommand("green", "Green's function with pole at infinity");
  grn->add_option("--set", set_arg, "set JSON")->required();
  grn->add_option("--points", points_arg, "points JSON")->required();
  add_output(grn, out, "value table");

  auto* che = app.add_subcommand("chebyshev", "Chebyshev polynomial of a set");
  che->add_option("--set", set_arg, "set JSON")->required();
  che->add_option("--degree", degree, "degree")->required()->check(CLI::PositiveNumber);
  che->add_flag("--restricted", restricted, "keep every zero inside the set");

  auto* fek = app.add_subcommand("fekete", "Fekete points and constant");
  fek->add_option("--set", set_arg, "set JSON")->required();
  fek->add_option("--n", n, "number of points")->required()->check(CLI::Range(2, 4096));

  auto* bch = app.add_subcommand("bounds-chain", "capacity <= Chebyshev <= restricted <= Fekete chain");
  bch->add_option("--set", set_arg, "set JSON")->required();
  bch->add_option("--degree", degree, "degree")->required()->check(CLI::PositiveNumber);

  auto* reg = app.add_subcommand("regularity", "regularity diagnostic for Jacobi parameters");
  reg->add_option("--jacobi", jacobi_arg, "Jacobi parameters JSON")->required();
  reg->add_option("--set", set_arg, "support set JSON")->required();
  reg->add_option("--n", n_list_arg, "comma-separated degrees");

  auto* zer = app.add_subcommand("zeros", "zeros of the orthogonal polynomial P_n");
  zer->add_option("--jacobi", jacobi_arg, "Jacobi parameters JSON")->required();
  zer->add_option("--n", n, "degree")->required()->check(CLI::PositiveNumber);
  add_output(zer, out, "zero table");

  auto* stt = app.add_subcommand("stahl-totik", "Lebesgue measure of the set where small windows carry tiny mass");
  stt->add_option("--measure", measure_arg, "measure JSON")->required();
  stt->add_option("--set", set_arg, "set JSON (default: hull of the measure)");
  stt->add_option("--m", m, "window index")->check(CLI::PositiveNumber);
  stt->add_option("--eta", eta, "exponent");

  auto* opz = app.add_subcommand("opuc-zeros", "zeros of Phi_n from Verblunsky coefficients");
  opz->add_option("--alpha", alpha_arg, "Verblunsky coefficients JSON")->required();
  opz->add_option("--n", n, "degree")->required()->check(CLI::Range(1, 128));

  auto* bal = app.add_subcommand("balayage", "sweep of the zero counting measure onto the circle");
  bal->add_option("--alpha", alpha_arg, "Verblunsky coefficients JSON")->required();
  bal->add_option("--n", n, "degree")->required()->check(CLI::Range(1, 128));
  bal->add_option("--grid", balayage_grid, "angles on the circle (raised when aliasing would exceed 1e-10)")
      ->check(CLI::PositiveNumber);
  add_output(bal, out, "density table");

  auto* lya = app.add_subcommand("lyapunov", "Lyapunov exponent of an ergodic family");
  fam.attach(lya);
  lya->add_option("--z", z_arg, "spectral parameter, e.g. 0+0.0001i")->required();
  lya->add_option("--n", n, "transfer matrix length")->required()->check(CLI::PositiveNumber);
  lya->add_option("--samples", samples, "batch size")->check(CLI::PositiveNumber);

  auto* dos = app.add_subcommand("dos", "density of states");
  fam.attach(dos);
  dos->add_option("--n", n, "truncation size")->required()->check(CLI::PositiveNumber);
  dos->add_option("--samples", samples, "batch size")->check(CLI::PositiveNumber);
  add_output(dos, out, "eigenvalue table");

  auto* tho = app.add_subcommand("thouless", "Thouless formula residuals");
  fam.attach(tho);
  tho->add_option("--z-file", z_file, "points JSON")->required();
  tho->add_option("--n", n, "truncation size")->check(CLI::PositiveNumber);
  tho->add_option("--samples", samples, "batch size")->check(CLI::PositiveNumber);

  auto* sui = app.add_subcommand("suite", "acceptance or regression suite");
  sui->add_option("name", suite_name, "acceptance | regression")
      ->required()
      ->check(CLI::IsMember({"acceptance", "regression"}));
  sui->add_flag("--update", update, "rewrite the golden file (regression only)");
  sui->add_option("--golden", golden, "golden JSON path");
  sui->add_option("--capacity-scale", capacity_scale, "")->group("");
  std::vector<int> only;
  sui->add_option("--only", only, "criterion ids to run (acceptance only)")->delimiter(',')->check(CLI::Range(1, 17));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: E_USAGE: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cap->parsed()) {
      std::cout << fmt(capacity(io::parse_set(set_arg))) << "\n";
    } else if (equ->parsed()) {
      const auto eq = equilibrium(io::parse_set(set_arg));
      std::vector<std::vector<double>> rows;
      for (const auto& iv : eq.set().intervals()) {
        // Chebyshev angles avoid the endpoint singularities.
        for (std::size_t k = grid; k-- > 0;) {
          const double x = iv.mid() + iv.half_width() * std::cos(std::numbers::pi * (k + 0.5) / grid);
          rows.push_back({x, eq.density(x)});
        }
      }
      if (out.wanted()) emit_table(out, {"x", "value"}, rows);
      print(Json{{"set", io::set_to_json(eq.set())["intervals"]},
                 {"capacity", eq.capacity()},
                 {"gap_zeros", eq.gap_zeros()},
                 {"interval_mass", [&] {
                    Json a = Json::array();
                    for (std::size_t i = 0; i < eq.set().size(); ++i) a.push_back(eq.interval_mass(i));
                    return a;
                  }()},
                 {"residual", eq.residual()},
                 {"newton_iterations", eq.newton_iterations()}});
      if (!out.wanted()) std::cout << csv({"x", "value"}, rows);
    } else if (grn->parsed()) {
      const auto eq = equilibrium(io::parse_set(set_arg));
      std::vector<std::vector<double>> rows;
      for (const auto z : io::parse_points(points_arg)) rows.push_back({z.real(), z.imag(), eq.green(z)});
      emit_table(out, {"re", "im", "value"}, rows);
    } else if (che->parsed()) {
      const auto e = io::parse_set(set_arg);
      const auto r = chebyshev(e, static_cast<int>(degree), restricted);
      print(Json{{"degree", r.degree},
                 {"restricted", r.restricted},
                 {"sup_norm", r.sup_norm},
                 {"norm_root", std::pow(r.sup_norm, 1.0 / r.degree)},
                 {"capacity", capacity(e)},
                 {"coefficients", r.coefficients},
                 {"roots", r.roots},
                 {"equioscillation_points", r.equioscillation_points},
                 {"iterations", r.iterations},
                 {"reference_ratio", r.reference_ratio}});
    } else if (fek->parsed()) {
      const auto e = io::parse_set(set_arg);
      const auto f = fekete(e, static_cast<int>(n));
      print(Json{{"n", n},
                 {"zeta", f.zeta},
                 {"log_q", f.log_q},
                 {"capacity", capacity(e)},
                 {"grad_norm", f.grad_norm},
                 {"pinned", f.pinned},
                 {"points", f.points}});
    } else if (bch->parsed()) {
      const auto e = io::parse_set(set_arg);
      const auto b = bounds_chain(e, static_cast<int>(degree));
      print(Json{{"degree", b.degree},
                 {"capacity", b.capacity},
                 {"chebyshev_root", b.chebyshev_root},
                 {"restricted_root", b.restricted_root},
                 {"zeta_next", b.zeta_next},
                 {"holds", b.holds}});
    } else if (reg->parsed()) {
      const auto j = io::parse_jacobi(jacobi_arg);
      const auto ns = parse_n_list(n_list_arg);
      const auto r = regularity_diagnostic(j, io::parse_set(set_arg), ns);
      print(Json{{"n", r.n_list},
                 {"gamma_n", r.gamma_n},
                 {"ks_distance", r.ks_distance},
                 {"capacity", r.capacity},
                 {"limit", r.limit},
                 {"margin", r.margin},
                 {"verdict", verdict_name(r.verdict)}});
    } else if (zer->parsed()) {
      const auto z = zero_counting(io::parse_jacobi(jacobi_arg), n);
      std::vector<std::vector<double>> rows;
      for (double x : z.points) rows.push_back({x, 1.0 / static_cast<double>(z.n)});
      emit_table(out, {"x", "weight"}, rows);
    } else if (stt->parsed()) {
      const auto mu = io::parse_measure(measure_arg);
      const IntervalUnion e = set_arg.empty() ? IntervalUnion::normalize({{mu.nodes.front(), mu.nodes.back()}})
                                              : io::parse_set(set_arg);
      const auto s = stahl_totik_scan(mu, e, m, eta);
      print(Json{{"m", m},
                 {"eta", eta},
                 {"bad_length", s.bad_length},
                 {"spacing", s.spacing},
                 {"grid_points", s.grid_points}});
    } else if (opz->parsed()) {
      const auto v = io::parse_alpha(alpha_arg);
      const auto z = opuc_zeros(v, n);
      Json zs = Json::array(), mod = Json::array();
      for (const auto w : z) {
        zs.push_back(complex_json(w));
        mod.push_back(std::abs(w));
      }
      print(Json{{"n", n}, {"norm_product", verblunsky_norm_product(v, n)}, {"zeros", zs}, {"modulus", mod}});
    } else if (bal->parsed()) {
      const auto z = opuc_zeros(io::parse_alpha(alpha_arg), n);
      const std::size_t g = balayage_grid_for(z, 8, 1e-10, balayage_grid);
      const auto b = balayage(z, g);
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < b.theta.size(); ++k) rows.push_back({b.theta[k], b.density[k]});
      const auto lhs = balayage_moments(b, 8);
      const auto rhs = point_moments(z, 8);
      double err = 0.0;
      for (std::size_t k = 0; k < lhs.size(); ++k) err = std::max(err, std::abs(lhs[k] - rhs[k]));
      if (out.wanted()) emit_table(out, {"theta", "density"}, rows);
      Json mom = Json::array();
      for (const auto c : lhs) mom.push_back(complex_json(c));
      print(Json{{"n", n}, {"grid", g}, {"moments", mom}, {"max_moment_error", err}});
      if (!out.wanted()) std::cout << csv({"theta", "density"}, rows);
    } else if (lya->parsed()) {
      const auto f = fam.build();
      const auto z = io::parse_complex(z_arg);
      print(lyapunov_json(lyapunov(f, z, n, samples), z, n, samples));
    } else if (dos->parsed()) {
      const auto f = fam.build();
      const auto d = density_of_states(f, n, samples);
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < d.size(); ++k) rows.push_back({d.nodes[k], d.weights[k]});
      if (out.wanted()) emit_table(out, {"x", "weight"}, rows);
      const auto spec = estimate_spectrum(d, n, samples);
      Json ivs = io::set_to_json(spec)["intervals"];
      print(Json{{"n", n},
                 {"samples", samples},
                 {"support", Json::array({d.nodes.front(), d.nodes.back()})},
                 {"spectrum_estimate", ivs},
                 {"geometric_mean_a", geometric_mean_a(f, n, samples)}});
      if (!out.wanted()) std::cout << csv({"x", "weight"}, rows);
    } else if (tho->parsed()) {
      const auto f = fam.build();
      const auto zs = io::parse_points(z_file);
      const auto r = thouless_check(f, zs, n ? n : 10000, samples);
      Json z = Json::array();
      for (const auto w : r.z) z.push_back(complex_json(w));
      print(Json{{"z", z},
                 {"gamma", r.gamma},
                 {"log_potential", r.log_potential},
                 {"residual", r.residual},
                 {"log_inv_a", r.log_inv_a},
                 {"max_residual", r.max_residual}});
    } else if (sui->parsed()) {
      if (update && suite_name != "regression") throw InputError("E_USAGE", "--update applies to regression only");
      if (!(capacity_scale > 0.0)) throw InputError("E_USAGE", "--capacity-scale must be positive");
      suite::SuiteOptions opt;
      opt.capacity_scale = capacity_scale;
      opt.only = only;
      return run_suite(suite_name, update, golden, opt);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return e.code() == "E_OUTPUT" ? 3 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return is_validation_error(e.code()) ? 2 : 3;
  }
  return 0;
}
