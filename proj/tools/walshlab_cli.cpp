// walshlab command line: kernel traces, partial sums, Cesàro means,
// variation functionals and divergence probes, emitted as JSON or CSV with
// deterministic formatting. Exit codes: 0 success, 2 invalid arguments,
// 1 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "walshlab/counterexamples.hpp"
#include "walshlab/series.hpp"
#include "walshlab/variation.hpp"
#include "walshlab/walsh.hpp"

using json = nlohmann::ordered_json;
using namespace walshlab;

namespace {

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DyadicRational parse_point(const std::string& text) {
  const auto p = DyadicRational::parse(text);
  if (!p) throw std::invalid_argument("bad dyadic point '" + text + "' (expected p/2^n)");
  return *p;
}

// Function registry: one-string specs keep the flag surface small.
//   const:<v> | ramp-x | ramp-y | xy | gn:<N> | hn:<N>,<a>,<b>
//   random-grid:<M>,<seed> | grid-csv:<path>
Function2D parse_function(const std::string& spec) {
  const auto arg = [&](std::size_t prefix) { return spec.substr(prefix); };
  if (spec.rfind("const:", 0) == 0)
    return GridFunction2D(0, {std::stod(arg(6))});
  if (spec == "ramp-x")
    return SeparableFunction2D::product(PiecewiseLinear1D::ramp(9),
                                        PiecewiseLinear1D::constant(1.0, 9));
  if (spec == "ramp-y")
    return SeparableFunction2D::product(PiecewiseLinear1D::constant(1.0, 9),
                                        PiecewiseLinear1D::ramp(9));
  if (spec == "xy")
    return SeparableFunction2D::product(PiecewiseLinear1D::ramp(9), PiecewiseLinear1D::ramp(9));
  if (spec.rfind("gn:", 0) == 0) return build_gN(std::stoi(arg(3)));
  if (spec.rfind("hn:", 0) == 0) {
    int n = 0;
    double a = 0, b = 0;
    if (std::sscanf(spec.c_str(), "hn:%d,%lf,%lf", &n, &a, &b) != 3)
      throw std::invalid_argument("expected hn:<N>,<alpha>,<beta>");
    return build_hN(n, a, b);
  }
  if (spec.rfind("random-grid:", 0) == 0) {
    int m = 0;
    long long seed = 0;
    if (std::sscanf(spec.c_str(), "random-grid:%d,%lld", &m, &seed) != 2)
      throw std::invalid_argument("expected random-grid:<M>,<seed>");
    if (m < 0 || m > 8) throw std::invalid_argument("random-grid resolution must be in [0, 8]");
    // splitmix64 so the corpus is independent of the standard library.
    std::uint64_t state = static_cast<std::uint64_t>(seed);
    const auto next = [&state] {
      state += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = state;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      return z ^ (z >> 31);
    };
    const std::size_t n = std::size_t{1} << m;
    std::vector<double> cells(n * n);
    for (double& c : cells) c = 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
    return GridFunction2D(m, std::move(cells));
  }
  if (spec.rfind("grid-csv:", 0) == 0) {
    std::ifstream in(arg(9));
    if (!in) throw std::invalid_argument("cannot open grid csv '" + arg(9) + "'");
    return GridFunction2D::read_csv(in);
  }
  throw std::invalid_argument("unknown function spec '" + spec + "'");
}

WeightSequence parse_lambda(const std::string& name) {
  auto w = WeightSequence::by_name(name);
  if (!w) throw std::invalid_argument("unknown lambda family '" + name + "'");
  return *w;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + output + "'");
  out << text;
}

json witness_json(const IntervalSystem& w) {
  json arr = json::array();
  for (std::size_t i = 0; i < w.intervals.size(); ++i) {
    json entry = json::array();
    entry.push_back(w.intervals[i].first);
    entry.push_back(w.intervals[i].second);
    if (i < w.anchors.size())
      entry.push_back(w.anchors[i]);
    else
      entry.push_back(nullptr);
    arr.push_back(entry);
  }
  return arr;
}

json probe_json(const ProbeReport& r) {
  json j;
  j["family"] = r.family;
  j["N"] = r.N;
  j["functional_value"] = r.functional_value;
  j["kernel_integrals"] = r.kernel_integrals;
  j["bound_check"] = r.bound_check;
  j["variation_lower"] = r.variation_lower;
  j["variation_upper"] = r.variation_upper;
  j["growth_ratio"] = r.growth_ratio;
  j["lambda"] = r.lambda_name;
  j["lambda_clamped"] = r.lambda_clamped;
  return j;
}

struct CommonOpts {
  std::string format = "json";
  std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", o.output, "Output path (default stdout)");
}

// ---------------------------------------------------------------------------

int run_kernel(const std::string& type, std::int64_t n, int scale, double alpha,
               const std::string& strategy, const CommonOpts& o) {
  std::vector<std::pair<DyadicRational, double>> samples;
  const std::uint64_t cells = std::uint64_t{1} << scale;
  if (type == "dirichlet") {
    DirichletStrategy s = DirichletStrategy::recursive;
    if (strategy == "direct") s = DirichletStrategy::direct;
    else if (strategy == "w3") s = DirichletStrategy::w3;
    else if (strategy != "recursive") throw std::invalid_argument("unknown dirichlet strategy");
    for (std::uint64_t c = 0; c < cells; ++c) {
      const DyadicRational x(c, scale);
      samples.emplace_back(x, static_cast<double>(dirichlet(n, x, s)));
    }
  } else {
    if ((std::int64_t{1} << scale) < n)
      throw std::invalid_argument("scale too coarse: need 2^scale >= n for a faithful trace");
    const auto k = cesaro_kernel_cells(n, alpha, scale);
    for (std::uint64_t c = 0; c < cells; ++c)
      samples.emplace_back(DyadicRational(c, scale), k[c]);
  }

  if (o.format == "csv") {
    std::string text = "x,value\n";
    for (const auto& [x, v] : samples) {
      text += x.str();
      text += ',';
      text += type == "dirichlet" ? std::to_string(static_cast<std::int64_t>(v)) : real17(v);
      text += '\n';
    }
    emit(text, o.output);
  } else {
    json j;
    j["type"] = type;
    j["n"] = n;
    j["scale"] = scale;
    if (type == "cesaro") j["alpha"] = alpha;
    json arr = json::array();
    for (const auto& [x, v] : samples) arr.push_back({{"x", x.str()}, {"value", v}});
    j["samples"] = std::move(arr);
    emit(j.dump(2) + "\n", o.output);
  }
  return 0;
}

int run_sum_like(bool cesaro_cmd, const std::string& fspec, std::int64_t n, std::int64_t m,
                 std::optional<double> alpha, std::optional<double> beta, const std::string& xs,
                 const std::string& ys, const std::string& strategy, const CommonOpts& o) {
  const Function2D f = parse_function(fspec);
  const DyadicRational x = parse_point(xs), y = parse_point(ys);
  double value = 0.0;
  if (cesaro_cmd) {
    MeanStrategy s = MeanStrategy::definition;
    if (strategy == "kernel") s = MeanStrategy::kernel;
    else if (strategy != "definition") throw std::invalid_argument("unknown cesaro strategy");
    value = cesaro_mean(f, n, m, *alpha, *beta, x, y, s);
  } else {
    SumStrategy s = SumStrategy::coeff;
    if (strategy == "kernel") s = SumStrategy::kernel;
    else if (strategy != "coeff") throw std::invalid_argument("unknown partial-sum strategy");
    value = partial_sum(f, n, m, x, y, s);
  }

  if (o.format == "csv") {
    std::string text = "n,m,alpha,beta,x,y,value,strategy\n";
    text += std::to_string(n) + "," + std::to_string(m) + ",";
    text += (alpha ? real17(*alpha) : "") + std::string(",");
    text += (beta ? real17(*beta) : "") + std::string(",");
    text += x.str() + "," + y.str() + "," + real17(value) + "," + strategy + "\n";
    emit(text, o.output);
  } else {
    json j;
    j["n"] = n;
    j["m"] = m;
    j["alpha"] = alpha ? json(*alpha) : json(nullptr);
    j["beta"] = beta ? json(*beta) : json(nullptr);
    j["x"] = x.str();
    j["y"] = y.str();
    j["value"] = value;
    j["strategy"] = strategy;
    emit(j.dump(2) + "\n", o.output);
  }
  return 0;
}

int run_variation(const std::string& fspec, const std::string& functional,
                  const std::string& lambda_name, const std::string& mode_name, int n,
                  double alpha, double beta, int depth, const CommonOpts& o) {
  const Function2D f = parse_function(fspec);
  const SolveMode mode = mode_name == "exact" ? SolveMode::exact : SolveMode::heuristic;
  const WeightSequence w = parse_lambda(lambda_name);

  json j;
  j["functional"] = functional;
  j["lambda"] = lambda_name;

  if (functional == "vsharp") {
    const double v = v_sharp(f, 1, n);
    const double v2 = v_sharp(f, 2, n);
    j["n"] = n;
    j["axis1"] = v;
    j["axis2"] = v2;
    if (o.format == "csv") {
      emit("functional,n,axis1,axis2\nvsharp," + std::to_string(n) + "," + real17(v) + "," +
               real17(v2) + "\n",
           o.output);
      return 0;
    }
    emit(j.dump(2) + "\n", o.output);
    return 0;
  }
  if (functional == "thm2" || functional == "thm4") {
    const auto d = embedding_diagnostic(
        f, functional == "thm2" ? DiagnosticKind::thm2 : DiagnosticKind::thm4, alpha, beta, depth);
    if (o.format == "csv") {
      std::string text = "index,axis1,axis2\n";
      for (std::size_t i = 0; i < d.axis1.size(); ++i)
        text += std::to_string(i + 1) + "," + real17(d.axis1[i]) + "," + real17(d.axis2[i]) + "\n";
      emit(text, o.output);
      return 0;
    }
    j["axis1"] = d.axis1;
    j["axis2"] = d.axis2;
    emit(j.dump(2) + "\n", o.output);
    return 0;
  }

  VariationResult r;
  bool has_second = false;
  if (functional == "lv1") r = lambda_var_1(f, w, mode);
  else if (functional == "lv2") r = lambda_var_2(f, w, mode);
  else if (functional == "sharp1") r = sharp_var(f, 1, w, mode);
  else if (functional == "sharp2") r = sharp_var(f, 2, w, mode);
  else if (functional == "tail1") r = tail_sharp_var(f, 1, w, n, mode);
  else if (functional == "tail2") r = tail_sharp_var(f, 2, w, n, mode);
  else if (functional == "lv12") {
    r = lambda_var_12(f, w, w, mode);
    has_second = true;
  } else if (functional == "star") {
    r = star_var(f, w, mode);
    has_second = true;
  } else if (functional == "plbv") {
    const auto a = lambda_var_1(f, w, mode);
    const auto b = lambda_var_2(f, w, mode);
    r.lower = a.lower + b.lower;
    r.upper = a.upper + b.upper;
    r.exact = a.exact && b.exact;
    r.witness = a.witness;
  } else if (functional == "total") {
    const auto a = lambda_var_1(f, w, mode);
    const auto b = lambda_var_2(f, w, mode);
    const auto c = lambda_var_12(f, w, w, mode);
    r.lower = a.lower + b.lower + c.lower;
    r.upper = a.upper + b.upper + c.upper;
    r.exact = a.exact && b.exact && c.exact;
    r.witness = a.witness;
  } else {
    throw std::invalid_argument("unknown functional '" + functional + "'");
  }

  if (o.format == "csv") {
    std::string text = "functional,lambda,lower,upper,exact\n";
    text += functional + "," + lambda_name + "," + real17(r.lower) + "," + real17(r.upper) + "," +
            (r.exact ? "true" : "false") + "\n";
    emit(text, o.output);
    return 0;
  }
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["exact"] = r.exact;
  j["witness"] = witness_json(r.witness);
  if (has_second) j["witness_second"] = witness_json(r.witness_second);
  emit(j.dump(2) + "\n", o.output);
  return 0;
}

int run_probe(const std::string& family, int n_min, int n_max, double alpha, double beta,
              const std::string& lambda_name, const CommonOpts& o) {
  std::optional<WeightSequence> w;
  if (!lambda_name.empty()) w = parse_lambda(lambda_name);

  std::vector<ProbeReport> reports;
  for (int N = n_min; N <= n_max; ++N) {
    if (family == "partial-sum")
      reports.push_back(probe_partial_sum(N, w ? *w : WeightSequence::sqrt_log_family()));
    else
      reports.push_back(probe_cesaro(N, alpha, beta, w ? *w : WeightSequence::cesaro_family(alpha + beta)));
  }

  if (o.format == "csv") {
    std::string text = "N,functional_value,bound_check,variation_upper,growth_ratio\n";
    for (const auto& r : reports)
      text += std::to_string(r.N) + "," + real17(r.functional_value) + "," + real17(r.bound_check) +
              "," + real17(r.variation_upper) + "," + real17(r.growth_ratio) + "\n";
    emit(text, o.output);
    return 0;
  }
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(probe_json(r));
  emit(arr.dump(2) + "\n", o.output);
  return 0;
}

int run_check_lowest(int n, std::optional<int> scale, const CommonOpts& o) {
  const int gs = scale.value_or(2 * n + 2);
  const auto r = check_lowest(n, gs);
  if (o.format == "csv") {
    emit("n,grid_scale,min_product,argmin,holds\n" + std::to_string(r.n) + "," +
             std::to_string(r.grid_scale) + "," + real17(r.min_product) + "," + r.argmin.str() +
             "," + (r.bound_holds ? "true" : "false") + "\n",
         o.output);
    return r.bound_holds ? 0 : 1;
  }
  json j;
  j["n"] = r.n;
  j["grid_scale"] = r.grid_scale;
  j["min_product"] = r.min_product;
  j["argmin"] = r.argmin.str();
  j["holds"] = r.bound_holds;
  emit(j.dump(2) + "\n", o.output);
  return r.bound_holds ? 0 : 1;
}

int run_check_agreement(int n_max, int scale, const CommonOpts& o) {
  std::int64_t checked = 0;
  for (std::int64_t n = 1; n <= n_max; ++n)
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << scale); ++p) {
      const DyadicRational x(p, scale);
      const auto a = dirichlet(n, x, DirichletStrategy::direct);
      if (a != dirichlet(n, x, DirichletStrategy::recursive) ||
          a != dirichlet(n, x, DirichletStrategy::w3))
        throw std::runtime_error("strategy disagreement at n=" + std::to_string(n) +
                                 " x=" + x.str());
      ++checked;
    }
  if (o.format == "csv") {
    emit("n_max,scale,checked,agree\n" + std::to_string(n_max) + "," + std::to_string(scale) +
             "," + std::to_string(checked) + ",true\n",
         o.output);
    return 0;
  }
  json j;
  j["n_max"] = n_max;
  j["scale"] = scale;
  j["checked"] = checked;
  j["agree"] = true;
  emit(j.dump(2) + "\n", o.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walshlab: exact Walsh-Paley kernels, double Walsh-Fourier sums and means, "
               "generalized-variation functionals, divergence probes"};
  app.require_subcommand(1);

  // kernel
  auto* kernel = app.add_subcommand("kernel", "Trace a Dirichlet or Cesàro kernel over a dyadic grid");
  std::string k_type = "dirichlet", k_strategy = "recursive";
  std::int64_t k_n = 8;
  int k_scale = 3;
  double k_alpha = -0.3;
  CommonOpts k_opts;
  kernel->add_option("--type", k_type)->check(CLI::IsMember({"dirichlet", "cesaro"}))->capture_default_str();
  kernel->add_option("--n", k_n, "Kernel index")->check(CLI::PositiveNumber)->capture_default_str();
  kernel->add_option("--scale", k_scale, "Grid scale (2^scale cells)")->check(CLI::Range(0, 20))->capture_default_str();
  kernel->add_option("--alpha", k_alpha, "Cesàro order")->capture_default_str();
  kernel->add_option("--strategy", k_strategy)->check(CLI::IsMember({"direct", "recursive", "w3"}))->capture_default_str();
  add_common(kernel, k_opts);

  // partial-sum / cesaro
  auto* psum = app.add_subcommand("partial-sum", "Rectangular partial sum S_{n,m}(x,y;f)");
  std::string ps_f = "xy", ps_x = "0", ps_y = "0", ps_strategy = "coeff";
  std::int64_t ps_n = 16, ps_m = 16;
  CommonOpts ps_opts;
  psum->add_option("--function", ps_f, "Function spec")->capture_default_str();
  psum->add_option("--n", ps_n, "First-axis extent")->check(CLI::PositiveNumber)->capture_default_str();
  psum->add_option("--m", ps_m, "Second-axis extent")->check(CLI::PositiveNumber)->capture_default_str();
  psum->add_option("--x", ps_x, "Point, as p/2^s")->capture_default_str();
  psum->add_option("--y", ps_y, "Point, as p/2^s")->capture_default_str();
  psum->add_option("--strategy", ps_strategy)->check(CLI::IsMember({"coeff", "kernel"}))->capture_default_str();
  add_common(psum, ps_opts);

  auto* ces = app.add_subcommand("cesaro", "(C; alpha, beta) mean of the double series");
  std::string cs_f = "xy", cs_x = "0", cs_y = "0", cs_strategy = "definition";
  std::int64_t cs_n = 16, cs_m = 16;
  double cs_alpha = -0.3, cs_beta = -0.3;
  CommonOpts cs_opts;
  ces->add_option("--function", cs_f)->capture_default_str();
  ces->add_option("--n", cs_n)->check(CLI::PositiveNumber)->capture_default_str();
  ces->add_option("--m", cs_m)->check(CLI::PositiveNumber)->capture_default_str();
  ces->add_option("--alpha", cs_alpha)->capture_default_str();
  ces->add_option("--beta", cs_beta)->capture_default_str();
  ces->add_option("--x", cs_x)->capture_default_str();
  ces->add_option("--y", cs_y)->capture_default_str();
  ces->add_option("--strategy", cs_strategy)->check(CLI::IsMember({"definition", "kernel"}))->capture_default_str();
  add_common(ces, cs_opts);

  // variation
  auto* var = app.add_subcommand("variation", "Generalized-variation functionals");
  std::string v_f = "random-grid:2,1", v_functional = "lv1", v_lambda = "harmonic", v_mode = "exact";
  int v_n = 1, v_depth = 8;
  double v_alpha = 0.3, v_beta = 0.3;
  CommonOpts v_opts;
  var->add_option("--function", v_f)->capture_default_str();
  var->add_option("--functional", v_functional,
                  "lv1|lv2|lv12|sharp1|sharp2|star|plbv|total|vsharp|tail1|tail2|thm2|thm4")
      ->capture_default_str();
  var->add_option("--lambda", v_lambda, "ones|harmonic|nlog|sqrtlog|npow:<g>|cesaro:<s>")->capture_default_str();
  var->add_option("--mode", v_mode)->check(CLI::IsMember({"exact", "heuristic"}))->capture_default_str();
  var->add_option("--n", v_n, "vsharp count / tail shift")->check(CLI::PositiveNumber)->capture_default_str();
  var->add_option("--alpha", v_alpha)->capture_default_str();
  var->add_option("--beta", v_beta)->capture_default_str();
  var->add_option("--depth", v_depth, "Diagnostic depth J")->check(CLI::Range(1, 20))->capture_default_str();
  add_common(var, v_opts);

  // probe
  auto* probe = app.add_subcommand("probe", "Divergence probes at (0,0)");
  std::string p_family = "partial-sum", p_lambda;
  int p_min = 1, p_max = 4;
  double p_alpha = 0.3, p_beta = 0.3;
  CommonOpts p_opts;
  probe->add_option("--family", p_family)->check(CLI::IsMember({"partial-sum", "cesaro"}))->capture_default_str();
  probe->add_option("--n-min", p_min)->check(CLI::PositiveNumber)->capture_default_str();
  probe->add_option("--n-max", p_max)->check(CLI::PositiveNumber)->capture_default_str();
  probe->add_option("--alpha", p_alpha)->capture_default_str();
  probe->add_option("--beta", p_beta)->capture_default_str();
  probe->add_option("--lambda", p_lambda, "Weight family (default per family)");
  add_common(probe, p_opts);

  // check
  auto* check = app.add_subcommand("check", "Self-checks");
  auto* lowest = check->add_subcommand("lowest", "Kernel floor |D_{q_n}(x)| 4x >= 1");
  int cl_n = 3;
  std::optional<int> cl_scale;
  CommonOpts cl_opts;
  lowest->add_option("--n", cl_n)->check(CLI::Range(1, 8))->capture_default_str();
  lowest->add_option("--scale", cl_scale, "Grid scale (default 2n+2)");
  add_common(lowest, cl_opts);
  auto* agreement = check->add_subcommand("agreement", "Dirichlet strategy agreement");
  int ca_nmax = 64, ca_scale = 8;
  CommonOpts ca_opts;
  agreement->add_option("--n-max", ca_nmax)->check(CLI::Range(1, 1024))->capture_default_str();
  agreement->add_option("--scale", ca_scale)->check(CLI::Range(0, 12))->capture_default_str();
  add_common(agreement, ca_opts);
  check->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << std::endl;
    return 2;
  }

  try {
    if (kernel->parsed()) return run_kernel(k_type, k_n, k_scale, k_alpha, k_strategy, k_opts);
    if (psum->parsed())
      return run_sum_like(false, ps_f, ps_n, ps_m, std::nullopt, std::nullopt, ps_x, ps_y,
                          ps_strategy, ps_opts);
    if (ces->parsed())
      return run_sum_like(true, cs_f, cs_n, cs_m, cs_alpha, cs_beta, cs_x, cs_y, cs_strategy,
                          cs_opts);
    if (var->parsed())
      return run_variation(v_f, v_functional, v_lambda, v_mode, v_n, v_alpha, v_beta, v_depth,
                           v_opts);
    if (probe->parsed()) return run_probe(p_family, p_min, p_max, p_alpha, p_beta, p_lambda, p_opts);
    if (lowest->parsed()) return run_check_lowest(cl_n, cl_scale, cl_opts);
    if (agreement->parsed()) return run_check_agreement(ca_nmax, ca_scale, ca_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << std::endl;
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid arguments: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}
