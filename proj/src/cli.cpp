#include "rsobolev/cli.hpp"

#include "rsobolev/concentration.hpp"
#include "rsobolev/errors.hpp"
#include "rsobolev/graph.hpp"
#include "rsobolev/io.hpp"
#include "rsobolev/sobolev.hpp"
#include "rsobolev/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rsobolev {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
  unsigned workers = 1;

  // semigroup / graph sources
  bool binary = false;
  std::string generator_file;
  std::vector<std::string> graph_spec;
  std::string graph_file;
  int power = 1;

  // numeric parameters
  std::string q = "2";
  std::string p;
  int n = 1;
  int m = 1;
  int alpha_points = 64;
  std::optional<double> alpha;
  int grid_divisions = 400;
  int polish_iterations = 4000;
  bool closed_form = false;

  // concentration
  std::string family = "gaussian";
  std::vector<double> p_values{0.0};
  std::vector<double> r_values{1.0};
  std::vector<int> n_values{10};
  bool clamp = false;

  // extremal
  std::string variant = "conditional-typical";
  std::vector<double> first;
  std::vector<double> second;
  double lambda = 1.0;
  double epsilon = 0.2;
  double beta = 0.1;
};

double parse_order(const std::string& s, const char* name) {
  if (s == "inf" || s == "infinity" || s == "+inf") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string("cannot parse ") + name + " = '" + s + "'");
  }
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? Json("nan") : Json(v > 0 ? "inf" : "-inf");
}

Json metadata(const RunConfig& cfg, const std::string& command) {
  return Json{{"command", command}, {"seed", cfg.seed}, {"version", kVersion}};
}

Graph base_graph(const RunConfig& cfg) {
  if (!cfg.graph_file.empty()) return read_edge_list(cfg.graph_file);
  if (cfg.graph_spec.empty()) throw ValidationError("a graph is required (--graph or --graph-file)");
  const std::string& kind = cfg.graph_spec[0];
  int k = -1;
  if (cfg.graph_spec.size() > 1) k = static_cast<int>(parse_order(cfg.graph_spec[1], "graph size"));
  if (cfg.graph_spec.size() > 2) throw ValidationError("--graph takes a name and at most one size");
  if (kind == "hypercube") return Graph::hypercube(k < 0 ? 1 : k);
  if (kind == "complete") {
    if (k < 0) throw ValidationError("complete needs a vertex count");
    return Graph::complete(k);
  }
  if (kind == "cycle") {
    if (k < 0) throw ValidationError("cycle needs a vertex count");
    return Graph::cycle(k);
  }
  throw ValidationError("unknown graph '" + kind + "' (hypercube, complete, cycle)");
}

Semigroup semigroup_source(const RunConfig& cfg) {
  const int sources = int(cfg.binary) + int(!cfg.generator_file.empty()) +
                      int(!cfg.graph_spec.empty() || !cfg.graph_file.empty());
  if (sources != 1) throw ValidationError("choose exactly one of --binary, --generator, --graph/--graph-file");
  if (cfg.binary) return binary_semigroup();
  if (!cfg.generator_file.empty()) return validate_semigroup(read_matrix_file(cfg.generator_file));
  return graph_generator(base_graph(cfg));
}

SolverConfig solver(const RunConfig& cfg) {
  SolverConfig s;
  s.grid_divisions = cfg.grid_divisions;
  s.polish_iterations = cfg.polish_iterations;
  s.seed = cfg.seed;
  s.workers = cfg.workers;
  return s;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output);
  if (!f) throw ValidationError("cannot write " + cfg.output);
  f << text;
}

void check_format(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") throw ValidationError("--format must be csv or json");
}

Json curve_json(const SampledCurve& c) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < c.grid.size(); ++i) pts.push_back({number(c.grid[i]), number(c.values[i])});
  return Json{{"kind", to_string(c.kind)}, {"q", number(c.q)}, {"p", number(c.p)}, {"n", c.n}, {"points", pts}};
}

int cmd_xi(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const Semigroup s = semigroup_source(cfg);
  const double q = parse_order(cfg.q, "q");
  const double p = cfg.p.empty() ? q : parse_order(cfg.p, "p");
  const SolverConfig sc = solver(cfg);
  const bool closed = cfg.closed_form && cfg.binary;
  if (cfg.closed_form && !cfg.binary) throw ValidationError("--closed-form needs --binary");
  const bool multi = cfg.n > 1 || p != q;

  std::vector<SampledCurve> curves;
  if (cfg.alpha) {
    const double a = *cfg.alpha;
    double v;
    if (multi)
      v = xi_pq_n(s, p, q, cfg.n, a, sc);
    else
      v = closed ? binary_xi_q(q, a) : xi_q(s, q, a, sc);
    SampledCurve c{{a}, {v}, multi ? CurveKind::xi_pq_n : CurveKind::xi_q, q, p, cfg.n};
    curves.push_back(c);
  } else {
    const std::vector<double> grid = alpha_grid(s, cfg.alpha_points);
    SampledCurve base = closed ? binary_xi_curve(q, grid) : xi_curve(s, q, grid, sc);
    curves.push_back(base);
    curves.push_back(conv_envelope(base));
    if (multi) {
      SampledCurve c{grid, std::vector<double>(grid.size()), CurveKind::xi_pq_n, q, p, cfg.n};
      for (std::size_t i = 0; i < grid.size(); ++i) c.values[i] = xi_pq_n(s, p, q, cfg.n, grid[i], sc);
      curves.push_back(c);
    }
  }

  std::ostringstream text;
  if (cfg.format == "csv") {
    write_curves_csv(text, curves);
  } else {
    Json j{{"metadata", metadata(cfg, "xi")}, {"curves", Json::array()}};
    for (const auto& c : curves) j["curves"].push_back(curve_json(c));
    text << j.dump(2) << '\n';
  }
  emit(cfg, out, text.str());
  return kExitOk;
}

int cmd_qradius(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const Graph g = cfg.power == 1 ? base_graph(cfg) : cartesian_power(base_graph(cfg), cfg.power);
  const double q = parse_order(cfg.q, "q");
  RadiusConfig rc;
  rc.seed = cfg.seed;
  const RadiusResult r = q_radius(g.adjacency(), q, rc);
  std::ostringstream text;
  if (cfg.format == "csv") {
    text << "q,value,vertices,degree\n"
         << format_double(q) << ',' << format_double(r.value) << ',' << g.vertex_count() << ',' << g.degree() << '\n';
  } else {
    Json j{{"metadata", metadata(cfg, "qradius")},
           {"q", number(q)},
           {"value", number(r.value)},
           {"vertices", g.vertex_count()},
           {"degree", g.degree()}};
    text << j.dump(2) << '\n';
  }
  emit(cfg, out, text.str());
  return kExitOk;
}

int cmd_faber_krahn(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const Graph g = base_graph(cfg);
  const double q = parse_order(cfg.q, "q");
  FaberKrahnConfig fc;
  fc.radius.seed = cfg.seed;
  fc.workers = cfg.workers;
  const FaberKrahnResult r = faber_krahn_exact(g, cfg.n, q, cfg.m, fc);

  // Upper bound through the log-Sobolev curve when one is available.
  std::optional<double> bound;
  const double vertices = std::pow(static_cast<double>(g.vertex_count()), cfg.n);
  if (q > 1.0 && std::isfinite(q) && cfg.m >= 2 && cfg.m <= vertices) {
    if (g.vertex_count() == 2) {
      bound = binary_faber_krahn_bound(q, cfg.n, cfg.m);
    } else if (g.vertex_count() <= 4) {
      const Semigroup s = graph_generator(g);
      std::vector<double> grid = alpha_grid(s, cfg.alpha_points);
      const double a = std::log(g.vertex_count()) - std::log(static_cast<double>(cfg.m)) / cfg.n;
      grid.push_back(a);
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
      bound = faber_krahn_bound(g.degree(), q, conv_envelope(xi_curve(s, q, grid, solver(cfg))), g.vertex_count(),
                                cfg.n, cfg.m);
    }
  }

  std::ostringstream text;
  if (cfg.format == "csv") {
    text << "q,n,m,value,bound,witness\n"
         << format_double(q) << ',' << cfg.n << ',' << cfg.m << ',' << format_double(r.value) << ','
         << (bound ? format_double(*bound) : "") << ',';
    for (std::size_t i = 0; i < r.witness.size(); ++i) text << (i ? " " : "") << r.witness[i];
    text << '\n';
  } else {
    Json j{{"metadata", metadata(cfg, "faber-krahn")},
           {"q", number(q)},
           {"n", cfg.n},
           {"m", cfg.m},
           {"value", number(r.value)},
           {"witness", r.witness},
           {"bound", bound ? number(*bound) : Json(nullptr)}};
    text << j.dump(2) << '\n';
  }
  emit(cfg, out, text.str());
  return kExitOk;
}

int cmd_concentration(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  if (cfg.family != "gaussian" && cfg.family != "hypercube")
    throw ValidationError("--family must be gaussian or hypercube");
  const bool gauss = cfg.family == "gaussian";
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "n,p,r,bound,baseline,q_star,quadrature_error\n";
  const std::vector<int> ns = gauss ? std::vector<int>{1} : cfg.n_values;
  for (int n : ns)
    for (double p : cfg.p_values)
      for (double r : cfg.r_values) {
        BoundReport rep{};
        if (gauss) {
          rep.n = 1;
          rep.p = p;
          rep.r = r;
          rep.bound = gaussian_bound(p, r);
          rep.log_bound = std::log(rep.bound);
          rep.q_star = gaussian_optimal_q(p, r);
          rep.baseline = gaussian_bound(0.0, r);
          rep.baseline_p0 = rep.baseline;
        } else {
          rep = hypercube_bound(n, p, r);
        }
        const double shown = cfg.clamp ? std::min(1.0, rep.bound) : rep.bound;
        csv << rep.n << ',' << format_double(p) << ',' << format_double(r) << ',' << format_double(shown) << ','
            << format_double(rep.baseline) << ',' << format_double(rep.q_star) << ','
            << format_double(rep.quadrature_error) << '\n';
        rows.push_back(Json{{"n", rep.n},
                            {"p", number(p)},
                            {"r", number(r)},
                            {"bound", number(shown)},
                            {"log_bound", number(rep.log_bound)},
                            {"baseline", number(rep.baseline)},
                            {"q_star", number(rep.q_star)},
                            {"quadrature_error", number(rep.quadrature_error)}});
      }
  std::ostringstream text;
  if (cfg.format == "csv") {
    text << csv.str();
  } else {
    Json j{{"metadata", metadata(cfg, "concentration")}, {"family", cfg.family}, {"clamped", cfg.clamp}};
    if (rows.size() == 1)
      j["report"] = rows[0];
    else
      j["reports"] = rows;
    text << j.dump(2) << '\n';
  }
  emit(cfg, out, text.str());
  return kExitOk;
}

int cmd_extremal(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const Semigroup s = semigroup_source(cfg);
  ExtremalSpec spec;
  if (cfg.variant == "conditional-typical")
    spec.variant = ExtremalVariant::conditional_typical;
  else if (cfg.variant == "product")
    spec.variant = ExtremalVariant::product;
  else if (cfg.variant == "dirac-mixture")
    spec.variant = ExtremalVariant::dirac_mixture;
  else
    throw ValidationError("--variant must be conditional-typical, product or dirac-mixture");
  const Eigen::VectorXd& pi = s.stationary();
  const std::vector<double> uniform(pi.data(), pi.data() + pi.size());
  spec.first = cfg.first.empty() ? uniform : cfg.first;
  spec.second = cfg.second.empty() ? spec.first : cfg.second;
  spec.lambda = cfg.lambda;
  spec.epsilon = cfg.epsilon;
  spec.n = cfg.n;
  spec.beta = cfg.beta;
  const double q = parse_order(cfg.q, "q");
  const double p = cfg.p.empty() ? q : parse_order(cfg.p, "p");
  const ExtremalReport rep = extremal_report(spec, s, p, q);
  std::ostringstream text;
  if (cfg.format == "csv") {
    text << "variant,n,p,q,ent_rate,dirichlet_rate\n"
         << cfg.variant << ',' << cfg.n << ',' << format_double(p) << ',' << format_double(q) << ','
         << format_double(rep.ent_rate) << ',' << format_double(rep.dirichlet_rate) << '\n';
  } else {
    Json j{{"metadata", metadata(cfg, "extremal")},
           {"variant", cfg.variant},
           {"n", cfg.n},
           {"p", number(p)},
           {"q", number(q)},
           {"ent_rate", number(rep.ent_rate)},
           {"dirichlet_rate", number(rep.dirichlet_rate)}};
    text << j.dump(2) << '\n';
  }
  emit(cfg, out, text.str());
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const std::vector<CheckResult> results = run_invariant_suite(cfg.seed);
  std::ostringstream text;
  int passed = 0;
  for (const auto& r : results) {
    passed += r.passed;
    text << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(66) << r.name << r.detail << '\n';
  }
  text << passed << "/" << results.size() << " checks passed\n";
  emit(cfg, out, text.str());
  return passed == static_cast<int>(results.size()) ? kExitOk : kExitVerification;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "PRNG seed for multistart searches")->capture_default_str();
  sub->add_option("--format", cfg.format, "Output format: csv or json")->capture_default_str();
  sub->add_option("-o,--output", cfg.output, "Write output to this file instead of stdout");
  sub->add_option("--workers", cfg.workers, "Worker threads for sweeps and enumeration (0 = all cores)")
      ->capture_default_str();
}

void add_graph(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--graph", cfg.graph_spec, "Built-in graph: hypercube [n] | complete k | cycle k")
      ->expected(1, 2);
  sub->add_option("--graph-file", cfg.graph_file, "Edge list file ('|V| |E|' then 'u v' lines)");
}

void add_semigroup(CLI::App* sub, RunConfig& cfg) {
  sub->add_flag("--binary", cfg.binary, "Two-point chain with L(x,y) = 1{x != y} - 1/2");
  sub->add_option("--generator", cfg.generator_file, "Generator matrix file (whitespace-separated rows)");
  add_graph(sub, cfg);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Renyi-Sobolev laboratory for finite Markov semigroups"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* xi = app.add_subcommand("xi", "Log-Sobolev and Renyi-Sobolev curves");
  add_common(xi, cfg);
  add_semigroup(xi, cfg);
  xi->add_option("--q", cfg.q, "Order q")->capture_default_str();
  xi->add_option("--p", cfg.p, "Order p (defaults to q)");
  xi->add_option("--n", cfg.n, "Product dimension")->capture_default_str();
  xi->add_option("--grid", cfg.alpha_points, "Number of alpha grid points")->capture_default_str();
  xi->add_option("--alpha", cfg.alpha, "Evaluate at a single alpha");
  xi->add_option("--grid-step", cfg.grid_divisions, "Simplex grid divisions per coordinate")->capture_default_str();
  xi->add_option("--polish-iterations", cfg.polish_iterations, "Local polish iterations")->capture_default_str();
  xi->add_flag("--closed-form", cfg.closed_form, "Use the closed form (two-point chain only)");

  auto* qr = app.add_subcommand("qradius", "q-radius of a graph adjacency matrix");
  add_common(qr, cfg);
  add_graph(qr, cfg);
  qr->add_option("--q", cfg.q, "Order q in [1, inf] or 0")->capture_default_str();
  qr->add_option("--power", cfg.power, "Cartesian power of the graph")->capture_default_str();

  auto* fk = app.add_subcommand("faber-krahn", "Exact Faber-Krahn maximum of G^n");
  add_common(fk, cfg);
  add_graph(fk, cfg);
  fk->add_option("--n", cfg.n, "Cartesian power")->capture_default_str();
  fk->add_option("--q", cfg.q, "Order q")->capture_default_str();
  fk->add_option("--m", cfg.m, "Maximum subgraph size")->required();
  fk->add_option("--grid", cfg.alpha_points, "Alpha grid points for the bound curve")->capture_default_str();

  auto* co = app.add_subcommand("concentration", "Concentration bounds");
  add_common(co, cfg);
  co->add_option("--family", cfg.family, "gaussian or hypercube")->capture_default_str();
  co->add_option("--p", cfg.p_values, "Order(s) p")->capture_default_str();
  co->add_option("--r", cfg.r_values, "Deviation(s) r")->capture_default_str();
  co->add_option("--n", cfg.n_values, "Dimension(s) n (hypercube)")->capture_default_str();
  co->add_flag("--clamp", cfg.clamp, "Clamp reported bounds to 1");

  auto* ex = app.add_subcommand("extremal", "Rates of the finite-n extremal constructions");
  add_common(ex, cfg);
  add_semigroup(ex, cfg);
  ex->add_option("--variant", cfg.variant, "conditional-typical, product or dirac-mixture")->capture_default_str();
  ex->add_option("--first", cfg.first, "First single-letter law Q")->delimiter(',');
  ex->add_option("--second", cfg.second, "Second single-letter law R")->delimiter(',');
  ex->add_option("--lambda", cfg.lambda, "Fraction of coordinates drawn from Q")->capture_default_str();
  ex->add_option("--epsilon", cfg.epsilon, "Typicality slack")->capture_default_str();
  ex->add_option("--beta", cfg.beta, "Point-mass exponent (dirac-mixture)")->capture_default_str();
  ex->add_option("--n", cfg.n, "Dimension")->capture_default_str();
  ex->add_option("--q", cfg.q, "Order q")->capture_default_str();
  ex->add_option("--p", cfg.p, "Order p (defaults to q)");

  auto* ve = app.add_subcommand("verify", "Run the invariant suite");
  ve->add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
  ve->add_option("-o,--output", cfg.output, "Write the table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (xi->parsed()) return cmd_xi(cfg, out);
    if (qr->parsed()) return cmd_qradius(cfg, out);
    if (fk->parsed()) return cmd_faber_krahn(cfg, out);
    if (co->parsed()) return cmd_concentration(cfg, out);
    if (ex->parsed()) return cmd_extremal(cfg, out);
    if (ve->parsed()) return cmd_verify(cfg, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace rsobolev
