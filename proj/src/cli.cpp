#include "infogeo/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "infogeo/csv.hpp"
#include "infogeo/geodesics.hpp"
#include "infogeo/model_rgauss.hpp"
#include "infogeo/model_vmf.hpp"
#include "infogeo/spd.hpp"
#include "infogeo/warped.hpp"

namespace infogeo {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EscapeEvent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string model = "vmf";
  int n = 3;
  int n_min = 2;
  int n_max = 8;
  double grid_min = 0.0;
  double grid_max = 0.0;
  int grid_count = 0;
  bool grid_log = true;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  double sigma = 1.0;
  double u_sigma = 0.0;
  double t_end = 1.0;
  int steps = 100;
  std::string x, y, point, velocity, psi_table;
  std::string out;
  std::string format = "csv";
};

const char* kHelpFooter = R"(Commands and CSV columns:
  table1      n, Ks_inf, Kr_inf, plateau_spread (plateau = mean over eta in [100, 200])
  curvature   eta, Ks, Kr (vmf) or sigma, Ks, Kr (isonormal, --n is d)
  psi-table   eta, sigma, psi, psi_p, psi_pp, stderr_psi_p, stderr_psi_pp, samples, seed
  distance    rgauss: affine_distance, mahalanobis; isonormal: euclidean_distance, mahalanobis
  geodesic    t, sigma, r, then the base point flattened (x1.. or x11, x12, ..)
--x/--y/--point/--velocity take a file (whitespace-separated numbers, n x n for matrices)
or an inline comma-separated list.
Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 escape event.
Environment: INFOGEO_THREADS caps tabulation threads.)";

std::vector<double> grid(const RunConfig& c, double dmin, double dmax, int dcount) {
  const double lo = c.grid_min > 0.0 ? c.grid_min : dmin;
  const double hi = c.grid_max > 0.0 ? c.grid_max : dmax;
  const int count = c.grid_count > 0 ? c.grid_count : dcount;
  if (count < 2) throw ConfigError("grid count must be >= 2");
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("grid needs 0 < min < max");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    g[static_cast<std::size_t>(i)] = c.grid_log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                                                : lo + f * (hi - lo);
  }
  return g;
}

std::vector<double> read_numbers(const std::string& source, const char* what) {
  if (source.empty()) throw ConfigError(std::string("missing --") + what);
  std::string text;
  if (std::filesystem::is_regular_file(source)) {
    std::ifstream f(source);
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  } else {
    text = source;
  }
  for (char& ch : text)
    if (ch == ',') ch = ' ';
  std::istringstream is(text);
  std::vector<double> v;
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(std::string("malformed number in --") + what + ": " + tok);
    }
  }
  if (v.empty()) throw ConfigError(std::string("no values in --") + what);
  return v;
}

Eigen::VectorXd read_vector(const std::string& source, const char* what) {
  const auto v = read_numbers(source, what);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

Eigen::MatrixXd read_matrix(const std::string& source, const char* what) {
  const auto v = read_numbers(source, what);
  const auto n = static_cast<long>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (static_cast<std::size_t>(n * n) != v.size()) throw ConfigError(std::string("--") + what + ": expected n*n entries");
  Eigen::MatrixXd m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
  return m;
}

RGaussModel load_rgauss(const RunConfig& c, int n) {
  if (!c.psi_table.empty()) {
    std::ifstream f(c.psi_table);
    if (!f) throw ConfigError("cannot open psi table " + c.psi_table);
    return RGaussModel(read_psi_table_csv(f, n));
  }
  if (c.samples < 10000) throw ConfigError("--samples must be >= 10000");
  return RGaussModel(tabulate_psi(n, default_eta_grid(), c.samples, c.seed));
}

int cmd_table1(const RunConfig& c, std::ostream& os) {
  if (c.n_min < 2 || c.n_max > 64 || c.n_min > c.n_max) throw ConfigError("need 2 <= n-min <= n-max <= 64");
  TableWriter w(os, c.format == "dat" ? TableFormat::dat : TableFormat::csv);
  w.header({"n", "Ks_inf", "Kr_inf", "plateau_spread"});
  bool ok = true;
  std::vector<double> g(21);
  for (int i = 0; i < 21; ++i) g[static_cast<std::size_t>(i)] = 100.0 * std::pow(2.0, i / 20.0);
  for (int n = c.n_min; n <= c.n_max; ++n) {
    const CurvatureProfile cp = vmf_curvature_profile(VmfModel(n), g);
    const double spread = std::max(cp.ks_spread, cp.kr_spread);
    ok = ok && spread <= 0.01;
    w.row({static_cast<double>(n), cp.ks_plateau, cp.kr_plateau, spread});
  }
  return ok ? kExitOk : kExitNumerical;
}

int cmd_curvature(const RunConfig& c, std::ostream& os) {
  TableWriter w(os, c.format == "dat" ? TableFormat::dat : TableFormat::csv);
  if (c.model == "vmf") {
    const auto g = grid(c, 0.05, 200.0, 100);
    const CurvatureProfile cp = vmf_curvature_profile(VmfModel(c.n), g);
    w.header({"eta", "Ks", "Kr"});
    for (std::size_t i = 0; i < g.size(); ++i) w.row({cp.eta[i], cp.ks[i], cp.kr[i]});
    return kExitOk;
  }
  if (c.model == "isonormal") {
    const auto g = grid(c, 0.1, 10.0, 100);
    const WarpProfile p = isotropic_normal_profile(c.n);
    w.header({"sigma", "Ks", "Kr"});
    for (double s : g) {
      const Curvatures k = curvatures(p, 0.0, s);
      w.row({s, k.ks, k.kr});
    }
    return kExitOk;
  }
  throw ConfigError("curvature supports --model vmf or isonormal");
}

int cmd_psi_table(const RunConfig& c, std::ostream& os) {
  if (c.samples < 10000) throw ConfigError("--samples must be >= 10000");
  if (c.n < 1 || c.n > 12) throw ConfigError("psi-table needs 1 <= n <= 12");
  const auto s = grid(c, 0.05, 5.0, 40);
  if (s.size() < 4) throw ConfigError("psi-table needs at least 4 grid points");
  std::vector<double> eta;
  for (double v : s) eta.push_back(-0.5 / (v * v));
  std::sort(eta.begin(), eta.end());
  const PsiTable t = tabulate_psi(c.n, eta, c.samples, c.seed);
  if (c.format == "dat") {
    TableWriter w(os, TableFormat::dat);
    w.header({"eta", "sigma", "psi", "psi_p", "psi_pp", "stderr_psi_p", "stderr_psi_pp", "samples", "seed"});
    for (std::size_t i = 0; i < t.eta.size(); ++i)
      w.row({t.eta[i], t.sigma[i], t.psi[i], t.psi_p[i], t.psi_pp[i], t.stderr_psi_p[i], t.stderr_psi_pp[i],
             static_cast<double>(t.samples), static_cast<double>(t.seed)});
  } else {
    write_psi_table_csv(os, t);
  }
  return kExitOk;
}

int cmd_distance(const RunConfig& c, std::ostream& os) {
  TableWriter w(os, c.format == "dat" ? TableFormat::dat : TableFormat::csv);
  if (c.model == "isonormal") {
    const Eigen::VectorXd x = read_vector(c.x, "x"), y = read_vector(c.y, "y");
    if (x.size() != y.size()) throw ConfigError("points differ in dimension");
    w.header({"euclidean_distance", "mahalanobis"});
    w.row({(x - y).norm(), isonormal_mahalanobis(x, y, c.sigma)});
    return kExitOk;
  }
  if (c.model == "rgauss") {
    const Eigen::MatrixXd xm = read_matrix(c.x, "x"), ym = read_matrix(c.y, "y");
    if (xm.rows() != ym.rows()) throw ConfigError("matrices differ in dimension");
    const SpdMatrix x(xm), y(ym);
    const RGaussModel m = load_rgauss(c, x.dim());
    w.header({"affine_distance", "mahalanobis"});
    w.row({affine_distance(x, y), m.mahalanobis(x, y, c.sigma)});
    return kExitOk;
  }
  throw ConfigError("distance supports --model rgauss or isonormal");
}

int cmd_geodesic(const RunConfig& c, std::ostream& os) {
  GeodesicProblem p;
  if (c.model == "vmf") {
    const Eigen::VectorXd z = read_vector(c.point, "point");
    const Eigen::VectorXd u = read_vector(c.velocity, "velocity");
    p = vmf_geodesic_problem(VmfModel(static_cast<int>(z.size())), z, u);
  } else if (c.model == "isonormal") {
    const Eigen::VectorXd x = read_vector(c.point, "point");
    const Eigen::VectorXd u = read_vector(c.velocity, "velocity");
    if (x.size() != u.size()) throw ConfigError("point and velocity differ in dimension");
    p = isonormal_geodesic_problem(x, c.sigma, c.u_sigma, u);
  } else if (c.model == "rgauss") {
    const SpdMatrix x(read_matrix(c.point, "point"));
    const Eigen::MatrixXd u = read_matrix(c.velocity, "velocity");
    const RGaussModel m = load_rgauss(c, x.dim());
    p = rgauss_geodesic_problem(m, x, c.sigma, c.u_sigma, u);
  } else {
    throw ConfigError("geodesic supports --model vmf, rgauss or isonormal");
  }
  if (!(c.t_end > 0.0) || c.steps < 1) throw ConfigError("need --t-end > 0 and --steps >= 1");
  const GeodesicPath path = solve_geodesic(p, c.t_end, c.steps);
  TableWriter w(os, c.format == "dat" ? TableFormat::dat : TableFormat::csv);
  std::vector<std::string> head = {"t", "sigma", "r"};
  head.insert(head.end(), path.base_columns.begin(), path.base_columns.end());
  w.header(head);
  for (const PathSample& s : path.samples) {
    std::vector<double> row = {s.t, s.sigma, s.r};
    const auto flat = p.base->flatten(s.x);
    row.insert(row.end(), flat.begin(), flat.end());
    w.row(row);
  }
  if (path.status != PathStatus::completed) throw EscapeEvent(path.message);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Warped information geometry of location-scale models"};
  app.footer(kHelpFooter);
  RunConfig c;
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.add_option("command", c.command, "table1 | curvature | psi-table | distance | geodesic")
      ->required()
      ->check(CLI::IsMember({"table1", "curvature", "psi-table", "distance", "geodesic"}));
  app.add_option("--model", c.model, "vmf | rgauss | isonormal")
      ->check(CLI::IsMember({"vmf", "rgauss", "isonormal"}));
  app.add_option("--n", c.n, "dimension (vMF ambient n, P_n size, or isonormal d)");
  app.add_option("--n-min", c.n_min, "table1 first n");
  app.add_option("--n-max", c.n_max, "table1 last n");
  app.add_option("--grid-min", c.grid_min, "grid lower end (eta for vmf, sigma otherwise)");
  app.add_option("--grid-max", c.grid_max, "grid upper end");
  app.add_option("--grid-count", c.grid_count, "grid points (>= 2)");
  app.add_option("--grid-log", c.grid_log, "geometric (true) or linear (false) spacing");
  app.add_option("--samples", c.samples, "Monte Carlo samples (>= 10000)");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--sigma", c.sigma, "scale sigma (distance, geodesic start)");
  app.add_option("--u-sigma", c.u_sigma, "initial sigma velocity (geodesic)");
  app.add_option("--t-end", c.t_end, "geodesic end time");
  app.add_option("--steps", c.steps, "geodesic output steps");
  app.add_option("--x", c.x, "first point (distance)");
  app.add_option("--y", c.y, "second point (distance)");
  app.add_option("--point", c.point, "start point (geodesic; z for vmf)");
  app.add_option("--velocity", c.velocity, "initial base velocity (geodesic; U for vmf)");
  app.add_option("--psi-table", c.psi_table, "precomputed psi table CSV (rgauss)");
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--format", c.format, "csv | dat")->check(CLI::IsMember({"csv", "dat"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::ostringstream buf;
  int code = kExitOk;
  try {
    if (c.command == "table1") code = cmd_table1(c, buf);
    else if (c.command == "curvature") code = cmd_curvature(c, buf);
    else if (c.command == "psi-table") code = cmd_psi_table(c, buf);
    else if (c.command == "distance") code = cmd_distance(c, buf);
    else code = cmd_geodesic(c, buf);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const EscapeEvent& e) {
    err << "escape: " << e.what() << '\n';
    code = kExitEscape;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  if (c.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      err << "config error: cannot write " << c.out << '\n';
      return kExitConfig;
    }
    f << buf.str();
  }
  return code;
}

}  // namespace infogeo
