#include "ffedge/cli.hpp"

#include "ffedge/hydro.hpp"
#include "ffedge/lattice.hpp"
#include "ffedge/limitkernels.hpp"
#include "ffedge/opuc.hpp"
#include "ffedge/special.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace ffedge {

using nlohmann::json;

namespace {

const std::map<std::string, Command> kCommands = {
    {"density-profile", Command::density_profile}, {"density-map", Command::density_map},
    {"kernel", Command::kernel},                   {"partition", Command::partition},
    {"converge", Command::converge},               {"quench", Command::quench},
    {"verify", Command::verify}};

const std::vector<std::string> kSuites = {"cross-formula", "conservation", "gcbo", "dpii", "tw", "tacnode", "quench"};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> hex_list(const std::vector<Real>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(hex_string(x));
  return out;
}

double require(const std::optional<double>& v, const char* name) {
  if (!v) throw ConfigError(std::string("missing --") + name);
  return *v;
}

PrecisionContext context_for(const RunConfig& c, double R) {
  PrecisionContext ctx;
  ctx.bits = c.bits ? c.bits : lattice_bits(R);
  ctx.rel_tol = c.tol;
  ctx.validate();
  return ctx;
}

PrecisionContext double_context(const RunConfig& c) {
  PrecisionContext ctx;
  ctx.rel_tol = std::max(c.tol, 1e-12);
  return ctx;
}

json precision_json(const PrecisionContext& ctx) { return {{"bits", ctx.bits}, {"rel_tol", ctx.rel_tol}}; }

// L from --L, else round(lambda R)
ModelParams model_from(const RunConfig& c) {
  const double R = require(c.R, "R");
  ModelParams p = c.L ? ModelParams{c.alpha, R, *c.L} : ModelParams::from_lambda(require(c.lambda, "lambda"), c.alpha, R);
  p.validate();
  return p;
}

std::vector<double> grid_values(const RunConfig& c, const char* what) {
  if (!c.grid) throw ConfigError(std::string("missing --grid for ") + what);
  return c.grid->values();
}

Dataset density_profile_cmd(const RunConfig& c) {
  const std::string mode = c.mode.empty() ? "analytic" : c.mode;
  if (mode != "analytic" && mode != "lattice" && mode != "both") throw ConfigError("density-profile: mode must be analytic, lattice or both");
  const auto X = grid_values(c, "density-profile");
  Dataset d;
  const bool lattice = mode != "analytic";
  std::optional<ModelParams> p;
  if (lattice) p = model_from(c);
  // analytic profile at the lattice's own lambda when a lattice is involved
  const double lambda = p ? p->lambda() : require(c.lambda, "lambda");
  HydroParams h(lambda, c.alpha);
  auto prof = density_profile(X, h);
  d.column("X") = X;
  d.column("rho_analytic") = prof.rho;
  auto& region = d.column("region");
  for (auto r : prof.region) region.push_back(static_cast<double>(r));
  d.metadata["lambda_analytic"] = lambda;
  d.metadata["region_codes"] = {"frozen_empty", "fluctuating", "frozen_full"};
  if (lattice) {
    auto ctx = context_for(c, p->R);
    ToeplitzDensity td(*p, ctx);
    std::vector<long> xs;
    for (double v : X) xs.push_back(std::lround(v * p->R));
    const long lo = *std::min_element(xs.begin(), xs.end()), hi = *std::max_element(xs.begin(), xs.end());
    auto rho = td.density(0.0, {lo, hi});
    std::vector<Real> picked;
    auto& xc = d.column("x");
    auto& rl = d.column("rho_lattice");
    auto& diff = d.column("abs_diff");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      picked.push_back(rho[xs[i] - lo]);
      xc.push_back(static_cast<double>(xs[i]));
      rl.push_back(to_double(picked.back()));
      diff.push_back(std::abs(rl.back() - prof.rho[i]));
    }
    d.metadata["precision"] = precision_json(ctx);
    d.metadata["residuals"] = {{"toeplitz_inverse", td.inverse_residual()}};
    d.metadata["hex"] = {{"rho_lattice", hex_list(picked)}};
    d.metadata["model"] = {{"alpha", p->alpha}, {"R", p->R}, {"L", p->L}, {"N", p->N()}};
  }
  return d;
}

Dataset density_map_cmd(const RunConfig& c) {
  const auto p = model_from(c);
  const auto X = grid_values(c, "density-map");
  const auto Y = c.ygrid ? c.ygrid->values() : std::vector<double>{0.0};
  std::vector<long> xs;
  for (double v : X) xs.push_back(std::lround(v * p.R));
  std::vector<double> ys;
  for (double v : Y) ys.push_back(v * p.R);
  auto ctx = context_for(c, p.R);
  auto m = density_map(p, xs, ys, ctx);
  Dataset d;
  auto &cX = d.column("X"), &cY = d.column("Y"), &cx = d.column("x"), &cy = d.column("y"), &cr = d.column("rho"),
       &cc = d.column("crazy");
  for (std::size_t iy = 0; iy < ys.size(); ++iy)
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      cX.push_back(xs[ix] / p.R);
      cY.push_back(Y[iy]);
      cx.push_back(static_cast<double>(xs[ix]));
      cy.push_back(ys[iy]);
      cr.push_back(m.at(iy, ix));
      cc.push_back(m.crazy[iy * xs.size() + ix] ? 1.0 : 0.0);
    }
  d.metadata["precision"] = precision_json(ctx);
  d.metadata["residuals"] = {{"toeplitz_inverse", m.residual}};
  d.metadata["crazy_count"] = m.crazy_count;
  d.metadata["model"] = {{"alpha", p.alpha}, {"R", p.R}, {"L", p.L}, {"N", p.N()}};
  return d;
}

Dataset kernel_cmd(const RunConfig& c) {
  const std::string kind = c.kind.empty() ? "tacnode" : c.kind;
  const auto s = grid_values(c, "kernel");
  auto ctx = double_context(c);
  Dataset d;
  Mat<double> K, two;
  if (kind == "airy" || kind == "higher-airy") {
    AiryFamily fam{kind == "airy" ? c.order : 2, c.sigma};
    K = airy_kernel_table(fam, s, ctx);
    d.metadata["m"] = fam.m;
  } else if (kind == "tacnode" || kind == "higher-tacnode") {
    TacnodeParams tp{kind == "tacnode" ? 1 : 2, c.sigma};
    auto t = kernel_table(tp, s, ctx, c.threads);
    K = t.values;
    two.resize(s.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j)
        if (!c.diagonal || i == j) two(i, j) = two_airy_sum(s[i], s[j], c.sigma, tp.m, ctx);
    d.metadata["m"] = tp.m;
    d.metadata["residuals"] = {{"node_doubling", t.discrepancy}, {"spectral_radius", t.spectral_radius}, {"tail", t.tail}};
    d.metadata["warnings"] = t.warnings;
  } else {
    throw ConfigError("kernel: kind must be airy, higher-airy, tacnode or higher-tacnode");
  }
  auto &cs = d.column("s"), &cp = d.column("s_prime"), &ck = d.column("K");
  if (two.size()) d.column("two_airy");
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (c.diagonal && i != j) continue;
      cs.push_back(s[i]);
      cp.push_back(s[j]);
      ck.push_back(K(i, j));
      if (two.size()) d.column("two_airy").push_back(two(i, j));
    }
  d.metadata["kind"] = kind;
  d.metadata["sigma"] = c.sigma;
  return d;
}

Dataset partition_cmd(const RunConfig& c) {
  const double R = require(c.R, "R");
  const bool higher = c.alpha == 0.125;
  const long n_max = c.n_max ? *c.n_max : static_cast<long>(std::ceil(2 * R * (1 - 2 * c.alpha) + 4 * std::cbrt(R)));
  if (n_max < 0) throw ConfigError("partition: n_max must be nonnegative");
  auto ctx = context_for(c, R);
  auto scan = partition_scan(R, c.alpha, static_cast<std::size_t>(n_max), ctx);
  auto dctx = double_context(c);
  // N = 2R(1-2alpha) + sigma scale
  const double base = higher ? 1.5 * R : 2 * R * (1 - 2 * c.alpha);
  const double scale = higher ? std::pow(R / 4, 0.2) : std::cbrt((1 - 8 * c.alpha) * R);
  Dataset d;
  auto &cN = d.column("N"), &cl = d.column("lambda"), &clz = d.column("log_Z"), &clt = d.column("log_Z_tilde"),
       &czt = d.column("Z_tilde"), &cf = d.column("free_energy_finite"), &cfh = d.column("free_energy_hydro"),
       &cs = d.column("sigma"), &ctw = d.column("F_TW");
  for (long N = 0; N <= n_max; ++N) {
    cN.push_back(static_cast<double>(N));
    const double lambda = N / (2 * R);
    cl.push_back(lambda);
    clz.push_back(scan.log_z[N]);
    clt.push_back(scan.log_z_tilde[N]);
    czt.push_back(scan.z_tilde(N));
    cf.push_back(scan.free_energy(N));
    cfh.push_back(N > 0 ? free_energy(lambda, c.alpha, dctx) : std::nan(""));
    const double sg = (N - base) / scale;
    cs.push_back(sg);
    ctw.push_back(sg >= -6 ? tw_distribution(sg, higher ? 2 : 1, dctx).value : std::nan(""));
  }
  d.metadata["precision"] = precision_json(ctx);
  d.metadata["residuals"] = {{"levinson", scan.max_residual}};
  d.metadata["hex"] = {{"log_Z", scan.hex_log_z}};
  d.metadata["tw_order"] = higher ? 2 : 1;
  return d;
}


double fit_intercept(const std::vector<double>& xs, const std::vector<double>& ys, double* slope) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (slope) *slope = b;
  return (sy - b * sx) / n;
}

EdgeKind edge_kind(const std::string& kind) {
  if (kind == "exterior") return EdgeKind::exterior_airy;
  if (kind == "tacnode" || kind.empty()) return EdgeKind::tacnode;
  if (kind == "higher-tacnode") return EdgeKind::higher_tacnode;
  throw ConfigError("converge: kind must be exterior, tacnode or higher-tacnode");
}

Dataset converge_cmd(const RunConfig& c) {
  const EdgeKind kind = edge_kind(c.kind);
  if (c.L_series.empty()) throw ConfigError("converge: empty L series");
  const auto s = c.grid ? c.grid->values() : std::vector<double>{0.0};
  auto dctx = double_context(c);
  Dataset d;
  auto &cL = d.column("L"), &cR = d.column("R"), &cs = d.column("s"), &ce = d.column("s_effective"),
       &cx = d.column("x"), &cv = d.column("value"), &cl = d.column("limit");
  std::size_t center = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(s[i]) < std::abs(s[center])) center = i;
  std::vector<double> fx, fy;
  json runs = json::array();
  double exponent = 1.0 / 3;
  for (long L : c.L_series) {
    const EdgeSetup setup = kind == EdgeKind::exterior_airy
                                ? exterior_edge_at_L(c.alpha, require(c.lambda, "lambda"), L, s)
                                : center_edge_at_L(kind, c.alpha, L, c.sigma, s);
    auto ctx = context_for(c, setup.params.R);
    auto sample = edge_rescaled_correlator(setup, ctx);
    exponent = setup.scaling.exponent;
    std::vector<double> limit(s.size());
    if (kind == EdgeKind::exterior_airy) {
      for (std::size_t i = 0; i < s.size(); ++i) limit[i] = airy_kernel(sample.s_effective[i], sample.s_effective[i], {1, 0}, dctx).value;
    } else {
      TacnodeParams tp{kind == EdgeKind::tacnode ? 1 : 2, setup.scaling.sigma_effective};
      auto t = kernel_table(tp, sample.s_effective, dctx, c.threads);
      for (std::size_t i = 0; i < s.size(); ++i) limit[i] = t.values(i, i);
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      cL.push_back(static_cast<double>(L));
      cR.push_back(setup.params.R);
      cs.push_back(s[i]);
      ce.push_back(sample.s_effective[i]);
      cx.push_back(static_cast<double>(sample.x[i]));
      cv.push_back(sample.values(i, i));
      cl.push_back(limit[i]);
    }
    fx.push_back(std::pow(static_cast<double>(L), -exponent));
    fy.push_back(sample.values(center, center));
    runs.push_back({{"L", L}, {"R", setup.params.R}, {"sigma_effective", setup.scaling.sigma_effective},
                    {"r_tilde", setup.scaling.r_tilde}, {"bits", ctx.bits}});
  }
  d.metadata["runs"] = runs;
  d.metadata["exponent"] = exponent;
  d.metadata["kind"] = to_string(kind);
  if (fx.size() >= 2) {
    double slope = 0;
    const double intercept = fit_intercept(fx, fy, &slope);
    d.metadata["fit"] = {{"s", s[center]}, {"intercept", intercept}, {"slope", slope}, {"variable", "L^-exponent"}};
  }
  return d;
}

Dataset quench_cmd(const RunConfig& c) {
  const double t = require(c.t, "t");
  const double scale = std::cbrt(t / 2);
  const long L = c.L ? *c.L : std::lround(t + c.sigma * scale);
  const std::string mode = c.mode.empty() ? "profile" : c.mode;
  const auto g = grid_values(c, "quench");
  PrecisionContext ctx = double_context(c);
  Dataset d;
  d.metadata["L"] = L;
  if (mode == "profile") {
    std::vector<long> xs;
    long x_max = 0;
    for (double v : g) {
      xs.push_back(std::lround(v * t));
      x_max = std::max(x_max, std::abs(xs.back()));
    }
    QuenchTable q(t, L, x_max, ctx);
    auto &cx = d.column("x"), &cX = d.column("X"), &cr = d.column("rho"), &ch = d.column("rho_hydro");
    for (long x : xs) {
      const double X = x / t;
      cx.push_back(static_cast<double>(x));
      cX.push_back(X);
      cr.push_back(q.density(x));
      ch.push_back(std::abs(X) <= 2 ? std::acos(std::abs(X) - 1) / M_PI : 0.0);
    }
    d.metadata["tail"] = q.tail();
  } else if (mode == "center") {
    const double sg = (L - t) / scale;
    std::vector<long> xs;
    long x_max = 0;
    for (double v : g) {
      xs.push_back(std::lround(v * scale));
      x_max = std::max(x_max, std::abs(xs.back()));
    }
    QuenchTable q(t, L, x_max, ctx);
    auto &cs = d.column("s"), &ce = d.column("s_effective"), &cx = d.column("x"), &cv = d.column("value"),
         &cl = d.column("two_airy");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double se = xs[i] / scale;
      cs.push_back(g[i]);
      ce.push_back(se);
      cx.push_back(static_cast<double>(xs[i]));
      cv.push_back(scale * q.hole(xs[i], xs[i]));
      cl.push_back(two_airy_sum(se, se, sg, 1, ctx));
    }
    d.metadata["sigma_effective"] = sg;
    d.metadata["tail"] = q.tail();
  } else {
    throw ConfigError("quench: mode must be profile or center");
  }
  return d;
}

struct Check {
  std::string name;
  double value;
  double tol;
};

std::vector<Check> suite_checks(const std::string& suite, const RunConfig& c) {
  std::vector<Check> out;
  if (suite == "cross-formula") {
    PrecisionContext ctx;
    ctx.bits = 512;
    ctx.rel_tol = 1e-30;
    ModelParams p{0.0625, 2, 1};
    Window w{-6, 6};
    auto t = correlator_toeplitz(p, 0, w, ctx);
    for (auto m : {CorrelatorMethod::opuc_sum, CorrelatorMethod::contour, CorrelatorMethod::fredholm}) {
      auto k = correlator(m, p, w, ctx);
      double worst = 0;
      for (long i = 0; i < t.values.rows(); ++i)
        for (long j = 0; j < t.values.cols(); ++j) {
          const Real scale = std::max(Real(abs(t.values(i, j))), Real(abs(k.values(i, j))));
          if (scale > Real("1e-100")) worst = std::max(worst, to_double(abs(t.values(i, j) - k.values(i, j)) / scale));
        }
      out.push_back({std::string("toeplitz vs ") + to_string(m), worst, 1e-18});
    }
  } else if (suite == "conservation") {
    const double R = c.R.value_or(4);
    ModelParams p = c.L ? ModelParams{c.alpha, R, *c.L} : ModelParams::from_lambda(c.lambda.value_or(1.0), c.alpha, R);
    auto ctx = context_for(c, R);
    for (double y : {0.0, R / 2}) {
      auto m = correlator_toeplitz(p, y, default_window(p), ctx);
      Real total = 0;
      for (long x = m.window.lo; x <= m.window.hi; ++x) total += m.at(x, x);
      out.push_back({"particle number at y = " + fmt17(y), std::abs(to_double(total) - p.N()), 1e-10});
      if (y != 0) continue;
      const long W = m.values.rows();
      Eigen::MatrixXd a(W, W);
      double sym = 0;
      for (long i = 0; i < W; ++i)
        for (long j = 0; j < W; ++j) {
          a(i, j) = to_double(m.values(i, j));
          sym = std::max(sym, to_double(abs(m.values(i, j) - m.values(W - 1 - i, W - 1 - j))));
          sym = std::max(sym, to_double(abs(m.values(i, j) - m.values(j, i))));
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
      const double spill = std::max(-es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff() - 1);
      out.push_back({"eigenvalues outside [0,1]", std::max(spill, 0.0), 1e-10});
      out.push_back({"mirror and transpose symmetry", sym, 1e-14});
    }
  } else if (suite == "gcbo") {
    PrecisionContext ctx;
    ctx.bits = 256;
    for (double alpha : {0.0, 0.125})
      for (std::size_t n = 1; n <= 6; ++n) {
        auto r = gcbo_check(n, {2, alpha}, 60, ctx);
        out.push_back({"gcbo n=" + std::to_string(n) + " alpha=" + fmt17(alpha), r.rel_error, 1e-10});
      }
  } else if (suite == "dpii") {
    PrecisionContext ctx;
    ctx.bits = 256;
    for (double alpha : {0.0, 0.0625, 0.125}) {
      auto seq = verblunsky(24, {4, alpha}, ctx);
      out.push_back({"dpii residual alpha=" + fmt17(alpha), seq.max_residual, 1e-10});
    }
  } else if (suite == "tw") {
    auto ctx = double_context(c);
    const double f0 = tw_distribution(0, 1, ctx).value, f2 = tw_distribution(2, 1, ctx).value,
                 f4 = tw_distribution(4, 1, ctx).value;
    out.push_back({"F(0) < F(2) < F(4)", (f0 < f2 && f2 < f4) ? 0.0 : 1.0, 0.5});
    out.push_back({"F(8) = 1", std::abs(tw_distribution(8, 1, ctx).value - 1), 1e-10});
  } else if (suite == "tacnode") {
    auto ctx = double_context(c);
    TacnodeKernel K({1, 0}, -1.2, 1.2, ctx, 128);
    const double k = K(0.5, -1.2);
    out.push_back({"tacnode symmetry", std::max(std::abs(k - K(-1.2, 0.5)), std::abs(k - K(-0.5, 1.2))), 1e-8});
    TacnodeKernel far({1, 6}, -2, 2, ctx, 128);
    double gap = 0;
    for (double s = -2; s <= 2; s += 1)
      for (double sp = -2; sp <= 2; sp += 1) gap = std::max(gap, std::abs(far(s, sp) - two_airy_sum(s, sp, 6, 1, ctx)));
    out.push_back({"tacnode decoupling at sigma = 6", gap, 1e-4});
  } else if (suite == "quench") {
    auto ctx = double_context(c);
    QuenchTable q(12.5, 5, 40, ctx);
    double total = 0, hole = 0;
    for (long x = -40; x <= 40; ++x) {
      total += q.density(x);
      if (std::abs(x) <= 10) hole = std::max(hole, std::abs(q.hole(x, x) - 1 + q.density(x)));
    }
    out.push_back({"quench particle number", std::abs(total - 11), 1e-12});
    out.push_back({"quench hole = 1 - density", hole, 1e-12});
  } else {
    throw ConfigError("verify: unknown suite " + suite);
  }
  return out;
}

Dataset verify_cmd(const RunConfig& c) {
  const auto suites = c.suites.empty() ? kSuites : c.suites;
  for (const auto& s : suites)
    if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end()) throw ConfigError("verify: unknown suite " + s);
  Dataset d;
  auto &ci = d.column("check"), &cv = d.column("value"), &ct = d.column("tolerance"), &cp = d.column("passed");
  json names = json::array(), suite_of = json::array();
  for (const auto& suite : suites)
    for (const auto& ch : suite_checks(suite, c)) {
      const bool ok = ch.value <= ch.tol;
      ci.push_back(static_cast<double>(ci.size()));
      cv.push_back(ch.value);
      ct.push_back(ch.tol);
      cp.push_back(ok ? 1.0 : 0.0);
      names.push_back(ch.name);
      suite_of.push_back(suite);
      if (!ok) d.verification_failed = true;
    }
  d.metadata["checks"] = names;
  d.metadata["suites"] = suite_of;
  d.metadata["all_passed"] = !d.verification_failed;
  return d;
}

}  // namespace

const char* to_string(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name.c_str();
  return "?";
}

Command parse_command(const std::string& name) {
  auto it = kCommands.find(name);
  if (it == kCommands.end()) throw ConfigError("unknown command: " + name);
  return it->second;
}

std::vector<double> GridSpec::values() const {
  if (n == 0) throw ConfigError("grid: empty grid");
  if (!std::isfinite(min) || !std::isfinite(max)) throw ConfigError("grid: bounds must be finite");
  if (n == 1) return {min};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::string GridSpec::str() const { return fmt17(min) + ":" + fmt17(max) + ":" + std::to_string(n); }

GridSpec GridSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("grid: expected min:max:n, got " + text);
  try {
    std::size_t used = 0;
    GridSpec g;
    g.min = std::stod(parts[0]);
    g.max = std::stod(parts[1]);
    const long n = std::stol(parts[2], &used);
    if (used != parts[2].size() || n < 0) throw ConfigError("grid: n must be a nonnegative integer");
    g.n = static_cast<std::size_t>(n);
    return g;
  } catch (const std::logic_error&) {
    throw ConfigError("grid: cannot parse " + text);
  }
}

void RunConfig::validate() const {
  if (!(tol > 0) || !std::isfinite(tol)) throw ConfigError("tol must be positive");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (order < 1) throw ConfigError("order must be positive");
  if (bits != 0 && bits < 32) throw ConfigError("precision bits must be at least 32");
  if (R && !(*R > 0)) throw ConfigError("R must be positive");
  if (std::abs(alpha) > 0.125) throw ConfigError("|alpha| must be <= 1/8");
  if (grid) grid->values();
  if (ygrid) ygrid->values();
}

json RunConfig::to_json() const {
  json j;
  j["command"] = to_string(command);
  j["alpha"] = alpha;
  j["lambda"] = lambda ? json(*lambda) : json();
  j["R"] = R ? json(*R) : json();
  j["L"] = L ? json(*L) : json();
  j["sigma"] = sigma;
  j["order"] = order;
  j["grid"] = grid ? json(grid->str()) : json();
  j["ygrid"] = ygrid ? json(ygrid->str()) : json();
  j["mode"] = mode;
  j["kind"] = kind;
  j["L_series"] = L_series;
  j["t"] = t ? json(*t) : json();
  j["n_max"] = n_max ? json(*n_max) : json();
  j["diagonal"] = diagonal;
  j["suites"] = suites;
  j["precision_bits"] = bits;
  j["tol"] = tol;
  j["threads"] = threads;
  j["out"] = out;
  j["format"] = format;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig c;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      if (v.is_null()) continue;
      if (k == "command") c.command = parse_command(v.get<std::string>());
      else if (k == "alpha") c.alpha = v.get<double>();
      else if (k == "lambda") c.lambda = v.get<double>();
      else if (k == "R") c.R = v.get<double>();
      else if (k == "L") c.L = v.get<long>();
      else if (k == "sigma") c.sigma = v.get<double>();
      else if (k == "order") c.order = v.get<int>();
      else if (k == "grid") c.grid = GridSpec::parse(v.get<std::string>());
      else if (k == "ygrid") c.ygrid = GridSpec::parse(v.get<std::string>());
      else if (k == "mode") c.mode = v.get<std::string>();
      else if (k == "kind") c.kind = v.get<std::string>();
      else if (k == "L_series") c.L_series = v.get<std::vector<long>>();
      else if (k == "t") c.t = v.get<double>();
      else if (k == "n_max") c.n_max = v.get<long>();
      else if (k == "diagonal") c.diagonal = v.get<bool>();
      else if (k == "suites") c.suites = v.get<std::vector<std::string>>();
      else if (k == "precision_bits") c.bits = v.get<unsigned>();
      else if (k == "tol") c.tol = v.get<double>();
      else if (k == "threads") c.threads = v.get<unsigned>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else throw ConfigError("config: unknown key " + k);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

std::vector<double>& Dataset::column(const std::string& name) {
  for (auto& [n, v] : columns)
    if (n == name) return v;
  columns.emplace_back(name, std::vector<double>{});
  return columns.back().second;
}

const std::vector<double>& Dataset::column(const std::string& name) const {
  for (const auto& [n, v] : columns)
    if (n == name) return v;
  throw std::out_of_range("dataset: no column " + name);
}

Dataset run(const RunConfig& config) {
  config.validate();
  Dataset d;
  switch (config.command) {
    case Command::density_profile: d = density_profile_cmd(config); break;
    case Command::density_map: d = density_map_cmd(config); break;
    case Command::kernel: d = kernel_cmd(config); break;
    case Command::partition: d = partition_cmd(config); break;
    case Command::converge: d = converge_cmd(config); break;
    case Command::quench: d = quench_cmd(config); break;
    case Command::verify: d = verify_cmd(config); break;
  }
  d.metadata["command"] = to_string(config.command);
  d.metadata["config"] = config.to_json();
  d.metadata["version"] = kVersion;
  if (!d.metadata.contains("precision")) d.metadata["precision"] = {{"bits", 53}, {"rel_tol", std::max(config.tol, 1e-12)}};
  return d;
}

void write_dataset(const Dataset& d, const std::string& format, std::ostream& os) {
  if (format == "json") {
    json cols = json::array();
    for (const auto& [name, v] : d.columns) cols.push_back({{"name", name}, {"values", v}});
    os << json{{"metadata", d.metadata}, {"columns", cols}}.dump(1) << '\n';
    return;
  }
  os << "# " << d.metadata.dump() << '\n';
  for (std::size_t i = 0; i < d.columns.size(); ++i) os << (i ? "," : "") << d.columns[i].first;
  os << '\n';
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t i = 0; i < d.columns.size(); ++i) os << (i ? "," : "") << fmt17(d.columns[i].second.at(r));
    os << '\n';
  }
}

namespace {

std::vector<long> parse_longs(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(p, &used));
      if (used != p.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("expected a comma-separated integer list, got " + text);
    }
  }
  return out;
}

std::vector<std::string> parse_words(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');)
    if (!p.empty()) out.push_back(p);
  return out;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"free-fermion edge statistics: datasets and verification"};
  std::string command, config_path, grid, ygrid, Ls, suites;
  double alpha = 0, lambda = 0, R = 0, sigma = 0, t = 0, tol = 0;
  long L = 0, n_max = 0;
  int order = 1;
  unsigned bits = 0, threads = 1;
  RunConfig flags;
  app.add_option("command", command, "density-profile | density-map | kernel | partition | converge | quench | verify");
  app.add_option("--config", config_path, "JSON config file; flags override");
  auto* o_alpha = app.add_option("--alpha", alpha);
  auto* o_lambda = app.add_option("--lambda", lambda);
  auto* o_R = app.add_option("--R", R);
  auto* o_L = app.add_option("--L", L);
  auto* o_sigma = app.add_option("--sigma", sigma);
  auto* o_order = app.add_option("--order", order, "higher Airy order m");
  auto* o_grid = app.add_option("--grid", grid, "min:max:n");
  auto* o_ygrid = app.add_option("--ygrid", ygrid, "min:max:n in Y = y/R");
  auto* o_mode = app.add_option("--mode", flags.mode);
  auto* o_kind = app.add_option("--kind", flags.kind);
  auto* o_Ls = app.add_option("--Ls", Ls, "comma-separated L series");
  auto* o_t = app.add_option("--t", t, "quench time");
  auto* o_nmax = app.add_option("--n-max", n_max);
  auto* o_diag = app.add_flag("--diagonal", flags.diagonal);
  auto* o_suites = app.add_option("--suites", suites, "comma-separated verify suites");
  auto* o_bits = app.add_option("--precision-bits", bits);
  auto* o_tol = app.add_option("--tol", tol);
  auto* o_threads = app.add_option("--threads", threads);
  auto* o_out = app.add_option("--out", flags.out);
  auto* o_format = app.add_option("--format", flags.format, "csv | json");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read config " + config_path);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
      c = RunConfig::from_json(j);
    } else if (command.empty()) {
      throw ConfigError("missing command");
    }
    if (!command.empty()) c.command = parse_command(command);
    if (*o_alpha) c.alpha = alpha;
    if (*o_lambda) c.lambda = lambda;
    if (*o_R) c.R = R;
    if (*o_L) c.L = L;
    if (*o_sigma) c.sigma = sigma;
    if (*o_order) c.order = order;
    if (*o_grid) c.grid = GridSpec::parse(grid);
    if (*o_ygrid) c.ygrid = GridSpec::parse(ygrid);
    if (*o_mode) c.mode = flags.mode;
    if (*o_kind) c.kind = flags.kind;
    if (*o_Ls) c.L_series = parse_longs(Ls);
    if (*o_t) c.t = t;
    if (*o_nmax) c.n_max = n_max;
    if (*o_diag) c.diagonal = flags.diagonal;
    if (*o_suites) c.suites = parse_words(suites);
    if (*o_bits) c.bits = bits;
    if (*o_tol) c.tol = tol;
    if (*o_threads) c.threads = threads;
    if (*o_out) c.out = flags.out;
    if (*o_format) c.format = flags.format;
    if (!c.out.empty() && !config_path.empty() &&
        std::filesystem::weakly_canonical(c.out) == std::filesystem::weakly_canonical(config_path))
      throw ConfigError("output path equals the config file");

    Dataset d = run(c);
    if (c.out.empty()) {
      write_dataset(d, c.format, out);
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) throw ConfigError("cannot write " + c.out);
      write_dataset(d, c.format, f);
    }
    if (d.verification_failed) {
      err << "verification failed\n";
      return 4;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 3;
  }
}

}  // namespace ffedge
