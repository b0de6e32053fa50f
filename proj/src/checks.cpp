#include "dgdmax/checks.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "dgdmax/centralized.hpp"
#include "dgdmax/dgdmax.hpp"
#include "dgdmax/experiment.hpp"
#include "dgdmax/metrics.hpp"
#include "dgdmax/minty.hpp"
#include "dgdmax/random.hpp"
#include "dgdmax/schedule.hpp"
#include "dgdmax/simplex.hpp"
#include "dgdmax/subsolver.hpp"

namespace dgdmax {

RunConfig desk_fixture_config(std::uint64_t seed) {
  ConfigMap map;
  map["seed"] = std::to_string(seed);
  map["problem.samples"] = "200";
  map["problem.features"] = "20";
  map["problem.agents"] = "5";
  map["problem.beta_y"] = "0.1";
  map["graph.kind"] = "ring";
  return resolve_config(map);
}

namespace {

std::string num(double v) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << v;
  return out.str();
}

Matrix gaussian(SplitMix64& rng, int rows, int cols, double scale) {
  Matrix a(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) a(i, j) = scale * rng.normal();
  return a;
}

Schedule fixture_schedule(const Instance& inst) {
  return paper_schedule(inst.problem->constants(), inst.mixing.rho);
}

std::vector<CheckOutcome> invariants(std::uint64_t seed) {
  std::vector<CheckOutcome> out;
  const RunConfig config = desk_fixture_config(seed);
  const Instance inst = build_instance(config);
  const MinimaxProblem& problem = *inst.problem;

  {
    const DecentralizedGdmax alg(problem, inst.mixing, fixture_schedule(inst));
    NetworkState s = alg.init(Vector::Zero(problem.dim_x()));
    double track = 0.0;
    double multiplier = 0.0;
    for (int t = 0; t <= 200; ++t) {
      track = std::max(track, tracking_residual(s.V, problem, s.X, s.Y));
      multiplier = std::max(multiplier, s.Lambda.colwise().sum().cwiseAbs().maxCoeff());
      if (t < 200) s = alg.step(s);
    }
    out.push_back({"tracking_conservation", track <= 1e-10, "max residual " + num(track)});
    out.push_back({"multiplier_conservation", multiplier <= 1e-10,
                   "max |1^T Lambda| " + num(multiplier)});
  }

  {
    DgdmaxOptions serial;
    DgdmaxOptions parallel;
    parallel.workers = 3;
    const DecentralizedGdmax a(problem, inst.mixing, fixture_schedule(inst), serial);
    const DecentralizedGdmax b(problem, inst.mixing, fixture_schedule(inst), parallel);
    NetworkState sa = a.init(Vector::Zero(problem.dim_x()));
    NetworkState sb = b.init(Vector::Zero(problem.dim_x()));
    for (int t = 0; t < 20; ++t) {
      sa = a.step(sa);
      sb = b.step(sb);
    }
    const bool same = sa.X == sb.X && sa.Y == sb.Y && sa.Lambda == sb.Lambda && sa.V == sb.V;
    out.push_back({"worker_determinism", same, same ? "bit-identical" : "states differ"});
  }

  {
    RunConfig single = config;
    single.agents = 1;
    single.graph_kind = "complete";
    single.graph_nodes = 1;
    const Instance one = build_instance(single);
    const Schedule sched = fixture_schedule(one);
    const DecentralizedGdmax alg(*one.problem, one.mixing, sched);
    NetworkState s = alg.init(Vector::Zero(one.problem->dim_x()));
    Vector x = Vector::Zero(one.problem->dim_x());
    double gap = 0.0;
    for (int t = 0; t < 50; ++t) {
      s = alg.step(s);
      x = gdmax_step(*one.problem, x, sched.eta_x);
      gap = std::max(gap, (s.X.row(0).transpose() - x).cwiseAbs().maxCoeff());
    }
    out.push_back({"single_agent_reduction", gap <= 1e-14, "max gap " + num(gap)});
  }

  {
    SplitMix64 rng(derive_seed(seed, "mixing"));
    int failures = 0;
    for (int k = 0; k < 10; ++k) {
      const int m = 2 + static_cast<int>(rng.below(19));
      const Graph g = gen_erdos_renyi(m, 0.3, rng.next());
      if (!validate_mixing(laplacian_mixing(g), g).all_passed()) ++failures;
    }
    out.push_back({"mixing_assumptions", failures == 0, std::to_string(failures) + " of 10 failed"});
  }

  {
    SplitMix64 rng(derive_seed(seed, "simplex"));
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const int n = 1 + static_cast<int>(rng.below(12));
      const Vector v = gaussian(rng, n, 1, 2.0);
      const Vector p = project_simplex(v);
      double tau = 0.0;
      int active = 0;
      for (int j = 0; j < n; ++j)
        if (p(j) > 0.0) {
          tau += v(j) - p(j);
          ++active;
        }
      tau /= active;
      double err = std::abs(p.sum() - 1.0) + std::max(0.0, -p.minCoeff());
      for (int j = 0; j < n; ++j)
        err = std::max(err, p(j) > 0.0 ? std::abs(v(j) - p(j) - tau) : std::max(0.0, v(j) - tau));
      worst = std::max(worst, err);
    }
    out.push_back({"simplex_kkt", worst <= 1e-12, "max KKT violation " + num(worst)});
  }
  return out;
}

std::vector<CheckOutcome> paper_properties(std::uint64_t seed) {
  std::vector<CheckOutcome> out;
  const RunConfig config = desk_fixture_config(seed);
  const Instance inst = build_instance(config);
  const DrlrProblem& problem = *inst.problem;
  const ProblemConstants k = problem.constants();
  const int m = problem.agents();
  const int n1 = problem.dim_x();
  const int n2 = problem.dim_y();
  const double L = k.L;
  SplitMix64 rng(derive_seed(seed, "paper-properties"));
  const auto lambda_tilde = [&](const Matrix& lambda) {
    return Matrix(inst.mixing.weights.transpose() * lambda - lambda);
  };

  {
    const double delta = 1e-6;
    int violations = 0;
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      const int agent = static_cast<int>(rng.below(m));
      const Vector x = gaussian(rng, n1, 1, 1.0);
      const Matrix lt = lambda_tilde(gaussian(rng, m, n2, 0.01));
      const Vector lti = lt.row(agent).transpose();
      const DualSubproblem sub = make_dual_subproblem(problem, agent, x, lti, L);
      const SubsolveResult r =
          apg_maximize(sub, Vector::Constant(n2, 1.0 / n2), delta, 100000);
      const Vector exact = *problem.exact_dual(agent, x, lti, L);
      const double err = (r.y - exact).norm();
      worst = std::max(worst, err * k.mu / delta);
      if (!r.converged || err > delta / k.mu) ++violations;
    }
    out.push_back({"approximate_maximizer_bound", violations == 0,
                   std::to_string(violations) + " violations, worst ratio " + num(worst)});
  }

  {
    int violations = 0;
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      const Matrix lambda = gaussian(rng, m, n2, 0.01);
      const Matrix x = gaussian(rng, m, n1, 1.0);
      const Matrix x2 = x + gaussian(rng, m, n1, 0.1);
      const double lhs = (dual_argmax(problem, inst.mixing, x, lambda) -
                          dual_argmax(problem, inst.mixing, x2, lambda))
                             .squaredNorm();
      const double rhs = k.kappa() * k.kappa() * (x - x2).squaredNorm();
      worst = std::max(worst, lhs / rhs);
      if (lhs > rhs) ++violations;
    }
    out.push_back({"dual_argmax_lipschitz", violations == 0,
                   std::to_string(violations) + " violations, worst ratio " + num(worst)});
  }

  {
    int violations = 0;
    double worst = 0.0;
    const double lp = L * std::sqrt(4.0 * k.kappa() * k.kappa() + 1.0);
    for (int s = 0; s < 20; ++s) {
      const Vector x = gaussian(rng, n1, 1, 1.0);
      const Vector x2 = x + gaussian(rng, n1, 1, 0.1);
      const Matrix lambda = gaussian(rng, m, n2, 0.01);
      const Matrix lambda2 = lambda + gaussian(rng, m, n2, 0.001);
      const Matrix y = consensus_dual_argmax(problem, inst.mixing, x, lambda);
      const Matrix y2 = consensus_dual_argmax(problem, inst.mixing, x2, lambda2);
      const double gx = (grad_P_x(problem, x, y) - grad_P_x(problem, x2, y2)).squaredNorm();
      const double gl =
          (grad_P_lambda(problem, inst.mixing, y) - grad_P_lambda(problem, inst.mixing, y2))
              .squaredNorm();
      const double dist = std::sqrt((x - x2).squaredNorm() + (lambda - lambda2).squaredNorm());
      const double ratio = std::sqrt(gx + gl) / (lp * dist);
      worst = std::max(worst, ratio);
      if (ratio > 1.0) ++violations;
    }
    out.push_back({"reformulation_smoothness", violations == 0,
                   std::to_string(violations) + " violations, worst ratio " + num(worst)});
  }

  {
    Schedule sched = fixture_schedule(inst);
    sched.use_exact_dual = false;
    const DecentralizedGdmax alg(problem, inst.mixing, sched);
    NetworkState s = alg.init(gaussian(rng, n1, 1, 1.0));
    int violations = 0;
    double worst = 0.0;
    const double scale = L / (2.0 * std::sqrt(static_cast<double>(m))) *
                         inst.mixing.op_norm_w_minus_i;
    for (int t = 0; t <= 30; ++t) {
      const Vector x_avg = s.X.colwise().mean().transpose();
      const double exact = lambda_grad(problem, inst.mixing, x_avg, s.Lambda, s.Y, true).value;
      const double surrogate =
          lambda_grad(problem, inst.mixing, x_avg, s.Lambda, s.Y, false).value;
      const double perp = deviation(s.X).second.norm();
      const double bound =
          scale * (std::sqrt(2.0) * k.kappa() * perp + std::sqrt(2.0 * m) * s.delta / k.mu);
      const double gap = std::abs(exact - surrogate);
      if (bound > 0.0) worst = std::max(worst, gap / bound);
      if (gap > bound + 1e-12) ++violations;
      if (t < 30) s = alg.step(s);
    }
    out.push_back({"lambda_grad_surrogate_gap", violations == 0,
                   std::to_string(violations) + " violations, worst ratio " + num(worst)});
  }

  {
    const MintyScanResult r = minty_scan(21, -1.0, 1.0, -5.0, 5.0, {1.0}, {-1000.0});
    out.push_back({"minty_condition_fails", r.condition_fails(),
                   std::to_string(r.refuted) + "/" + std::to_string(r.candidates) +
                       " candidates refuted"});
  }
  return out;
}

}  // namespace

std::vector<CheckOutcome> run_check_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "invariants") return invariants(seed);
  if (suite == "paper-properties") return paper_properties(seed);
  throw std::invalid_argument("unknown check suite '" + suite + "'");
}

void print_outcomes(std::ostream& out, const std::vector<CheckOutcome>& outcomes) {
  for (const auto& o : outcomes)
    out << (o.passed ? "PASS " : "FAIL ") << o.name << ": " << o.detail << '\n';
}

}  // namespace dgdmax
