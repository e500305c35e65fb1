#include "bimodal/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Cholesky>

#include "bimodal/error.hpp"

namespace bimodal {

std::string_view ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kMaxIterations:
      return "max_iter";
    case SolveStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

double Evaluate(const QpProblem& problem, const Vector& f) {
  if (f.size() != problem.num_variables()) {
    throw DomainError("evaluate: expected " + std::to_string(problem.num_variables()) +
                      " variables, got " + std::to_string(f.size()));
  }
  return f.dot(problem.Q * f) + problem.a.dot(f) + problem.constant;
}

void CheckDimensions(const QpProblem& p) {
  const auto n = p.num_variables();
  const bool ok = p.Q.rows() == n && p.Q.cols() == n && p.G.cols() == n &&
                  p.G.rows() == p.h.size() && p.A.cols() == n && p.A.rows() == p.b.size();
  if (!ok) throw DomainError("QP blocks have inconsistent dimensions");
}

double KktResiduals::max() const {
  return std::max({stationarity, primal, complementarity, dual});
}

KktResiduals CheckKkt(const QpProblem& problem, const Vector& f, const Vector& lambda,
                      const Vector& nu) {
  CheckDimensions(problem);
  if (f.size() != problem.num_variables() || lambda.size() != problem.num_inequalities() ||
      nu.size() != problem.num_equalities()) {
    throw DomainError("check_kkt: vector sizes do not match the problem");
  }
  KktResiduals out;
  Vector grad = 2.0 * (problem.Q * f) + problem.a;
  if (lambda.size() > 0) grad += problem.G.transpose() * lambda;
  if (nu.size() > 0) grad += problem.A.transpose() * nu;
  out.stationarity = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;

  if (lambda.size() > 0) {
    const Vector slack = problem.G * f - problem.h;
    out.primal = std::max(0.0, slack.maxCoeff());
    out.complementarity = lambda.cwiseProduct(slack).cwiseAbs().maxCoeff();
    out.dual = std::max(0.0, -lambda.minCoeff());
  }
  if (nu.size() > 0) {
    out.primal = std::max(out.primal, (problem.A * f - problem.b).cwiseAbs().maxCoeff());
  }
  return out;
}

namespace {

// Internal form: min 1/2 x'Px + q'x  s.t.  Gx <= h, Ax = b.
struct ScaledQp {
  Matrix P;
  Vector q;
  SparseRowMatrix G;
  Vector h;
  SparseRowMatrix A;
  Vector b;
};

struct Scaling {
  double objective = 1.0;  // original objective = objective * scaled objective
  Vector g_rows;           // scaled row = original row * g_rows(i)
  Vector a_rows;
};

Vector RowScales(const SparseRowMatrix& m) {
  Vector out = Vector::Ones(m.rows());
  for (Eigen::Index i = 0; i < m.outerSize(); ++i) {
    double largest = 0.0;
    for (SparseRowMatrix::InnerIterator it(m, i); it; ++it) {
      largest = std::max(largest, std::abs(it.value()));
    }
    if (largest > 0.0) out(i) = 1.0 / largest;
  }
  return out;
}

ScaledQp ScaleProblem(const QpProblem& p, Scaling& scaling) {
  double largest = p.a.size() > 0 ? p.a.cwiseAbs().maxCoeff() : 0.0;
  if (p.Q.size() > 0) largest = std::max(largest, 2.0 * p.Q.cwiseAbs().maxCoeff());
  scaling.objective = largest > 0.0 ? largest : 1.0;
  scaling.g_rows = RowScales(p.G);
  scaling.a_rows = RowScales(p.A);

  ScaledQp out;
  out.P = (2.0 / scaling.objective) * p.Q;
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  out.q = p.a / scaling.objective;
  out.G = scaling.g_rows.asDiagonal() * p.G;
  out.h = scaling.g_rows.cwiseProduct(p.h);
  out.A = scaling.a_rows.asDiagonal() * p.A;
  out.b = scaling.a_rows.cwiseProduct(p.b);
  return out;
}

struct IpmResult {
  Vector x, y, z, s;
  bool converged = false;
  int iterations = 0;
  std::vector<double> merit_history;
};

// Solves [H A'; A 0] for a fixed positive definite H.
class KktSolver {
 public:
  bool Factor(const Matrix& H, const SparseRowMatrix& A) {
    llt_.compute(H);
    if (llt_.info() != Eigen::Success) return false;
    if (A.rows() > 0) {
      h_inv_at_ = llt_.solve(Matrix(A.transpose()));
      schur_.compute(A * h_inv_at_);
      if (schur_.info() != Eigen::Success) return false;
    }
    a_ = &A;
    return true;
  }

  // H dx + A'dy = u, A dx = w.
  void Solve(const Vector& u, const Vector& w, Vector& dx, Vector& dy) const {
    const Vector h_inv_u = llt_.solve(u);
    if (a_->rows() > 0) {
      dy = schur_.solve(*a_ * h_inv_u - w);
      dx = h_inv_u - h_inv_at_ * dy;
    } else {
      dy.resize(0);
      dx = h_inv_u;
    }
  }

 private:
  Eigen::LLT<Matrix> llt_;
  Matrix h_inv_at_;
  Eigen::LDLT<Matrix> schur_;
  const SparseRowMatrix* a_ = nullptr;
};

// H = P + G' diag(d) G + delta I, accumulated row by row to exploit sparsity.
Matrix NormalMatrix(const ScaledQp& qp, const Vector& d, double delta) {
  Matrix H = qp.P;
  H.diagonal().array() += delta;
  std::vector<std::pair<Eigen::Index, double>> row;
  for (Eigen::Index i = 0; i < qp.G.outerSize(); ++i) {
    row.clear();
    for (SparseRowMatrix::InnerIterator it(qp.G, i); it; ++it) row.emplace_back(it.col(), it.value());
    for (const auto& [j, gj] : row) {
      const double w = d(i) * gj;
      for (const auto& [k, gk] : row) H(j, k) += w * gk;
    }
  }
  return H;
}

// Near the boundary z/s spans many decades and H can lose definiteness in
// floating point; a growing diagonal shift restores it.
bool FactorRegularized(KktSolver& kkt, const ScaledQp& qp, const Vector& d, double delta) {
  Matrix H = NormalMatrix(qp, d, 0.0);
  const double diag = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
  for (double shift = delta; shift <= 1e-4 * diag; shift *= 100.0) {
    Matrix shifted = H;
    shifted.diagonal().array() += std::max(shift, delta);
    if (kkt.Factor(shifted, qp.A)) return true;
    if (shift == delta) shift = std::max(delta, 1e-14 * diag);
  }
  return false;
}

double MaxStep(const Vector& v, const Vector& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

constexpr double kPolishFactor = 1e-3;
constexpr int kMaxPolishSteps = 8;

double InfNorm(const Vector& v) { return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0; }

struct Residuals {
  Vector dual, eq, ineq;
  double gap = 0.0;

  double Merit() const { return InfNorm(dual) + InfNorm(eq) + InfNorm(ineq) + gap; }
};

Residuals ComputeResiduals(const ScaledQp& qp, const Vector& x, const Vector& y, const Vector& z,
                           const Vector& s) {
  Residuals r;
  r.dual = qp.P * x + qp.q + qp.G.transpose() * z;
  if (qp.A.rows() > 0) r.dual += qp.A.transpose() * y;
  r.eq = qp.A * x - qp.b;
  r.ineq = qp.G * x + s - qp.h;
  r.gap = s.dot(z) / static_cast<double>(std::max<Eigen::Index>(1, s.size()));
  return r;
}

// `converged` decides termination from the current primal-dual point.
template <class Converged>
IpmResult RunIpm(const ScaledQp& qp, const QpSolverConfig& config, Converged&& converged) {
  const Eigen::Index m = qp.h.size();
  IpmResult out;
  KktSolver kkt;

  // Initial point from the W = I system, then shifted into the positive orthant.
  {
    const Matrix H = NormalMatrix(qp, Vector::Ones(m), config.regularization);
    if (!kkt.Factor(H, qp.A)) throw SolverError("initial KKT system is singular");
    Vector rhs = -qp.q;
    if (m > 0) rhs += qp.G.transpose() * qp.h;
    kkt.Solve(rhs, qp.b, out.x, out.y);
    out.s = qp.h - qp.G * out.x;
    out.z = -out.s;
    if (m > 0) {
      const double shift_s = -out.s.minCoeff();
      if (shift_s >= 0.0) out.s.array() += 1.0 + shift_s;
      const double shift_z = -out.z.minCoeff();
      if (shift_z >= 0.0) out.z.array() += 1.0 + shift_z;
    }
  }
  if (m == 0) {
    // Pure equality-constrained QP: the initial solve is already exact.
    out.iterations = 0;
    out.converged = converged(out.x, out.y, out.z, out.s);
    return out;
  }

  Vector dx, dy, dz, ds, dx_aff, dy_aff, dz_aff, ds_aff;
  auto direction = [&](const Residuals& r, const Vector& d, const Vector& rc, Vector& ddx,
                       Vector& ddy, Vector& ddz, Vector& dds) {
    const Vector tmp = d.cwiseProduct(r.ineq) + rc.cwiseQuotient(out.s);
    const Vector u = -r.dual - qp.G.transpose() * tmp;
    kkt.Solve(u, -r.eq, ddx, ddy);
    ddz = d.cwiseProduct(qp.G * ddx + r.ineq) + rc.cwiseQuotient(out.s);
    dds = (rc - out.s.cwiseProduct(ddz)).cwiseQuotient(out.z);
  };

  Residuals r = ComputeResiduals(qp, out.x, out.y, out.z, out.s);
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    out.iterations = iter;
    if (converged(out.x, out.y, out.z, out.s)) {
      out.converged = true;
      return out;
    }
    const Vector d = out.z.cwiseQuotient(out.s);
    // A breakdown ends the run like a stall; the caller keeps its best point.
    if (!FactorRegularized(kkt, qp, d, config.regularization)) break;
    const double mu = out.s.dot(out.z) / static_cast<double>(m);

    // Predictor.
    const Vector rc_aff = -out.s.cwiseProduct(out.z);
    direction(r, d, rc_aff, dx_aff, dy_aff, dz_aff, ds_aff);
    const double alpha_aff = std::min({1.0, MaxStep(out.s, ds_aff), MaxStep(out.z, dz_aff)});
    const double mu_aff =
        (out.s + alpha_aff * ds_aff).dot(out.z + alpha_aff * dz_aff) / static_cast<double>(m);
    const double sigma = std::pow(mu_aff / mu, 3.0);

    // Corrector.
    Vector rc = rc_aff - ds_aff.cwiseProduct(dz_aff);
    rc.array() += sigma * mu;
    direction(r, d, rc, dx, dy, dz, ds);

    const double merit = r.Merit();
    auto try_step = [&](double alpha_max, Residuals& trial, double& alpha) {
      alpha = alpha_max;
      for (int k = 0; k < 40; ++k, alpha *= 0.5) {
        trial = ComputeResiduals(qp, out.x + alpha * dx, out.y + alpha * dy, out.z + alpha * dz,
                                 out.s + alpha * ds);
        if (trial.Merit() <= merit) return true;
      }
      return false;
    };
    Residuals trial;
    double alpha = 0.0;
    double alpha_max =
        std::min(1.0, config.step_fraction * std::min(MaxStep(out.s, ds), MaxStep(out.z, dz)));
    if (!try_step(alpha_max, trial, alpha)) {
      // The second-order term can break descent; a plain centred Newton step
      // cannot.
      Vector rc_safe = rc_aff;
      rc_safe.array() += 0.5 * mu;
      direction(r, d, rc_safe, dx, dy, dz, ds);
      alpha_max =
          std::min(1.0, config.step_fraction * std::min(MaxStep(out.s, ds), MaxStep(out.z, dz)));
      if (!try_step(alpha_max, trial, alpha)) break;
    }
    out.x += alpha * dx;
    out.y += alpha * dy;
    out.z += alpha * dz;
    out.s += alpha * ds;
    r = std::move(trial);
    out.merit_history.push_back(r.Merit());
    if (alpha < 1e-14) break;
  }
  out.iterations = static_cast<int>(out.merit_history.size());
  out.converged = converged(out.x, out.y, out.z, out.s);
  return out;
}

// min t + eps/2 |x|^2  s.t.  Gx - t <= h, -t <= 1, Ax = b  (scaled rows).
// Returns the smallest achievable uniform violation t.
std::optional<double> PhaseOne(const ScaledQp& qp, const QpSolverConfig& config) {
  const Eigen::Index n = qp.q.size();
  const Eigen::Index m = qp.h.size();
  ScaledQp aux;
  aux.P = Matrix::Zero(n + 1, n + 1);
  aux.P.diagonal().head(n).setConstant(1e-12);
  aux.q = Vector::Zero(n + 1);
  aux.q(n) = 1.0;

  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index i = 0; i < qp.G.outerSize(); ++i) {
    for (SparseRowMatrix::InnerIterator it(qp.G, i); it; ++it) {
      entries.emplace_back(static_cast<int>(i), static_cast<int>(it.col()), it.value());
    }
    entries.emplace_back(static_cast<int>(i), static_cast<int>(n), -1.0);
  }
  entries.emplace_back(static_cast<int>(m), static_cast<int>(n), -1.0);
  aux.G.resize(m + 1, n + 1);
  aux.G.setFromTriplets(entries.begin(), entries.end());
  aux.h.resize(m + 1);
  aux.h << qp.h, 1.0;

  entries.clear();
  for (Eigen::Index i = 0; i < qp.A.outerSize(); ++i) {
    for (SparseRowMatrix::InnerIterator it(qp.A, i); it; ++it) {
      entries.emplace_back(static_cast<int>(i), static_cast<int>(it.col()), it.value());
    }
  }
  aux.A.resize(qp.A.rows(), n + 1);
  aux.A.setFromTriplets(entries.begin(), entries.end());
  aux.b = qp.b;

  const double tol = config.kkt_tolerance;
  auto converged = [&](const Vector& x, const Vector& y, const Vector& z, const Vector& s) {
    const Residuals r = ComputeResiduals(aux, x, y, z, s);
    return InfNorm(r.dual) <= tol && InfNorm(r.eq) <= tol && InfNorm(r.ineq) <= tol &&
           s.dot(z) <= tol;
  };
  try {
    // Inconsistent equalities stall the iteration; their residual is then
    // the violation.
    const IpmResult res = RunIpm(aux, config, converged);
    const double eq = InfNorm(qp.A * res.x.head(n) - qp.b);
    if (!res.x.allFinite()) return std::nullopt;
    return std::max(res.x(n), eq);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

Solution Solve(const QpProblem& problem, const QpSolverConfig& config) {
  CheckDimensions(problem);
  if (!(config.kkt_tolerance > 0.0)) throw DomainError("kkt_tolerance must be positive");
  const Eigen::Index n = problem.num_variables();
  const Eigen::Index m = problem.num_inequalities();
  const Eigen::Index p = problem.num_equalities();

  Solution sol;
  sol.f = Vector::Zero(n);
  sol.inequality_duals = Vector::Zero(m);
  sol.equality_duals = Vector::Zero(p);

  if (n == 0) {
    const bool feasible = (m == 0 || problem.h.minCoeff() >= -config.kkt_tolerance) &&
                          (p == 0 || problem.b.cwiseAbs().maxCoeff() <= config.kkt_tolerance);
    sol.status = feasible ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    sol.objective = problem.constant;
    sol.kkt = CheckKkt(problem, sol.f, sol.inequality_duals, sol.equality_duals);
    return sol;
  }

  Scaling scaling;
  const ScaledQp qp = ScaleProblem(problem, scaling);

  if (config.check_feasibility && m > 0) {
    const auto violation = PhaseOne(qp, config);
    const double threshold = 1e-6 * (1.0 + InfNorm(qp.h));
    if (violation && *violation > threshold) {
      sol.status = SolveStatus::kInfeasible;
      sol.objective = Evaluate(problem, sol.f);
      sol.kkt = CheckKkt(problem, sol.f, sol.inequality_duals, sol.equality_duals);
      return sol;
    }
  }

  auto unscale = [&](const Vector& y, const Vector& z, Vector& lambda, Vector& nu) {
    lambda = scaling.objective * scaling.g_rows.cwiseProduct(z);
    nu = scaling.objective * scaling.a_rows.cwiseProduct(y);
  };

  const double tol = config.kkt_tolerance;
  KktResiduals best_kkt;
  double best_score = std::numeric_limits<double>::infinity();
  bool certified = false;
  int polish_steps = 0;
  auto converged = [&](const Vector& x, const Vector& y, const Vector& z, const Vector& s) {
    // Once the unscaled point is certified, keep iterating until the scaled
    // residuals are tight too, so the argmin does not depend on the
    // objective's units. Stalling there still leaves a certified point.
    const Residuals scaled = ComputeResiduals(qp, x, y, z, s);
    const double tight = kPolishFactor * tol;
    const bool scaled_ok = InfNorm(scaled.dual) <= tight && InfNorm(scaled.eq) <= tight &&
                           InfNorm(scaled.ineq) <= tight && s.dot(z) <= tight;
    Vector lambda, nu;
    unscale(y, z, lambda, nu);
    const KktResiduals kkt = CheckKkt(problem, x, lambda, nu);
    // The summed gap keeps the objective error small, not just each product.
    double gap = 0.0;
    if (m > 0) gap = lambda.cwiseProduct(problem.G * x - problem.h).cwiseAbs().sum();
    const double score = std::max(kkt.max(), gap);
    const bool ok = kkt.within(tol) && gap <= tol;
    if (ok ? (!certified || score <= best_score || scaled_ok) : (!certified && score < best_score)) {
      best_score = score;
      best_kkt = kkt;
      sol.f = x;
      sol.inequality_duals = lambda;
      sol.equality_duals = nu;
    }
    if (ok) {
      certified = true;
      if (scaled_ok || ++polish_steps > kMaxPolishSteps) return true;
    }
    return false;
  };

  const IpmResult res = RunIpm(qp, config, converged);
  sol.iterations = res.iterations;
  sol.merit_history = res.merit_history;
  sol.kkt = best_kkt;
  sol.status = res.converged || certified ? SolveStatus::kOptimal : SolveStatus::kMaxIterations;
  sol.objective = Evaluate(problem, sol.f);
  return sol;
}

OracleResult GridOracle(const QpProblem& problem, int resolution) {
  CheckDimensions(problem);
  const Eigen::Index n = problem.num_variables();
  if (n > 4) throw DomainError("grid oracle handles at most 4 variables, got " + std::to_string(n));
  if (n == 0) throw DomainError("grid oracle needs at least one variable");
  if (problem.num_equalities() > 0) throw DomainError("grid oracle does not handle equality rows");
  if (resolution < 2) throw DomainError("grid resolution must be at least 2");

  const Matrix G(problem.G);
  const Vector& h = problem.h;
  const double inf = std::numeric_limits<double>::infinity();
  Vector lo = Vector::Constant(n, -inf);
  Vector hi = Vector::Constant(n, inf);

  // Interval propagation over the rows, a few sweeps suffice at this size.
  for (int sweep = 0; sweep < 2 * static_cast<int>(n) + 2; ++sweep) {
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double gj = G(i, j);
        if (gj == 0.0) continue;
        double rest = 0.0;  // smallest possible value of the other terms
        for (Eigen::Index k = 0; k < n && std::isfinite(rest); ++k) {
          if (k == j || G(i, k) == 0.0) continue;
          rest += G(i, k) > 0.0 ? G(i, k) * lo(k) : G(i, k) * hi(k);
        }
        if (!std::isfinite(rest)) continue;
        const double bound = (h(i) - rest) / gj;
        if (gj > 0.0) {
          hi(j) = std::min(hi(j), bound);
        } else {
          lo(j) = std::max(lo(j), bound);
        }
      }
    }
  }
  if (!lo.allFinite() || !hi.allFinite()) {
    throw DomainError("grid oracle needs every variable bounded by the inequality rows");
  }

  OracleResult out;
  out.lower = lo;
  out.upper = hi;
  out.f = Vector::Zero(n);
  out.objective = inf;
  if ((hi - lo).minCoeff() < 0.0) return out;

  const Vector step = (hi - lo) / static_cast<double>(resolution - 1);
  const double feas_tol = 1e-12 * (1.0 + InfNorm(h));
  std::vector<int> index(static_cast<std::size_t>(n), 0);
  Vector x = lo;
  for (;;) {
    if (((G * x - h).array() <= feas_tol).all()) {
      const double value = Evaluate(problem, x);
      if (value < out.objective) {
        out.objective = value;
        out.f = x;
        out.status = SolveStatus::kOptimal;
      }
    }
    Eigen::Index axis = 0;
    for (; axis < n; ++axis) {
      if (++index[static_cast<std::size_t>(axis)] < resolution) {
        x(axis) = lo(axis) + step(axis) * index[static_cast<std::size_t>(axis)];
        break;
      }
      index[static_cast<std::size_t>(axis)] = 0;
      x(axis) = lo(axis);
    }
    if (axis == n) break;
  }
  if (out.status != SolveStatus::kOptimal) out.objective = problem.constant;

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(problem.Q, Eigen::EigenvaluesOnly);
  const double q_norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double radius = lo.cwiseAbs().cwiseMax(hi.cwiseAbs()).norm();
  const double lipschitz = problem.a.norm() + 2.0 * q_norm * radius;
  out.gap_bound = lipschitz * step.norm();
  return out;
}

}  // namespace bimodal
