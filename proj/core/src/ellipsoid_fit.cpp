// Minimum-volume axis-aligned ellipsoid about a fixed centroid.
//
// With a_j = (x_j - c)^2 the problem is
//     maximize  sum_i log w_i   subject to  A w <= 1,  w > 0,
// strictly concave with a unique optimum. Columns of A are rescaled to unit
// maximum (v_i = w_i * max_j a_ji), which makes the solver invariant to axis
// scaling. The scaled problem is solved by a log-barrier path-following Newton
// method followed by an active-set Newton polish of the KKT system; all linear
// systems are of size dim (+ active rows).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "sentinel/boundary.hpp"
#include "sentinel/errors.hpp"

namespace sentinel {

namespace {

struct ScaledProblem {
  Eigen::MatrixXd a;                 // m x n, entries in [0, 1]
  std::vector<std::size_t> group_of;  // cloud column -> row of `a` (or npos)
  std::vector<std::size_t> group_size;
};

constexpr std::size_t kNoGroup = std::numeric_limits<std::size_t>::max();

// Deduplicates identical constraint rows and drops all-zero rows (never active).
ScaledProblem build_problem(const Eigen::MatrixXd& raw, const std::vector<Eigen::Index>& dims,
                            const Eigen::VectorXd& col_max) {
  const Eigen::Index k = raw.rows();
  const auto n = static_cast<Eigen::Index>(dims.size());

  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto row_less = [&](Eigen::Index p, Eigen::Index q) {
    for (Eigen::Index d : dims) {
      if (raw(p, d) != raw(q, d)) return raw(p, d) < raw(q, d);
    }
    return false;
  };
  auto row_equal = [&](Eigen::Index p, Eigen::Index q) {
    for (Eigen::Index d : dims) {
      if (raw(p, d) != raw(q, d)) return false;
    }
    return true;
  };
  std::stable_sort(order.begin(), order.end(), row_less);

  ScaledProblem problem;
  problem.group_of.assign(static_cast<std::size_t>(k), kNoGroup);
  std::vector<Eigen::Index> representatives;
  for (std::size_t t = 0; t < order.size(); ++t) {
    const Eigen::Index row = order[t];
    bool zero = true;
    for (Eigen::Index d : dims) zero = zero && raw(row, d) == 0.0;
    if (zero) continue;
    if (representatives.empty() || !row_equal(representatives.back(), row)) {
      representatives.push_back(row);
      problem.group_size.push_back(0);
    }
    problem.group_of[static_cast<std::size_t>(row)] = representatives.size() - 1;
    ++problem.group_size.back();
  }

  problem.a.resize(static_cast<Eigen::Index>(representatives.size()), n);
  for (std::size_t g = 0; g < representatives.size(); ++g) {
    for (Eigen::Index c = 0; c < n; ++c) {
      problem.a(static_cast<Eigen::Index>(g), c) =
          raw(representatives[g], dims[static_cast<std::size_t>(c)]) /
          col_max(dims[static_cast<std::size_t>(c)]);
    }
  }
  return problem;
}

struct IpmResult {
  Eigen::VectorXd v;
  Eigen::VectorXd lambda;
  std::size_t iterations = 0;
  double gap = 0.0;
  double residual = 0.0;
};

// Largest alpha in (0, 1] with x + alpha * dx > 0, backed off by `tau`.
double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double tau) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) alpha = std::min(alpha, -tau * x(i) / dx(i));
  }
  return alpha;
}

// Barrier path: minimize t * (-sum log v_i) - sum_j log(1 - a_j^T v) for
// increasing t. At each centered point lambda_j = 1 / (t s_j) satisfies
// 1/v = A^T lambda. Slacks of active rows shrink like 1/t, so t is capped where
// 1 - a_j^T v still carries enough significant digits; the active-set polish
// below takes over from there.
IpmResult barrier_path(const Eigen::MatrixXd& a, const EllipsoidFitOptions& options) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const Eigen::VectorXd ones_m = Eigen::VectorXd::Ones(m);
  constexpr double kGrowth = 20.0;
  const double t_max = 1e9 / static_cast<double>(n);

  // Strictly feasible start: entries of `a` are <= 1, so a v0 <= 1/2.
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 0.5 / static_cast<double>(n));
  Eigen::VectorXd s = ones_m - a * v;
  double t = 1.0;

  auto phi = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& sx) {
    return -t * x.array().log().sum() - sx.array().log().sum();
  };

  Eigen::VectorXd grad(n), dv(n), inv_s(m), as(m);
  Eigen::MatrixXd hess(n, n);
  std::size_t iterations = 0;
  while (true) {
    for (std::size_t inner = 0; inner < 200; ++inner) {
      if (iterations >= options.max_iterations) {
        throw NumericalError("fit_ellipsoid: no convergence after " + std::to_string(iterations) +
                             " iterations (barrier weight " + std::to_string(t) + ")");
      }
      ++iterations;
      inv_s = s.cwiseInverse();
      grad = -t * v.cwiseInverse() + a.transpose() * inv_s;
      hess = a.transpose() * inv_s.cwiseAbs2().asDiagonal() * a;
      hess.diagonal() += t * v.cwiseInverse().cwiseAbs2();
      const Eigen::LLT<Eigen::MatrixXd> llt(hess);
      if (llt.info() != Eigen::Success) {
        throw NumericalError("fit_ellipsoid: barrier Hessian lost positive definiteness at iteration " +
                             std::to_string(iterations));
      }
      dv = -llt.solve(grad);
      const double decrement_sq = -grad.dot(dv);
      if (!(decrement_sq > 1e-18)) break;

      as = a * dv;
      double alpha = std::min(max_step(v, dv, 0.99), max_step(s, -as, 0.99));
      // Inside the quadratic region the full step is taken without a line search,
      // whose function comparisons would be dominated by rounding.
      if (decrement_sq > 0.01) {
        const double f0 = phi(v, s);
        while (alpha > 1e-12) {
          const Eigen::VectorXd v_try = v + alpha * dv;
          const Eigen::VectorXd s_try = ones_m - a * v_try;
          if ((s_try.array() > 0.0).all() && phi(v_try, s_try) <= f0 - 0.25 * alpha * decrement_sq) {
            break;
          }
          alpha *= 0.5;
        }
        if (alpha <= 1e-12) break;
      }
      const Eigen::VectorXd v_new = v + alpha * dv;
      const Eigen::VectorXd s_new = ones_m - a * v_new;
      if (!(s_new.array() > 0.0).all() || !(v_new.array() > 0.0).all()) break;
      v = v_new;
      s = s_new;
    }
    if (t >= t_max) break;
    t = std::min(t * kGrowth, t_max);
  }

  IpmResult result;
  result.lambda = (t * s).cwiseInverse();
  result.gap = result.lambda.dot(s);
  result.residual =
      (Eigen::VectorXd::Ones(n) - v.cwiseProduct(a.transpose() * result.lambda)).cwiseAbs().maxCoeff();
  result.iterations = iterations;
  result.v = std::move(v);
  return result;
}

// Duality gap of the scaled problem for a primal-feasible v and lambda >= 0:
// dual objective sum(lambda) - sum log (A^T lambda)_i - n minus primal sum log v_i.
double duality_gap(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, const Eigen::VectorXd& lambda) {
  const Eigen::VectorXd g = a.transpose() * lambda;
  if (!(g.array() > 0.0).all()) return std::numeric_limits<double>::infinity();
  return lambda.sum() - g.array().log().sum() - static_cast<double>(v.size()) - v.array().log().sum();
}

// Newton on the optimality system of the active rows J:
//   1 - v_i (A_J^T lambda)_i = 0,   A_J v - 1 = 0,
// with active-set corrections for negative multipliers and violated rows.
// Returns false when no consistent active set is found.
bool polish(const Eigen::MatrixXd& a, IpmResult& state) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const Eigen::VectorXd s0 = Eigen::VectorXd::Ones(m) - a * state.v;
  const double lambda_max = state.lambda.maxCoeff();

  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (state.lambda(j) >= 1e-6 * lambda_max || s0(j) <= 1e-7) active.push_back(j);
  }

  for (int round = 0; round < 50 && !active.empty(); ++round) {
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd aj(k, n);
    Eigen::VectorXd lam(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      aj.row(r) = a.row(active[static_cast<std::size_t>(r)]);
      lam(r) = state.lambda(active[static_cast<std::size_t>(r)]);
    }
    Eigen::VectorXd v = state.v;

    Eigen::MatrixXd jac(n + k, n + k);
    Eigen::VectorXd f(n + k);
    double norm = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
      const Eigen::VectorXd g = aj.transpose() * lam;
      f.head(n) = Eigen::VectorXd::Ones(n) - v.cwiseProduct(g);
      f.tail(k) = aj * v - Eigen::VectorXd::Ones(k);
      const double next = f.cwiseAbs().maxCoeff();
      if (!(next < norm) && next < 1e-12) break;
      norm = next;
      if (norm < 1e-15) break;
      jac.setZero();
      jac.topLeftCorner(n, n).diagonal() = -g;
      jac.topRightCorner(n, k) = -(v.asDiagonal() * aj.transpose());
      jac.bottomLeftCorner(k, n) = aj;
      const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-f);
      if (!step.allFinite()) return false;
      v += step.head(n);
      lam += step.tail(k);
      if (!(v.array() > 0.0).all()) return false;
    }
    if (!(norm < 1e-9)) return false;

    // Drop the most negative multiplier, or add the most violated row.
    Eigen::Index worst_lam = 0;
    const double min_lam = lam.minCoeff(&worst_lam);
    if (min_lam < -1e-12 * lam.cwiseAbs().maxCoeff()) {
      active.erase(active.begin() + worst_lam);
      continue;
    }
    const Eigen::VectorXd s = Eigen::VectorXd::Ones(m) - a * v;
    Eigen::Index worst_row = 0;
    const double min_s = s.minCoeff(&worst_row);
    if (min_s < -1e-12) {
      if (std::find(active.begin(), active.end(), worst_row) != active.end()) return false;
      active.push_back(worst_row);
      std::sort(active.begin(), active.end());
      continue;
    }

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    for (Eigen::Index r = 0; r < k; ++r) {
      lambda(active[static_cast<std::size_t>(r)]) = std::max(lam(r), 0.0);
    }
    const double residual =
        (Eigen::VectorXd::Ones(n) - v.cwiseProduct(a.transpose() * lambda)).cwiseAbs().maxCoeff();
    if (!(residual <= state.residual)) return false;
    state.v = v;
    state.lambda = lambda;
    state.residual = residual;
    return true;
  }
  return false;
}

IpmResult solve_scaled(const Eigen::MatrixXd& a, const EllipsoidFitOptions& options) {
  IpmResult result = barrier_path(a, options);
  polish(a, result);
  result.gap = duality_gap(a, result.v, result.lambda);
  if (!(result.residual <= options.kkt_tolerance * 1e3) || !result.v.allFinite()) {
    throw NumericalError("fit_ellipsoid: no convergence after " + std::to_string(result.iterations) +
                         " iterations (KKT residual " + std::to_string(result.residual) + ")");
  }
  return result;
}

}  // namespace

EllipsoidFit fit_ellipsoid(const SignalCloud& cloud, const Eigen::VectorXd& centroid,
                           const EllipsoidFitOptions& options) {
  const std::size_t dim = cloud.dim();
  if (cloud.size() == 0) throw ParameterError("fit_ellipsoid: empty cloud");
  if (static_cast<std::size_t>(centroid.size()) != dim) {
    throw ParameterError("fit_ellipsoid: centroid dimension mismatch");
  }

  // raw(j, i) = (x_ji - c_i)^2
  Eigen::MatrixXd raw = (cloud.points.colwise() - centroid).array().square().matrix().transpose();
  if (!raw.allFinite()) throw DataError("fit_ellipsoid: non-finite cloud");
  const Eigen::VectorXd col_max = raw.colwise().maxCoeff().transpose();

  EllipsoidFit fit;
  fit.weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  fit.multipliers = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cloud.size()));

  const double cloud_scale = std::sqrt(col_max.maxCoeff());
  const double floor_axis =
      std::max(options.axis_floor_relative * cloud_scale, options.axis_floor_absolute);
  std::vector<Eigen::Index> dims;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (col_max(ii) > 0.0) {
      dims.push_back(ii);
    } else {
      fit.weights(ii) = 1.0 / (floor_axis * floor_axis);
      fit.floored_dimensions.push_back(i);
    }
  }
  if (dims.empty()) {
    fit.active_constraints = cloud.size();
    return fit;
  }

  const ScaledProblem problem = build_problem(raw, dims, col_max);
  fit.unique_constraints = static_cast<std::size_t>(problem.a.rows());
  const IpmResult ipm = solve_scaled(problem.a, options);
  fit.iterations = ipm.iterations;
  fit.duality_gap = ipm.gap;

  for (std::size_t c = 0; c < dims.size(); ++c) {
    fit.weights(dims[c]) = ipm.v(static_cast<Eigen::Index>(c)) / col_max(dims[c]);
  }

  // Rescale so the tightest point sits exactly on the boundary, as measured by
  // the same scoring kernel the detector uses.
  auto max_score = [&] {
    double best = 0.0;
    for (Eigen::Index j = 0; j < cloud.points.cols(); ++j) {
      best = std::max(best, ellipsoid_score(centroid.data(), fit.weights.data(),
                                            cloud.points.col(j).data(), dim));
    }
    return best;
  };
  double scale_total = 1.0;
  double peak = max_score();
  if (peak > 0.0) {
    const double factor = 1.0 / peak;
    for (Eigen::Index d : dims) fit.weights(d) *= factor;
    scale_total *= factor;
    peak = max_score();
    while (peak > 1.0) {
      const double shrink = 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
      for (Eigen::Index d : dims) fit.weights(d) *= shrink;
      scale_total *= shrink;
      peak = max_score();
    }
  }
  fit.max_constraint = peak;

  // Multipliers in the original coordinates; duplicates split their group's share.
  Eigen::VectorXd stationarity = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.size()));
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const std::size_t g = problem.group_of[j];
    if (g == kNoGroup) continue;
    const double lam = ipm.lambda(static_cast<Eigen::Index>(g)) / scale_total /
                       static_cast<double>(problem.group_size[g]);
    fit.multipliers(static_cast<Eigen::Index>(j)) = lam;
    for (std::size_t c = 0; c < dims.size(); ++c) {
      stationarity(static_cast<Eigen::Index>(c)) +=
          lam * raw(static_cast<Eigen::Index>(j), dims[c]);
    }
  }
  double residual = 0.0;
  for (std::size_t c = 0; c < dims.size(); ++c) {
    residual = std::max(residual, std::abs(1.0 - fit.weights(dims[c]) *
                                                     stationarity(static_cast<Eigen::Index>(c))));
  }
  fit.kkt_residual = residual;

  for (Eigen::Index j = 0; j < cloud.points.cols(); ++j) {
    const double score = ellipsoid_score(centroid.data(), fit.weights.data(),
                                         cloud.points.col(j).data(), dim);
    if (score >= 1.0 - 1e-6) ++fit.active_constraints;
  }
  return fit;
}

}  // namespace sentinel
