#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <sentinel/errors.hpp>
#include <sentinel/ssa.hpp>
#include <sentinel/synthgen.hpp>

#include "oracles.hpp"

namespace sentinel {
namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

Eigen::MatrixXd random_symmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = d(rng);
  return b * b.transpose();
}

TEST(Embed, SmallHankel) {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto m = embed(v, 2);
  ASSERT_EQ(m.lag(), 2u);
  ASSERT_EQ(m.columns(), 4u);
  Eigen::MatrixXd expected(2, 4);
  expected << 1, 2, 3, 4, 2, 3, 4, 5;
  EXPECT_EQ(m.data(), expected);
}

TEST(Embed, ConstantSeries) {
  const std::vector<double> v(10, 7.25);
  const auto m = embed(v, 3);
  EXPECT_EQ(m.columns(), 8u);
  EXPECT_TRUE((m.data().array() == 7.25).all());
}

TEST(Embed, DefaultDimensions) {
  const auto v = noise(4000, 1);
  const auto m = embed(v, 500);
  EXPECT_EQ(m.lag(), 500u);
  EXPECT_EQ(m.columns(), 3501u);
}

TEST(Embed, HankelPropertyIsExact) {
  const auto v = noise(300, 2);
  const auto m = embed(v, 37);
  const auto& d = m.data();
  for (Eigen::Index i = 1; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j + 1 < d.cols(); ++j) ASSERT_EQ(d(i, j), d(i - 1, j + 1));
  }
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      ASSERT_EQ(d(i, j), v[static_cast<std::size_t>(i + j)]);
    }
  }
}

TEST(Embed, LagOutOfRange) {
  const std::vector<double> v(10, 1.0);
  EXPECT_THROW(embed(v, 1), ParameterError);
  EXPECT_THROW(embed(v, 5), ParameterError);  // needs L < N/2
  EXPECT_THROW(embed(v, 0), ParameterError);
  EXPECT_NO_THROW(embed(v, 4));
}

TEST(LaggedCovariance, Identity) {
  TrajectoryMatrix m(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_EQ(lagged_covariance(m), Eigen::MatrixXd::Identity(2, 2));
}

TEST(LaggedCovariance, HandMultiplication) {
  const std::vector<double> v{1, 2, 3, 4, 5};
  Eigen::MatrixXd expected(2, 2);
  expected << 30, 40, 40, 54;
  EXPECT_EQ(lagged_covariance(embed(v, 2)), expected);
}

TEST(LaggedCovariance, ZeroMatrix) {
  TrajectoryMatrix m(Eigen::MatrixXd::Zero(3, 5));
  EXPECT_EQ(lagged_covariance(m), Eigen::MatrixXd::Zero(3, 3));
}

TEST(LaggedCovariance, SymmetricAndPsd) {
  const auto s = lagged_covariance(embed(noise(400, 3), 40));
  EXPECT_EQ(s, s.transpose());
  const auto pairs = eigh(s);
  for (const auto& p : pairs) EXPECT_GE(p.value, -1e-9 * s.norm());
}

TEST(Eigh, Diagonal) {
  Eigen::MatrixXd s(2, 2);
  s << 3, 0, 0, 1;
  const auto pairs = eigh(s);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_DOUBLE_EQ(pairs[0].value, 3.0);
  EXPECT_DOUBLE_EQ(pairs[1].value, 1.0);
  EXPECT_NEAR(std::abs(pairs[0].vector(0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(pairs[1].vector(1)), 1.0, 1e-15);
}

TEST(Eigh, TwoByTwoCharacteristicPolynomial) {
  // Roots of l^2 - 84 l + 20, frozen from a high-precision evaluation.
  Eigen::MatrixXd s(2, 2);
  s << 30, 40, 40, 54;
  const auto pairs = eigh(s);
  EXPECT_NEAR(pairs[0].value, 83.761226035642200719, 1e-12);
  EXPECT_NEAR(pairs[1].value, 0.23877396435779928097, 1e-12);
  // Sign convention: largest-magnitude component positive.
  EXPECT_NEAR(pairs[0].vector(0), 0.59693053, 1e-8);
  EXPECT_NEAR(pairs[0].vector(1), 0.80229293, 1e-8);
  EXPECT_NEAR(pairs[1].vector(0), 0.80229293, 1e-8);
  EXPECT_NEAR(pairs[1].vector(1), -0.59693053, 1e-8);
}

TEST(Eigh, DegenerateIdentity) {
  const auto pairs = eigh(Eigen::MatrixXd::Identity(4, 4));
  Eigen::MatrixXd u(4, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(pairs[k].value, 1.0, 1e-14);
    u.col(static_cast<Eigen::Index>(k)) = pairs[k].vector;
  }
  EXPECT_LE((u.transpose() * u - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Eigh, RejectsNonSymmetric) {
  Eigen::MatrixXd s(2, 2);
  s << 1, 2, 3, 4;
  EXPECT_THROW(eigh(s), ParameterError);
}

TEST(Eigh, MatchesJacobiOracle) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto s = random_symmetric(12, seed);
    const auto pairs = eigh(s);
    const auto oracle = testing::jacobi_eigen(s);
    const double norm = s.norm();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      EXPECT_NEAR(pairs[k].value, oracle.values(static_cast<Eigen::Index>(k)), 1e-10 * norm);
      const double residual = (s * pairs[k].vector - pairs[k].value * pairs[k].vector).norm();
      EXPECT_LE(residual, 1e-7 * norm);
      if (k > 0) {
        EXPECT_GE(pairs[k - 1].value, pairs[k].value);
      }
      // Same eigenvector up to sign (spectrum is simple for random input).
      const double overlap = std::abs(pairs[k].vector.dot(oracle.vectors.col(static_cast<Eigen::Index>(k))));
      EXPECT_NEAR(overlap, 1.0, 1e-8);
    }
  }
}

TEST(Eigh, SignConvention) {
  const auto s = random_symmetric(8, 99);
  for (const auto& p : eigh(s)) {
    Eigen::Index idx = 0;
    p.vector.cwiseAbs().maxCoeff(&idx);
    EXPECT_GT(p.vector(idx), 0.0);
  }
}

TEST(FitSubspace, SinusoidCapturesSpectrum) {
  SignalSpec spec;
  spec.length = 2000;
  spec.components = {Sinusoid{1.0, 100.0, 0.3}};
  spec.noise_sigma = 0.0;
  const auto s = generate(spec);
  const auto model = fit_subspace(s.values, 50, 2);
  EXPECT_GE(model.capture_ratio(), 0.99);
}

TEST(FitSubspace, WhiteNoiseFlatSpectrum) {
  // Top-R share is at least R/L by ordering. Hankel rows are correlated, so the
  // eigenvalues follow a smoothed noise spectrum rather than Marchenko-Pastur;
  // over 200 seeds the share never exceeded 1.39 R/L.
  constexpr std::size_t n = 4000, lag = 50;
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const auto model = fit_subspace(noise(n, seed), lag, 2);
    EXPECT_GE(model.capture_ratio(), 2.0 / lag);
    EXPECT_LE(model.capture_ratio(), 1.5 * 2.0 / lag);
  }
}

TEST(FitSubspace, FullDimensionIsLossless) {
  const auto v = noise(200, 6);
  const auto model = fit_subspace(v, 10, 10);
  const std::vector<double> x(v.begin() + 17, v.begin() + 27);
  const auto p = project(model, x);
  EXPECT_NEAR(p.norm(), Eigen::Map<const Eigen::VectorXd>(x.data(), 10).norm(), 1e-12);
}

TEST(FitSubspace, DimensionRange) {
  const auto v = noise(200, 7);
  EXPECT_THROW(fit_subspace(v, 10, 0), ParameterError);
  EXPECT_THROW(fit_subspace(v, 10, 11), ParameterError);
}

TEST(FitSubspace, Orthonormal) {
  const auto model = fit_subspace(noise(3000, 8), 200, 5);
  const auto gram = model.basis.transpose() * model.basis;
  EXPECT_LE((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FitSubspace, ReversedSeriesSameSpectrum) {
  auto v = noise(1000, 9);
  const auto a = fit_subspace(v, 60, 3);
  std::reverse(v.begin(), v.end());
  const auto b = fit_subspace(v, 60, 3);
  for (Eigen::Index k = 0; k < a.spectrum.size(); ++k) {
    EXPECT_NEAR(a.spectrum(k), b.spectrum(k), 1e-8 * a.spectrum(0));
  }
}

TEST(FitSubspace, Deterministic) {
  const auto v = noise(1500, 10);
  const auto a = fit_subspace(v, 100, 3);
  const auto b = fit_subspace(v, 100, 3);
  EXPECT_EQ(a.basis, b.basis);
  EXPECT_EQ(a.spectrum, b.spectrum);
}

SubspaceModel standard_basis_model(std::size_t lag, std::size_t dim) {
  SubspaceModel m;
  m.lag = lag;
  m.dim = dim;
  m.basis = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(lag), static_cast<Eigen::Index>(dim));
  m.spectrum = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(lag));
  return m;
}

TEST(Project, StandardBasisTakesLeadingComponents) {
  const auto m = standard_basis_model(5, 2);
  const std::vector<double> v{3, -1, 4, 1, 5};
  const auto p = project(m, v);
  EXPECT_EQ(p(0), 3.0);
  EXPECT_EQ(p(1), -1.0);
}

TEST(Project, OrthogonalVectorMapsToZero) {
  const auto m = standard_basis_model(5, 2);
  const std::vector<double> v{0, 0, 4, 1, 5};
  EXPECT_EQ(project(m, v), Eigen::VectorXd::Zero(2));
}

TEST(Project, MatchesNaiveOracle) {
  const auto model = fit_subspace(noise(2000, 11), 500, 3);
  const auto v = noise(500, 12);
  const auto p = project(model, v);
  const auto q = testing::naive_project(model.basis, v);
  EXPECT_LE((p - q).cwiseAbs().maxCoeff(), 1e-12 * q.cwiseAbs().maxCoeff());
}

TEST(Project, LengthMismatch) {
  const auto m = standard_basis_model(5, 2);
  const std::vector<double> v{1, 2, 3};
  EXPECT_THROW(project(m, v), ParameterError);
}

TEST(Project, NormPreservationAndLinearity) {
  const auto model = fit_subspace(noise(2000, 13), 64, 4);
  std::mt19937_64 rng(14);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(64), w(64), c(64);
    for (auto& x : v) x = d(rng);
    for (auto& x : w) x = d(rng);
    const double a = d(rng), b = d(rng);
    for (std::size_t i = 0; i < 64; ++i) c[i] = a * v[i] + b * w[i];
    const auto pv = project(model, v);
    const auto pw = project(model, w);
    const auto pc = project(model, c);
    const Eigen::VectorXd lin = a * pv + b * pw;
    EXPECT_LE((pc - lin).norm(), 1e-9 * std::max(pc.norm(), 1e-300) + 1e-12);
    const Eigen::VectorXd back = model.basis * pv;
    EXPECT_NEAR(back.norm(), pv.norm(), 1e-9 * pv.norm());
  }
}

TEST(Projector, BitIdenticalToProject) {
  const auto model = fit_subspace(noise(2000, 15), 128, 3);
  const Projector projector(model);
  const auto v = noise(128, 16);
  std::vector<double> out(3);
  projector.apply(v.data(), out.data());
  const auto p = project(model, v);
  for (Eigen::Index r = 0; r < 3; ++r) EXPECT_EQ(out[static_cast<std::size_t>(r)], p(r));
}

}  // namespace
}  // namespace sentinel
