#include <cmath>
#include <random>
#include <vector>

#include <Eigen/QR>

#include <benchmark/benchmark.h>

#include <sentinel/boundary.hpp>
#include <sentinel/detector.hpp>
#include <sentinel/ssa.hpp>

namespace {

using namespace sentinel;

// Random orthonormal basis: the per-sample cost does not depend on the data.
SubspaceModel random_model(std::size_t lag, std::size_t dim) {
  std::mt19937_64 rng(lag);
  std::normal_distribution<double> d;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(lag), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  SubspaceModel model;
  model.lag = lag;
  model.dim = dim;
  model.basis = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ() *
                Eigen::MatrixXd::Identity(m.rows(), m.cols());
  model.spectrum = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(lag));
  return model;
}

template <BoundaryKind Kind>
void BM_Push(benchmark::State& state) {
  const auto lag = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 3;
  const auto model = random_model(lag, dim);
  Boundary b;
  if constexpr (Kind == BoundaryKind::kSphere) {
    b = SphereBoundary{Eigen::VectorXd::Zero(dim), 1.0};
  } else {
    b = EllipsoidBoundary{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim), 0.1};
  }
  Detector det("bench", model, b);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise;
  std::uint64_t t = 0;
  for (; t < lag; ++t) det.push({t, noise(rng)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(det.push({t++, 0.001 * static_cast<double>(t % 1000)}));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Push<BoundaryKind::kSphere>)->Arg(250)->Arg(500)->Arg(1000);
BENCHMARK(BM_Push<BoundaryKind::kEllipsoid>)->Arg(250)->Arg(500)->Arg(1000);

void BM_FitEllipsoid(benchmark::State& state) {
  const auto count = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  SignalCloud cloud{Eigen::MatrixXd(3, count)};
  for (Eigen::Index j = 0; j < count; ++j) {
    cloud.points.col(j) << 5.0 * d(rng), d(rng), 0.2 * d(rng);
  }
  const auto c = midrange_centroid(cloud);
  for (auto _ : state) benchmark::DoNotOptimize(fit_ellipsoid(cloud, c));
}
BENCHMARK(BM_FitEllipsoid)->Arg(500)->Arg(3501)->Unit(benchmark::kMillisecond);

void BM_FitSubspace(benchmark::State& state) {
  const auto lag = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d;
  std::vector<double> x(2400);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.0628 * static_cast<double>(i)) + 0.1 * d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(fit_subspace(x, lag, 3));
}
BENCHMARK(BM_FitSubspace)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
