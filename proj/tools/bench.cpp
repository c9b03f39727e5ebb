// Benchmark: serial versus OpenMP batch eigendecomposition and the frame
// tracking pipeline, at the dimensions this kernel targets.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "adia/linalg.hpp"
#include "adia/models.hpp"
#include "adia/spectral.hpp"
#include "adia/time_grid.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace adia;

namespace {

std::vector<ComplexMatrix> random_hermitian_batch(int dim, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    ComplexMatrix a(dim);
    for (int r = 0; r < dim; ++r) {
      a(r, r) = dist(rng);
      for (int c = r + 1; c < dim; ++c) {
        const cplx v(dist(rng), dist(rng));
        a(r, c) = v;
        a(c, r) = std::conj(v);
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

template <typename F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled\n");
#endif

  std::printf("\nbatch Hermitian eigendecomposition (20000 matrices)\n");
  std::printf("%-6s %-12s %-12s %-8s\n", "dim", "serial ms", "parallel ms", "speedup");
  for (int dim : {2, 4, 8, 16}) {
    const auto batch = random_hermitian_batch(dim, 20000, 1234u + static_cast<unsigned>(dim));
    std::vector<EigenDecomposition> a, b;
    const double serial = time_ms([&] { a = eigh_batch(batch, ExecutionPolicy::Serial); });
    const double parallel = time_ms([&] { b = eigh_batch(batch, ExecutionPolicy::Parallel); });
    double worst = 0.0;
    for (size_t k = 0; k < a.size(); ++k)
      for (size_t i = 0; i < a[k].values.size(); ++i)
        worst = std::max(worst, std::abs(a[k].values[i] - b[k].values[i]));
    std::printf("%-6d %-12.2f %-12.2f %-8.2f (max value diff %.1e)\n", dim, serial, parallel,
                serial / parallel, worst);
  }

  std::printf("\nframe tracking + spectral flow, spin-half, 20000 grid points\n");
  SpinHalfParams p;
  p.eta = 1.0;
  p.xi = Schedule::sinusoidal(0.2, 0.1, 0.3, 0.0);
  p.horizon = 50.0;
  const SpinHalfModel model(p);
  const TimeGrid grid = TimeGrid::uniform(50.0, 20000);
  for (ExecutionPolicy exec : {ExecutionPolicy::Serial, ExecutionPolicy::Parallel}) {
    TrackingOptions opts;
    opts.exec = exec;
    const double ms = time_ms([&] {
      const EigenFrameSequence frames = track_frames(model, grid, opts);
      const SpectralFlow flow = compute_flow(frames, model, opts);
      (void)flow;
    });
    std::printf("%-8s %.2f ms\n", exec == ExecutionPolicy::Serial ? "serial" : "parallel", ms);
  }
  return 0;
}
