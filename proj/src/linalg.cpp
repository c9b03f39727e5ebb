#include "adia/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "adia/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adia {

namespace {

double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q). The unitary is
// J = I except J(p,p)=c, J(p,q)=s, J(q,p)=-s*conj(w), J(q,q)=c*conj(w)
// with w = a(p,q)/|a(p,q)| and (c,s) the real rotation for [[app,|b|],[|b|,aqq]].
void rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
  const cplx beta = a(p, q);
  const double babs = std::abs(beta);
  if (babs == 0.0) return;
  const cplx w = beta / babs;
  const cplx wc = std::conj(w);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * babs);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const int n = a.dim();
  for (int r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    const cplx arp = a(r, p), arq = a(r, q);
    a(r, p) = c * arp - s * wc * arq;
    a(r, q) = s * arp + c * wc * arq;
    a(p, r) = std::conj(a(r, p));
    a(q, r) = std::conj(a(r, q));
  }
  const double h = t * babs;
  a(p, p) = app - h;
  a(q, q) = aqq + h;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (int r = 0; r < n; ++r) {
    const cplx vrp = v(r, p), vrq = v(r, q);
    v(r, p) = c * vrp - s * wc * vrq;
    v(r, q) = s * vrp + c * wc * vrq;
  }
}

void canonical_phase(ComplexMatrix& v, int col) {
  int best = 0;
  double best_abs = 0.0;
  for (int r = 0; r < v.dim(); ++r) {
    const double m = std::abs(v(r, col));
    if (m > best_abs) {
      best_abs = m;
      best = r;
    }
  }
  if (best_abs == 0.0) return;
  const cplx phase = v(best, col) / best_abs;
  const cplx fix = std::conj(phase);
  for (int r = 0; r < v.dim(); ++r) v(r, col) *= fix;
  v(best, col) = cplx(std::abs(v(best, col)), 0.0);
}

}  // namespace

void eigh_inplace(ComplexMatrix& a, std::vector<double>& values, ComplexMatrix& vectors,
                  bool sort_and_fix) {
  const int n = a.dim();
  if (vectors.dim() != n) vectors = ComplexMatrix(n);
  vectors.set_identity();
  values.assign(static_cast<size_t>(n), 0.0);
  if (n == 1) {
    values[0] = a(0, 0).real();
    return;
  }

  const double scale = std::max(1.0, a.frobenius_norm());
  const double stop = 1e-14 * scale;  // off-diagonal Frobenius mass target
  bool converged = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (offdiag_norm(a) < stop) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > stop / (n * n)) rotate(a, vectors, p, q);
  }
  if (!converged && offdiag_norm(a) >= stop)
    throw NoConvergence("Jacobi sweeps exhausted before convergence");

  for (int i = 0; i < n; ++i) values[static_cast<size_t>(i)] = a(i, i).real();
  if (!sort_and_fix) return;

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return values[static_cast<size_t>(i)] < values[static_cast<size_t>(j)]; });
  std::vector<double> sorted(static_cast<size_t>(n));
  ComplexMatrix perm(n);
  for (int c = 0; c < n; ++c) {
    sorted[static_cast<size_t>(c)] = values[static_cast<size_t>(order[static_cast<size_t>(c)])];
    for (int r = 0; r < n; ++r) perm(r, c) = vectors(r, order[static_cast<size_t>(c)]);
  }
  values = std::move(sorted);
  vectors = std::move(perm);
  for (int c = 0; c < n; ++c) canonical_phase(vectors, c);
}

EigenDecomposition eigh(const ComplexMatrix& h, double hermitian_tol) {
  const double defect = h.hermiticity_defect();
  if (defect > hermitian_tol) throw NotHermitian(defect, hermitian_tol);

  ComplexMatrix work(h.dim());
  for (int r = 0; r < h.dim(); ++r)
    for (int c = 0; c < h.dim(); ++c) work(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));

  EigenDecomposition out;
  eigh_inplace(work, out.values, out.vectors, true);
  out.min_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < out.values.size(); ++i)
    out.min_gap = std::min(out.min_gap, out.values[i + 1] - out.values[i]);
  out.degenerate = out.min_gap < 1e-10;
  return out;
}

State propagate_step(const ComplexMatrix& h, double dt, const State& psi, double hermitian_tol) {
  const EigenDecomposition d = eigh(h, hermitian_tol);
  const int n = h.dim();
  State w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    cplx s{};
    for (int r = 0; r < n; ++r) s += std::conj(d.vectors(r, i)) * psi[static_cast<size_t>(r)];
    w[static_cast<size_t>(i)] = s * std::polar(1.0, -d.values[static_cast<size_t>(i)] * dt);
  }
  State out(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) {
    cplx s{};
    for (int i = 0; i < n; ++i) s += d.vectors(r, i) * w[static_cast<size_t>(i)];
    out[static_cast<size_t>(r)] = s;
  }
  return out;
}

std::vector<EigenDecomposition> eigh_batch(const std::vector<ComplexMatrix>& hs,
                                           ExecutionPolicy exec, double hermitian_tol) {
  std::vector<EigenDecomposition> out(hs.size());
  if (exec == ExecutionPolicy::Parallel) {
    std::exception_ptr eptr = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long k = 0; k < static_cast<long>(hs.size()); ++k) {
      try {
        out[static_cast<size_t>(k)] = eigh(hs[static_cast<size_t>(k)], hermitian_tol);
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
        if (!eptr) eptr = std::current_exception();
      }
    }
    if (eptr) std::rethrow_exception(eptr);
  } else {
    for (size_t k = 0; k < hs.size(); ++k) out[k] = eigh(hs[k], hermitian_tol);
  }
  return out;
}

}  // namespace adia
