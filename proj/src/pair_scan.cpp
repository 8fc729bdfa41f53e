// Max distance-weighted correlation over all grid pairs.
//
// Both kernels evaluate each inner product a_i^H a_j as a sequential sum over
// elements of (re_i*re_j + im_i*im_j, re_i*im_j - im_i*re_j), take the
// magnitude as sqrt(re^2 + im^2) and multiply by the weight table entry. The
// parallel kernel vectorizes across j with elements in the outer loop, which
// keeps the per-pair summation order and hence the exact bits.

#include <cmath>
#include <vector>

#include <omp.h>

#include "isac/correlation.hpp"
#include "isac/error.hpp"

namespace isac {

namespace {

// Descending value, then ascending (i, j).
bool better(double v, std::size_t i, std::size_t j, const CorrelationReport& cur) {
  if (v != cur.max_value) return v > cur.max_value;
  if (i != cur.i) return i < cur.i;
  return j < cur.j;
}

void require_pairs(const GridCodebook& cb) {
  if (cb.size() < 2) throw InvalidArgument("max_weighted_correlation: need at least two grid points");
  const auto n = static_cast<Eigen::Index>(cb.size());
  if (cb.steering.cols() != n || cb.distance_weights.rows() != n || cb.distance_weights.cols() != n) {
    throw InvalidArgument("max_weighted_correlation: codebook dimensions disagree");
  }
}

}  // namespace

CorrelationReport max_weighted_correlation(const GridCodebook& codebook) {
  require_pairs(codebook);
  const std::size_t n = codebook.size();
  const std::size_t m = static_cast<std::size_t>(codebook.steering.rows());

  // Structure-of-arrays copy, element-major: re[k * n + j].
  std::vector<double> re(m * n), im(m * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      const auto z = codebook.steering(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
      re[k * n + j] = z.real();
      im[k * n + j] = z.imag();
    }
  }
  const double* w = codebook.distance_weights.data();  // column-major, symmetric

  CorrelationReport best{-1.0, 0, 1};
#pragma omp parallel if (!omp_in_parallel())
  {
    CorrelationReport local{-1.0, 0, 1};
    std::vector<double> acc_re(n), acc_im(n);
#pragma omp for schedule(dynamic, 4)
    for (std::size_t i = 0; i < n - 1; ++i) {
      const std::size_t lo = i + 1;
      double* __restrict ar = acc_re.data();
      double* __restrict ai = acc_im.data();
      for (std::size_t j = lo; j < n; ++j) {
        ar[j] = 0.0;
        ai[j] = 0.0;
      }
      for (std::size_t k = 0; k < m; ++k) {
        const double xr = re[k * n + i];
        const double xi = im[k * n + i];
        const double* __restrict yr = re.data() + k * n;
        const double* __restrict yi = im.data() + k * n;
        for (std::size_t j = lo; j < n; ++j) {
          ar[j] += xr * yr[j] + xi * yi[j];
          ai[j] += xr * yi[j] - xi * yr[j];
        }
      }
      const double* wi = w + i * n;  // column i == row i
      for (std::size_t j = lo; j < n; ++j) {
        const double v = std::sqrt(ar[j] * ar[j] + ai[j] * ai[j]) * wi[j];
        if (better(v, i, j, local)) local = {v, i, j};
      }
    }
#pragma omp critical(isac_pair_scan_reduce)
    {
      if (better(local.max_value, local.i, local.j, best)) best = local;
    }
  }
  return best;
}

namespace serial {

CorrelationReport max_weighted_correlation(const GridCodebook& codebook) {
  require_pairs(codebook);
  const auto n = static_cast<Eigen::Index>(codebook.size());
  const auto m = codebook.steering.rows();
  CorrelationReport best{-1.0, 0, 1};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double sr = 0.0, si = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) {
        const auto x = codebook.steering(k, i);
        const auto y = codebook.steering(k, j);
        sr += x.real() * y.real() + x.imag() * y.imag();
        si += x.real() * y.imag() - x.imag() * y.real();
      }
      const double v = std::sqrt(sr * sr + si * si) * codebook.distance_weights(i, j);
      if (better(v, static_cast<std::size_t>(i), static_cast<std::size_t>(j), best)) {
        best = {v, static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      }
    }
  }
  return best;
}

}  // namespace serial

}  // namespace isac
