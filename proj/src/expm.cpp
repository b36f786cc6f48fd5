#include <cmath>

#include "qoc/expm.hpp"
#include "qoc/linalg.hpp"

namespace qoc {

ExpmConfig choose_pn(double radius_bound, double dt, double tol) {
  ExpmConfig cfg;
  cfg.tolerance = tol;
  const double r = radius_bound * dt;
  cfg.squarings = r > 0.5 ? int(std::ceil(std::log2(r / 0.5))) : 0;
  int p = 1;
  double remainder = 0.25;  // 0.5^(p+1)/(p+1)! at p = 1
  while (remainder >= tol) {
    ++p;
    remainder *= 0.5 / double(p + 1);
  }
  cfg.taylor_order = p;
  return cfg;
}

double radius_bound(const ControlHamiltonian& h, const RealGrid& u,
                    const std::vector<std::optional<double>>& bounds) {
  double r = frobenius_norm(h.drift);
  for (std::size_t k = 0; k < h.num_controls(); ++k) {
    double amp;
    if (k < bounds.size() && bounds[k]) {
      amp = *bounds[k];
    } else {
      amp = 0.0;
      for (std::size_t j = 0; j < u.steps(); ++j) amp = std::max(amp, std::abs(u(k, j)));
    }
    r += amp * frobenius_norm(h.controls[k]);
  }
  return r;
}

ExpmConfig choose_pn_for(const ControlHamiltonian& h, const RealGrid& u,
                         const std::vector<std::optional<double>>& bounds, double dt,
                         double tol) {
  return choose_pn(radius_bound(h, u, bounds), dt, tol);
}

ComplexMatrix expm_taylor(const ComplexMatrix& m, const ExpmConfig& cfg) {
  if (m.rows() != m.cols()) throw dim_error("expm_taylor: matrix not square");
  const double scale_factor = std::ldexp(1.0, -cfg.squarings);
  ComplexMatrix a = scale(scale_factor, m);
  ComplexMatrix result = ComplexMatrix::identity(m.rows());
  ComplexMatrix term = ComplexMatrix::identity(m.rows());
  for (int k = 1; k <= cfg.taylor_order; ++k) {
    term = matmul(a, term);
    term *= 1.0 / double(k);
    result += term;
  }
  for (int s = 0; s < cfg.squarings; ++s) result = matmul(result, result);
  return result;
}

namespace {

ComplexVector matmul_like(const ComplexMatrix& h, const ComplexVector& x) {
  return matvec(h, x);
}
ComplexMatrix matmul_like(const ComplexMatrix& h, const ComplexMatrix& x) {
  return matmul(h, x);
}

// One application of the truncated Taylor polynomial of A = -i dt H / 2^n.
template <typename T>
T taylor_poly_apply(const ComplexMatrix& h, cplx factor, int order, const T& x) {
  T result = x;
  T term = x;
  for (int k = 1; k <= order; ++k) {
    term = matmul_like(h, term);
    term *= factor / double(k);
    result += term;
  }
  return result;
}

template <typename T>
T expm_apply_impl(const ComplexMatrix& h, double dt, const ExpmConfig& cfg, const T& x) {
  const cplx factor = cplx(0.0, -dt * std::ldexp(1.0, -cfg.squarings));
  const long reps = 1L << cfg.squarings;
  T result = x;
  for (long r = 0; r < reps; ++r)
    result = taylor_poly_apply(h, factor, cfg.taylor_order, result);
  return result;
}

}  // namespace

ComplexVector expm_apply(const ComplexMatrix& h, double dt, const ExpmConfig& cfg,
                         const ComplexVector& x) {
  return expm_apply_impl(h, dt, cfg, x);
}

ComplexMatrix expm_apply(const ComplexMatrix& h, double dt, const ExpmConfig& cfg,
                         const ComplexMatrix& x) {
  return expm_apply_impl(h, dt, cfg, x);
}

}  // namespace qoc
