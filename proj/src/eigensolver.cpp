#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "lane_emden/errors.hpp"
#include "lane_emden/spectral.hpp"

namespace lane_emden {

namespace {

double norm2(std::span<const double> x) {
  return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

// Solves (K - sigma Mw) x = b by LDL^T; the shift keeps the pencil definite.
std::vector<double> shifted_solve(const DiscreteOperator& op, double sigma,
                                  std::span<const double> b) {
  const std::size_t n = op.stiffness.size();
  std::vector<double> piv(n), lower(n, 0.0), x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    double dii = op.stiffness.diag[i] - sigma * op.mass.diag[i];
    if (i > 0) {
      const double a = op.stiffness.off[i - 1] - sigma * op.mass.off[i - 1];
      lower[i] = a / piv[i - 1];
      dii -= lower[i] * a;
      x[i] -= lower[i] * x[i - 1];
    }
    if (dii == 0.0) dii = std::numeric_limits<double>::min();
    piv[i] = dii;
  }
  for (std::size_t i = n; i-- > 0;) {
    x[i] /= piv[i];
    if (i + 1 < n) x[i] -= lower[i + 1] * x[i + 1];
  }
  return x;
}

struct Residual {
  double relative;
  double mu;
};

Residual residual_of(const DiscreteOperator& op, std::span<const double> chi) {
  const std::vector<double> kx = op.stiffness.apply(chi);
  const std::vector<double> mx = op.mass.apply(chi);
  const double xkx = std::inner_product(chi.begin(), chi.end(), kx.begin(), 0.0);
  const double xmx = std::inner_product(chi.begin(), chi.end(), mx.begin(), 0.0);
  const double mu = xkx / xmx;
  std::vector<double> r(chi.size());
  for (std::size_t i = 0; i < chi.size(); ++i) r[i] = kx[i] - mu * mx[i];
  std::vector<double> abs_chi(chi.size());
  std::transform(chi.begin(), chi.end(), abs_chi.begin(), [](double v) { return std::abs(v); });
  const double denom =
      norm2(op.stiffness.apply_abs(abs_chi)) + std::abs(mu) * norm2(op.mass.apply_abs(abs_chi));
  return {denom > 0.0 ? norm2(r) / denom : 0.0, mu};
}

}  // namespace

int count_eigenvalues_below(const DiscreteOperator& op, double sigma) {
  const std::size_t n = op.stiffness.size();
  int negatives = 0;
  double prev = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dii = op.stiffness.diag[i] - sigma * op.mass.diag[i];
    if (i > 0) {
      const double a = op.stiffness.off[i - 1] - sigma * op.mass.off[i - 1];
      dii -= a * a / prev;
    }
    if (dii == 0.0) dii = -std::numeric_limits<double>::min();
    if (dii < 0.0) ++negatives;
    prev = dii;
  }
  return negatives;
}

SpectralResult smallest_eigenpair(const DiscreteOperator& op, double tol_eig) {
  const std::size_t n = op.stiffness.size();
  if (n < 2 || op.mass.size() != n) throw InvalidArgument("operator is not assembled");
  if (!(tol_eig > 0.0)) throw InvalidArgument("tol_eig must be positive");

  // Upper bracket from the constant vector, widened until it holds mu*.
  const std::vector<double> ones(n, 1.0);
  double hi = op.stiffness.form(ones, ones) / op.mass.form(ones, ones);
  double step = std::max(std::abs(hi), 1.0) * 1e-10;
  for (int k = 0; count_eigenvalues_below(op, hi) == 0; ++k, step *= 4.0) {
    if (k > 200) throw NumericalFailure("eigensolver: cannot bracket mu* from above");
    hi += step;
  }
  double lo = hi;
  step = std::max(std::abs(hi), 1.0);
  for (int k = 0; count_eigenvalues_below(op, lo) > 0; ++k, step *= 2.0) {
    if (k > 200) throw NumericalFailure("eigensolver: cannot bracket mu* from below");
    lo = hi - step;
  }

  const double floor_width = 1e-14 * (hi - lo);
  for (int k = 0; k < 200; ++k) {
    const double width = hi - lo;
    if (width <= 1e-6 * std::max(std::abs(lo), std::abs(hi)) || width <= floor_width) break;
    const double mid = 0.5 * (lo + hi);
    (count_eigenvalues_below(op, mid) > 0 ? hi : lo) = mid;
  }

  // Shift-invert iteration with the shift just below mu*.
  const double sigma = lo;
  std::vector<double> chi = ones;
  Residual res{std::numeric_limits<double>::infinity(), hi};
  // Iterate past tol_eig until the residual stops improving: the strong-form
  // check differentiates chi twice and needs the converged vector.
  int it = 0;
  for (; it < 100; ++it) {
    chi = shifted_solve(op, sigma, op.mass.apply(chi));
    const double scale = std::sqrt(std::abs(op.mass.form(chi, chi)));
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw NumericalFailure("eigensolver: shift-invert iterate degenerated");
    for (double& v : chi) v /= scale;
    const Residual next = residual_of(op, chi);
    const bool stalled = next.relative > 0.5 * res.relative;
    res = next;
    if (res.relative <= tol_eig && stalled) break;
  }
  if (!(res.relative <= tol_eig))
    throw NumericalFailure(fmt::format(
        "eigensolver did not converge: backward error {:.3g} after {} iterations", res.relative,
        it));

  const double mnorm = std::sqrt(op.mass.form(chi, chi));
  const double sign = std::accumulate(chi.begin(), chi.end(), 0.0) < 0.0 ? -1.0 : 1.0;
  for (double& v : chi) v *= sign / mnorm;

  std::vector<double> abs_chi(n);
  std::transform(chi.begin(), chi.end(), abs_chi.begin(), [](double v) { return std::abs(v); });
  SpectralResult out;
  out.mu_star = res.mu;
  out.nodes = op.nodes;
  out.chi = std::move(chi);
  out.residual = res.relative;
  out.iterations = it + 1;
  const std::vector<double> k_abs = op.stiffness.apply_abs(abs_chi);
  out.rayleigh_scale = std::inner_product(abs_chi.begin(), abs_chi.end(), k_abs.begin(), 0.0);
  const double dead_zone = tol_eig * out.rayleigh_scale;
  out.marginal = std::abs(out.mu_star) <= dead_zone;
  out.verdict = out.mu_star < -dead_zone ? Verdict::Unstable : Verdict::Stable;
  if (out.verdict == Verdict::Unstable) out.lambda = std::sqrt(-out.mu_star);
  return out;
}

SpectralResult classify_stability(const Profile& profile, int mesh_size, double tol_eig) {
  const SturmLiouvilleData data = build_sl_data(profile);
  return smallest_eigenpair(assemble(data, mesh_size), tol_eig);
}

}  // namespace lane_emden
