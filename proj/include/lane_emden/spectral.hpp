#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lane_emden/profile.hpp"

namespace lane_emden {

/// Coefficients of the radial perturbation operator
///   L chi = -d/dy(p chi') + q chi,   weight wgt,
/// with p = gamma rho^gamma y^{d+1}, q = (2(d-1) - d gamma) y^d d(rho^gamma)/dy,
/// wgt = y^{d+1} rho, on [0, R] with the Robin condition d chi(R) + R chi'(R) = 0
/// entering the quadratic form as the boundary term robin_weight chi(R)^2.
struct SturmLiouvilleData {
  int d = 3;
  double gamma = 1.0;
  double radius = 0.0;
  double robin_weight = 0.0;  ///< d gamma R^d
  std::function<double(double)> p;
  std::function<double(double)> p_slope;
  std::function<double(double)> q;
  std::function<double(double)> weight;
  std::shared_ptr<const Profile> profile;  ///< null for manufactured data
};

/// q uses the steady-state identity y^d d(rho^gamma)/dy = -y rho m, so no
/// numerical differentiation is involved.
SturmLiouvilleData build_sl_data(const Profile& profile);

/// Nodes R (i/M)^grading, i = 0..M.
std::vector<double> graded_mesh(double radius, int mesh_size, double grading = 1.5);

/// Q[chi1, chi2] for continuous piecewise-linear functions given by nodal
/// samples, 3-point Gauss per element.
double quadratic_form(const SturmLiouvilleData& data, std::span<const double> nodes,
                      std::span<const double> chi1, std::span<const double> chi2);

/// <chi1, chi2> weighted by y^{d+1} rho, same discretization as quadratic_form.
double weighted_inner(const SturmLiouvilleData& data, std::span<const double> nodes,
                      std::span<const double> chi1, std::span<const double> chi2);

/// A test function with an analytic derivative; `kinks` lists interior points
/// where the derivative may jump.
struct TestFunction {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  std::vector<double> kinks;
};

/// Q on analytic test functions by composite 5-point Gauss on a grid that is
/// graded towards 0 and contains every kink.
double quadratic_form(const SturmLiouvilleData& data, const TestFunction& chi1,
                      const TestFunction& chi2, int panels = 2000);
double weighted_inner(const SturmLiouvilleData& data, const TestFunction& chi1,
                      const TestFunction& chi2, int panels = 2000);

/// Symmetric tridiagonal matrix: diag[i] = A(i,i), off[i] = A(i,i+1).
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
  std::vector<double> apply(std::span<const double> x) const;
  /// Same product with |A| and |x|, used for backward-error scales.
  std::vector<double> apply_abs(std::span<const double> x) const;
  double form(std::span<const double> x, std::span<const double> y) const;
};

/// Weak-form stiffness K (including the Robin term) and weighted mass Mw of
/// the P1 discretization.
struct DiscreteOperator {
  std::vector<double> nodes;
  SymTridiagonal stiffness;
  SymTridiagonal mass;
  int mesh_size() const { return static_cast<int>(nodes.size()) - 1; }
};

DiscreteOperator assemble(const SturmLiouvilleData& data, int mesh_size);

/// Number of negative pivots in the LDL^T factorization of K - sigma Mw,
/// which equals the number of generalized eigenvalues below sigma.
int count_eigenvalues_below(const DiscreteOperator& op, double sigma);

enum class Verdict { Stable, Unstable };

struct SpectralResult {
  double mu_star = 0.0;
  std::vector<double> nodes;
  std::vector<double> chi;  ///< normalized so chi^T Mw chi = 1, sum(chi) > 0
  std::optional<double> lambda;  ///< sqrt(-mu*) when Unstable
  Verdict verdict = Verdict::Stable;
  bool marginal = false;
  double rayleigh_scale = 0.0;  ///< |chi|^T |K| |chi| / chi^T Mw chi
  double residual = 0.0;        ///< ||K chi - mu Mw chi|| / (|| |K||chi| || + |mu| || |Mw||chi| ||)
  int iterations = 0;
  int mesh_size() const { return static_cast<int>(nodes.size()) - 1; }
};

inline constexpr double kDefaultTolEig = 1e-8;
inline constexpr int kDefaultMeshSize = 2048;

/// Smallest generalized eigenpair of (K, Mw): inertia bisection brackets mu*,
/// then shift-invert iteration with the shift just below mu*.
SpectralResult smallest_eigenpair(const DiscreteOperator& op, double tol_eig = kDefaultTolEig);

SpectralResult classify_stability(const Profile& profile, int mesh_size = kDefaultMeshSize,
                                  double tol_eig = kDefaultTolEig);

/// Sub-cases of the large-density instability argument.
enum class WitnessCase {
  Constant = 1,     ///< 2d/(d+2) < gamma < 2(d-1)/d, chi = 1
  ScaledFamily = 2, ///< gamma = 2d/(d+2), chi_k = k^{d/(d+2)} chi(k^{1/(d+2)} y), chi = 1
  CappedPower = 3,  ///< gamma < 2d/(d+2), chi = min(eps^{-a}, y^{-a})
};

struct WitnessResult {
  WitnessCase which;
  double value;    ///< Q on the test function; negative certifies instability
  double epsilon;  ///< cap radius (case 3), else 0
  double exponent; ///< a (case 3), else 0
};

WitnessResult instability_witness(const Profile& profile, WitnessCase which);

struct StrongFormResidual {
  double interior;      ///< max nodal residual / max nodal term magnitude
  double robin_defect;  ///< |d chi(R) + R chi'(R)|
  double chi_at_radius;
};

/// Residual of the strong form at interior nodes using local quadratic
/// reconstruction of chi, plus the Robin defect from a one-sided quadratic.
StrongFormResidual eigen_residual_strongform(const SturmLiouvilleData& data,
                                             const SpectralResult& result);

}  // namespace lane_emden
