#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "lane_emden/errors.hpp"
#include "lane_emden/spectral.hpp"

namespace lane_emden {

namespace {

// Gauss-Legendre rules on [0, 1].
constexpr std::array<double, 3> kGauss3X{0.11270166537925831, 0.5, 0.88729833462074169};
constexpr std::array<double, 3> kGauss3W{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
constexpr std::array<double, 5> kGauss5X{0.046910077030668004, 0.23076534494715845, 0.5,
                                         0.76923465505284155, 0.95308992296933200};
constexpr std::array<double, 5> kGauss5W{0.11846344252809454, 0.23931433524968324,
                                         0.28444444444444444, 0.23931433524968324,
                                         0.11846344252809454};

void check_nodes(const SturmLiouvilleData& data, std::span<const double> nodes,
                 std::span<const double> chi1, std::span<const double> chi2) {
  if (nodes.size() < 2 || chi1.size() != nodes.size() || chi2.size() != nodes.size())
    throw InvalidArgument(fmt::format("mesh mismatch: {} nodes, samples of size {} and {}",
                                      nodes.size(), chi1.size(), chi2.size()));
  if (std::abs(nodes.back() - data.radius) > 1e-12 * data.radius)
    throw InvalidArgument("mesh mismatch: last node is not the liquid radius");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(chi1[i]) || !std::isfinite(chi2[i]))
      throw InvalidArgument("test function samples must be finite");
    if (i > 0 && !(nodes[i] > nodes[i - 1])) throw InvalidArgument("mesh must be increasing");
  }
}

// Panel edges for analytic test functions: graded towards 0, kinks included.
std::vector<double> panel_edges(double radius, int panels, const std::vector<double>& kinks) {
  if (panels < 1) throw InvalidArgument("need at least one panel");
  std::vector<double> edges = graded_mesh(radius, panels, 2.0);
  for (double k : kinks)
    if (k > 0.0 && k < radius) edges.push_back(k);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

SturmLiouvilleData build_sl_data(const Profile& profile) {
  if (profile.kind() != ProfileKind::LiquidTruncated || !profile.liquid_radius())
    throw InvalidArgument("stability analysis needs a liquid-truncated profile (gas profile has no R)");
  auto shared = std::make_shared<const Profile>(profile);
  const int d = profile.config().d;
  const double gamma = profile.config().gamma;
  const double radius = *profile.liquid_radius();
  const double q_coeff = 2.0 * (d - 1.0) - d * gamma;

  auto at = [shared, radius](double y) { return shared->sample(std::clamp(y, 0.0, radius)); };

  SturmLiouvilleData data;
  data.d = d;
  data.gamma = gamma;
  data.radius = radius;
  data.robin_weight = d * gamma * std::pow(radius, d);
  data.profile = shared;
  data.p = [=](double y) { return gamma * std::pow(at(y).rho, gamma) * std::pow(y, d + 1); };
  data.p_slope = [=](double y) {
    const ProfileSample s = at(y);
    return gamma * (-y * y * s.rho * s.mass + (d + 1.0) * std::pow(s.rho, gamma) * std::pow(y, d));
  };
  data.q = [=](double y) {
    const ProfileSample s = at(y);
    return -q_coeff * y * s.rho * s.mass;
  };
  data.weight = [=](double y) { return std::pow(y, d + 1) * at(y).rho; };
  return data;
}

std::vector<double> graded_mesh(double radius, int mesh_size, double grading) {
  if (!(radius > 0.0) || mesh_size < 1 || !(grading >= 1.0))
    throw InvalidArgument(fmt::format("degenerate mesh: R = {}, M = {}, grading = {}", radius,
                                      mesh_size, grading));
  std::vector<double> nodes(mesh_size + 1);
  for (int i = 0; i <= mesh_size; ++i)
    nodes[i] = radius * std::pow(static_cast<double>(i) / mesh_size, grading);
  nodes.back() = radius;
  return nodes;
}

double quadratic_form(const SturmLiouvilleData& data, std::span<const double> nodes,
                      std::span<const double> chi1, std::span<const double> chi2) {
  check_nodes(data, nodes, chi1, chi2);
  double sum = 0.0;
  for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
    const double h = nodes[e + 1] - nodes[e];
    const double s1 = (chi1[e + 1] - chi1[e]) / h;
    const double s2 = (chi2[e + 1] - chi2[e]) / h;
    for (std::size_t g = 0; g < kGauss3X.size(); ++g) {
      const double t = kGauss3X[g];
      const double y = nodes[e] + t * h;
      const double v1 = (1.0 - t) * chi1[e] + t * chi1[e + 1];
      const double v2 = (1.0 - t) * chi2[e] + t * chi2[e + 1];
      sum += kGauss3W[g] * h * (data.p(y) * s1 * s2 + data.q(y) * v1 * v2);
    }
  }
  return sum + data.robin_weight * chi1.back() * chi2.back();
}

double weighted_inner(const SturmLiouvilleData& data, std::span<const double> nodes,
                      std::span<const double> chi1, std::span<const double> chi2) {
  check_nodes(data, nodes, chi1, chi2);
  double sum = 0.0;
  for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
    const double h = nodes[e + 1] - nodes[e];
    for (std::size_t g = 0; g < kGauss3X.size(); ++g) {
      const double t = kGauss3X[g];
      const double y = nodes[e] + t * h;
      sum += kGauss3W[g] * h * data.weight(y) * ((1.0 - t) * chi1[e] + t * chi1[e + 1]) *
             ((1.0 - t) * chi2[e] + t * chi2[e + 1]);
    }
  }
  return sum;
}

double quadratic_form(const SturmLiouvilleData& data, const TestFunction& chi1,
                      const TestFunction& chi2, int panels) {
  std::vector<double> kinks = chi1.kinks;
  kinks.insert(kinks.end(), chi2.kinks.begin(), chi2.kinks.end());
  const std::vector<double> edges = panel_edges(data.radius, panels, kinks);
  double sum = 0.0;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double h = edges[e + 1] - edges[e];
    for (std::size_t g = 0; g < kGauss5X.size(); ++g) {
      const double y = edges[e] + kGauss5X[g] * h;
      sum += kGauss5W[g] * h *
             (data.p(y) * chi1.slope(y) * chi2.slope(y) + data.q(y) * chi1.value(y) * chi2.value(y));
    }
  }
  return sum + data.robin_weight * chi1.value(data.radius) * chi2.value(data.radius);
}

double weighted_inner(const SturmLiouvilleData& data, const TestFunction& chi1,
                      const TestFunction& chi2, int panels) {
  std::vector<double> kinks = chi1.kinks;
  kinks.insert(kinks.end(), chi2.kinks.begin(), chi2.kinks.end());
  const std::vector<double> edges = panel_edges(data.radius, panels, kinks);
  double sum = 0.0;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double h = edges[e + 1] - edges[e];
    for (std::size_t g = 0; g < kGauss5X.size(); ++g) {
      const double y = edges[e] + kGauss5X[g] * h;
      sum += kGauss5W[g] * h * data.weight(y) * chi1.value(y) * chi2.value(y);
    }
  }
  return sum;
}

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::vector<double> SymTridiagonal::apply_abs(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::abs(diag[i] * x[i]);
    if (i > 0) v += std::abs(off[i - 1] * x[i - 1]);
    if (i + 1 < n) v += std::abs(off[i] * x[i + 1]);
    y[i] = v;
  }
  return y;
}

double SymTridiagonal::form(std::span<const double> x, std::span<const double> y) const {
  const std::vector<double> ay = apply(y);
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += x[i] * ay[i];
  return s;
}

DiscreteOperator assemble(const SturmLiouvilleData& data, int mesh_size) {
  if (mesh_size < 16)
    throw InvalidArgument(fmt::format("degenerate mesh: M = {} < 16", mesh_size));
  DiscreteOperator op;
  op.nodes = graded_mesh(data.radius, mesh_size);
  const std::size_t n = op.nodes.size();
  op.stiffness.diag.assign(n, 0.0);
  op.stiffness.off.assign(n - 1, 0.0);
  op.mass.diag.assign(n, 0.0);
  op.mass.off.assign(n - 1, 0.0);

  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double h = op.nodes[e + 1] - op.nodes[e];
    if (!(h > 0.0)) throw InvalidArgument("degenerate mesh: repeated node");
    double pk = 0.0, q00 = 0.0, q01 = 0.0, q11 = 0.0, m00 = 0.0, m01 = 0.0, m11 = 0.0;
    for (std::size_t g = 0; g < kGauss3X.size(); ++g) {
      const double t = kGauss3X[g];
      const double y = op.nodes[e] + t * h;
      const double w = kGauss3W[g] * h;
      const double q = data.q(y);
      const double wt = data.weight(y);
      const double a = 1.0 - t;
      pk += w * data.p(y);
      q00 += w * q * a * a;
      q01 += w * q * a * t;
      q11 += w * q * t * t;
      m00 += w * wt * a * a;
      m01 += w * wt * a * t;
      m11 += w * wt * t * t;
    }
    const double stiff = pk / (h * h);
    op.stiffness.diag[e] += stiff + q00;
    op.stiffness.diag[e + 1] += stiff + q11;
    op.stiffness.off[e] += -stiff + q01;
    op.mass.diag[e] += m00;
    op.mass.diag[e + 1] += m11;
    op.mass.off[e] += m01;
  }
  op.stiffness.diag.back() += data.robin_weight;
  return op;
}

}  // namespace lane_emden
