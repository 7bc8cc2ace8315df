#pragma once

// Physical outputs of a candidate: particle paths, isopycnal curves,
// Eulerian fields of linear maps, the Gerstner pressure gradient and
// transported volumes. Paths are evaluations of the map, never
// re-integrations of a velocity field.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "boussinesq/candidate.hpp"

namespace boussinesq {

struct PathSample {
  double t = 0.0;
  Vec x;
};

struct ParticlePath {
  Vec z0;
  std::vector<PathSample> samples;
  /// First-return time, when the path closes.
  std::optional<double> period;
  /// Distance between x(t0) and x(t0 + period).
  double return_gap = 0.0;
  /// Set when the requested window reached past the candidate's validity.
  bool truncated = false;
  Window requested;
};

struct PathOptions {
  /// Tolerance for the first-return distance, scaled by max(1, path size).
  double return_tol = 1e-4;
  bool detect_period = true;
};

/// Uniform samples of x = phi(z0, t) over the window (n >= 2 samples).
/// Throws GridOutsideDomain if z0 lies outside the domain hint.
ParticlePath particle_path(const FlowCandidate& c, const Vec& z0, Window window, int n_samples,
                           const PathOptions& opts = {});

/// Smallest t in (t0, t0 + horizon] where |phi(z0, t) - phi(z0, t0)| has a
/// local minimum below tol, refined by golden section search.
std::optional<double> first_return(const FlowCandidate& c, const Vec& z0, double t0, double horizon, int scan,
                                   double tol);

/// Conic fitted by algebraic least squares to planar points.
struct EllipseFit {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double semi_major = 0.0;
  double semi_minor = 0.0;
  /// Angle of the major axis from the x1 axis.
  double angle = 0.0;
  /// Max |algebraic residual| of the normalized conic over the points.
  double residual = 0.0;
};

/// Throws InvalidParams if fewer than 5 points or the conic is not an
/// ellipse.
EllipseFit fit_ellipse(const std::vector<Eigen::Vector2d>& pts);

/// Seeds along the segment [start, end]; roots of rho = level are searched
/// on each seed's normal line seed + s * normal, |s| <= reach.
struct SeedLine {
  Vec start;
  Vec end;
  int count = 64;
  Vec normal;
  double reach = 1.0;
  /// Sign changes are bracketed on this many sub-intervals of the normal.
  int scan = 64;
};

struct IsopycnalCurve {
  double level = 0.0;
  double t = 0.0;
  std::vector<Vec> labels;
  std::vector<Vec> points;
};

/// Bisection to 1e-12 on each normal; throws EmptyCurve when no seed has a
/// root.
IsopycnalCurve isopycnal_curve(const FlowCandidate& c, double level, double t, const SeedLine& seeds);

/// u = A' A^{-1} x for maps linear in z; throws NotLinearMap otherwise.
Vec eulerian_velocity_linear(const FlowCandidate& c, double t, const Vec& x);
/// rho at the label that sits at x at time t, for maps linear in z.
double eulerian_density_linear(const FlowCandidate& c, double t, const Vec& x);
/// Whether v(z) = G z with constant invertible G on the domain hint.
bool is_linear_map(const FlowCandidate& c);

struct PressureGradient {
  /// (p_10, p_01) divided by mean density times mu0^2.
  Eigen::Vector2d scaled;
  /// g1^2 + g2^2 with g1 = f1 f1_10 - f2 f1_01, g2 = f1 f1_01 + f2 f1_10.
  double det_G = 0.0;
};

/// Printed pressure derivatives of the stretched Gerstner wave; the
/// candidate must be M4Case1Gerstner.
PressureGradient gerstner_pressure_gradient(const FlowCandidate& c, const Vec& z, double t);
/// det(G) of a pair (f1, f2) at z.
double free_surface_det(const SpatialFunction& f1, const SpatialFunction& f2, const Vec& z);

/// Monte-Carlo estimate of the volume of phi^t(box): |box| times the mean
/// of |det d phi| over uniform labels drawn with the given seed.
double mapped_volume(const FlowCandidate& c, const Box& box, double t, int samples, std::uint64_t seed);

/// Header t,x1,..,xn; 17 significant digits.
void write_path_csv(const ParticlePath& path, std::ostream& out);
/// Header z1,..,zn,x1,..,xn.
void write_curve_csv(const IsopycnalCurve& curve, std::ostream& out);
/// One unstyled polyline per entry, first two coordinates, fitted viewBox.
void write_svg(const std::vector<std::vector<Vec>>& polylines, std::ostream& out);

}  // namespace boussinesq
