#include "boussinesq/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>

#include "boussinesq/errors.hpp"
#include "boussinesq/invariants.hpp"

namespace boussinesq {

namespace {

double distance_from(const FlowCandidate& c, const Vec& z0, const Vec& x0, double t) {
  return (evaluate_map(c, z0, t) - x0).norm();
}

// Golden section search for the minimum of f on [a, b].
template <class F>
double golden_min(F f, double a, double b, int iterations = 80) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < iterations && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++k) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

// First refined local minimum of the return distance below tol, scanning the
// sampled distances d at times ts.
std::optional<double> detect_return(const FlowCandidate& c, const Vec& z0, const Vec& x0,
                                    const std::vector<double>& ts, const std::vector<double>& d, double tol) {
  auto f = [&](double t) { return distance_from(c, z0, x0, t); };
  double farthest = 0.0;
  const std::size_t n = ts.size();
  for (std::size_t k = 2; k <= n; ++k) {
    farthest = std::max(farthest, d[k - 2]);
    if (farthest <= 10.0 * tol) continue;
    // k == n: the last sample, bracketed from the left only
    const bool last = k == n;
    if (!(d[k - 1] <= d[k - 2] && (last || d[k - 1] <= d[k]))) continue;
    if (d[k - 1] > 0.5 * farthest) continue;
    const double t = golden_min(f, ts[k - 2], ts[last ? k - 1 : k]);
    if (f(t) < tol) return t;
  }
  return std::nullopt;
}

bool close(const Mat& a, const Mat& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

std::vector<Vec> corners(const Box& box) {
  const int n = box.dim();
  std::vector<Vec> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec z(n);
    for (int i = 0; i < n; ++i) z[i] = (mask >> i) & 1 ? box.hi[i] : box.lo[i];
    out.push_back(z);
  }
  out.push_back((box.lo + box.hi) / 2);
  return out;
}

// Matrix G with v(z) = G z, when it exists.
std::optional<Mat> linear_part(const FlowCandidate& c) {
  if (c.m() != c.n) return std::nullopt;
  const auto pts = corners(c.domain_hint);
  const Mat G = c.v->grad(pts.back());
  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  for (const Vec& z : pts) {
    if (!close(c.v->grad(z), G, 1e-12 * scale)) return std::nullopt;
    if (!close(c.v->eval(z), G * z, 1e-12 * scale * std::max(1.0, z.norm()))) return std::nullopt;
  }
  if (std::abs(G.determinant()) < 1e-12) return std::nullopt;
  return G;
}

Mat require_linear(const FlowCandidate& c) {
  const auto G = linear_part(c);
  if (!G) throw Error(ErrorKind::NotLinearMap, c.family_id + ": the map is not linear in the labels");
  return *G;
}

}  // namespace

std::optional<double> first_return(const FlowCandidate& c, const Vec& z0, double t0, double horizon, int scan,
                                   double tol) {
  const Vec x0 = evaluate_map(c, z0, t0);
  std::vector<double> ts, d;
  for (int k = 0; k <= scan; ++k) {
    ts.push_back(t0 + horizon * k / scan);
    d.push_back(distance_from(c, z0, x0, ts.back()));
  }
  const auto t = detect_return(c, z0, x0, ts, d, tol);
  if (!t) return std::nullopt;
  return *t - t0;
}

ParticlePath particle_path(const FlowCandidate& c, const Vec& z0, Window window, int n_samples,
                           const PathOptions& opts) {
  if (n_samples < 2) throw Error(ErrorKind::InvalidParams, "a path needs at least 2 samples");
  if (!(window.lo < window.hi)) throw Error(ErrorKind::InvalidParams, "path window must have lo < hi");
  if (!c.domain_hint.contains(z0)) throw Error(ErrorKind::GridOutsideDomain, "path label outside the domain hint");
  ParticlePath path;
  path.z0 = z0;
  path.requested = window;
  const Window valid = c.A->validity();
  Window w{std::max(window.lo, valid.lo), std::min(window.hi, valid.hi)};
  if (c.blowup_time) w.hi = std::min(w.hi, *c.blowup_time);
  if (w.lo > window.lo || w.hi < window.hi) path.truncated = true;
  if (!(w.lo < w.hi)) return path;
  const double step = w.length() / (n_samples - 1);
  std::vector<double> ts, d;
  for (int k = 0; k < n_samples; ++k) {
    const double t = k + 1 == n_samples ? w.hi : w.lo + step * k;
    path.samples.push_back({t, evaluate_map(c, z0, t)});
  }
  if (!opts.detect_period) return path;
  const Vec& x0 = path.samples.front().x;
  double size = 0.0;
  for (const auto& s : path.samples) {
    ts.push_back(s.t);
    d.push_back((s.x - x0).norm());
    size = std::max(size, d.back());
  }
  const double tol = opts.return_tol * std::max(1.0, size);
  if (const auto t = detect_return(c, z0, x0, ts, d, tol)) {
    path.period = *t - w.lo;
    path.return_gap = distance_from(c, z0, x0, *t);
  }
  return path;
}

EllipseFit fit_ellipse(const std::vector<Eigen::Vector2d>& pts) {
  if (pts.size() < 5) throw Error(ErrorKind::InvalidParams, "ellipse fit needs at least 5 points");
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double scale = 0.0;
  for (const auto& p : pts) scale += (p - mean).squaredNorm();
  scale = std::sqrt(scale / static_cast<double>(pts.size()));
  if (scale == 0.0) throw Error(ErrorKind::InvalidParams, "ellipse fit needs distinct points");
  Mat D(static_cast<Eigen::Index>(pts.size()), 6);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Eigen::Vector2d q = (pts[k] - mean) / scale;
    D.row(static_cast<Eigen::Index>(k)) << q.x() * q.x(), q.x() * q.y(), q.y() * q.y(), q.x(), q.y(), 1.0;
  }
  Eigen::JacobiSVD<Mat> svd(D, Eigen::ComputeFullV);
  const Vec v = svd.matrixV().col(5);
  const double A = v[0], B = v[1], C = v[2], Dx = v[3], Ey = v[4], F = v[5];
  if (!(B * B - 4 * A * C < -1e-10)) throw Error(ErrorKind::InvalidParams, "fitted conic is not an ellipse");
  Eigen::Matrix2d M;
  M << 2 * A, B, B, 2 * C;
  const Eigen::Vector2d ctr = M.partialPivLu().solve(Eigen::Vector2d(-Dx, -Ey));
  const double Fc = A * ctr.x() * ctr.x() + B * ctr.x() * ctr.y() + C * ctr.y() * ctr.y() + Dx * ctr.x() +
                    Ey * ctr.y() + F;
  Eigen::Matrix2d Q;
  Q << A, B / 2, B / 2, C;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(Q);
  const Eigen::Vector2d lam = eig.eigenvalues();
  const double a0 = std::sqrt(-Fc / lam[0]);
  const double a1 = std::sqrt(-Fc / lam[1]);
  if (!std::isfinite(a0) || !std::isfinite(a1)) throw Error(ErrorKind::InvalidParams, "fitted conic is imaginary");
  EllipseFit fit;
  fit.center = mean + scale * ctr;
  const int major = a0 >= a1 ? 0 : 1;
  fit.semi_major = scale * std::max(a0, a1);
  fit.semi_minor = scale * std::min(a0, a1);
  const Eigen::Vector2d dir = eig.eigenvectors().col(major);
  fit.angle = std::atan2(dir.y(), dir.x());
  fit.residual = (D * v).cwiseAbs().maxCoeff();
  return fit;
}

IsopycnalCurve isopycnal_curve(const FlowCandidate& c, double level, double t, const SeedLine& seeds) {
  const int n = c.n;
  if (seeds.start.size() != n || seeds.end.size() != n || seeds.normal.size() != n) {
    throw Error(ErrorKind::InvalidParams, "seed line dimensions do not match the candidate");
  }
  if (seeds.count < 2 || seeds.scan < 1 || !(seeds.reach > 0.0) || seeds.normal.norm() == 0.0) {
    throw Error(ErrorKind::InvalidParams, "seed line needs count >= 2, scan >= 1, reach > 0 and a normal");
  }
  const Vec normal = seeds.normal.normalized();
  IsopycnalCurve curve;
  curve.level = level;
  curve.t = t;
  for (int k = 0; k < seeds.count; ++k) {
    const Vec s = seeds.start + (seeds.end - seeds.start) * (static_cast<double>(k) / (seeds.count - 1));
    auto f = [&](double lam) { return c.rho->eval(s + lam * normal) - level; };
    std::optional<std::pair<double, double>> bracket;
    double best = std::numeric_limits<double>::infinity();
    double prev_l = -seeds.reach, prev_f = f(prev_l);
    for (int j = 1; j <= seeds.scan; ++j) {
      const double l = -seeds.reach + 2.0 * seeds.reach * j / seeds.scan;
      const double fl = f(l);
      if ((prev_f <= 0.0 && fl >= 0.0) || (prev_f >= 0.0 && fl <= 0.0)) {
        const double mid = std::abs(prev_l + l) / 2;
        if (mid < best) {
          best = mid;
          bracket = std::make_pair(prev_l, l);
        }
      }
      prev_l = l;
      prev_f = fl;
    }
    if (!bracket) continue;
    double a = bracket->first, b = bracket->second;
    double fa = f(a);
    while (b - a > 1e-12) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if ((fa < 0.0) == (fm < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    const double root = std::abs(fa) == 0.0 ? a : 0.5 * (a + b);
    const Vec z = s + root * normal;
    if (std::abs(f(root)) > 1e-10) continue;
    curve.labels.push_back(z);
    curve.points.push_back(evaluate_map(c, z, t));
  }
  if (curve.labels.empty()) {
    throw Error(ErrorKind::EmptyCurve, "density level " + std::to_string(level) + " is not reached along the seeds");
  }
  return curve;
}

bool is_linear_map(const FlowCandidate& c) { return linear_part(c).has_value(); }

Vec eulerian_velocity_linear(const FlowCandidate& c, double t, const Vec& x) {
  const Mat G = require_linear(c);
  const Mat M = c.A->eval(t) * G;
  const Mat dM = c.A->deriv(t) * G;
  return dM * M.partialPivLu().solve(x);
}

double eulerian_density_linear(const FlowCandidate& c, double t, const Vec& x) {
  const Mat G = require_linear(c);
  const Mat M = c.A->eval(t) * G;
  return c.rho->eval(M.partialPivLu().solve(x));
}

double free_surface_det(const SpatialFunction& f1, const SpatialFunction& f2, const Vec& z) {
  const double F1 = f1.value(z);
  const double F2 = f2.value(z);
  const Vec g = f1.gradient(z);
  const double g1 = F1 * g[0] - F2 * g[1];
  const double g2 = F1 * g[1] + F2 * g[0];
  return g1 * g1 + g2 * g2;
}

PressureGradient gerstner_pressure_gradient(const FlowCandidate& c, const Vec& z, double t) {
  if (c.family_id != "M4Case1Gerstner") {
    throw Error(ErrorKind::InvalidParams, "pressure gradient needs an M4Case1Gerstner candidate");
  }
  const double c0 = c.params.at("c0").get<double>();
  const double c1 = c.params.at("c1").get<double>();
  const double mu0 = std::sqrt(c0 * c1 / (std::pow(c1, 4) - 1.0));
  const SpatialFunction& f1 = c.v->component(2);
  const SpatialFunction& f2 = c.v->component(3);
  const double F1 = f1.value(z);
  const double F2 = f2.value(z);
  const Vec d = f1.gradient(z);
  const double fx = d[0], fy = d[1];
  const double C = std::cos(mu0 * t), S = std::sin(mu0 * t);
  const double g = c1 * c1 - 1.0 / (c1 * c1);
  const double k = c1 * c1;
  const double z2 = z[1];
  PressureGradient out;
  out.scaled.x() = g * (F1 * fx - F2 * fy) * C * C - g * (F1 * fy + F2 * fx) * C * S + (k * F1 - g * z2 * fy) * C -
                   (g * z2 * fx + k * F2) * S + k * F2 * fy + F1 * fx / k;
  out.scaled.y() = g * (F1 * fy + F2 * fx) * C * C + g * (F1 * fx - F2 * fy) * C * S + (g * z2 * fx + F2 / k) * C +
                   (F1 / k - g * z2 * fy) * S + F1 * fy / k - k * F2 * fx - g * z2;
  out.det_G = free_surface_det(f1, f2, z);
  return out;
}

double mapped_volume(const FlowCandidate& c, const Box& box, double t, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::InvalidParams, "volume estimate needs samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = box.dim();
  double measure = 1.0;
  for (int i = 0; i < n; ++i) measure *= box.hi[i] - box.lo[i];
  double sum = 0.0;
  Vec z(n);
  for (int k = 0; k < samples; ++k) {
    for (int i = 0; i < n; ++i) z[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * u(rng);
    sum += std::abs(map_jacobian(c, z, t).determinant());
  }
  return measure * sum / samples;
}

void write_path_csv(const ParticlePath& path, std::ostream& out) {
  const auto n = path.samples.empty() ? path.z0.size() : path.samples.front().x.size();
  out << "t";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i + 1;
  out << "\n" << std::setprecision(17);
  for (const auto& s : path.samples) {
    out << s.t;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << s.x[i];
    out << "\n";
  }
}

void write_curve_csv(const IsopycnalCurve& curve, std::ostream& out) {
  const auto n = curve.labels.empty() ? 0 : curve.labels.front().size();
  for (Eigen::Index i = 0; i < n; ++i) out << (i ? "," : "") << "z" << i + 1;
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i + 1;
  out << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < curve.labels.size(); ++k) {
    for (Eigen::Index i = 0; i < n; ++i) out << (i ? "," : "") << curve.labels[k][i];
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << curve.points[k][i];
    out << "\n";
  }
}

void write_svg(const std::vector<std::vector<Vec>>& polylines, std::ostream& out) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& line : polylines) {
    for (const Vec& p : line) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
  }
  if (!std::isfinite(x0)) x0 = y0 = 0.0, x1 = y1 = 1.0;
  const double pad = 0.05 * std::max({x1 - x0, y1 - y0, 1e-9});
  out << std::setprecision(10);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 - pad << ' ' << -y1 - pad << ' '
      << x1 - x0 + 2 * pad << ' ' << y1 - y0 + 2 * pad << "\">\n";
  const double width = 0.003 * std::max(x1 - x0, y1 - y0) + 1e-12;
  for (const auto& line : polylines) {
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << width << "\" points=\"";
    for (std::size_t k = 0; k < line.size(); ++k) out << (k ? " " : "") << line[k][0] << ',' << -line[k][1];
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace boussinesq
