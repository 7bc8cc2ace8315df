#include <cmath>
#include <memory>
#include <numbers>

#include "boussinesq/taylor.hpp"
#include "family_support.hpp"

namespace boussinesq {

using namespace detail;

namespace {

using Jet3 = std::array<std::array<Jet, 3>, 3>;

SpatialFunction coord(int axis) { return SpatialFunction::coordinate(axis); }

Jet prime(const Jet& f) { return f.differentiate(); }

SpatialBasis identity_basis() { return SpatialBasis(3, {coord(0), coord(1), coord(2)}, ConstraintClass::Identity); }

Jet3 product(const Jet3& a, const Jet3& b) {
  Jet3 r{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    }
  }
  return r;
}

Jet3 rot_z(const Jet& th) {
  Jet s, c;
  sincos(th, s, c);
  return {{{c, -s, Jet(0.0)}, {s, c, Jet(0.0)}, {Jet(0.0), Jet(0.0), Jet(1.0)}}};
}

Jet3 rot_x(const Jet& ps) {
  Jet s, c;
  sincos(ps, s, c);
  return {{{Jet(1.0), Jet(0.0), Jet(0.0)}, {Jet(0.0), c, -s}, {Jet(0.0), s, c}}};
}

// Clock derivative theta' > 0 on the window.
ScalarSeries clock_rate(const TimeFunction& theta, Window w) {
  ScalarSeries rate = [theta](const Jet& T) { return prime(theta(T)); };
  require_nonvanishing(rate, w, ErrorKind::InvalidClock, "theta'", true);
  return rate;
}

// ------------------------------------------------------------------ m = 3

FlowCandidate qr_vertical_rho(const Json& p) {
  const Window w = window_of(p);
  const TimeFunction b11 = time_fn(p, "b11");
  const TimeFunction b22 = time_fn(p, "b22");
  const TimeFunction theta = time_fn(p, "theta");
  require_nonvanishing(b11.series(), w, ErrorKind::Degenerate, "b11");
  require_nonvanishing(b22.series(), w, ErrorKind::Degenerate, "b22");
  const double c0 = params::number(p, "c0");
  const double c13 = params::number(p, "c13");
  const double c23 = params::number(p, "c23");
  const Running y3 = running([b11, b22](const Jet& T) { return 1.0 / (b11(T) * b22(T)); }, w);
  const Running i12 = running([b11, b22, theta](const Jet& T) { return 2.0 * prime(theta(T)) * b22(T) / b11(T); }, w,
                              params::number(p, "k12"));
  const Running i23 = running([=](const Jet& T) {
    const Jet b = b22(T);
    const Jet b12 = b11(T) * i12(T);
    return (-c13 * b12 / b11(T) + c0 * y3(T) - c23) / (b * b);
  }, w, params::number(p, "k23"));
  const Running i13 = running([=](const Jet& T) {
    const Jet a = b11(T);
    const Jet b23 = b22(T) * i23(T);
    return (2.0 * prime(theta(T)) * a * b23 + c13) / (a * a);
  }, w, params::number(p, "k13"));
  TimeMatrix A(3, 3, TimeSource::QuadratureBacked, [=](double t) {
    const Jet T = Jet::variable(t);
    const Jet a = b11(T);
    const Jet b = b22(T);
    TimeJets j(3, 3);
    j.at(0, 0) = a;
    j.at(0, 1) = a * i12(T);
    j.at(0, 2) = a * i13(T);
    j.at(1, 1) = b;
    j.at(1, 2) = b * i23(T);
    j.at(2, 2) = 1.0 / (a * b);
    rotate_xy(theta(T), j);
    j.y[2] = y3(T);
    return j;
  }, w);
  const SpatialFunction f = profile_field(p, "f", 2);
  const SpatialFunction r = SpatialFunction::combination({{1.0, f}, {c0, coord(1)}});
  SpatialBasis v(3, {coord(0), coord(1), coord(2)}, ConstraintClass::Identity, std::nullopt, {{"f", f}});
  return finish(FamilyId::M3QRShearVerticalRho, std::move(A), std::move(v), DensityField(r, {{"c0", c0}}), p);
}

FlowCandidate qr_linear_rho(const Json& p) {
  const Window w = window_of(p);
  const TimeFunction b11 = time_fn(p, "b11");
  const TimeFunction b22 = time_fn(p, "b22");
  const TimeFunction theta = time_fn(p, "theta");
  const TimeFunction psi = time_fn(p, "psi");
  require_nonvanishing(b11.series(), w, ErrorKind::Degenerate, "b11");
  require_nonvanishing(b22.series(), w, ErrorKind::Degenerate, "b22");
  const double c0 = params::number(p, "c0");
  const double c13 = params::number(p, "c13");
  const double c23 = params::number(p, "c23");
  auto rotation = [theta, psi](const Jet& T) { return product(rot_z(theta(T)), rot_x(psi(T))); };
  // Angular velocity components 2(<R2',R3>, -<R1',R3>, <R1',R2>) over columns.
  auto spin = [rotation](const Jet& T) {
    const Jet3 R = rotation(T);
    auto dot = [&R](int i, int j) {
      Jet s(0.0);
      for (int k = 0; k < 3; ++k) s += prime(R[k][i]) * R[k][j];
      return s;
    };
    return std::array<Jet, 3>{2.0 * dot(1, 2), -2.0 * dot(0, 2), 2.0 * dot(0, 1)};
  };
  const Running i12 = running([=](const Jet& T) { return spin(T)[2] * b22(T) / b11(T); }, w, params::number(p, "k12"));
  // Third row of R B for a given upper triangle (b13, b23).
  auto third_row = [=](const Jet& T, const Jet& b13, const Jet& b23) {
    const Jet3 R = rotation(T);
    const Jet a = b11(T);
    const Jet b = b22(T);
    const Jet b12 = a * i12(T);
    const Jet b33 = 1.0 / (a * b);
    return std::array<Jet, 3>{R[2][0] * a, R[2][0] * b12 + R[2][1] * b, R[2][0] * b13 + R[2][1] * b23 + R[2][2] * b33};
  };
  const Running y1 = running([=](const Jet& T) { return third_row(T, Jet(0.0), Jet(0.0))[0]; }, w);
  const Running y2 = running([=](const Jet& T) { return third_row(T, Jet(0.0), Jet(0.0))[1]; }, w);
  const Running i23 = running([=](const Jet& T) {
    const auto wv = spin(T);
    const Jet a = b11(T);
    const Jet b = b22(T);
    const Jet b12 = a * i12(T);
    return ((wv[0] + b12 * (c0 * y1(T) - c13)) / a - c0 * y2(T) - c23) / (b * b);
  }, w, params::number(p, "k23"));
  const Running i13 = running([=](const Jet& T) {
    const auto wv = spin(T);
    const Jet a = b11(T);
    const Jet b = b22(T);
    return (-wv[1] / b + wv[2] * a * b * i23(T) - c0 * y1(T) + c13) / (a * a);
  }, w, params::number(p, "k13"));
  const Running y3 = running([=](const Jet& T) {
    return third_row(T, b11(T) * i13(T), b22(T) * i23(T))[2];
  }, w);
  TimeMatrix A(3, 3, TimeSource::QuadratureBacked, [=](double t) {
    const Jet T = Jet::variable(t);
    const Jet a = b11(T);
    const Jet b = b22(T);
    const Jet3 B{{{a, a * i12(T), a * i13(T)}, {Jet(0.0), b, b * i23(T)}, {Jet(0.0), Jet(0.0), 1.0 / (a * b)}}};
    const Jet3 M = product(rotation(T), B);
    TimeJets j(3, 3);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) j.at(r, c) = M[r][c];
    }
    j.y = {y1(T), y2(T), y3(T)};
    return j;
  }, w);
  return finish(FamilyId::M3QRShearLinearRho, std::move(A), identity_basis(), DensityField::linear({0.0, 0.0, c0}), p);
}

FlowCandidate m3_columnar(const Json& p) {
  const Window w = window_of(p);
  const TimeFunction b11 = time_fn(p, "b11");
  const TimeFunction b22 = time_fn(p, "b22");
  const TimeFunction theta = time_fn(p, "theta");
  require_nonvanishing(b11.series(), w, ErrorKind::Degenerate, "b11");
  require_nonvanishing(b22.series(), w, ErrorKind::Degenerate, "b22");
  const double c0 = params::number(p, "c0");
  ScalarSeries a = [b11, b22](const Jet& T) { return 1.0 / (b11(T) * b22(T)); };
  auto cols = std::make_shared<const ColumnarColumns>(a, c0, w);
  const Running int_a = running(a, w);
  const Running i12 = running([b11, b22, theta](const Jet& T) { return 2.0 * prime(theta(T)) * b22(T) / b11(T); }, w,
                              params::number(p, "k12"));
  const TimeSource src = cols->closed_form() ? TimeSource::QuadratureBacked : TimeSource::OdeBacked;
  TimeMatrix A(3, 5, src, [=](double t) {
    const Jet T = Jet::variable(t);
    const Jet x = b11(T);
    const auto c = cols->jets(t);
    TimeJets j(3, 5);
    j.at(0, 0) = x;
    j.at(0, 1) = x * i12(T);
    j.at(1, 1) = b22(T);
    j.at(2, 2) = a(T);
    j.at(2, 3) = c[0];
    j.at(2, 4) = c[1];
    rotate_xy(theta(T), j);
    j.y[2] = int_a(T);
    j.y[3] = c[2];
    j.y[4] = c[3];
    return j;
  }, cols->window());
  const SpatialFunction f1 = field(p, "f1");
  const SpatialFunction f2 = field(p, "f2");
  SpatialBasis v(3, {coord(0), coord(1), coord(2), f1, f2}, ConstraintClass::Columnar, std::nullopt,
                 {{"f1", f1}, {"f2", f2}});
  return finish(FamilyId::M3Columnar, std::move(A), std::move(v), DensityField::linear({0.0, 0.0, c0}), p);
}

// ------------------------------------------------------------------ m = 5

DensityField vertical_density(const Json& p) {
  const SpatialFunction r = field(p, "rho");
  return DensityField(r, {{"rho", r.desc()}});
}

FlowCandidate m5_elliptic(FamilyId id, const Json& p) {
  const Window w = window_of(p);
  const TimeFunction theta = time_fn(p, "theta");
  const ScalarSeries rate = clock_rate(theta, w);
  const double k1 = params::number(p, "k1");
  const double k2 = params::number(p, "k2");
  const double t0 = w.lo;
  const bool extended = id == FamilyId::M5EllipticExtended;
  std::shared_ptr<const ColumnarColumns> cols;
  if (extended) cols = std::make_shared<const ColumnarColumns>(rate, params::number(p, "c0"), w);
  const int m = extended ? 7 : 5;
  const TimeSource src = !extended || cols->closed_form() ? TimeSource::ClosedForm : TimeSource::OdeBacked;
  TimeMatrix A(3, m, src, [=](double t) {
    const Jet T = Jet::variable(t);
    const Jet th = theta(T);
    const Jet d = rate(T);
    const Jet s = sqrt(d);
    Jet s1, c1, s2, c2;
    sincos(k1 * th, s1, c1);
    sincos(k2 * th, s2, c2);
    TimeJets j(3, m);
    j.at(0, 0) = c1 / s;
    j.at(0, 1) = -s1 / s;
    j.at(1, 0) = s1 / s;
    j.at(1, 1) = c1 / s;
    j.at(0, 3) = c2 / s;
    j.at(0, 4) = -s2 / s;
    j.at(1, 3) = s2 / s;
    j.at(1, 4) = c2 / s;
    j.at(2, 2) = d;
    j.y[2] = th - theta(Jet(t0)).value();
    if (cols) {
      const auto c = cols->jets(t);
      j.at(2, 5) = c[0];
      j.at(2, 6) = c[1];
      j.y[5] = c[2];
      j.y[6] = c[3];
    }
    return j;
  }, cols ? cols->window() : TimeMatrix::kUnbounded);
  const SpatialFunction f1 = field(p, "f1");
  const SpatialFunction f2 = field(p, "f2");
  std::vector<SpatialFunction> comps{coord(0), coord(1), coord(2), f1, f2};
  std::vector<NamedFunction> named{{"f1", f1}, {"f2", f2}};
  if (extended) {
    const SpatialFunction f3 = field(p, "f3");
    const SpatialFunction f4 = field(p, "f4");
    comps.push_back(f3);
    comps.push_back(f4);
    named.push_back({"f3", f3});
    named.push_back({"f4", f4});
  }
  SpatialBasis v(3, std::move(comps), ConstraintClass::AntiCR3D, std::array<int, 2>{3, 4}, std::move(named));
  DensityField rho = extended ? DensityField::linear({0.0, 0.0, params::number(p, "c0")}) : vertical_density(p);
  return finish(id, std::move(A), std::move(v), std::move(rho), p);
}

FlowCandidate m5_hyperbolic_or_parabolic(FamilyId id, const Json& p) {
  const Window w = window_of(p);
  const TimeFunction theta = time_fn(p, "theta");
  const ScalarSeries rate = clock_rate(theta, w);
  const bool hyperbolic = id == FamilyId::M5Hyperbolic;
  const double t0 = w.lo;
  TimeMatrix A(3, 5, TimeSource::ClosedForm, [=](double t) {
    const Jet T = Jet::variable(t);
    const Jet th = theta(T);
    const Jet d = rate(T);
    const Jet s = sqrt(d);
    TimeJets j(3, 5);
    if (hyperbolic) {
      const Jet e = exp(th);
      const Jet ei = 1.0 / e;
      j.at(0, 0) = e / s;
      j.at(0, 4) = ei / s;
      j.at(1, 1) = ei / s;
      j.at(1, 3) = e / s;
    } else {
      j.at(0, 3) = 1.0 / s;
      j.at(0, 4) = th / s;
      j.at(1, 0) = th / s;
      j.at(1, 1) = 1.0 / s;
    }
    j.at(2, 2) = d;
    rotate_xy(th, j);
    j.y[2] = th - theta(Jet(t0)).value();
    return j;
  });
  const Profile f1 = profile(p, "f1");
  const Profile f2 = profile(p, "f2");
  if (hyperbolic) {
    const SpatialFunction g1 = SpatialFunction::of_profile(f1, 0);
    const SpatialFunction g2 = SpatialFunction::of_profile(f2, 1);
    SpatialBasis v(3, {coord(0), coord(1), coord(2), g1, g2}, ConstraintClass::Separated3D, std::nullopt,
                   {{"f1", g1}, {"f2", g2}});
    return finish(id, std::move(A), std::move(v), vertical_density(p), p);
  }
  const SpatialFunction v4({{"name", "parabolic"}, {"f1", f1.desc()}, {"f2", f2.desc()}},
                           [f1, f2](std::span<const Jet> z) { return f1(z[0], 0) + z[1] * f2(z[0], 1); });
  const SpatialFunction v5 = SpatialFunction::of_profile(f2, 0);
  SpatialBasis v(3, {coord(0), coord(1), coord(2), v4, v5}, ConstraintClass::Parabolic3D, std::nullopt,
                 {{"f1", SpatialFunction::of_profile(f1, 0)}, {"f2", v5}});
  return finish(id, std::move(A), std::move(v), vertical_density(p), p);
}

// ------------------------------------------------------------------ m = 6

SpatialBasis mixed_basis(const Json& p) {
  const SpatialFunction f1 = profile_field(p, "f1", 2);
  const SpatialFunction f2 = field(p, "f2");
  const SpatialFunction f3 = field(p, "f3");
  return SpatialBasis(3, {coord(0), coord(1), coord(2), f1, f2, f3}, ConstraintClass::Mixed3D, std::array<int, 2>{4, 5},
                      {{"f1", f1}, {"f2", f2}, {"f3", f3}});
}

DensityField mixed_density(const Json& p, double c5, double c6) {
  const SpatialFunction r = SpatialFunction::combination({{c5, field(p, "f2")}, {c6, field(p, "f3")}});
  return DensityField(r, {{"c5", c5}, {"c6", c6}});
}

// State (mu, theta).
struct M6Case1Rhs {
  double k2, c5, c6, c56, c12, c13, c23;
  template <class S>
  S rate(const S& mu) const {
    using std::cbrt;
    using std::cos;
    using std::sin;
    return cbrt((k2 * c5 * cos(mu) - k2 * c6 * sin(mu) + c56) / (k2 * k2));
  }
  template <class S>
  S b11_squared(const S& mu) const {
    using std::cos;
    using std::sin;
    return (c23 * cos(mu) + c13 * sin(mu) - c12) / rate(mu);
  }
  template <class S, class T>
  void operator()(const T&, std::span<const S> y, std::span<S> dy) const {
    dy[0] = rate(y[0]);
    dy[1] = -1.0 / (2.0 * k2 * b11_squared(y[0]));
  }
};

FlowCandidate m6_case1(const Json& p) {
  const Window w = window_of(p);
  M6Case1Rhs rhs{0.0,
                 params::number(p, "c5"),
                 params::number(p, "c6"),
                 params::number(p, "c56"),
                 params::number(p, "c12"),
                 params::number(p, "c13"),
                 params::number(p, "c23")};
  const double disc = rhs.c12 * rhs.c12 - rhs.c13 * rhs.c13 - rhs.c23 * rhs.c23;
  if (!(disc > 0.0)) throw Error(ErrorKind::InvalidParams, "M6Case1: need c12^2 > c13^2 + c23^2");
  rhs.k2 = 1.0 / std::sqrt(disc);
  if (!(std::abs(rhs.c56) > rhs.k2 * std::hypot(rhs.c5, rhs.c6))) {
    throw Error(ErrorKind::LostRegularity, "M6Case1: |c56| <= k2 |(c5, c6)| lets mu' reach zero");
  }
  const double mu0 = params::number(p, "mu0");
  // b11^2 depends on mu only, so checking one full turn of mu covers every time.
  for (int k = 0; k <= 720; ++k) {
    const double mu = mu0 + 2.0 * std::numbers::pi * k / 720.0;
    if (!(rhs.b11_squared(mu) > 0.0)) {
      throw Error(ErrorKind::ComplexBranch, "M6Case1: b11^2 <= 0 at mu=" + std::to_string(mu));
    }
  }
  const std::array<double, 2> y0{mu0, params::number(p, "theta0")};
  auto sol = std::make_shared<const DenseSolution>(integrate_ivp(
      [rhs](double t, std::span<const double> y, std::span<double> dy) { rhs(t, y, dy); }, y0, w, OdeTolerance::of(1e-12, 1e-13)));
  const double k2 = rhs.k2;
  TimeMatrix A(3, 6, TimeSource::OdeBacked, [sol, rhs, k2](double t) {
    const auto y = taylor_state(rhs, t, sol->state(t));
    const Jet& mu = y[0];
    const Jet md = rhs.rate(mu);
    Jet l2, l1;
    sincos(mu, l2, l1);
    const Jet b11 = sqrt(rhs.b11_squared(mu));
    const Jet b22 = 1.0 / (k2 * md * b11);
    const Jet b12 = k2 * (rhs.c23 * l2 - rhs.c13 * l1) * b22;
    const Jet b35 = -k2 * md;
    TimeJets j(3, 6);
    j.at(0, 0) = b11;
    j.at(0, 1) = b12;
    j.at(0, 2) = l1 * b11 + l2 * b12;
    j.at(0, 3) = -l2 * b11 + l1 * b12;
    j.at(1, 1) = b22;
    j.at(1, 2) = l2 * b22;
    j.at(1, 3) = l1 * b22;
    j.at(2, 4) = l1 * b35;
    j.at(2, 5) = -l2 * b35;
    rotate_xy(y[1], j);
    j.y[4] = -k2 * l2;
    j.y[5] = -k2 * l1;
    return j;
  }, sol->window());
  return finish(FamilyId::M6Case1, std::move(A), mixed_basis(p), mixed_density(p, rhs.c5, rhs.c6), p);
}

struct M6ExampleRhs {
  double c5, c6, c56;
  template <class S>
  S rate(const S& th) const {
    using std::cbrt;
    using std::cos;
    using std::sin;
    return cbrt(-(c5 * cos(2.0 * th) + c6 * sin(2.0 * th) + c56) / 8.0);
  }
  template <class S, class T>
  void operator()(const T&, std::span<const S> y, std::span<S> dy) const {
    dy[0] = rate(y[0]);
  }
};

FlowCandidate m6_case1_example(const Json& p) {
  const Window w = window_of(p);
  const M6ExampleRhs rhs{params::number(p, "c5"), params::number(p, "c6"), params::number(p, "c56")};
  if (!(std::abs(rhs.c56) > std::hypot(rhs.c5, rhs.c6))) {
    throw Error(ErrorKind::LostRegularity, "M6Case1Example: |c56| <= |(c5, c6)| lets theta' reach zero");
  }
  const std::array<double, 1> y0{params::number(p, "theta0")};
  auto sol = std::make_shared<const DenseSolution>(integrate_ivp(
      [rhs](double t, std::span<const double> y, std::span<double> dy) { rhs(t, y, dy); }, y0, w, OdeTolerance::of(1e-12, 1e-13)));
  TimeMatrix A(3, 6, TimeSource::OdeBacked, [sol, rhs](double t) {
    const auto y = taylor_state(rhs, t, sol->state(t));
    const Jet& th = y[0];
    const Jet d = rhs.rate(th);
    const Jet sigma = 1.0 / sqrt(abs(d));
    Jet S, C, S2, C2;
    sincos(th, S, C);
    sincos(2.0 * th, S2, C2);
    TimeJets j(3, 6);
    j.at(0, 0) = C * sigma;
    j.at(0, 1) = -S * sigma;
    j.at(0, 2) = C * sigma;
    j.at(0, 3) = S * sigma;
    j.at(1, 0) = S * sigma;
    j.at(1, 1) = C * sigma;
    j.at(1, 2) = -S * sigma;
    j.at(1, 3) = C * sigma;
    j.at(2, 4) = 2.0 * d * C2;
    j.at(2, 5) = 2.0 * d * S2;
    j.y[4] = S2;
    j.y[5] = -C2;
    return j;
  }, sol->window());
  return finish(FamilyId::M6Case1Example, std::move(A), mixed_basis(p), mixed_density(p, rhs.c5, rhs.c6), p);
}

double sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Shared assembly of the m=6 case 2 system from l3 and a3.
FlowCandidate m6_case2(FamilyId id, const Json& p, const ScalarSeries& l3, const ScalarSeries& a3, double c1,
                       TimeSource src) {
  const Window w = window_of(p);
  const double c2 = params::number(p, "c2");
  const double c16 = params::number(p, "c16");
  const double c24 = params::number(p, "c24");
  const double k1 = params::number(p, "k1");
  require_nonvanishing(l3, w, ErrorKind::QuadratureBreakdown, "l3");
  ScalarSeries delta = [l3, a3, c16, c24](const Jet& T) {
    const Jet l = l3(T);
    const Jet d = prime(l);
    const Jet a = a3(T);
    return d * d - 4.0 * c16 * c24 * l * l * l * a * a;
  };
  for (double t : scan_times(w)) {
    if (!(delta(Jet::variable(t)).value() >= 0.0)) {
      throw Error(ErrorKind::ComplexBranch, "discriminant is negative at t=" + std::to_string(t));
    }
  }
  const double sg = -sign(c16);
  const Running log_growth = running([l3, delta, sg](const Jet& T) { return sg * sqrt(delta(T)) / (2.0 * l3(T)); }, w);
  ScalarSeries l1 = [l3, log_growth, k1](const Jet& T) { return k1 / sqrt(abs(l3(T))) * exp(log_growth(T)); };
  ScalarSeries l2 = [l1, l3](const Jet& T) { return 1.0 / (l1(T) * l3(T)); };
  ScalarSeries a1 = [l1, c16](const Jet& T) { return sqrt(-c16 / prime(l1(T))); };
  ScalarSeries a2 = [l2, a3, c24](const Jet& T) { return sign(a3(T).value()) * sqrt(-c24 / prime(l2(T))); };
  for (double t : scan_times(w)) {
    const Jet T = Jet::variable(t);
    const double r1 = -c16 / l1(T).derivative(1);
    const double r2 = -c24 / l2(T).derivative(1);
    if (!(r1 > 0.0) || !(r2 > 0.0)) {
      throw Error(ErrorKind::ComplexBranch, "a1 or a2 is not real at t=" + std::to_string(t));
    }
  }
  const Running y3 = running(a3, w);
  const Running y5 = running([l3, a3](const Jet& T) { return l3(T) * a3(T); }, w);
  TimeMatrix A(3, 6, src, [=](double t) {
    const Jet T = Jet::variable(t);
    const Jet x1 = a1(T);
    const Jet x2 = a2(T);
    const Jet x3 = a3(T);
    TimeJets j(3, 6);
    j.at(0, 0) = x1;
    j.at(0, 5) = l1(T) * x1;
    j.at(1, 1) = x2;
    j.at(1, 3) = l2(T) * x2;
    j.at(2, 2) = x3;
    j.at(2, 4) = l3(T) * x3;
    j.y[2] = y3(T);
    j.y[4] = y5(T);
    return j;
  }, w);
  const SpatialFunction f1 = profile_field(p, "f1", 0);
  const SpatialFunction f2 = profile_field(p, "f2", 1);
  const SpatialFunction f3 = profile_field(p, "f3", 2);
  SpatialBasis v(3, {coord(0), coord(1), coord(2), f1, f2, f3}, ConstraintClass::Separated3D, std::nullopt,
                 {{"f1", f1}, {"f2", f2}, {"f3", f3}});
  const SpatialFunction r = SpatialFunction::combination({{c1, coord(2)}, {c2, f2}});
  return finish(id, std::move(A), std::move(v), DensityField(r, {{"c1", c1}, {"c2", c2}}), p);
}

FlowCandidate m6_case2_quadrature(const Json& p) {
  const Window w = window_of(p);
  const TimeFunction l3 = time_fn(p, "l3");
  const double c1 = params::number(p, "c1");
  const double c2 = params::number(p, "c2");
  ScalarSeries rate = [l3](const Jet& T) { return prime(l3(T)); };
  require_nonvanishing(rate, w, ErrorKind::QuadratureBreakdown, "l3'");
  const double sg = sign(rate(Jet::variable(w.lo)).value());
  const Running u = running([l3, rate, sg, c1, c2](const Jet& T) {
    return sg * (c1 * l3(T) - c2) / (2.0 * sqrt(abs(rate(T))));
  }, w);
  const double k0 = params::number(p, "k0");
  ScalarSeries a3 = [u, rate, k0](const Jet& T) { return (k0 + u(T)) / sqrt(abs(rate(T))); };
  require_nonvanishing(a3, w, ErrorKind::Degenerate, "a3");
  return m6_case2(FamilyId::M6Case2Quadrature, p, l3.series(), a3, c1, TimeSource::QuadratureBacked);
}

FlowCandidate m6_case2_explicit(const Json& p) {
  const double N = params::number(p, "N");
  const double c2 = params::number(p, "c2");
  const double k2 = params::number(p, "k2");
  const double k3 = params::number(p, "k3");
  if (N == 0.0) throw Error(ErrorKind::InvalidParams, "M6Case2Explicit: N must be nonzero");
  const double mean = -c2 / (N * N);
  if (!(mean - std::hypot(k2, k3) > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "M6Case2Explicit: l3 = -c2/N^2 + k2 cos Nt + k3 sin Nt is not always positive");
  }
  if (!(params::number(p, "c16") * params::number(p, "c24") < 0.0)) {
    throw Error(ErrorKind::InvalidParams, "M6Case2Explicit: need c16 c24 < 0");
  }
  ScalarSeries l3 = [N, mean, k2, k3](const Jet& T) {
    Jet s, c;
    sincos(N * T, s, c);
    return mean + k2 * c + k3 * s;
  };
  ScalarSeries a3 = [](const Jet&) { return Jet(1.0); };
  return m6_case2(FamilyId::M6Case2Explicit, p, l3, a3, -N * N, TimeSource::QuadratureBacked);
}

}  // namespace

FlowCandidate build_3d_m3(FamilyId id, const Json& p) {
  switch (id) {
    case FamilyId::M3QRShearLinearRho:
      return qr_linear_rho(p);
    case FamilyId::M3QRShearVerticalRho:
      return qr_vertical_rho(p);
    case FamilyId::M3Columnar:
      return m3_columnar(p);
    default:
      throw Error(ErrorKind::InvalidParams, "not an m=3 family");
  }
}

FlowCandidate build_3d_m5(FamilyId id, const Json& p) {
  switch (id) {
    case FamilyId::M5Elliptic:
    case FamilyId::M5EllipticExtended:
      return m5_elliptic(id, p);
    case FamilyId::M5Hyperbolic:
    case FamilyId::M5Parabolic:
      return m5_hyperbolic_or_parabolic(id, p);
    default:
      throw Error(ErrorKind::InvalidParams, "not an m=5 family");
  }
}

FlowCandidate build_3d_m6(FamilyId id, const Json& p) {
  switch (id) {
    case FamilyId::M6Case1:
      return m6_case1(p);
    case FamilyId::M6Case1Example:
      return m6_case1_example(p);
    case FamilyId::M6Case2Quadrature:
      return m6_case2_quadrature(p);
    case FamilyId::M6Case2Explicit:
      return m6_case2_explicit(p);
    default:
      throw Error(ErrorKind::InvalidParams, "not an m=6 family");
  }
}

}  // namespace boussinesq
