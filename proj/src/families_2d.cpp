#include <cmath>
#include <memory>

#include "boussinesq/taylor.hpp"
#include "family_support.hpp"

namespace boussinesq {

using namespace detail;

namespace {

SpatialFunction coord(int axis) { return SpatialFunction::coordinate(axis); }

DensityField density(SpatialFunction f, Json coeffs) { return DensityField(std::move(f), std::move(coeffs)); }

Jet prime(const Jet& f) { return f.differentiate(); }

}  // namespace

FlowCandidate build_columnar(FamilyId id, const Json& p) {
  const Window w = window_of(p);
  const TimeFunction a = time_fn(p, "a");
  const double c0 = params::number(p, "c0");
  auto cols = std::make_shared<const ColumnarColumns>(a.series(), c0, w);
  const auto a_const = a.constant_value();
  ScalarSeries int_a;
  if (a_const) {
    const double k = *a_const;
    int_a = [k, t0 = w.lo](const Jet& T) { return k * (T - t0); };
  } else {
    int_a = running(a.series(), w);
  }
  TimeSource src = TimeSource::QuadratureBacked;
  if (!cols->closed_form()) {
    src = TimeSource::OdeBacked;
  } else if (a_const) {
    src = TimeSource::ClosedForm;
  }
  const Window valid = cols->window();
  const DensityField rho = DensityField::linear(id == FamilyId::Columnar2D ? std::vector<double>{0.0, c0}
                                                                          : std::vector<double>{0.0, 0.0, c0});

  if (id == FamilyId::Columnar2D) {
    TimeMatrix A(2, 4, src, [a, cols, int_a](double t) {
      const Jet T = Jet::variable(t);
      const Jet av = a(T);
      const auto c = cols->jets(t);
      TimeJets j(2, 4);
      j.at(0, 0) = 1.0 / av;
      j.at(1, 1) = av;
      j.at(1, 2) = c[0];
      j.at(1, 3) = c[1];
      j.y[1] = int_a(T);
      j.y[2] = c[2];
      j.y[3] = c[3];
      return j;
    }, valid);
    const SpatialFunction f1 = profile_field(p, "f1", 0);
    const SpatialFunction f2 = profile_field(p, "f2", 0);
    SpatialBasis v(2, {coord(0), coord(1), f1, f2}, ConstraintClass::Columnar, std::nullopt, {{"f1", f1}, {"f2", f2}});
    return finish(id, std::move(A), std::move(v), rho, p);
  }

  const std::string base = params::text(p, "base", "strain");
  const SpatialFunction f1 = field(p, "f1");
  const SpatialFunction f2 = field(p, "f2");
  if (base == "strain") {
    TimeMatrix A(3, 5, src, [a, cols, int_a](double t) {
      const Jet T = Jet::variable(t);
      const Jet av = a(T);
      const auto c = cols->jets(t);
      TimeJets j(3, 5);
      j.at(0, 0) = 1.0 / av;
      j.at(1, 1) = Jet(1.0);
      j.at(2, 2) = av;
      j.at(2, 3) = c[0];
      j.at(2, 4) = c[1];
      j.y[2] = int_a(T);
      j.y[3] = c[2];
      j.y[4] = c[3];
      return j;
    }, valid);
    SpatialBasis v(3, {coord(0), coord(1), coord(2), f1, f2}, ConstraintClass::Columnar, std::nullopt,
                   {{"f1", f1}, {"f2", f2}});
    return finish(id, std::move(A), std::move(v), rho, p);
  }
  if (base != "gerstner") throw Error(ErrorKind::InvalidParams, "Columnar3DExt: base must be 'strain' or 'gerstner'");
  if (!a_const) throw Error(ErrorKind::InvalidParams, "Columnar3DExt: the Gerstner base needs a constant stretch a");
  const double mu = params::number(p, "mu");
  const SpatialFunction g1 = field(p, "g1");
  const SpatialFunction g2 = field(p, "g2");
  TimeMatrix A(3, 7, src, [a, cols, int_a, mu](double t) {
    const Jet T = Jet::variable(t);
    const auto c = cols->jets(t);
    Jet s, co;
    sincos(mu * T, s, co);
    TimeJets j(3, 7);
    j.at(0, 0) = Jet(1.0);
    j.at(1, 1) = Jet(1.0);
    j.at(0, 3) = co;
    j.at(0, 4) = -s;
    j.at(1, 3) = s;
    j.at(1, 4) = co;
    j.at(2, 2) = a(T);
    j.at(2, 5) = c[0];
    j.at(2, 6) = c[1];
    j.y[2] = int_a(T);
    j.y[5] = c[2];
    j.y[6] = c[3];
    return j;
  }, valid);
  SpatialBasis v(3, {coord(0), coord(1), coord(2), g1, g2, f1, f2}, ConstraintClass::AntiCR3D,
                 std::array<int, 2>{3, 4}, {{"g1", g1}, {"g2", g2}, {"f1", f1}, {"f2", f2}});
  return finish(id, std::move(A), std::move(v), rho, p);
}

FlowCandidate build_2d_m2(FamilyId id, const Json& p) {
  const Window w = window_of(p);
  const double c0 = params::number(p, "c0");
  const double c = params::number(p, "c");
  SpatialBasis v(2, {coord(0), coord(1)}, ConstraintClass::Identity);

  if (id == FamilyId::M2Triangular) {
    const TimeFunction a22 = time_fn(p, "a22");
    require_nonvanishing(a22.series(), w, ErrorKind::Degenerate, "a22");
    const Running y2 = running(a22.series(), w);
    const Running F = running([a22, y2, c0, c](const Jet& T) {
      const Jet a = a22(T);
      return (c0 * y2(T) - c) * a * a;
    }, w, params::number(p, "k12"));
    TimeMatrix A(2, 2, TimeSource::QuadratureBacked, [a22, y2, F](double t) {
      const Jet T = Jet::variable(t);
      const Jet a = a22(T);
      TimeJets j(2, 2);
      j.at(0, 0) = 1.0 / a;
      j.at(0, 1) = F(T) / a;
      j.at(1, 1) = a;
      j.y[1] = y2(T);
      return j;
    }, w);
    const SpatialFunction f = profile_field(p, "f", 1);
    const SpatialFunction r = SpatialFunction::combination({{c0, coord(0)}, {1.0, f}});
    SpatialBasis vt(2, {coord(0), coord(1)}, ConstraintClass::Identity, std::nullopt, {{"f", f}});
    return finish(id, std::move(A), std::move(vt), density(r, {{"c0", c0}}), p);
  }

  const TimeFunction b = time_fn(p, "b");
  const TimeFunction theta = time_fn(p, "theta");
  require_nonvanishing(b.series(), w, ErrorKind::Degenerate, "b", true);
  const Running y1 = running([b, theta](const Jet& T) { return b(T) * sin(theta(T)); }, w);
  const Running ell = running([b, theta, y1, c0, c](const Jet& T) {
    const Jet bv = b(T);
    return (2.0 * prime(theta(T)) - c - c0 * y1(T)) / (bv * bv);
  }, w, params::number(p, "k_ell"));
  const Running y2 = running([b, theta, ell](const Jet& T) {
    Jet s, co;
    sincos(theta(T), s, co);
    const Jet bv = b(T);
    return s * ell(T) * bv + co / bv;
  }, w);
  TimeMatrix A(2, 2, TimeSource::QuadratureBacked, [b, theta, y1, ell, y2](double t) {
    const Jet T = Jet::variable(t);
    const Jet bv = b(T);
    TimeJets j(2, 2);
    j.at(0, 0) = bv;
    j.at(0, 1) = ell(T) * bv;
    j.at(1, 1) = 1.0 / bv;
    rotate_xy(theta(T), j);
    j.y[0] = y1(T);
    j.y[1] = y2(T);
    return j;
  }, w);
  return finish(id, std::move(A), std::move(v), DensityField::linear({0.0, c0}), p);
}

namespace {

// (b11, b12, s, theta0, theta, mu, y1..y4); mu' = s and y' is the second row
// of R(theta) B.
struct Case1Augmented {
  double c0;
  template <class S, class T>
  void operator()(const T&, std::span<const S> y, std::span<S> dy) const {
    using std::cos;
    using std::sin;
    case1_general_rhs<S>(c0, y.first(5), dy.first(5));
    dy[5] = y[2];
    const S b11 = y[0];
    const S b12 = y[1];
    const S cm = cos(y[5]);
    const S sm = sin(y[5]);
    const S st = sin(y[4]);
    const S ct = cos(y[4]);
    dy[6] = st * b11;
    dy[7] = st * b12 + ct / b11;
    dy[8] = st * (cm * b11 + sm * b12) + ct * sm / b11;
    dy[9] = st * (cm * b12 - sm * b11) + ct * cm / b11;
  }
};

FlowCandidate case1_general(const Json& p) {
  const Window w = window_of(p);
  const double c0 = params::number(p, "c0");
  const auto s0 = case1_general_initial(p);
  const std::array<double, 10> y0{s0[0], s0[1], s0[2], s0[3], s0[4], params::number(p, "mu"), 0, 0, 0, 0};
  const Case1Augmented rhs{c0};
  const std::vector<EventRule> events = {{EventKind::BlowUp, 0, 1e-6}, {EventKind::BlowUp, 2, 1e-6}};
  auto sol = std::make_shared<const DenseSolution>(integrate_ivp(
      [rhs](double t, std::span<const double> y, std::span<double> dy) { rhs(t, y, dy); }, y0, w, OdeTolerance::of(1e-11, 1e-12),
      events));
  TimeMatrix A(2, 4, TimeSource::OdeBacked, [sol, rhs](double t) {
    const auto y = taylor_state(rhs, t, sol->state(t));
    const Jet& b11 = y[0];
    const Jet& b12 = y[1];
    Jet sm, cm;
    sincos(y[5], sm, cm);
    TimeJets j(2, 4);
    j.at(0, 0) = b11;
    j.at(0, 1) = b12;
    j.at(0, 2) = cm * b11 + sm * b12;
    j.at(0, 3) = cm * b12 - sm * b11;
    j.at(1, 1) = 1.0 / b11;
    j.at(1, 2) = sm / b11;
    j.at(1, 3) = cm / b11;
    rotate_xy(y[4], j);
    for (int i = 0; i < 4; ++i) j.y[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(6 + i)];
    return j;
  }, sol->window());
  const SpatialFunction f1 = field(p, "f1");
  const SpatialFunction f2 = field(p, "f2");
  SpatialBasis v(2, {coord(0), coord(1), f1, f2}, ConstraintClass::AntiCR2D, std::array<int, 2>{2, 3},
                 {{"f1", f1}, {"f2", f2}});
  FlowCandidate out = finish(FamilyId::M4Case1General, std::move(A), std::move(v), DensityField::linear({0.0, c0}), p);
  out.blowup_time = sol->blowup_time();
  return out;
}

FlowCandidate case1_gerstner(const Json& p) {
  const double c0 = params::number(p, "c0");
  const double c1 = params::number(p, "c1");
  if (!(c1 > 0.0) || c1 == 1.0) throw Error(ErrorKind::InvalidStratification, "M4Case1Gerstner: need c1 > 0, c1 != 1");
  const double mu2 = gerstner_mu0_squared(c0, c1);
  if (!(mu2 > 0.0)) {
    throw Error(ErrorKind::InvalidStratification, "M4Case1Gerstner: sign(c0) must equal sign(c1^4 - 1)");
  }
  const double mu0 = params::has(p, "mu0") ? params::number(p, "mu0") : std::sqrt(mu2);
  const double mu = mu0 * params::number(p, "mu0_scale");
  if (mu == 0.0) throw Error(ErrorKind::InvalidParams, "M4Case1Gerstner: rotation rate must be nonzero");
  TimeMatrix A(2, 4, TimeSource::ClosedForm, [c1, mu](double t) {
    const Jet T = Jet::variable(t);
    Jet s, c;
    sincos(mu * T, s, c);
    TimeJets j(2, 4);
    j.at(0, 0) = Jet(c1);
    j.at(0, 2) = c1 * c;
    j.at(0, 3) = -c1 * s;
    j.at(1, 1) = Jet(1.0 / c1);
    j.at(1, 2) = s / c1;
    j.at(1, 3) = c / c1;
    j.y[1] = T / c1;
    j.y[2] = -c / (mu * c1);
    j.y[3] = s / (mu * c1);
    return j;
  });
  const SpatialFunction f1 = field(p, "f1");
  const SpatialFunction f2 = field(p, "f2");
  SpatialBasis v(2, {coord(0), coord(1), f1, f2}, ConstraintClass::AntiCR2D, std::array<int, 2>{2, 3},
                 {{"f1", f1}, {"f2", f2}});
  FlowCandidate out = finish(FamilyId::M4Case1Gerstner, std::move(A), std::move(v), DensityField::linear({0.0, c0}), p);
  out.params["mu0_effective"] = mu;
  return out;
}

Window away_from_zero(Window w, const char* family) {
  if (w.lo <= 0.0 && w.hi >= 0.0) {
    throw Error(ErrorKind::SingularWindow, std::string(family) + ": t_window must not contain t = 0");
  }
  return w.lo > 0.0 ? Window{0.0, TimeMatrix::kUnbounded.hi} : Window{TimeMatrix::kUnbounded.lo, 0.0};
}

FlowCandidate case2_explicit(const Json& p) {
  const Window valid = away_from_zero(window_of(p), "M4Case2Explicit");
  const double c0 = params::number(p, "c0");
  if (c0 == 0.0) throw Error(ErrorKind::InvalidParams, "M4Case2Explicit: c0 must be nonzero");
  TimeMatrix A(2, 4, TimeSource::ClosedForm, [c0](double t) {
    const Jet T = Jet::variable(t);
    const Jet t2 = T * T;
    const Jet t3 = t2 * T;
    const double p1 = 10.0 / c0;
    const double p2 = c0 / 10.0;
    TimeJets j(2, 4);
    j.at(0, 0) = p1 / t2;
    j.at(0, 3) = p1 * t3;
    j.at(1, 1) = p2 * t2;
    j.at(1, 2) = p2 / t3;
    j.y[1] = p2 * t3 / 3.0;
    j.y[2] = -p2 / (2.0 * t2);
    return j;
  }, valid);
  const SpatialFunction f1 = profile_field(p, "f1", 0);
  const SpatialFunction f2 = profile_field(p, "f2", 1);
  SpatialBasis v(2, {coord(0), coord(1), f1, f2}, ConstraintClass::Separated2D, std::nullopt, {{"f1", f1}, {"f2", f2}});
  return finish(FamilyId::M4Case2Explicit, std::move(A), std::move(v), DensityField::linear({0.0, c0}), p);
}

FlowCandidate case3_explicit(const Json& p) {
  const Window valid = away_from_zero(window_of(p), "M4Case3Explicit");
  const double c1 = params::number(p, "c1");
  TimeMatrix A(2, 4, TimeSource::ClosedForm, [c1](double t) {
    const Jet T = Jet::variable(t);
    const Jet r = cbrt(T);
    const double k = 9.0 / 20.0 * c1;
    TimeJets j(2, 4);
    j.at(0, 2) = 1.0 / r;
    j.at(0, 3) = k * T * r;
    j.at(1, 0) = -k * T * T;
    j.at(1, 1) = -r;
    j.y[0] = -(3.0 / 20.0) * c1 * T * T * T;
    j.y[1] = -0.75 * T * r;
    return j;
  }, valid);
  const Profile f1 = profile(p, "f1");
  const Profile f2 = profile(p, "f2");
  const SpatialFunction v3({{"name", "parabolic"}, {"f1", f1.desc()}, {"f2", f2.desc()}},
                           [f1, f2](std::span<const Jet> z) { return z[1] * f1(z[0], 1) + f2(z[0], 0); });
  const SpatialFunction v4 = SpatialFunction::of_profile(f1, 0);
  SpatialBasis v(2, {coord(0), coord(1), v3, v4}, ConstraintClass::Parabolic2D, std::nullopt,
                 {{"f1", v4}, {"f2", SpatialFunction::of_profile(f2, 0)}});
  return finish(FamilyId::M4Case3Explicit, std::move(A), std::move(v), DensityField::linear({c1, 0.0}), p);
}

FlowCandidate case4_quadrature(const Json& p) {
  const Window w = window_of(p);
  const TimeFunction b1 = time_fn(p, "b1");
  const TimeFunction theta = time_fn(p, "theta");
  require_nonvanishing(b1.series(), w, ErrorKind::Degenerate, "b1");
  const double c0 = params::number(p, "c0");
  const double c12 = params::number(p, "c12");
  const double c13 = params::number(p, "c13");
  const double c14 = params::number(p, "c14");
  const Running y1 = running([b1, theta](const Jet& T) { return b1(T) * sin(theta(T)); }, w);
  const Running i2 = running([b1, theta, c12](const Jet& T) {
    const Jet b = b1(T);
    return (2.0 * prime(theta(T)) - c12) / (b * b);
  }, w, params::number(p, "k2"));
  const Running i3 = running([b1, c13](const Jet& T) {
    const Jet b = b1(T);
    return c13 / (b * b);
  }, w, params::number(p, "k3"));
  const Running i4 = running([b1, y1, c0, c14](const Jet& T) {
    const Jet b = b1(T);
    return (c0 * y1(T) + c14) / (b * b);
  }, w, params::number(p, "k4"));
  // Upper row B1 = (b1, b2, b3, b4); lower row (0, 1/b1, 0, 0).
  auto upper = [b1, i2, i3, i4](const Jet& T) {
    const Jet b = b1(T);
    return std::array<Jet, 4>{b, b * i2(T), -b * i3(T), -b * i4(T)};
  };
  const Running y2 = running([upper, b1, theta](const Jet& T) {
    Jet s, c;
    sincos(theta(T), s, c);
    return s * upper(T)[1] + c / b1(T);
  }, w);
  const Running y3 = running([upper, theta](const Jet& T) { return sin(theta(T)) * upper(T)[2]; }, w);
  const Running y4 = running([upper, theta](const Jet& T) { return sin(theta(T)) * upper(T)[3]; }, w);
  TimeMatrix A(2, 4, TimeSource::QuadratureBacked, [upper, b1, theta, y1, y2, y3, y4](double t) {
    const Jet T = Jet::variable(t);
    const auto u = upper(T);
    TimeJets j(2, 4);
    for (int i = 0; i < 4; ++i) j.at(0, i) = u[static_cast<std::size_t>(i)];
    j.at(1, 1) = 1.0 / b1(T);
    rotate_xy(theta(T), j);
    j.y = {y1(T), y2(T), y3(T), y4(T)};
    return j;
  }, w);
  const SpatialFunction f1 = profile_field(p, "f1", 1);
  const SpatialFunction f2 = profile_field(p, "f2", 1);
  SpatialBasis v(2, {coord(0), coord(1), f1, f2}, ConstraintClass::Separated2D, std::nullopt, {{"f1", f1}, {"f2", f2}});
  const SpatialFunction r = SpatialFunction::combination({{c0, f2}});
  return finish(FamilyId::M4Case4Quadrature, std::move(A), std::move(v), density(r, {{"c0", c0}}), p);
}

}  // namespace

FlowCandidate build_2d_m4(FamilyId id, const Json& p) {
  switch (id) {
    case FamilyId::M4Case1General:
      return case1_general(p);
    case FamilyId::M4Case1Gerstner:
      return case1_gerstner(p);
    case FamilyId::M4Case2Explicit:
      return case2_explicit(p);
    case FamilyId::M4Case3Explicit:
      return case3_explicit(p);
    case FamilyId::M4Case4Quadrature:
      return case4_quadrature(p);
    default:
      throw Error(ErrorKind::InvalidParams, "not an m=4 family");
  }
}

std::array<double, 5> case1_general_initial(const nlohmann::json& p) {
  const double c0 = params::number(p, "c0");
  const double b11 = params::number(p, "b11");
  if (!(b11 > 0.0)) throw Error(ErrorKind::InvalidParams, "M4Case1General: b11(0) must be positive");
  double s = 0.0;
  if (params::has(p, "s")) {
    s = params::number(p, "s");
  } else {
    const double mu2 = gerstner_mu0_squared(c0, b11);
    if (!(mu2 > 0.0)) {
      throw Error(ErrorKind::InvalidStratification, "M4Case1General: no equilibrium rate for these c0, b11; give s");
    }
    s = std::sqrt(mu2) + params::number(p, "delta");
  }
  if (s == 0.0) throw Error(ErrorKind::InvalidParams, "M4Case1General: s(0) must be nonzero");
  return {b11, params::number(p, "b12"), s, params::number(p, "theta0"), params::number(p, "theta")};
}

}  // namespace boussinesq
