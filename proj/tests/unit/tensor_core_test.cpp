#include <cmath>
#include <random>

#include "boussinesq/candidate.hpp"
#include "boussinesq/errors.hpp"
#include "boussinesq/spatial.hpp"
#include "boussinesq/time_function.hpp"
#include "boussinesq/time_matrix.hpp"
#include "doctest.h"

using namespace boussinesq;
using nlohmann::json;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Vec fd_gradient(const SpatialFunction& f, const Vec& z, double h = 1e-5) {
  Vec g(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    Vec p = z, m = z;
    p[k] += h;
    m[k] -= h;
    g[k] = (f.value(p) - f.value(m)) / (2 * h);
  }
  return g;
}

// Gerstner-type map with stretch c1 and rotation rate mu, written directly.
TimeMatrix gerstner_matrix(double c1, double mu) {
  return TimeMatrix(2, 4, TimeSource::ClosedForm, [c1, mu](double t) {
    const Jet T = Jet::variable(t);
    const Jet c = cos(mu * T), s = sin(mu * T);
    TimeJets j(2, 4);
    j.at(0, 0) = c1;
    j.at(0, 2) = c1 * c;
    j.at(0, 3) = -c1 * s;
    j.at(1, 1) = 1.0 / c1;
    j.at(1, 2) = s / c1;
    j.at(1, 3) = c / c1;
    j.y = {Jet(0.0), T / c1, -c / (mu * c1), s / (mu * c1)};
    return j;
  });
}

SpatialBasis exp_pair_basis() {
  return SpatialBasis(2,
                      {SpatialFunction::coordinate(0), SpatialFunction::coordinate(1),
                       SpatialFunction::from_json({{"name", "exp_cos"}}),
                       SpatialFunction::from_json({{"name", "exp_sin"}})},
                      ConstraintClass::AntiCR2D, std::array<int, 2>{2, 3});
}

}  // namespace

TEST_CASE("time functions give exact derivatives") {
  const std::vector<json> descs = {
      {{"name", "const"}, {"value", 2.5}},
      {{"name", "trig"}, {"offset", 1.0}, {"slope", 0.3}, {"amp", 0.2}, {"freq", 1.7}, {"phase", 0.4}},
      {{"name", "exp"}, {"offset", 0.5}, {"amp", 2.0}, {"rate", -0.3}},
      {{"name", "poly"}, {"coeffs", {1.0, -2.0, 0.5, 0.25}}},
      {{"name", "power"}, {"coef", 2.0}, {"exponent", -1.0 / 3.0}, {"shift", 1.0}},
      {{"name", "rescaled"}, {"base", {{"name", "trig"}, {"slope", 1.0}, {"amp", 0.2}}}, {"sigma", 2.0}},
      {{"name", "sum"}, {"terms", {1.0, {{"name", "exp"}, {"amp", 1.0}, {"rate", 1.0}}}}},
      {{"name", "product"}, {"factors", {{{"name", "exp"}, {"amp", 1.0}, {"rate", -0.1}}, {{"name", "poly"}, {"coeffs", {1.0, 1.0}}}}}},
  };
  for (const auto& s : descs) {
    CAPTURE(s.dump());
    const TimeFunction f = TimeFunction::from_json(s);
    for (double t : {0.3, 1.1, 2.7}) {
      const double h = 1e-4;
      const double fd1 = (f(t + h) - f(t - h)) / (2 * h);
      const double fd2 = (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
      CHECK(rel_err(f.derivative(t, 1), fd1) < 1e-7);
      CHECK(rel_err(f.derivative(t, 2), fd2) < 1e-5);
    }
  }
  CHECK(TimeFunction::from_json(3.0).constant_value() == 3.0);
  CHECK_THROWS_AS(TimeFunction::from_json({{"name", "bogus"}}), Error);
}

TEST_CASE("trig time function matches its closed form") {
  const TimeFunction f = TimeFunction::from_json({{"name", "trig"}, {"offset", 1.0}, {"amp", 0.1}, {"freq", 1.0}});
  for (double t : {0.0, 0.5, 3.0}) {
    CHECK(f(t) == doctest::Approx(1.0 + 0.1 * std::sin(t)).epsilon(1e-15));
    CHECK(f.derivative(t, 2) == doctest::Approx(-0.1 * std::sin(t)).epsilon(1e-13));
  }
}

TEST_CASE("profiles have closed-form derivatives of every order") {
  const Profile p = Profile::from_json({{"name", "poly"}, {"coeffs", {1.0, 2.0, 3.0}}});
  CHECK(p(2.0) == doctest::Approx(17.0));
  CHECK(p(2.0, 1) == doctest::Approx(14.0));
  CHECK(p(2.0, 2) == doctest::Approx(6.0));
  CHECK(p(2.0, 3) == doctest::Approx(0.0));
  const Profile s = Profile::from_json({{"name", "sin"}, {"amp", 0.3}, {"freq", 2.0}});
  CHECK(s(0.7, 1) == doctest::Approx(0.6 * std::cos(1.4)).epsilon(1e-14));
  CHECK(s(0.7, 2) == doctest::Approx(-1.2 * std::sin(1.4)).epsilon(1e-14));
  const Profile c = Profile::from_json({{"name", "cos"}, {"amp", 1.0}, {"freq", 1.0}});
  CHECK(c(0.4, 0) == doctest::Approx(std::cos(0.4)).epsilon(1e-15));
  const Profile e = Profile::from_json({{"name", "exp"}, {"amp", 2.0}, {"rate", -1.5}});
  CHECK(e(0.3, 2) == doctest::Approx(2.0 * 2.25 * std::exp(-0.45)).epsilon(1e-14));
  // Derivative order passes through the jet: d/dx of the order-1 profile is the order-2 profile.
  const Jet x = Jet::variable(0.9);
  CHECK(s(x, 1).derivative(1) == doctest::Approx(s(0.9, 2)).epsilon(1e-14));
}

TEST_CASE("spatial gradients agree with finite differences") {
  const std::vector<json> descs = {
      {{"name", "coord"}, {"axis", 1}},
      {{"name", "linear"}, {"coeffs", {0.5, -1.0, 2.0}}, {"offset", 0.1}},
      {{"name", "poly"}, {"var", 2}, {"coeffs", {0.0, 1.0, 0.5}}},
      {{"name", "sin"}, {"var", 0}, {"amp", 0.3}, {"freq", 1.3}},
      {{"name", "exp_cos"}, {"amp", 1.0}, {"scale", 1.2}, {"lin", 0.1}},
      {{"name", "exp_sin"}, {"amp", 0.8}, {"scale", 0.9}},
      {{"name", "sin_cos"}, {"amp", 0.4}, {"k1", 1.0}, {"k2", 2.0}},
      {{"name", "gauss"}, {"amp", 1.0}, {"width", 0.7}, {"center", {0.1, -0.2}}},
      {{"name", "sum"}, {"terms", {{{"name", "coord"}, {"axis", 0}}, {{"weight", 2.0}, {"field", {{"name", "sin_cos"}}}}}}},
  };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 0.5);
  for (const auto& s : descs) {
    CAPTURE(s.dump());
    const SpatialFunction f = SpatialFunction::from_json(s);
    for (int k = 0; k < 5; ++k) {
      const Vec z = Vec::NullaryExpr(3, [&] { return U(rng); });
      const Vec g = f.gradient(z);
      const Vec fd = fd_gradient(f, z);
      for (int i = 0; i < 3; ++i) CHECK(rel_err(g[i], fd[i]) < 1e-6);
    }
  }
  CHECK_THROWS_AS(SpatialFunction::from_json({{"name", "nope"}}), Error);
  // A 2D label cannot feed a field that reads z3.
  CHECK_THROWS_AS(SpatialFunction::coordinate(2).value(Vec::Zero(2)), Error);
}

TEST_CASE("spatial basis gradient and anti-CR structure") {
  const SpatialBasis v = exp_pair_basis();
  CHECK(v.m() == 4);
  const Vec z = (Vec(2) << 0.4, -0.8).finished();
  const Mat g = v.grad(z);
  for (int i = 0; i < 4; ++i) {
    const Vec fd = fd_gradient(v.component(i), z);
    for (int k = 0; k < 2; ++k) CHECK(rel_err(g(i, k), fd[k]) < 1e-6);
  }
  CHECK(std::abs(g(2, 0) + g(3, 1)) < 1e-10);
  CHECK(std::abs(g(2, 1) - g(3, 0)) < 1e-10);

  Mat H(4, 4);
  H << 1, 2, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 2;
  const SpatialBasis w = v.transformed(H);
  CHECK((w.eval(z) - H * v.eval(z)).norm() < 1e-14);
  CHECK((w.grad(z) - H * v.grad(z)).norm() < 1e-13);
  CHECK_FALSE(w.anti_cr_pair().has_value());
}

TEST_CASE("density field gradient and interpretation") {
  const DensityField rho(SpatialFunction::from_json({{"name", "sum"},
                                                     {"terms", {{{"weight", -1.0}, {"field", {{"name", "coord"}, {"axis", 1}}}},
                                                                {{"weight", 0.2}, {"field", {{"name", "sin"}, {"var", 0}}}}}}}));
  const Vec z = (Vec(2) << 0.3, -0.5).finished();
  const Vec fd = fd_gradient(rho.field(), z);
  CHECK(rel_err(rho.grad(z)[0], fd[0]) < 1e-6);
  CHECK(rel_err(rho.grad(z)[1], fd[1]) < 1e-6);
  CHECK(rho.interpretation() == DensityInterpretation::LogDensity);
  CHECK(rho.physical_density(9.81 * std::log(2.0), 9.81, 1000.0) == doctest::Approx(2.0));
  const DensityField lin = rho.with_interpretation(DensityInterpretation::LinearizedDensity);
  CHECK(lin.physical_density(0.5, 10.0, 1000.0) == doctest::Approx(50.0));
  const DensityField plane = DensityField::linear({0.0, 0.0, -2.0});
  CHECK(plane.eval((Vec(3) << 1, 2, 3).finished()) == doctest::Approx(-6.0));
}

TEST_CASE("closed-form time matrix derivatives and running integrals") {
  const TimeMatrix A = gerstner_matrix(0.8, 1.164);
  const double h = 1e-4;
  for (double t : {0.2, 1.3, 4.0}) {
    const Mat fd1 = (A.eval(t + h) - A.eval(t - h)) / (2 * h);
    const Mat fd2 = (A.eval(t + h) - 2 * A.eval(t) + A.eval(t - h)) / (h * h);
    const Mat d1 = A.deriv(t), d2 = A.deriv2(t);
    for (Eigen::Index i = 0; i < d1.size(); ++i) {
      CHECK(rel_err(d1(i), fd1(i)) < 1e-6);
      CHECK(rel_err(d2(i), fd2(i)) < 1e-5);
    }
    const Vec dy = (A.antider_row_n(t + h) - A.antider_row_n(t - h)) / (2 * h);
    const Mat a = A.eval(t);
    for (int c = 0; c < 4; ++c) CHECK(rel_err(dy[c], a(1, c)) < 1e-6);
  }
  CHECK(to_string(A.source()) == "closed-form");
}

TEST_CASE("evaluate_map examples") {
  const FlowCandidate id = identity_candidate(2);
  const Vec z = (Vec(2) << 0.3, -0.7).finished();
  const Vec x = evaluate_map(id, z, 5.0);
  CHECK(x[0] == 0.3);
  CHECK(x[1] == -0.7);

  const FlowCandidate g = make_candidate("Gerstner", gerstner_matrix(0.8, 1.164), exp_pair_basis(),
                                         DensityField::linear({0.0, -1.0}), {Vec::Constant(2, -3.0), Vec::Constant(2, -0.1)},
                                         {0.0, 6.0});
  const Vec zg = (Vec(2) << 0.0, -1.0).finished();
  const Vec xg = evaluate_map(g, zg, 0.0);
  // Oracle: A(0) = diag(c1, 1/c1) [[1,0,1,0],[0,1,0,1]], v = (0, -1, e^-1, 0).
  CHECK(xg[0] == doctest::Approx(0.8 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(xg[1] == doctest::Approx(-1.25).epsilon(1e-15));

  // m=4 explicit power-law matrix with c0 = 1, f1 = z1^2, f2 = z2^2.
  TimeMatrix P(2, 4, TimeSource::ClosedForm, [](double t) {
    const Jet T = Jet::variable(t);
    TimeJets j(2, 4);
    j.at(0, 0) = 10.0 * pow(T, -2.0);
    j.at(0, 3) = 10.0 * pow(T, 3.0);
    j.at(1, 1) = 0.1 * T * T;
    j.at(1, 2) = 0.1 * pow(T, -3.0);
    return j;
  });
  SpatialBasis v(2,
                 {SpatialFunction::coordinate(0), SpatialFunction::coordinate(1),
                  SpatialFunction::from_json({{"name", "poly"}, {"var", 0}, {"coeffs", {0, 0, 1}}}),
                  SpatialFunction::from_json({{"name", "poly"}, {"var", 1}, {"coeffs", {0, 0, 1}}})},
                 ConstraintClass::Separated2D);
  const FlowCandidate c2 = make_candidate("Power", std::move(P), std::move(v), DensityField::linear({0, 1}),
                                          {Vec::Constant(2, 0.5), Vec::Constant(2, 2.0)}, {1.0, 4.0});
  const Vec x2 = evaluate_map(c2, Vec::Constant(2, 1.0), 1.0);
  CHECK(x2[0] == doctest::Approx(20.0));
  CHECK(x2[1] == doctest::Approx(0.2));
}

TEST_CASE("map velocity, acceleration and jacobian") {
  const FlowCandidate g = make_candidate("Gerstner", gerstner_matrix(0.8, 1.164), exp_pair_basis(),
                                         DensityField::linear({0.0, -1.0}), {Vec::Constant(2, -3.0), Vec::Constant(2, -0.1)},
                                         {0.0, 6.0});
  const Vec z = (Vec(2) << 0.2, -0.6).finished();
  const double t = 1.7, h = 1e-4;
  const Vec fdv = (evaluate_map(g, z, t + h) - evaluate_map(g, z, t - h)) / (2 * h);
  CHECK((map_velocity(g, z, t) - fdv).norm() < 1e-7);
  const Vec fda = (evaluate_map(g, z, t + h) - 2 * evaluate_map(g, z, t) + evaluate_map(g, z, t - h)) / (h * h);
  CHECK((map_acceleration(g, z, t) - fda).norm() < 1e-5);
  Mat fdj(2, 2);
  for (int k = 0; k < 2; ++k) {
    Vec p = z, m = z;
    p[k] += 1e-6;
    m[k] -= 1e-6;
    fdj.col(k) = (evaluate_map(g, p, t) - evaluate_map(g, m, t)) / 2e-6;
  }
  CHECK((map_jacobian(g, z, t) - fdj).norm() < 1e-8);
}

TEST_CASE("H transform leaves the map unchanged") {
  const FlowCandidate id = identity_candidate(2);
  const FlowCandidate same = apply_H_transform(id, Mat::Identity(2, 2));
  const Vec z = (Vec(2) << 0.1, 0.2).finished();
  CHECK((evaluate_map(same, z, 1.0) - evaluate_map(id, z, 1.0)).norm() == 0.0);

  Mat D = Mat::Zero(2, 2);
  D(0, 0) = 2.0;
  D(1, 1) = 0.5;
  const FlowCandidate scaled = apply_H_transform(id, D);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Vec zz = Vec::NullaryExpr(2, [&] { return U(rng); });
    const double t = 5.0 * U(rng);
    CHECK((evaluate_map(scaled, zz, t) - evaluate_map(id, zz, t)).cwiseAbs().maxCoeff() <= 1e-12);
  }

  const FlowCandidate g = make_candidate("Gerstner", gerstner_matrix(0.8, 1.164), exp_pair_basis(),
                                         DensityField::linear({0.0, -1.0}), {Vec::Constant(2, -3.0), Vec::Constant(2, -0.1)},
                                         {0.0, 6.0});
  Mat H = Mat::Identity(4, 4);
  H(0, 2) = 0.5;
  H(3, 1) = -1.0;
  H(2, 2) = 3.0;
  const FlowCandidate gh = apply_H_transform(g, H);
  for (int k = 0; k < 20; ++k) {
    const Vec zz = (Vec(2) << U(rng), -1.0 + 0.5 * U(rng)).finished();
    const double t = 3.0 + 2.0 * U(rng);
    CHECK((evaluate_map(gh, zz, t) - evaluate_map(g, zz, t)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  REQUIRE(gh.transform.has_value());
  CHECK((*gh.transform - H).norm() == 0.0);

  Mat S = Mat::Identity(2, 2);
  S(1, 1) = 0.0;
  CHECK_THROWS_AS(apply_H_transform(id, S), Error);
  try {
    apply_H_transform(id, S);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularTransform);
  }
  Mat ill = Mat::Identity(2, 2);
  ill(1, 1) = 1e-13;
  CHECK_THROWS_AS(apply_H_transform(id, ill), Error);
}

TEST_CASE("gauge shift only moves the running integrals") {
  const FlowCandidate id = identity_candidate(3);
  const Vec d = (Vec(3) << 0.1, -0.2, 0.3).finished();
  const FlowCandidate s = with_gauge_shift(id, d);
  CHECK((s.A->antider_row_n(0.7) - id.A->antider_row_n(0.7) - d).norm() < 1e-15);
  CHECK((s.A->eval(0.7) - id.A->eval(0.7)).norm() == 0.0);
  CHECK((s.gauge - d).norm() == 0.0);
}

TEST_CASE("times outside the validity window are rejected") {
  TimeMatrix A(2, 2, TimeSource::OdeBacked, [](double) {
    TimeJets j(2, 2);
    j.at(0, 0) = 1.0;
    j.at(1, 1) = 1.0;
    return j;
  }, Window{0.0, 2.0});
  CHECK_NOTHROW(A.eval(1.0));
  try {
    A.eval(2.5);
    FAIL("expected a window error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IntegrationWindowExceeded);
  }
}

TEST_CASE("candidate validation and serialization") {
  const FlowCandidate id = identity_candidate(2);
  const json j = to_json(id);
  CHECK(j.at("family_id") == "Identity");
  CHECK(j.at("n") == 2);
  CHECK(j.at("m") == 2);
  CHECK(j.at("gauge_constants").size() == 2);
  CHECK(j.at("domain_hint").at("lo").size() == 2);

  TimeMatrix A(2, 3, TimeSource::ClosedForm, [](double) { return TimeJets(2, 3); });
  SpatialBasis v(2, {SpatialFunction::coordinate(0), SpatialFunction::coordinate(1)}, ConstraintClass::Identity);
  CHECK_THROWS_AS(make_candidate("Bad", A, v, DensityField::linear({0, 0}), {Vec::Zero(2), Vec::Ones(2)}, {0, 1}),
                  Error);
}
