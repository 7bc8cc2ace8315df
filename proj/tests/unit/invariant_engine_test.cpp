#include <cmath>
#include <numbers>
#include <random>

#include "boussinesq/catalog.hpp"
#include "boussinesq/errors.hpp"
#include "boussinesq/invariants.hpp"
#include "doctest.h"

using namespace boussinesq;
using nlohmann::json;

namespace {

Mat random_mat(std::mt19937& rng, int r, int c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Mat::NullaryExpr(r, c, [&](Eigen::Index, Eigen::Index) { return u(rng); });
}

Mat fd_jacobian(const FlowCandidate& c, const Vec& z, double t, double h = 1e-6) {
  Mat J(c.n, c.n);
  for (int k = 0; k < c.n; ++k) {
    Vec p = z, m = z;
    p[k] += h;
    m[k] -= h;
    J.col(k) = (evaluate_map(c, p, t) - evaluate_map(c, m, t)) / (2 * h);
  }
  return J;
}

Mat fd_velocity_jacobian(const FlowCandidate& c, const Vec& z, double t, double h = 1e-5) {
  Mat J(c.n, c.n);
  for (int k = 0; k < c.n; ++k) {
    Vec p = z, m = z;
    p[k] += h;
    m[k] -= h;
    J.col(k) = (map_velocity(c, p, t) - map_velocity(c, m, t)) / (2 * h);
  }
  return J;
}

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

// h from the curl form: sum over components of grad(phi_k') x grad(phi_k)
// plus the density terms, all gradients by finite differences in z.
Vec curl_form_h(const FlowCandidate& c, const Vec& z, double t) {
  const Mat J = fd_jacobian(c, z, t, 1e-5);
  const Mat Jv = fd_velocity_jacobian(c, z, t);
  const Vec y = c.A->antider_row_n(t);
  const Mat dv = c.v->grad(z);
  const Vec gr = c.rho->grad(z);
  if (c.n == 2) {
    double h = 0.0;
    for (int k = 0; k < 2; ++k) h += cross2(Jv.row(k).transpose(), J.row(k).transpose());
    for (int i = 0; i < c.m(); ++i) h += y[i] * cross2(gr, dv.row(i).transpose());
    return Vec::Constant(1, h);
  }
  Eigen::Vector3d h = Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k) h += Eigen::Vector3d(Jv.row(k)).cross(Eigen::Vector3d(J.row(k)));
  for (int i = 0; i < c.m(); ++i) h += y[i] * Eigen::Vector3d(gr).cross(Eigen::Vector3d(dv.row(i)));
  return h;
}

void expect_error(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
    FAIL("expected " << to_string(kind));
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

}  // namespace

TEST_CASE("Cauchy-Binet sum matches the dense determinant") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> dim(2, 3), extra(0, 3);
  for (int k = 0; k < 200; ++k) {
    const int n = dim(rng);
    const int m = n + extra(rng);
    const Mat a = random_mat(rng, n, m);
    const Mat dv = random_mat(rng, m, n);
    const double dense = (a * dv).determinant();
    CHECK(std::abs(cauchy_binet_det(a, dv) - dense) <= 1e-10 * std::max(1.0, std::abs(dense)));
    CHECK(std::abs(MinorTable(a, Mat::Zero(n, m), dv).det() - dense) <= 1e-10 * std::max(1.0, std::abs(dense)));
  }
  CHECK(increasing_tuples(5, 2).size() == 10);
  CHECK(increasing_tuples(6, 3).size() == 20);
  CHECK(increasing_tuples(7, 3).front() == std::vector<int>{0, 1, 2});
}

TEST_CASE("minors, Q and G are antisymmetric") {
  std::mt19937 rng(11);
  for (int n : {2, 3}) {
    for (int m = 2; m <= 7; ++m) {
      const MinorTable M(random_mat(rng, n, m), random_mat(rng, n, m), random_mat(rng, m, n));
      for (int i = 0; i < m; ++i) {
        CHECK(M.Q(i, i) == 0.0);
        for (int j = 0; j < m; ++j) {
          if (n == 2) {
            CHECK(M.p(i, j) == doctest::Approx(-M.p(j, i)));
            CHECK(M.g(i, j) == doctest::Approx(-M.g(j, i)));
          }
          CHECK(M.Q(i, j) == doctest::Approx(-M.Q(j, i)));
          if (n == 3) {
            CHECK((M.G(i, j) + M.G(j, i)).norm() <= 1e-14);
            for (int k = 0; k < m; ++k) {
              const double base = M.p(i, j, k);
              CHECK(M.p(j, i, k) == doctest::Approx(-base));
              CHECK(M.p(i, k, j) == doctest::Approx(-base));
              CHECK(M.p(k, j, i) == doctest::Approx(-base));
              CHECK(M.g(j, i, k) == doctest::Approx(-M.g(i, j, k)));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("Q is the skew part of the column inner products") {
  std::mt19937 rng(5);
  const Mat a = random_mat(rng, 3, 5);
  const Mat da = random_mat(rng, 3, 5);
  const MinorTable M(a, da, random_mat(rng, 5, 3));
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(M.Q(i, j) == doctest::Approx(da.col(i).dot(a.col(j)) - da.col(j).dot(a.col(i))));
    }
  }
}

TEST_CASE("identity candidate") {
  for (int n : {2, 3}) {
    const FlowCandidate c = identity_candidate(n);
    const Vec z = Vec::Constant(n, 0.3);
    CHECK(det_dphi(c, z, 0.5) == 1.0);
    CHECK(cauchy_h(c, z, 0.5).norm() == 0.0);
    const InvariantReport r = verify_candidate(c);
    CHECK(r.pass());
    CHECK(r.max_det_residual <= 1e-14);
    CHECK(r.max_h_residual <= 1e-14);
    CHECK(r.min_abs_det == 1.0);
  }
}

TEST_CASE("determinant rate is analytic") {
  // A = diag(e^t, 1) on v = z: det = e^t.
  TimeMatrix A(2, 2, TimeSource::ClosedForm, [](double t) {
    TimeJets j(2, 2);
    j.at(0, 0) = exp(Jet::variable(t));
    j.at(1, 1) = Jet(1.0);
    j.y[1] = Jet::variable(t);
    return j;
  });
  const FlowCandidate c = make_candidate(
      "stretch", A, SpatialBasis(2, {SpatialFunction::coordinate(0), SpatialFunction::coordinate(1)},
                                 ConstraintClass::Identity),
      DensityField::linear({0.0, 0.0}), Box{Vec::Constant(2, -1), Vec::Constant(2, 1)}, Window{0, 1});
  const Vec z = Vec::Constant(2, 0.2);
  for (double t : {0.0, 0.5, 1.0}) {
    CHECK(det_dphi(c, z, t) == doctest::Approx(std::exp(t)));
    CHECK(det_dphi_rate(c, z, t) == doctest::Approx(std::exp(t)).epsilon(1e-12));
  }
  const InvariantReport r = verify_candidate(c);
  CHECK(!r.verdict.det_constant);
  CHECK(!r.pass());
}

TEST_CASE("Gerstner determinant against a brute-force Jacobian") {
  const FlowCandidate c = build_family("M4Case1Gerstner");
  const Vec z = (Vec(2) << 0.5, -1.0).finished();
  for (double t : {0.0, 0.9, 2.2, 5.0}) {
    CHECK(fd_jacobian(c, z, t).determinant() == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-8));
    CHECK(det_dphi(c, z, t) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-13));
  }
}

TEST_CASE("corrupted Gerstner rate fails on the h residual only") {
  const InvariantReport good = verify_candidate(build_family("M4Case1Gerstner"));
  const InvariantReport bad = verify_candidate(build_family("M4Case1Gerstner", {{"mu0_scale", 1.01}}));
  CHECK(good.pass());
  CHECK(!bad.pass());
  CHECK(bad.verdict.det_constant);
  CHECK(bad.verdict.det_nonzero);
  CHECK(!bad.verdict.h_constant);
  // The residual scales with the perturbation.
  const InvariantReport worse = verify_candidate(build_family("M4Case1Gerstner", {{"mu0_scale", 1.02}}));
  CHECK(worse.max_h_residual > 1.5 * bad.max_h_residual);
}

TEST_CASE("triangular m=2 invariant equals the chosen constant") {
  for (double c : {0.0, 0.3, -1.2}) {
    const FlowCandidate cand = build_family("M2Triangular", {{"c", c}});
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        for (int k = 0; k < 5; ++k) {
          const Vec z = (Vec(2) << -0.8 + 0.4 * i, -0.8 + 0.4 * j).finished();
          CHECK(std::abs(cauchy_h(cand, z, 0.2 + 0.9 * k)[0] - c) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("h agrees with the curl form built from finite differences") {
  const json zero = {{"name", "zero"}};
  std::vector<FlowCandidate> cands = {
      build_family("Columnar3DExt", {{"f1", zero}, {"f2", zero}, {"c0", -0.5}}),
      build_family("Columnar3DExt"),
      build_family("Columnar2D"),
      build_family("M4Case1Gerstner"),
      build_family("M3QRShearLinearRho"),
      build_family("M6Case1Example"),
  };
  for (const auto& c : cands) {
    CAPTURE(c.family_id);
    for (const Vec& z : midpoint_grid(c.domain_hint, 2)) {
      for (double t : {c.t_window.lo + 0.3, c.t_window.lo + 1.1}) {
        const Vec h = cauchy_h(c, z, t);
        const Vec oracle = curl_form_h(c, z, t);
        CHECK((h - oracle).norm() <= 1e-6 * std::max(1.0, oracle.norm()));
      }
    }
  }
}

TEST_CASE("verification is invariant under H transforms") {
  std::mt19937 rng(99);
  for (const char* name : {"M4Case1Gerstner", "M6Case2Explicit"}) {
    const FlowCandidate c = build_family(name);
    for (int k = 0; k < 10; ++k) {
      const Mat H = Mat::Identity(c.m(), c.m()) + 0.3 * random_mat(rng, c.m(), c.m());
      const FlowCandidate t = apply_H_transform(c, H);
      const Vec z = c.domain_hint.lo + 0.37 * (c.domain_hint.hi - c.domain_hint.lo);
      CHECK((evaluate_map(t, z, 1.3) - evaluate_map(c, z, 1.3)).norm() <= 1e-10);
      CHECK(verify_candidate(t).pass() == verify_candidate(c).pass());
    }
    const FlowCandidate bad = build_family("M4Case1Gerstner", {{"mu0_scale", 1.01}});
    const Mat H = Mat::Identity(4, 4) + 0.3 * random_mat(rng, 4, 4);
    CHECK(!verify_candidate(apply_H_transform(bad, H)).pass());
  }
}

TEST_CASE("gauge shift changes h by a time-independent field") {
  std::mt19937 rng(1);
  for (const char* name : {"M4Case4Quadrature", "M6Case1"}) {
    const FlowCandidate c = build_family(name);
    const Vec delta = random_mat(rng, c.m(), 1);
    const FlowCandidate s = with_gauge_shift(c, delta);
    const Vec z = c.domain_hint.lo + 0.61 * (c.domain_hint.hi - c.domain_hint.lo);
    const Mat dv = c.v->grad(z);
    const Vec gr = c.rho->grad(z);
    Vec expected = Vec::Zero(c.n == 2 ? 1 : 3);
    for (int i = 0; i < c.m(); ++i) {
      if (c.n == 2) {
        expected[0] += delta[i] * cross2(gr, dv.row(i).transpose());
      } else {
        expected += delta[i] * Vec(Eigen::Vector3d(gr).cross(Eigen::Vector3d(dv.row(i))));
      }
    }
    for (double t : {0.5, 1.5, 2.5}) {
      CHECK((cauchy_h(s, z, t) - cauchy_h(c, z, t) - expected).norm() <= 1e-12);
    }
    const InvariantReport a = verify_candidate(c);
    const InvariantReport b = verify_candidate(s);
    CHECK(b.pass());
    CHECK(b.max_h_residual <= std::max(10 * a.max_h_residual, 1e-10));
  }
}

TEST_CASE("anti-CR residuals") {
  const std::vector<Vec> pts = {(Vec(2) << 0.1, -0.4).finished(), (Vec(2) << -1.3, 0.7).finished(),
                                (Vec(2) << 2.0, -2.0).finished()};
  const auto ec = SpatialFunction::from_json({{"name", "exp_cos"}});
  const auto es = SpatialFunction::from_json({{"name", "exp_sin"}});
  CHECK(anti_cr_residual(ec, es, pts) <= 1e-12);
  const auto x = SpatialFunction::coordinate(0);
  const auto negy = SpatialFunction::from_json({{"name", "linear"}, {"coeffs", {0.0, -1.0}}});
  CHECK(anti_cr_residual(x, negy, pts) == 0.0);
  const auto xx = SpatialFunction::from_json({{"name", "poly"}, {"var", 0}, {"coeffs", {0.0, 0.0, 1.0}}});
  const auto yy = SpatialFunction::from_json({{"name", "poly"}, {"var", 1}, {"coeffs", {0.0, 0.0, 1.0}}});
  const std::vector<Vec> one = {Vec::Constant(2, 1.0)};
  CHECK(anti_cr_residual(xx, yy, one) == doctest::Approx(4.0));

  CHECK(check_anti_cr(*build_family("M4Case1Gerstner").v, pts) <= 1e-12);
  const std::vector<Vec> pts3 = {(Vec(3) << 0.1, -0.4, 0.2).finished()};
  CHECK(check_anti_cr(*build_family("M5Elliptic").v, pts3) <= 1e-12);
  expect_error(ErrorKind::ConstraintClassMismatch, [&] { check_anti_cr(*build_family("M2Triangular").v, pts); });
}

TEST_CASE("grid validation") {
  const FlowCandidate c = build_family("M4Case1Gerstner");
  SampleGrid outside;
  outside.points = std::vector<Vec>(8, (Vec(2) << 0.0, 0.5).finished());
  expect_error(ErrorKind::GridOutsideDomain, [&] { verify_candidate(c, outside); });
  SampleGrid few;
  few.points_per_axis = 2;
  expect_error(ErrorKind::InvalidParams, [&] { verify_candidate(c, few); });
  SampleGrid short_time;
  short_time.times = 2;
  expect_error(ErrorKind::InvalidParams, [&] { verify_candidate(c, short_time); });
}

TEST_CASE("degenerate samples are listed") {
  const FlowCandidate c =
      build_family("M4Case1Gerstner", {{"domain", {{"lo", {-1.0, -1.0}}, {"hi", {1.0, 0.5}}}}});
  SampleGrid g;
  std::vector<Vec> pts;
  for (int k = 0; k < 8; ++k) pts.push_back((Vec(2) << -0.7 + 0.2 * k, -0.5).finished());
  pts.push_back(Vec::Zero(2));
  g.points = pts;
  const InvariantReport r = verify_candidate(c, g);
  CHECK(!r.verdict.det_nonzero);
  CHECK(!r.pass());
  REQUIRE(r.degenerate_points.size() == 1);
  CHECK(r.degenerate_points[0].norm() == 0.0);
  const json j = r.to_json(false);
  CHECK(j.at("degenerate_points").size() == 1);
}

TEST_CASE("residuals do not grow with grid resolution") {
  for (const auto& f : family_catalog()) {
    const FlowCandidate c = build_family(f.name);
    if (c.A->source() != TimeSource::ClosedForm) continue;
    CAPTURE(f.name);
    SampleGrid coarse;
    coarse.points_per_axis = f.n == 2 ? 3 : 2;
    coarse.times = 3;
    const InvariantReport a = verify_candidate(c, coarse);
    const InvariantReport b = verify_candidate(c);
    CHECK(a.pass());
    CHECK(b.pass());
    CHECK(b.max_det_residual <= std::max(10 * a.max_det_residual, 1e-12));
    CHECK(b.max_h_residual <= std::max(10 * a.max_h_residual, 1e-9));
  }
}

TEST_CASE("reports are independent of the thread count") {
  const FlowCandidate c = build_family("M6Case1");
  SampleGrid one;
  one.threads = 1;
  SampleGrid four;
  four.threads = 4;
  const InvariantReport a = verify_candidate(c, one);
  const InvariantReport b = verify_candidate(c, four);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.samples.size() == 125 * 7);
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    CHECK(a.samples[k].z == b.samples[k].z);
    CHECK(a.samples[k].t == b.samples[k].t);
    CHECK(a.samples[k].det == b.samples[k].det);
    CHECK(a.samples[k].h == b.samples[k].h);
  }
  CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("report serialization") {
  const InvariantReport r = verify_candidate(build_family("M2Rotational"));
  const json j = r.to_json();
  CHECK(j.at("family_id") == "M2Rotational");
  CHECK(j.at("verdict").at("pass") == true);
  CHECK(j.at("samples").size() == 25 * 7);
  CHECK(j.at("tolerances").at("det") == 1e-8);
  CHECK(!r.to_json(false).contains("samples"));
}
