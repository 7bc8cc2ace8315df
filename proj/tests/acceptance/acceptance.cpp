// One line per acceptance criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <unistd.h>

#include "boussinesq/catalog.hpp"
#include "boussinesq/invariants.hpp"
#include "boussinesq/kinematics.hpp"
#include "boussinesq/sturm_liouville.hpp"
#include "boussinesq/sweep.hpp"
#include "cli.hpp"

using namespace boussinesq;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

Outcome invariant_suite() {
  const auto t0 = Clock::now();
  int passed = 0;
  double det_worst = 0.0, h_worst = 0.0, min_det = std::numeric_limits<double>::infinity();
  std::string failures;
  for (const auto& f : family_catalog()) {
    const FlowCandidate c = build_family(f.name);
    SampleGrid grid;
    grid.points_per_axis = 5;
    grid.times = 7;
    Tolerances tol;
    tol.det = 1e-8;
    tol.h = 1e-6;
    tol.nondegeneracy = 1e-6;
    const InvariantReport r = verify_candidate(c, grid, tol);
    det_worst = std::max(det_worst, r.max_det_residual);
    h_worst = std::max(h_worst, r.max_h_residual);
    min_det = std::min(min_det, r.min_abs_det);
    if (r.pass() && r.min_abs_det > 1e-6) {
      ++passed;
    } else {
      failures += " " + f.name;
    }
  }
  const double secs = seconds_since(t0);
  const int total = static_cast<int>(family_catalog().size());
  return {passed == total && total == 20 && secs <= 60.0,
          std::to_string(passed) + "/" + std::to_string(total) + " families, max|d/dt det| " + num(det_worst) +
              ", max|d/dt h| " + num(h_worst) + ", min|det| " + num(min_det) + ", " + num(secs) + " s" + failures};
}

Outcome cauchy_binet() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> dim(2, 3);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int n = dim(rng);
    const int m = n + std::uniform_int_distribution<int>(0, 4)(rng);
    Mat a(n, m), dv(m, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        a(i, j) = u(rng);
        dv(j, i) = u(rng);
      }
    const double dense = (a * dv).determinant();
    const double cb = cauchy_binet_det(a, dv);
    worst = std::max(worst, std::abs(cb - dense) / std::max(std::abs(dense), 1e-300));
  }
  return {worst <= 1e-10, "200 pairs, max relative error " + num(worst)};
}

Outcome gerstner_equilibrium() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    // Alternate the stable (c0 < 0, 0 < c1 < 1) and c0 > 0, c1 > 1 regimes.
    const double c0 = k % 2 ? -(0.1 + 2.0 * u(rng)) : 0.1 + 2.0 * u(rng);
    const double c1 = k % 2 ? 0.1 + 0.85 * u(rng) : 1.1 + u(rng);
    const double mu0 = std::sqrt(c0 * c1 / (std::pow(c1, 4) - 1.0));
    const std::array<double, 5> y{c1, 0.0, mu0, 0.0, 0.0};
    std::array<double, 5> dy{};
    case1_general_rhs<double>(c0, y, dy);
    double norm = 0.0;
    for (double d : dy) norm += d * d;
    worst = std::max(worst, std::sqrt(norm));
  }
  return {worst <= 1e-12, "20 random (c0, c1), max |rhs| " + num(worst)};
}

Outcome stability() {
  const auto t0 = Clock::now();
  SweepOptions opts;
  opts.window = {0.0, 100.0};
  opts.bound_factor = 10.0;
  const auto stable = run_sweep({{"c0", -1.0}, {"b11", 0.8}}, "delta", {-0.02, -0.01, 0.0, 0.01, 0.02}, opts);
  const auto fast = run_sweep({{"c0", -1.0}, {"b11", 0.65}}, "delta", {-0.01, -0.005}, opts);
  const auto slow = run_sweep({{"c0", -1.0}, {"b11", 0.65}}, "delta", {0.0, 0.01, 0.02}, opts);
  bool ok = true;
  std::string d = "b11=0.8:";
  for (const auto& r : stable) {
    ok = ok && r.bounded;
    d += " " + r.outcome();
  }
  d += "; b11=0.65:";
  for (const auto& r : fast) {
    ok = ok && r.blowup_time && *r.blowup_time < 100.0;
    d += " " + r.outcome();
  }
  for (const auto& r : slow) {
    ok = ok && r.bounded;
    d += " " + r.outcome();
  }
  const double secs = seconds_since(t0);
  return {ok && secs <= 30.0, d + ", " + num(secs) + " s"};
}

Outcome free_surface() {
  const SpatialFunction f1 = SpatialFunction::from_json({{"name", "exp_cos"}, {"amp", 1.0}, {"scale", 1.0}});
  const SpatialFunction f2 = SpatialFunction::from_json({{"name", "exp_sin"}, {"amp", 1.0}, {"scale", 1.0}});
  double worst_identity = 0.0, worst_closed = 0.0, smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 25; ++i) {
    for (int j = 0; j < 25; ++j) {
      const Vec z = (Vec(2) << -std::numbers::pi + 2 * std::numbers::pi * i / 24.0, -3.0 + 3.0 * j / 24.0).finished();
      const double g = free_surface_det(f1, f2, z);
      // |grad f1|^2 (f1^2 + f2^2) with f1 = e^{z2} cos z1, f2 = e^{z2} sin z1.
      const double e = std::exp(z[1]);
      const double fx = -e * std::sin(z[0]), fy = e * std::cos(z[0]);
      const double F1 = e * std::cos(z[0]), F2 = e * std::sin(z[0]);
      const double identity = (fx * fx + fy * fy) * (F1 * F1 + F2 * F2);
      worst_identity = std::max(worst_identity, std::abs(g - identity) / identity);
      worst_closed = std::max(worst_closed, std::abs(g - std::exp(4 * z[1])) / std::exp(4 * z[1]));
      smallest = std::min(smallest, g);
    }
  }
  return {worst_identity <= 1e-12 && worst_closed <= 1e-12 && smallest > 0.0,
          "625 labels, identity rel err " + num(worst_identity) + ", e^{4 z2} rel err " + num(worst_closed) +
              ", min det_G " + num(smallest)};
}

Outcome newton() {
  const double c0 = -1.0, c1 = 0.8;
  const FlowCandidate c = build_family("M4Case1Gerstner", {{"c0", c0}, {"c1", c1}});
  const double mu0 = std::sqrt(c0 * c1 / (std::pow(c1, 4) - 1.0));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Vec z = (Vec(2) << -std::numbers::pi + 2 * std::numbers::pi * u(rng), -2.0 + 1.9 * u(rng)).finished();
    const double t = 10.0 * u(rng);
    const Vec acc = map_acceleration(c, z, t);
    const Mat J = map_jacobian(c, z, t);
    const Vec rhs = -J.transpose() * (acc + c0 * z[1] * (Vec(2) << 0.0, 1.0).finished()) / (mu0 * mu0);
    worst = std::max(worst, (gerstner_pressure_gradient(c, z, t).scaled - rhs).norm());
  }
  return {worst <= 1e-8, "20 random (z, t), max residual " + num(worst)};
}

Outcome m6_conservation() {
  double wa = 0.0, wl = 0.0;
  for (const char* name : {"M6Case2Quadrature", "M6Case2Explicit"}) {
    const FlowCandidate c = build_family(name);
    for (int k = 0; k < 50; ++k) {
      const double t = c.t_window.lo + c.t_window.length() * k / 49.0;
      const Mat a = c.A->eval(t);
      const double l1 = a(0, 5) / a(0, 0), l2 = a(1, 3) / a(1, 1), l3 = a(2, 4) / a(2, 2);
      wa = std::max(wa, std::abs(a(0, 0) * a(1, 1) * a(2, 2) - 1.0));
      wl = std::max(wl, std::abs(l1 * l2 * l3 - 1.0));
    }
  }
  return {wa <= 1e-9 && wl <= 1e-9, "both branches, 50 times, |a1a2a3-1| " + num(wa) + ", |l1l2l3-1| " + num(wl)};
}

Outcome sturm_liouville() {
  const Window w{0.0, 10.0};
  const auto mathieu = solve_sl([](const Jet& t) { return 1.0 + 0.3 * cos(t); }, w);
  const auto trig = solve_sl([](const Jet&) { return Jet(1.0); }, w);
  const auto hyp = solve_sl([](const Jet&) { return Jet(-1.0); }, w);
  double drift = 0.0, et = 0.0, eh = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = w.lo + w.length() * i / 200.0;
    drift = std::max(drift, std::abs(mathieu.wronskian(t) - mathieu.wronskian(w.lo)));
    et = std::max({et, std::abs(trig.solution(0, t).value() - std::cos(t)),
                   std::abs(trig.solution(1, t).value() - std::sin(t))});
    eh = std::max({eh, std::abs(hyp.solution(0, t).value() - std::cosh(t)) / std::cosh(t),
                   std::abs(hyp.solution(1, t).value() - std::sinh(t)) / std::cosh(t)});
  }
  return {drift <= 1e-8 && et <= 1e-9 && eh <= 1e-9,
          "Wronskian drift " + num(drift) + ", trig err " + num(et) + ", hyperbolic rel err " + num(eh)};
}

Outcome alpha() {
  const double a = stability_alpha();
  const double q = std::pow(a, 8) - 12 * std::pow(a, 4) + 3;
  std::ostringstream s;
  s << std::setprecision(7) << "alpha = " << a << ", q(alpha) = " << num(q);
  return {std::abs(a - 0.7109) <= 5e-4 && std::abs(q) <= 1e-12 && a > 0.0, s.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("ebflow_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::ostringstream sink;
  const std::vector<std::string> first = {"trace", "--preset", "fig1", "--random-seeds", "2", "--seed", "5",
                                          "--out", (root / "a").string()};
  if (ebflow::run(first, sink, sink) != 0) return {false, "first trace run failed: " + sink.str()};
  const std::vector<std::string> replay = {"trace", "--manifest", (root / "a" / "manifest.json").string(), "--out",
                                           (root / "b").string()};
  if (ebflow::run(replay, sink, sink) != 0) return {false, "manifest replay failed: " + sink.str()};
  const json m = json::parse(slurp(root / "a" / "manifest.json"));
  int files = 0;
  bool same = true;
  for (const auto& f : m.at("outputs")) {
    const std::string name = f.get<std::string>();
    if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
    ++files;
    same = same && slurp(root / "a" / name) == slurp(root / "b" / name) && !slurp(root / "a" / name).empty();
  }
  fs::remove_all(root);
  return {same && files == 8, std::to_string(files) + " CSV files compared byte for byte"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"invariant suite on every family", invariant_suite},
      {"Cauchy-Binet determinant oracle", cauchy_binet},
      {"Gerstner equilibrium of the five-state system", gerstner_equilibrium},
      {"stability sweep on [0, 100]", stability},
      {"free-surface determinant identity", free_surface},
      {"Newton's law for the Gerstner pressure gradient", newton},
      {"m=6 case 2 product conservation", m6_conservation},
      {"Sturm-Liouville fundamental pairs", sturm_liouville},
      {"stability constant alpha", alpha},
      {"end-to-end trace determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " (" << o.detail
              << ")\n";
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<std::size_t>(failed) << "/"
            << criteria.size() << "\n";
  return failed ? 1 : 0;
}
