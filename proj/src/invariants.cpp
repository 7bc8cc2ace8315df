#include "boussinesq/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "boussinesq/errors.hpp"

namespace boussinesq {

namespace {

Mat select_cols(const Mat& a, std::span<const int> cols) {
  Mat s(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) s.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  return s;
}

Mat select_rows(const Mat& a, std::span<const int> rows) {
  Mat s(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) s.row(static_cast<Eigen::Index>(k)) = a.row(rows[k]);
  return s;
}

void check_square(std::span<const int> idx, Eigen::Index n) {
  if (static_cast<Eigen::Index>(idx.size()) != n) {
    throw Error(ErrorKind::InvalidParams, "minor needs as many indices as the dimension");
  }
}

nlohmann::json vec_json(const Vec& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

double det2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a[0] * b[1] - a[1] * b[0]; }

}  // namespace

std::vector<std::vector<int>> increasing_tuples(int m, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > m) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return out;
}

MinorTable::MinorTable(Mat a, Mat da, Mat dv) : a_(std::move(a)), da_(std::move(da)), dv_(std::move(dv)) {
  if (a_.cols() != dv_.rows() || a_.rows() != dv_.cols() || da_.rows() != a_.rows() || da_.cols() != a_.cols()) {
    throw Error(ErrorKind::InvalidParams, "minor table shapes do not match");
  }
}

double MinorTable::p(std::span<const int> cols) const {
  check_square(cols, a_.rows());
  return select_cols(a_, cols).determinant();
}

double MinorTable::g(std::span<const int> rows) const {
  check_square(rows, dv_.cols());
  return select_rows(dv_, rows).determinant();
}

double MinorTable::p(int i, int j) const {
  const std::array<int, 2> idx{i, j};
  return p(idx);
}
double MinorTable::g(int i, int j) const {
  const std::array<int, 2> idx{i, j};
  return g(idx);
}
double MinorTable::p(int i, int j, int k) const {
  const std::array<int, 3> idx{i, j, k};
  return p(idx);
}
double MinorTable::g(int i, int j, int k) const {
  const std::array<int, 3> idx{i, j, k};
  return g(idx);
}

double MinorTable::Q(int i, int j) const { return da_.col(i).dot(a_.col(j)) - da_.col(j).dot(a_.col(i)); }

Eigen::Vector3d MinorTable::G(int i, int j) const {
  if (n() != 3) throw Error(ErrorKind::InvalidParams, "G is defined in 3D only");
  const Eigen::Vector3d gi = dv_.row(i).transpose();
  const Eigen::Vector3d gj = dv_.row(j).transpose();
  return gi.cross(gj);
}

double MinorTable::det() const {
  double sum = 0.0;
  for (const auto& s : increasing_tuples(m(), n())) sum += p(s) * g(s);
  return sum;
}

double MinorTable::det_rate() const {
  double sum = 0.0;
  for (const auto& s : increasing_tuples(m(), n())) {
    const double gs = g(s);
    if (gs == 0.0) continue;
    Mat sub = select_cols(a_, s);
    double rate = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      Mat replaced = sub;
      replaced.col(static_cast<Eigen::Index>(k)) = da_.col(s[k]);
      rate += replaced.determinant();
    }
    sum += rate * gs;
  }
  return sum;
}

double cauchy_binet_det(const Mat& a, const Mat& dv) {
  return MinorTable(a, Mat::Zero(a.rows(), a.cols()), dv).det();
}

Vec cauchy_h_from_parts(const Mat& a, const Mat& da, const Vec& y, const Mat& dv, const Vec& grad_rho) {
  const MinorTable t(a, da, dv);
  const int n = t.n();
  const int m = t.m();
  if (n == 2) {
    double h = 0.0;
    for (const auto& s : increasing_tuples(m, 2)) h += t.Q(s[0], s[1]) * t.g(s[0], s[1]);
    const Eigen::Vector2d gr = grad_rho.head<2>();
    for (int i = 0; i < m; ++i) {
      if (y[i] != 0.0) h += y[i] * det2(gr, dv.row(i).transpose());
    }
    return Vec::Constant(1, h);
  }
  if (n == 3) {
    Eigen::Vector3d h = Eigen::Vector3d::Zero();
    for (const auto& s : increasing_tuples(m, 2)) {
      const double q = t.Q(s[0], s[1]);
      if (q != 0.0) h += q * t.G(s[0], s[1]);
    }
    const Eigen::Vector3d gr = grad_rho.head<3>();
    for (int i = 0; i < m; ++i) {
      if (y[i] != 0.0) h += y[i] * gr.cross(Eigen::Vector3d(dv.row(i).transpose()));
    }
    return h;
  }
  throw Error(ErrorKind::InvalidParams, "h is defined for n = 2 or 3");
}

double det_dphi(const FlowCandidate& c, const Vec& z, double t) {
  return cauchy_binet_det(c.A->eval(t), c.v->grad(z));
}

double det_dphi_rate(const FlowCandidate& c, const Vec& z, double t) {
  const TimeSample s = c.A->sample(t);
  return MinorTable(s.a, s.da, c.v->grad(z)).det_rate();
}

Vec cauchy_h(const FlowCandidate& c, const Vec& z, double t) {
  const TimeSample s = c.A->sample(t);
  return cauchy_h_from_parts(s.a, s.da, s.y, c.v->grad(z), c.rho->grad(z));
}

std::vector<Vec> midpoint_grid(const Box& box, int per_axis) {
  const int n = box.dim();
  std::vector<Vec> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vec z(n);
    for (int a = 0; a < n; ++a) {
      z[a] = box.lo[a] + (idx[static_cast<std::size_t>(a)] + 0.5) / per_axis * (box.hi[a] - box.lo[a]);
    }
    out.push_back(z);
    int a = n - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == per_axis) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  return out;
}

std::vector<double> midpoint_times(const Window& w, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(w.lo + (k + 0.5) / count * w.length());
  return out;
}

InvariantReport verify_candidate(const FlowCandidate& c, const SampleGrid& grid, const Tolerances& tol) {
  c.validate();
  if (grid.points_per_axis < 1 || grid.times < 1) throw Error(ErrorKind::InvalidParams, "empty grid");
  const std::vector<Vec> points = grid.points ? *grid.points : midpoint_grid(c.domain_hint, grid.points_per_axis);
  const std::vector<double> times = grid.time_values ? *grid.time_values : midpoint_times(c.t_window, grid.times);
  if (times.size() < 3) throw Error(ErrorKind::InvalidParams, "verification needs at least 3 times");
  if (points.size() < 8) throw Error(ErrorKind::InvalidParams, "verification needs at least 8 label points");
  for (const Vec& z : points) {
    if (!c.domain_hint.contains(z)) {
      std::string where;
      for (Eigen::Index i = 0; i < z.size(); ++i) where += (i ? ", " : "") + std::to_string(z[i]);
      throw Error(ErrorKind::GridOutsideDomain, c.family_id + ": sample (" + where + ") outside the domain hint");
    }
  }

  // Spatial data depends only on z, time data only on t: evaluate each once.
  struct SpatialData {
    Mat dv;
    Vec grad_rho;
  };
  struct TimeData {
    TimeSample now;
    Vec y_minus, y_plus;
    Mat a_minus, a_plus, da_minus, da_plus;
  };
  std::vector<SpatialData> space(points.size());
  std::vector<TimeData> time(times.size());

  const std::size_t jobs = points.size() + times.size();
  unsigned workers = grid.threads > 0 ? static_cast<unsigned>(grid.threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(jobs));
  std::vector<std::exception_ptr> failures(workers);
  auto run = [&](unsigned w) {
    try {
      for (std::size_t k = w; k < jobs; k += workers) {
        if (k < points.size()) {
          space[k] = {c.v->grad(points[k]), c.rho->grad(points[k])};
        } else {
          const double t = times[k - points.size()];
          TimeData& d = time[k - points.size()];
          d.now = c.A->sample(t);
          const TimeSample lo = c.A->sample(t - tol.fd_step);
          const TimeSample hi = c.A->sample(t + tol.fd_step);
          d.a_minus = lo.a;
          d.da_minus = lo.da;
          d.y_minus = lo.y;
          d.a_plus = hi.a;
          d.da_plus = hi.da;
          d.y_plus = hi.y;
        }
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& th : pool) th.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  InvariantReport rep;
  rep.family_id = c.family_id;
  rep.tol = tol;
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  std::vector<bool> degenerate(points.size(), false);
  for (std::size_t iz = 0; iz < points.size(); ++iz) {
    const SpatialData& s = space[iz];
    for (std::size_t it = 0; it < times.size(); ++it) {
      const TimeData& d = time[it];
      SampleRecord r;
      r.z = points[iz];
      r.t = times[it];
      const MinorTable table(d.now.a, d.now.da, s.dv);
      r.det = table.det();
      r.det_rate = table.det_rate();
      r.h = cauchy_h_from_parts(d.now.a, d.now.da, d.now.y, s.dv, s.grad_rho);
      const Vec h_lo = cauchy_h_from_parts(d.a_minus, d.da_minus, d.y_minus, s.dv, s.grad_rho);
      const Vec h_hi = cauchy_h_from_parts(d.a_plus, d.da_plus, d.y_plus, s.dv, s.grad_rho);
      r.h_rate = (h_hi - h_lo) / (2.0 * tol.fd_step);
      const double ad = std::abs(r.det);
      rep.min_abs_det = std::min(rep.min_abs_det, ad);
      if (!(ad > tol.nondegeneracy)) degenerate[iz] = true;
      const double dr = std::abs(r.det_rate);
      const double hr = r.h_rate.cwiseAbs().maxCoeff();
      rep.max_det_residual = std::isnan(dr) ? dr : std::max(rep.max_det_residual, dr);
      rep.max_h_residual = std::isnan(hr) ? hr : std::max(rep.max_h_residual, hr);
      rep.samples.push_back(std::move(r));
    }
  }
  for (std::size_t iz = 0; iz < points.size(); ++iz) {
    if (degenerate[iz]) rep.degenerate_points.push_back(points[iz]);
  }
  rep.verdict.det_nonzero = rep.min_abs_det > tol.nondegeneracy;
  rep.verdict.det_constant = rep.max_det_residual <= tol.det;
  rep.verdict.h_constant = rep.max_h_residual <= tol.h;
  return rep;
}

nlohmann::json InvariantReport::to_json(bool with_samples) const {
  nlohmann::json j = {
      {"family_id", family_id},
      {"verdict",
       {{"pass", pass()},
        {"det_nonzero", verdict.det_nonzero},
        {"det_constant", verdict.det_constant},
        {"h_constant", verdict.h_constant},
        {"density_time_independent", true}}},
      {"tolerances",
       {{"det", tol.det}, {"h", tol.h}, {"nondegeneracy", tol.nondegeneracy}, {"fd_step", tol.fd_step}}},
      {"min_abs_det", min_abs_det},
      {"max_det_residual", max_det_residual},
      {"max_h_residual", max_h_residual},
      {"sample_count", samples.size()},
  };
  auto bad = nlohmann::json::array();
  for (const Vec& z : degenerate_points) bad.push_back(vec_json(z));
  j["degenerate_points"] = bad;
  if (with_samples) {
    auto rows = nlohmann::json::array();
    for (const auto& s : samples) {
      rows.push_back({{"z", vec_json(s.z)},
                      {"t", s.t},
                      {"det", s.det},
                      {"det_rate", s.det_rate},
                      {"h", vec_json(s.h)},
                      {"h_rate", vec_json(s.h_rate)}});
    }
    j["samples"] = rows;
  }
  return j;
}

double anti_cr_residual(const SpatialFunction& f, const SpatialFunction& g, std::span<const Vec> points) {
  double worst = 0.0;
  for (const Vec& z : points) {
    const Vec df = f.gradient(z);
    const Vec dg = g.gradient(z);
    worst = std::max(worst, std::abs(df[0] + dg[1]) + std::abs(df[1] - dg[0]));
  }
  return worst;
}

double check_anti_cr(const SpatialBasis& v, std::span<const Vec> points) {
  const ConstraintClass cls = v.constraint_class();
  if (cls != ConstraintClass::AntiCR2D && cls != ConstraintClass::AntiCR3D) {
    throw Error(ErrorKind::ConstraintClassMismatch,
                "anti-CR check needs an anti-CR basis, got " + std::string(to_string(cls)));
  }
  if (!v.anti_cr_pair()) throw Error(ErrorKind::ConstraintClassMismatch, "basis has no identified anti-CR pair");
  const auto [i, j] = *v.anti_cr_pair();
  return anti_cr_residual(v.component(i), v.component(j), points);
}

}  // namespace boussinesq
