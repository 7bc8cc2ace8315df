#pragma once

// Minors, det(d phi), the Cauchy invariant h and grid verification of a
// separated flow map.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boussinesq/candidate.hpp"
#include "json.hpp"

namespace boussinesq {

/// Minors of A and of grad v at one (z, t), plus Q and G.
///
/// Index lists need not be sorted: minors are determinants of the selected
/// columns of A (or rows of grad v) in the given order, so they are
/// antisymmetric by construction.
class MinorTable {
 public:
  MinorTable(Mat a, Mat da, Mat dv);

  int n() const { return static_cast<int>(a_.rows()); }
  int m() const { return static_cast<int>(a_.cols()); }

  double p(std::span<const int> cols) const;
  double g(std::span<const int> rows) const;
  double p(int i, int j) const;
  double g(int i, int j) const;
  double p(int i, int j, int k) const;
  double g(int i, int j, int k) const;
  /// <A_i', A_j> - <A_j', A_i> over columns of A.
  double Q(int i, int j) const;
  /// grad v^i x grad v^j (3D only).
  Eigen::Vector3d G(int i, int j) const;

  /// Sum over increasing index tuples of p g.
  double det() const;
  /// Same sum with p replaced by its time derivative.
  double det_rate() const;

 private:
  Mat a_;
  Mat da_;
  Mat dv_;
};

/// All increasing k-tuples of {0, ..., m-1}.
std::vector<std::vector<int>> increasing_tuples(int m, int k);

/// det(A dv) by Cauchy-Binet.
double cauchy_binet_det(const Mat& a, const Mat& dv);

/// h from its ingredients: size 1 in 2D, 3 in 3D.
Vec cauchy_h_from_parts(const Mat& a, const Mat& da, const Vec& y, const Mat& dv, const Vec& grad_rho);

double det_dphi(const FlowCandidate& c, const Vec& z, double t);
double det_dphi_rate(const FlowCandidate& c, const Vec& z, double t);
Vec cauchy_h(const FlowCandidate& c, const Vec& z, double t);

struct Tolerances {
  double det = 1e-8;
  double h = 1e-6;
  double nondegeneracy = 1e-6;
  /// Central difference step in t for the h residual.
  double fd_step = 1e-4;
};

struct SampleGrid {
  /// Points per label axis and number of times (interior midpoints).
  int points_per_axis = 5;
  int times = 7;
  /// Explicit samples replace the regular grid when set.
  std::optional<std::vector<Vec>> points;
  std::optional<std::vector<double>> time_values;
  /// Worker threads; 0 means hardware concurrency.
  int threads = 0;
};

struct SampleRecord {
  Vec z;
  double t = 0.0;
  double det = 0.0;
  double det_rate = 0.0;
  Vec h;
  Vec h_rate;
};

struct Verdict {
  bool det_nonzero = false;
  bool det_constant = false;
  bool h_constant = false;

  bool pass() const { return det_nonzero && det_constant && h_constant; }
};

struct InvariantReport {
  std::string family_id;
  Tolerances tol;
  std::vector<SampleRecord> samples;
  double min_abs_det = 0.0;
  double max_det_residual = 0.0;
  double max_h_residual = 0.0;
  /// Labels where |det| fell below the nondegeneracy tolerance.
  std::vector<Vec> degenerate_points;
  Verdict verdict;

  bool pass() const { return verdict.pass(); }
  nlohmann::json to_json(bool with_samples = true) const;
};

/// Regular label grid of interior cell midpoints of the box.
std::vector<Vec> midpoint_grid(const Box& box, int per_axis);
std::vector<double> midpoint_times(const Window& w, int count);

/// Throws GridOutsideDomain if an explicit point leaves the domain hint.
InvariantReport verify_candidate(const FlowCandidate& c, const SampleGrid& grid = {}, const Tolerances& tol = {});

/// Max over points of |f_1 + g_2| + |f_2 - g_1| for the pair (f, g), where
/// subscripts are derivatives along z1 and z2.
double anti_cr_residual(const SpatialFunction& f, const SpatialFunction& g, std::span<const Vec> points);
/// Throws ConstraintClassMismatch unless v is AntiCR2D or AntiCR3D with a
/// known pair.
double check_anti_cr(const SpatialBasis& v, std::span<const Vec> points);

}  // namespace boussinesq
