// Copyright 2026 The genwass Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Finitely supported measures on R^d.
//
// A measure is a list of atoms (position, weight) stored column-wise: the
// positions form a dim x n matrix and the weights an n-vector. Instances are
// immutable once constructed. Coincident atoms are only merged by
// `normalized()` and by operations documented to merge, and coincidence is
// always exact floating-point equality of the coordinates.

#ifndef GENWASS_MEASURES_HPP_
#define GENWASS_MEASURES_HPP_

#include <Eigen/Dense>

#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace genwass {

using Index = Eigen::Index;
using Point = Eigen::VectorXd;

struct Atom {
  Point x;
  double w = 0.0;
};

namespace detail {

// Shared storage and validation for signed and unsigned measures.
class AtomStorage {
 public:
  AtomStorage() = default;
  AtomStorage(Eigen::MatrixXd positions, Eigen::VectorXd weights,
              bool allow_negative);

  int dim() const { return static_cast<int>(positions_.rows()); }
  Index size() const { return weights_.size(); }
  bool empty() const { return weights_.size() == 0; }

  const Eigen::MatrixXd& positions() const { return positions_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::MatrixXd::ConstColXpr position(Index i) const {
    return positions_.col(i);
  }
  double weight(Index i) const { return weights_(i); }

 protected:
  Eigen::MatrixXd positions_;
  Eigen::VectorXd weights_;
};

// Merges exactly coincident positions (first-occurrence order) and drops
// atoms whose merged weight is exactly zero.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> merge_atoms(
    const Eigen::MatrixXd& positions, const Eigen::VectorXd& weights);

}  // namespace detail

class DiscreteMeasure : public detail::AtomStorage {
 public:
  // Empty measure on R^dim.
  explicit DiscreteMeasure(int dim = 1);
  // Throws Error{kNegativeWeight | kNonFinite | kDimensionMismatch}.
  DiscreteMeasure(Eigen::MatrixXd positions, Eigen::VectorXd weights);
  DiscreteMeasure(int dim, const std::vector<Atom>& atoms);

  static DiscreteMeasure dirac(const Point& x, double w = 1.0);
  // Convenience for one-dimensional measures: {(x, w), ...}.
  static DiscreteMeasure on_line(
      std::initializer_list<std::pair<double, double>> atoms);

  DiscreteMeasure normalized() const;
  DiscreteMeasure scaled(double k) const;
  // Same atoms with replaced weights (must be nonnegative).
  DiscreteMeasure with_weights(Eigen::VectorXd weights) const;

  std::vector<Atom> atoms() const;
};

class SignedDiscreteMeasure : public detail::AtomStorage {
 public:
  explicit SignedDiscreteMeasure(int dim = 1);
  SignedDiscreteMeasure(Eigen::MatrixXd positions, Eigen::VectorXd weights);
  SignedDiscreteMeasure(int dim, const std::vector<Atom>& atoms);
  // Implicit: every measure is a signed measure.
  SignedDiscreteMeasure(const DiscreteMeasure& m);  // NOLINT

  SignedDiscreteMeasure normalized() const;
  SignedDiscreteMeasure scaled(double k) const;

  // Jordan decomposition after merging; supports are disjoint.
  DiscreteMeasure positive_part() const;
  DiscreteMeasure negative_part() const;
};

double total_mass(const DiscreteMeasure& m);
// Net signed mass (sum of weights).
double net_mass(const SignedDiscreteMeasure& m);
// |m| = |m+| + |m-| after merging coincident atoms.
double tv_norm(const SignedDiscreteMeasure& m);

// Concatenation of atoms (no merging).
DiscreteMeasure operator+(const DiscreteMeasure& a, const DiscreteMeasure& b);
SignedDiscreteMeasure operator+(const SignedDiscreteMeasure& a,
                                const SignedDiscreteMeasure& b);
SignedDiscreteMeasure operator-(const SignedDiscreteMeasure& a,
                                const SignedDiscreteMeasure& b);

using PointMap = std::function<Point(const Eigen::Ref<const Point>&)>;

// Image measure f#m with coincident images merged. Throws kNonFinite when f
// produces a non-finite coordinate.
DiscreteMeasure push_forward(const DiscreteMeasure& m, const PointMap& f);

// Pointwise order: a <= b iff at every position the merged weight of a does
// not exceed that of b. `rel_tol` absorbs rounding from arithmetic on
// weights (0 gives the exact relation).
bool sub_measure_check(const DiscreteMeasure& a, const DiscreteMeasure& b,
                       double rel_tol = 0.0);

// Exact equality after normalization.
bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b);

// Union of the supports of the given measures, first-occurrence order, and
// the merged weight of each measure on that union (one column per measure).
struct CommonSupport {
  Eigen::MatrixXd positions;
  Eigen::MatrixXd weights;
};
CommonSupport common_support(const std::vector<const detail::AtomStorage*>& ms);

// Positive part with the clipped negative mass reported.
struct ClippedMeasure {
  DiscreteMeasure measure;
  double defect = 0.0;
};
ClippedMeasure clip_negative(const SignedDiscreteMeasure& m);

std::string describe(const DiscreteMeasure& m);

}  // namespace genwass

#endif  // GENWASS_MEASURES_HPP_
