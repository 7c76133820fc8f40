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

#include "genwass/measures.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "genwass/error.hpp"

namespace genwass {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "parse error";
    case ErrorCode::kSchemaViolation: return "schema violation";
    case ErrorCode::kNegativeWeight: return "negative weight";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kUnequalMass: return "unequal mass";
    case ErrorCode::kInvalidParameter: return "invalid parameter";
    case ErrorCode::kPrecondition: return "precondition violated";
    case ErrorCode::kIntegrationFailure: return "integration failure";
    case ErrorCode::kSolverFailure: return "solver failure";
    case ErrorCode::kUnevaluable: return "unevaluable";
  }
  return "unknown";
}

namespace {

using Key = std::vector<double>;

Key key_of(const Eigen::MatrixXd& positions, Index i) {
  return Key(positions.col(i).data(),
             positions.col(i).data() + positions.rows());
}

Eigen::MatrixXd stack_atoms(int dim, const std::vector<Atom>& atoms) {
  Eigen::MatrixXd p(dim, static_cast<Index>(atoms.size()));
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].x.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "atom " + std::to_string(i) + " has dimension " +
                      std::to_string(atoms[i].x.size()) + ", expected " +
                      std::to_string(dim));
    }
    p.col(static_cast<Index>(i)) = atoms[i].x;
  }
  return p;
}

Eigen::VectorXd weights_of(const std::vector<Atom>& atoms) {
  Eigen::VectorXd w(static_cast<Index>(atoms.size()));
  for (size_t i = 0; i < atoms.size(); ++i) w(static_cast<Index>(i)) = atoms[i].w;
  return w;
}

}  // namespace

namespace detail {

AtomStorage::AtomStorage(Eigen::MatrixXd positions, Eigen::VectorXd weights,
                         bool allow_negative)
    : positions_(std::move(positions)), weights_(std::move(weights)) {
  if (positions_.rows() < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "dimension must be positive");
  }
  if (positions_.cols() != weights_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "position count does not match weight count");
  }
  if (!positions_.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "atom positions must be finite");
  }
  if (!weights_.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "atom weights must be finite");
  }
  if (!allow_negative) {
    for (Index i = 0; i < weights_.size(); ++i) {
      if (weights_(i) < 0.0) {
        throw Error(ErrorCode::kNegativeWeight,
                    "atom " + std::to_string(i) + " has negative weight");
      }
    }
  }
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> merge_atoms(
    const Eigen::MatrixXd& positions, const Eigen::VectorXd& weights) {
  std::map<Key, Index> slot;
  std::vector<Index> first;
  std::vector<double> sum;
  for (Index i = 0; i < weights.size(); ++i) {
    auto [it, inserted] =
        slot.emplace(key_of(positions, i), static_cast<Index>(first.size()));
    if (inserted) {
      first.push_back(i);
      sum.push_back(weights(i));
    } else {
      sum[static_cast<size_t>(it->second)] += weights(i);
    }
  }
  Index kept = 0;
  for (double s : sum) kept += (s != 0.0);
  Eigen::MatrixXd p(positions.rows(), kept);
  Eigen::VectorXd w(kept);
  Index k = 0;
  for (size_t j = 0; j < first.size(); ++j) {
    if (sum[j] == 0.0) continue;
    p.col(k) = positions.col(first[j]);
    w(k) = sum[j];
    ++k;
  }
  return {std::move(p), std::move(w)};
}

}  // namespace detail

// ---- DiscreteMeasure -------------------------------------------------------

DiscreteMeasure::DiscreteMeasure(int dim)
    : AtomStorage(Eigen::MatrixXd(dim, 0), Eigen::VectorXd(0), false) {}

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd positions,
                                 Eigen::VectorXd weights)
    : AtomStorage(std::move(positions), std::move(weights), false) {}

DiscreteMeasure::DiscreteMeasure(int dim, const std::vector<Atom>& atoms)
    : DiscreteMeasure(stack_atoms(dim, atoms), weights_of(atoms)) {}

DiscreteMeasure DiscreteMeasure::dirac(const Point& x, double w) {
  return DiscreteMeasure(Eigen::MatrixXd(x), Eigen::VectorXd::Constant(1, w));
}

DiscreteMeasure DiscreteMeasure::on_line(
    std::initializer_list<std::pair<double, double>> atoms) {
  Eigen::MatrixXd p(1, static_cast<Index>(atoms.size()));
  Eigen::VectorXd w(static_cast<Index>(atoms.size()));
  Index i = 0;
  for (const auto& [x, m] : atoms) {
    p(0, i) = x;
    w(i) = m;
    ++i;
  }
  return DiscreteMeasure(std::move(p), std::move(w));
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  auto [p, w] = detail::merge_atoms(positions_, weights_);
  return DiscreteMeasure(std::move(p), std::move(w));
}

DiscreteMeasure DiscreteMeasure::scaled(double k) const {
  if (!(k >= 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "scale factor must be >= 0");
  }
  return DiscreteMeasure(positions_, weights_ * k);
}

DiscreteMeasure DiscreteMeasure::with_weights(Eigen::VectorXd weights) const {
  return DiscreteMeasure(positions_, std::move(weights));
}

std::vector<Atom> DiscreteMeasure::atoms() const {
  std::vector<Atom> out;
  out.reserve(static_cast<size_t>(size()));
  for (Index i = 0; i < size(); ++i) out.push_back({position(i), weight(i)});
  return out;
}

// ---- SignedDiscreteMeasure -------------------------------------------------

SignedDiscreteMeasure::SignedDiscreteMeasure(int dim)
    : AtomStorage(Eigen::MatrixXd(dim, 0), Eigen::VectorXd(0), true) {}

SignedDiscreteMeasure::SignedDiscreteMeasure(Eigen::MatrixXd positions,
                                             Eigen::VectorXd weights)
    : AtomStorage(std::move(positions), std::move(weights), true) {}

SignedDiscreteMeasure::SignedDiscreteMeasure(int dim,
                                             const std::vector<Atom>& atoms)
    : SignedDiscreteMeasure(stack_atoms(dim, atoms), weights_of(atoms)) {}

SignedDiscreteMeasure::SignedDiscreteMeasure(const DiscreteMeasure& m)
    : AtomStorage(m.positions(), m.weights(), true) {}

SignedDiscreteMeasure SignedDiscreteMeasure::normalized() const {
  auto [p, w] = detail::merge_atoms(positions_, weights_);
  return SignedDiscreteMeasure(std::move(p), std::move(w));
}

SignedDiscreteMeasure SignedDiscreteMeasure::scaled(double k) const {
  return SignedDiscreteMeasure(positions_, weights_ * k);
}

DiscreteMeasure SignedDiscreteMeasure::positive_part() const {
  const SignedDiscreteMeasure n = normalized();
  return DiscreteMeasure(n.positions(), n.weights().cwiseMax(0.0)).normalized();
}

DiscreteMeasure SignedDiscreteMeasure::negative_part() const {
  const SignedDiscreteMeasure n = normalized();
  return DiscreteMeasure(n.positions(), (-n.weights()).cwiseMax(0.0))
      .normalized();
}

// ---- free functions --------------------------------------------------------

double total_mass(const DiscreteMeasure& m) { return m.weights().sum(); }

double net_mass(const SignedDiscreteMeasure& m) { return m.weights().sum(); }

double tv_norm(const SignedDiscreteMeasure& m) {
  return m.normalized().weights().cwiseAbs().sum();
}

namespace {

template <typename M>
M concat(const M& a, const M& b, double sign_b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot combine measures of dimension " +
                    std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
  Eigen::MatrixXd p(a.dim(), a.size() + b.size());
  p << a.positions(), b.positions();
  Eigen::VectorXd w(a.size() + b.size());
  w << a.weights(), sign_b * b.weights();
  return M(std::move(p), std::move(w));
}

}  // namespace

DiscreteMeasure operator+(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return concat(a, b, 1.0);
}

SignedDiscreteMeasure operator+(const SignedDiscreteMeasure& a,
                                const SignedDiscreteMeasure& b) {
  return concat(a, b, 1.0);
}

SignedDiscreteMeasure operator-(const SignedDiscreteMeasure& a,
                                const SignedDiscreteMeasure& b) {
  return concat(a, b, -1.0);
}

DiscreteMeasure push_forward(const DiscreteMeasure& m, const PointMap& f) {
  Eigen::MatrixXd p(m.dim(), m.size());
  for (Index i = 0; i < m.size(); ++i) {
    Point y = f(m.position(i));
    if (y.size() != m.dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "push-forward map changed the dimension");
    }
    if (!y.allFinite()) {
      throw Error(ErrorCode::kNonFinite,
                  "push-forward map produced a non-finite coordinate");
    }
    p.col(i) = y;
  }
  return DiscreteMeasure(std::move(p), m.weights()).normalized();
}

CommonSupport common_support(
    const std::vector<const detail::AtomStorage*>& ms) {
  std::map<Key, Index> slot;
  std::vector<Index> owner_measure, owner_atom;
  for (size_t k = 0; k < ms.size(); ++k) {
    for (Index i = 0; i < ms[k]->size(); ++i) {
      auto [it, inserted] = slot.emplace(key_of(ms[k]->positions(), i),
                                         static_cast<Index>(owner_atom.size()));
      if (inserted) {
        owner_measure.push_back(static_cast<Index>(k));
        owner_atom.push_back(i);
      }
    }
  }
  const int dim = ms.empty() ? 1 : ms.front()->dim();
  for (const auto* m : ms) {
    if (m->dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "measures live in different dimensions");
    }
  }
  CommonSupport out;
  const Index n = static_cast<Index>(owner_atom.size());
  out.positions.resize(dim, n);
  out.weights = Eigen::MatrixXd::Zero(n, static_cast<Index>(ms.size()));
  for (Index s = 0; s < n; ++s) {
    out.positions.col(s) =
        ms[static_cast<size_t>(owner_measure[static_cast<size_t>(s)])]
            ->positions()
            .col(owner_atom[static_cast<size_t>(s)]);
  }
  for (size_t k = 0; k < ms.size(); ++k) {
    for (Index i = 0; i < ms[k]->size(); ++i) {
      out.weights(slot.at(key_of(ms[k]->positions(), i)), static_cast<Index>(k)) +=
          ms[k]->weight(i);
    }
  }
  return out;
}

bool sub_measure_check(const DiscreteMeasure& a, const DiscreteMeasure& b,
                       double rel_tol) {
  if (a.dim() != b.dim()) return false;
  const CommonSupport s = common_support({&a, &b});
  const double scale = std::max(total_mass(a), total_mass(b));
  for (Index i = 0; i < s.weights.rows(); ++i) {
    if (s.weights(i, 0) > s.weights(i, 1) + rel_tol * scale) return false;
  }
  return true;
}

bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim() != b.dim()) return false;
  const CommonSupport s = common_support({&a, &b});
  return s.weights.col(0) == s.weights.col(1);
}

ClippedMeasure clip_negative(const SignedDiscreteMeasure& m) {
  const SignedDiscreteMeasure n = m.normalized();
  ClippedMeasure out{DiscreteMeasure(n.positions(), n.weights().cwiseMax(0.0))
                         .normalized(),
                     (-n.weights()).cwiseMax(0.0).sum()};
  return out;
}

std::string describe(const DiscreteMeasure& m) {
  std::ostringstream os;
  os << "{dim=" << m.dim() << ", atoms=[";
  for (Index i = 0; i < m.size(); ++i) {
    if (i) os << ", ";
    os << "(" << m.position(i).transpose() << "; " << m.weight(i) << ")";
  }
  os << "]}";
  return os.str();
}

}  // namespace genwass
