#include "mvip/space.hpp"

#include <cmath>
#include <string>

#include "mvip/errors.hpp"

namespace mvip {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BacktrackExhausted: return "BacktrackExhausted";
    case ErrorKind::NonFiniteIterate: return "NonFiniteIterate";
    case ErrorKind::InsufficientTrace: return "InsufficientTrace";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

InnerProductSpace::InnerProductSpace(Vector weights) : weights_(std::move(weights)) {
  if (weights_.size() < 1)
    throw Error(ErrorKind::InvalidArgument, "inner product space needs dimension >= 1");
  for (Index i = 0; i < weights_.size(); ++i) {
    if (!(std::isfinite(weights_[i]) && weights_[i] > 0.0))
      throw Error(ErrorKind::InvalidArgument,
                  "inner product weight " + std::to_string(i) + " is not strictly positive");
  }
  unit_ = (weights_.array() == 1.0).all();
}

InnerProductSpace InnerProductSpace::euclidean(Index dimension) {
  return InnerProductSpace(Vector::Ones(dimension));
}

InnerProductSpace InnerProductSpace::trapezoidal(Index nodes) {
  if (nodes < 2)
    throw Error(ErrorKind::InvalidArgument, "trapezoidal rule needs at least two nodes");
  const double h = 1.0 / static_cast<double>(nodes - 1);
  Vector w = Vector::Constant(nodes, h);
  w[0] = 0.5 * h;
  w[nodes - 1] = 0.5 * h;
  return InnerProductSpace(std::move(w));
}

double InnerProductSpace::dot(const Vector& u, const Vector& v) const {
  if (unit_) return u.dot(v);
  return (weights_.array() * u.array() * v.array()).sum();
}

double InnerProductSpace::norm(const Vector& u) const { return std::sqrt(squared_norm(u)); }

void InnerProductSpace::require_member(const Vector& u, const char* what) const {
  if (u.size() != dimension())
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " has length " + std::to_string(u.size()) +
                    ", space dimension is " + std::to_string(dimension()));
}

bool all_finite(const Vector& u) { return u.allFinite(); }

}  // namespace mvip
