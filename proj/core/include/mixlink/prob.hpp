#pragma once

#include "mixlink/common.hpp"

namespace mixlink {

// Point of the n-simplex: non-negative entries summing to 1 within 1e-12.
class ProbVector {
  public:
    explicit ProbVector(Vec entries);
    std::size_t n() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const Vec& entries() const { return p_; }

  private:
    Vec p_;
};

// First n-1 coordinates of a ProbVector (the last one is implied).
class ReducedProb {
  public:
    explicit ReducedProb(Vec entries);
    std::size_t dim() const { return pt_.size(); }
    double operator[](std::size_t i) const { return pt_[i]; }
    const Vec& entries() const { return pt_; }

  private:
    Vec pt_;
};

ReducedProb project(const ProbVector& p);
ProbVector lift(const ReducedProb& pt);

// (p_tilde, 1 - p_tilde) for binary problems.
ProbVector binary_prob(double p_tilde);

}  // namespace mixlink
