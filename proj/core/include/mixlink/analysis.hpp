#pragma once

#include "mixlink/links.hpp"

namespace mixlink {

// Result of a per-grid-point inequality check. Slack >= 0 means satisfied.
struct GridReport {
    std::vector<double> grid;
    std::vector<double> slack_lower;
    std::vector<double> slack_upper;
    bool verdict = false;
    std::optional<double> witness;     // first violating grid point
    bool necessary_only = false;       // true verdict is inconclusive
    double scale_used = 1.0;           // normalization applied internally
    double min_slack = 0.0;

    std::string to_csv() const;        // columns: p_tilde,slack_lower,slack_upper
};

// Exact characterization of alpha-exp-concavity of the binary composite
// loss ell o psi^{-1}:
//   -1/pt + a w pt  <=  w'/w - psi''/psi'  <=  1/(1-pt) - a w (1-pt).
GridReport check_composite_exp_concavity(const ProperLossSpec& loss, const LinkFunction& link,
                                         double alpha, double tol = 1e-8);

// Necessary-only weight envelope for a w(1/2)=1 normalized loss under an
// arbitrary link (normalization applied internally):
//   psi'/(pt (2 psi'(1/2) - a dpsi))  <=>  w  <=>  psi'/((1-pt)(2 psi'(1/2) + a dpsi))
// with <= for pt >= 1/2 and >= for pt <= 1/2, dpsi = psi(pt) - psi(1/2).
GridReport check_weight_envelope(const ProperLossSpec& loss, const LinkFunction& link,
                                 double alpha, double tol = 1e-8);

// The identity-link specialization of the envelope above.
GridReport check_identity_weight_envelope(const ProperLossSpec& loss, double alpha,
                                          double tol = 1e-8);

// Exact characterization under the canonical link, on the unnormalized weight:
//   w <= 1/(a pt^2) and w <= 1/(a (1-pt)^2).
GridReport check_canonical_exp_concavity(const ProperLossSpec& loss, double alpha,
                                         double tol = 1e-8);

// Sufficient integral condition for alpha-exp-concavity of a normalized
// binary proper loss, driven by generators a on (0,1/2] and b on [1/2,1).
// Checks the two inequality chains and that the reconstructed weight
//   w = 1/(pt (2 - int_pt^{1/2} a))  and  w = 1/((1-pt)(2 - int_{1/2}^pt b))
// matches the loss's normalized weight within 1e-6.
struct SufficientConditionReport {
    GridReport inequalities;
    bool reconstruction_ok = false;
    double reconstruction_max_err = 0.0;
    bool verdict = false;
};
SufficientConditionReport check_sufficient_integral_condition(
    const ProperLossSpec& loss, const std::function<double(double)>& a,
    const std::function<double(double)>& b, double alpha, double tol = 1e-8);

// Generators recovered from the loss's own normalized weight through the
// integral representation (numeric differentiation); reconstruction is then
// exact and the inequality chains carry the whole verdict.
std::pair<std::function<double(double)>, std::function<double(double)>>
integral_condition_generators(const ProperLossSpec& loss);

// Closed-form lower envelopes (Beesack-type) whose pointwise dominance by the
// generators a, b implies the integral lower condition above.
std::pair<std::function<double(double)>, std::function<double(double)>>
beesack_envelope(double alpha);

// Black-box midpoint-concavity test of v -> exp(-alpha l_y(v)). Binary
// composites are tested over all grid pairs; n = 3 losses over seeded random
// segment samples in the simplex interior.
GridReport numeric_exp_concavity(const CompositeLoss& comp, double alpha,
                                 double grid_step = 1e-3, double tol = 1e-9,
                                 std::uint64_t seed = 1, int n3_samples = 10000);

// Midpoints of exp-curve pairs must stay dominated by the curve
// (northeast-boundary test via monotone inversion of z1).
GridReport numeric_mixability(const ProperLossSpec& loss, double beta,
                              double grid_step = 1e-3, double tol = 1e-9);

// Shared curve form of the mixability test, used by the pair-loss layer:
// the curve t -> (l1(t), l2(t)) for t in (0,1), l1 decreasing, l2 increasing.
bool curve_mixability(const std::function<double(double)>& l1,
                      const std::function<double(double)>& l2, double beta,
                      double grid_step = 1e-3, double tol = 1e-9);

}  // namespace mixlink
