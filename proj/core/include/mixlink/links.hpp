#pragma once

#include "mixlink/losses.hpp"

namespace mixlink {

// Strictly monotone reparameterization of the binary reduced simplex.
struct LinkFunction {
    std::string name;
    std::function<double(double)> forward;            // (0,1) -> R
    std::function<double(double)> derivative;
    std::function<double(double)> second_derivative;
    bool increasing = true;
    double v_lo = 0.0;  // range endpoints (evaluated near the boundary)
    double v_hi = 1.0;
};

struct link_range_error : validation_error {
    link_range_error(const std::string& msg, double nearest_endpoint)
        : validation_error(msg), nearest(nearest_endpoint) {}
    double nearest;
};

struct CompositeLoss {
    ProperLossSpec base;
    LinkFunction link;
};

LinkFunction identity_link();

// forward(pt) = integral of the weight function from 0 (or from 1e-6 when the
// weight is non-integrable at 0, in which case the map is anchored there).
LinkFunction canonical_link(const ProperLossSpec& loss);

// forward(pt) = (w_log(1/2)/w(1/2)) * integral_0^pt w(t)/w_log(t) dt.
// Turns a genuinely beta-mixable loss into a beta-exp-concave composite.
LinkFunction exp_concavifying_link(const ProperLossSpec& loss);

// forward(pt) = exp(-beta l1(pt)) - exp(-beta l2(pt)); requires
// beta <= mixability_constant(loss) + 1e-9.
LinkFunction geometric_link(const ProperLossSpec& loss, double beta);

// Bisection inverse to absolute tolerance 1e-12 in p_tilde.
double invert_link(const LinkFunction& link, double v);

// Partial loss of the composite at prediction v, class y in {1, 2}.
double composite_partial(const CompositeLoss& comp, int y, double v);

// Closed-form first and second derivatives of the composite partial with
// respect to v, evaluated at p_tilde, via the curvature ratio k = w / psi'.
std::pair<double, double> composite_derivatives(const CompositeLoss& comp, int y, double pt);

// k(pt) = w(pt) / psi'(pt) and its central-difference derivative.
struct CurvatureRatio {
    double value;
    double derivative;
};
CurvatureRatio curvature_ratio(const CompositeLoss& comp, double pt);

}  // namespace mixlink
