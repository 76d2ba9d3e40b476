#include "mixlink/links.hpp"

#include <algorithm>

namespace mixlink {

namespace {

constexpr double kDomainEdge = 1e-12;
constexpr double kDiffStep = 1e-6;

double clamp_interior(double pt) {
    if (pt < kDomainEdge) return kDomainEdge;
    if (pt > 1.0 - kDomainEdge) return 1.0 - kDomainEdge;
    return pt;
}

// Numeric first/second derivatives for links defined only by their forward map.
void attach_numeric_derivatives(LinkFunction& link) {
    auto fwd = link.forward;
    link.derivative = [fwd](double pt) {
        double h = std::min({kDiffStep, 0.5 * pt, 0.5 * (1.0 - pt)});
        return central_diff(fwd, pt, h);
    };
    link.second_derivative = [fwd](double pt) {
        double h = std::min({1e-5, 0.5 * pt, 0.5 * (1.0 - pt)});
        return second_diff(fwd, pt, h);
    };
}

void attach_range(LinkFunction& link) {
    double a = link.forward(kDomainEdge);
    double b = link.forward(1.0 - kDomainEdge);
    link.increasing = b > a;
    link.v_lo = std::min(a, b);
    link.v_hi = std::max(a, b);
}

}  // namespace

LinkFunction identity_link() {
    LinkFunction link;
    link.name = "identity";
    link.forward = [](double pt) { return pt; };
    link.derivative = [](double) { return 1.0; };
    link.second_derivative = [](double) { return 0.0; };
    link.increasing = true;
    link.v_lo = kDomainEdge;
    link.v_hi = 1.0 - kDomainEdge;
    return link;
}

LinkFunction canonical_link(const ProperLossSpec& loss) {
    if (loss.n != 2 || !loss.is_strictly_proper || !loss.weight)
        throw validation_error("canonical link needs a binary strictly proper loss");
    auto w = loss.weight;

    // Decide whether the weight is integrable at 0 by probing geometric tails.
    double probe1 = integrate(w, 1e-9, 1e-6, 1e-12);
    double probe2 = integrate(w, 1e-12, 1e-9, 1e-12);
    bool divergent = !(probe2 < 0.75 * probe1 + 1e-9);
    double anchor = divergent ? 1e-6 : kDomainEdge;

    LinkFunction link;
    link.name = "canonical(" + loss.name + ")";
    link.forward = [w, anchor](double pt) {
        pt = clamp_interior(pt);
        if (pt >= anchor) return integrate(w, anchor, pt, 1e-10);
        return -integrate(w, pt, anchor, 1e-10);
    };
    link.derivative = w;
    link.second_derivative = [w](double pt) {
        double h = std::min({kDiffStep, 0.5 * pt, 0.5 * (1.0 - pt)});
        return central_diff(w, pt, h);
    };
    attach_range(link);
    return link;
}

LinkFunction exp_concavifying_link(const ProperLossSpec& loss) {
    if (loss.n != 2 || !loss.is_strictly_proper || !loss.weight)
        throw validation_error("exp-concavifying link needs a binary strictly proper loss");
    double beta = mixability_constant(loss);
    if (!(beta > 0.0)) throw validation_error("loss must have positive mixability constant");
    auto w = loss.weight;
    double scale = w_log(0.5) / w(0.5);
    // Integrate w / w_log from 0 in the variable u = sqrt(t); the substitution
    // removes the boundary singularity of heavy-tailed weights.
    auto integrand = [w](double u) {
        if (u <= 0.0) return 0.0;
        double t = u * u;
        return w(t) * t * (1.0 - t) * 2.0 * u;
    };

    LinkFunction link;
    link.name = "exp_concavifying(" + loss.name + ")";
    link.forward = [integrand, scale](double pt) {
        pt = clamp_interior(pt);
        return scale * integrate(integrand, 0.0, std::sqrt(pt), 1e-11);
    };
    link.derivative = [w, scale](double pt) {
        pt = clamp_interior(pt);
        return scale * w(pt) * pt * (1.0 - pt);
    };
    link.second_derivative = [w, scale](double pt) {
        auto d = [w, scale](double t) { return scale * w(t) * t * (1.0 - t); };
        double h = std::min({kDiffStep, 0.5 * pt, 0.5 * (1.0 - pt)});
        return central_diff(d, pt, h);
    };
    attach_range(link);
    return link;
}

LinkFunction geometric_link(const ProperLossSpec& loss, double beta) {
    if (loss.n != 2 || !loss.is_strictly_proper)
        throw validation_error("geometric link needs a binary strictly proper loss");
    if (!(beta > 0.0)) throw validation_error("beta must be positive");
    if (beta > mixability_constant(loss) + 1e-9)
        throw validation_error("beta exceeds the mixability constant of " + loss.name);
    auto partial = loss.partial_loss;

    LinkFunction link;
    link.name = "geometric(" + loss.name + "," + format_double(beta) + ")";
    link.forward = [partial, beta](double pt) {
        Vec l = partial(binary_prob(pt));
        return std::exp(-beta * l[0]) - std::exp(-beta * l[1]);
    };
    attach_numeric_derivatives(link);
    // range includes the boundary values (losses may be infinite there)
    double a = link.forward(0.0);
    double b = link.forward(1.0);
    link.increasing = b > a;
    link.v_lo = std::min(a, b);
    link.v_hi = std::max(a, b);
    return link;
}

double invert_link(const LinkFunction& link, double v) {
    double lo = link.v_lo;
    double hi = link.v_hi;
    if (v < lo - 1e-12 || v > hi + 1e-12) {
        double nearest = v < lo ? lo : hi;
        throw link_range_error("link value " + format_double(v) + " outside range [" +
                                   format_double(lo) + ", " + format_double(hi) + "]",
                               nearest);
    }
    double target = std::clamp(v, lo, hi);
    return solve_monotone(link.forward, target, kDomainEdge, 1.0 - kDomainEdge,
                          link.increasing, 1e-12);
}

double composite_partial(const CompositeLoss& comp, int y, double v) {
    if (y < 1 || y > comp.base.n) throw validation_error("class index out of range");
    double pt = invert_link(comp.link, v);
    return comp.base.partial_loss(binary_prob(pt))[static_cast<std::size_t>(y - 1)];
}

CurvatureRatio curvature_ratio(const CompositeLoss& comp, double pt) {
    auto w = comp.base.weight;
    auto dpsi = comp.link.derivative;
    auto k = [w, dpsi](double t) { return w(t) / dpsi(t); };
    double h = std::min({kDiffStep, 0.5 * pt, 0.5 * (1.0 - pt)});
    return CurvatureRatio{k(pt), central_diff(k, pt, h)};
}

std::pair<double, double> composite_derivatives(const CompositeLoss& comp, int y, double pt) {
    if (comp.base.n != 2 || !comp.base.weight)
        throw validation_error("composite derivatives are binary only");
    if (!(pt > 0.0 && pt < 1.0)) throw validation_error("p_tilde must be interior");
    if (y != 1 && y != 2) throw validation_error("class index out of range");
    CurvatureRatio k = curvature_ratio(comp, pt);
    double dpsi = comp.link.derivative(pt);
    if (y == 1)
        return {-(1.0 - pt) * k.value, (-(1.0 - pt) * k.derivative + k.value) / dpsi};
    return {pt * k.value, (pt * k.derivative + k.value) / dpsi};
}

}  // namespace mixlink
