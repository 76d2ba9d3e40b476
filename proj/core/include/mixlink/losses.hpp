#pragma once

#include <optional>
#include <string>

#include "mixlink/prob.hpp"

namespace mixlink {

// A named proper class-probability-estimation loss. The weight function is the
// negative second derivative of the binary conditional Bayes risk and is only
// populated for strictly proper binary losses.
struct ProperLossSpec {
    std::string name;
    int n = 2;
    std::function<Vec(const ProbVector&)> partial_loss;
    std::function<double(double)> weight;  // binary only, domain (0,1)
    std::function<double(const ProbVector&)> bayes_risk;
    bool is_fair = false;
    bool is_strictly_proper = false;
    // Exact mixability constant when known in closed form.
    std::optional<double> mixability_override;
};

// name in {log, square_vector, square_scalar, boosting, absolute, zero_one};
// square_scalar and boosting require n == 2.
ProperLossSpec catalog_loss(const std::string& name, int n);

// p' . partial_loss(q); +inf-aware with the 0 * inf = 0 convention.
double conditional_risk(const ProperLossSpec& loss, const ProbVector& p, const ProbVector& q);

// E_beta(x)_i = exp(-beta x_i) and its inverse.
Vec exp_transform(const Vec& x, double beta);
Vec exp_inverse(const Vec& z, double beta);

// inf over the interior grid of w_log / w_loss, step 1e-3.
double grid_mixability_estimate(const ProperLossSpec& loss, double step = 1e-3);

// Analytic override when available, otherwise the grid estimate.
double mixability_constant(const ProperLossSpec& loss);

// Loss scaled by lambda (weight and mixability rescale accordingly).
ProperLossSpec scale_loss(const ProperLossSpec& loss, double lambda);

// Scaled so the weight function equals 1 at p_tilde = 1/2.
ProperLossSpec normalize_loss(const ProperLossSpec& loss);

inline double w_log(double pt) { return 1.0 / (pt * (1.0 - pt)); }

}  // namespace mixlink
