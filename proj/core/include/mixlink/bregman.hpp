#pragma once

#include "mixlink/analysis.hpp"

namespace mixlink {

// Convex generator over the reduced simplex with an optional closed-form
// gradient (central differences otherwise, step 1e-6).
struct BregmanGenerator {
    std::function<double(const ReducedProb&)> phi;
    std::function<Vec(const ReducedProb&)> gradient;  // may be empty
};

Vec generator_gradient(const BregmanGenerator& gen, const ReducedProb& s);

// B_phi(s, s0) = phi(s) - phi(s0) - (s - s0)' . Dphi(s0).
double bregman_divergence(const BregmanGenerator& gen, const ReducedProb& s,
                          const ReducedProb& s0);

// Pairwise loss over (outcome distribution, predicted distribution).
struct PairLoss {
    std::string name;
    int n = 2;
    std::function<double(const ProbVector&, const ProbVector&)> eval;
};

// Bregman loss generated by phi = -BayesRisk of a strictly proper loss;
// recovers the partial losses at simplex vertices when the loss is fair.
PairLoss blf_from_proper_loss(const ProperLossSpec& loss);

double kl_loss(const ProbVector& y, const ProbVector& v);
PairLoss kl_pair_loss(int n);

// Pointwise mixability condition for pair losses over distribution outcomes:
// with g(yt) = (beta/c) l(y, v1) - beta l(y, v2), require g'' + (g')^2 >= 0
// in yt (binary; numeric differences, step 1e-5).
GridReport check_pair_mixability_condition(const PairLoss& loss, double beta,
                                           double c_beta, double grid_step = 0.05,
                                           double tol = 1e-6);

// Vertex-outcome mixability of a binary pair loss via the curve test on
// t -> (l(e1, t), l(e2, t)).
bool check_blf_mixability(const PairLoss& loss, double beta, double grid_step = 1e-3,
                          double tol = 1e-9);

}  // namespace mixlink
