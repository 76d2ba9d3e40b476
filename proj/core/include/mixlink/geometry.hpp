#pragma once

#include "mixlink/losses.hpp"

namespace mixlink {

// All exp-transformed loss vectors z = exp(-beta l(p)) over the barycentric
// grid of resolution m (+inf partial losses map to z_i = 0 and are kept).
struct ExpPredictionCloud {
    double beta = 1.0;
    int resolution = 0;
    std::vector<ProbVector> probs;
    std::vector<Vec> points;

    std::string to_csv() const;  // columns: p_1..p_n,z_1..z_n
};

ExpPredictionCloud build_cloud(const ProperLossSpec& loss, double beta, int m);

// Midpoint of two cloud points marched along +1_n; escape means the ray
// leaves the convex hull of the cloud further than tol from the loss surface.
struct RayWitness {
    Vec a, b, c;
    Vec exit_point;
    double exit_travel = 0.0;
    double max_travel = 0.0;   // travel budget until the ray leaves [0,1]^n
    double surface_distance = 0.0;
    bool escape = false;

    std::string to_csv() const;  // columns: a_i,b_i,c_i per coordinate, escape
};

// Does the northeast boundary of co(cloud) lie on the cloud itself? Sampled
// over seeded midpoints; returns the first failing ray, if any.
struct BoundaryCheck {
    bool holds = true;
    std::optional<RayWitness> witness;
};
BoundaryCheck check_ne_boundary_condition(const ProperLossSpec& loss,
                                          const ExpPredictionCloud& cloud,
                                          int samples = 400, double tol = 1e-3,
                                          std::uint64_t seed = 1);

// Randomized search for an escaping ray; none when the boundary condition holds.
std::optional<RayWitness> ray_escape_witness(const ProperLossSpec& loss,
                                             const ExpPredictionCloud& cloud,
                                             int samples = 2000, double tol = 1e-3,
                                             std::uint64_t seed = 1);

// Support value of the exp-prediction set: -max over cloud points of p'.z.
double gamma_p(const ExpPredictionCloud& cloud, const ProbVector& p);

// Finitely many supporting hyperplanes of the exp-super-prediction set with
// normals drawn from the epsilon-interior simplex grid (optionally augmented
// with the exact supporting normal of each interior cloud point).
struct SurrogateModel {
    double beta = 1.0;
    double epsilon = 0.05;
    int resolution = 0;
    std::vector<ProbVector> normals;
    Vec support;               // support[i] = -gamma for normals[i]
    ExpPredictionCloud cloud;
    double duality_gap_tol = 1e-7;
};

SurrogateModel build_surrogate(const ProperLossSpec& loss, double beta, double epsilon,
                               int m, bool augment_tangents = true);

// argmin over the discretized feasible set of p' . (-1/beta) log x, solved by
// a log-barrier interior-point method with a duality-gap certificate.
struct SurrogateSolution {
    Vec loss_vector;
    Vec x;
    double duality_gap = 0.0;
    int iterations = 0;
};
SurrogateSolution surrogate_loss(const SurrogateModel& model, const ProbVector& p);

// Membership in the region where the surrogate agrees with the loss:
// d_i = p_i exp(beta l_i(p)), requires min_i d_i / sum_j d_j > epsilon.
bool in_S_epsilon(const ProperLossSpec& loss, double beta, double epsilon,
                  const ProbVector& p);

}  // namespace mixlink
