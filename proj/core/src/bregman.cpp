#include "mixlink/bregman.hpp"

namespace mixlink {

namespace {

constexpr double kGradStep = 1e-6;

}  // namespace

Vec generator_gradient(const BregmanGenerator& gen, const ReducedProb& s) {
    if (gen.gradient) return gen.gradient(s);
    Vec g(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) {
        auto slice = [&](double v) {
            Vec e = s.entries();
            e[i] = v;
            return gen.phi(ReducedProb(e));
        };
        g[i] = central_diff(slice, s[i], kGradStep);
    }
    return g;
}

double bregman_divergence(const BregmanGenerator& gen, const ReducedProb& s,
                          const ReducedProb& s0) {
    if (s.dim() != s0.dim()) throw validation_error("bregman_divergence: dimension mismatch");
    Vec g0 = generator_gradient(gen, s0);
    double d = gen.phi(s) - gen.phi(s0);
    for (std::size_t i = 0; i < s.dim(); ++i) d -= (s[i] - s0[i]) * g0[i];
    return d;
}

PairLoss blf_from_proper_loss(const ProperLossSpec& loss) {
    if (!loss.is_strictly_proper)
        throw validation_error("Bregman loss needs a strictly proper generator");
    auto risk = loss.bayes_risk;
    BregmanGenerator gen;
    gen.phi = [risk](const ReducedProb& s) { return -risk(lift(s)); };
    // closed-form gradients where the generator is known, so vertex
    // reconstruction is not limited by finite-difference noise
    if (loss.name == "log") {
        gen.gradient = [](const ReducedProb& s) {
            ProbVector full = lift(s);
            double last = full[full.n() - 1];
            Vec g(s.dim());
            for (std::size_t i = 0; i < s.dim(); ++i)
                g[i] = std::log(s[i]) - std::log(last);
            return g;
        };
    } else if (loss.name == "square_vector") {
        gen.gradient = [](const ReducedProb& s) {
            ProbVector full = lift(s);
            double last = full[full.n() - 1];
            Vec g(s.dim());
            for (std::size_t i = 0; i < s.dim(); ++i) g[i] = 2.0 * s[i] - 2.0 * last;
            return g;
        };
    } else if (loss.name == "square_scalar") {
        gen.gradient = [](const ReducedProb& s) { return Vec{2.0 * s[0] - 1.0}; };
    }
    PairLoss pair;
    pair.name = "blf(" + loss.name + ")";
    pair.n = loss.n;
    pair.eval = [gen](const ProbVector& y, const ProbVector& v) {
        return bregman_divergence(gen, project(y), project(v));
    };
    return pair;
}

double kl_loss(const ProbVector& y, const ProbVector& v) {
    if (y.n() != v.n()) throw validation_error("kl_loss: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < y.n(); ++i) {
        if (y[i] <= 0.0) continue;
        if (v[i] <= 0.0) return kInf;
        s += y[i] * std::log(y[i] / v[i]);
    }
    return s;
}

PairLoss kl_pair_loss(int n) {
    PairLoss pair;
    pair.name = "kl";
    pair.n = n;
    pair.eval = [](const ProbVector& y, const ProbVector& v) { return kl_loss(y, v); };
    return pair;
}

GridReport check_pair_mixability_condition(const PairLoss& loss, double beta,
                                           double c_beta, double grid_step, double tol) {
    if (loss.n != 2) throw validation_error("pair mixability condition is binary only");
    if (!(beta > 0.0)) throw validation_error("beta must be positive");
    if (!(c_beta >= 1.0)) throw validation_error("c(beta) must be >= 1");
    constexpr double kMargin = 1e-3;
    constexpr double kStep = 1e-5;
    std::vector<double> ys, vs;
    for (double t = kMargin; t < 1.0 - kMargin + 0.5 * grid_step; t += grid_step) {
        ys.push_back(std::min(t, 1.0 - kMargin));
        vs.push_back(std::min(t, 1.0 - kMargin));
    }
    GridReport r;
    r.grid = ys;
    r.slack_lower.assign(ys.size(), kInf);
    auto eval = loss.eval;
    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
        for (double v1 : vs) {
            ProbVector pv1 = binary_prob(v1);
            for (double v2 : vs) {
                ProbVector pv2 = binary_prob(v2);
                auto g = [&](double yt) {
                    ProbVector y = binary_prob(yt);
                    return (beta / c_beta) * eval(y, pv1) - beta * eval(y, pv2);
                };
                double d1 = central_diff(g, ys[yi], kStep);
                double d2 = second_diff(g, ys[yi], kStep);
                r.slack_lower[yi] = std::min(r.slack_lower[yi], d2 + d1 * d1);
            }
        }
    }
    r.slack_upper = r.slack_lower;
    r.min_slack = kInf;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        if (r.slack_lower[i] < r.min_slack) r.min_slack = r.slack_lower[i];
        if (r.slack_lower[i] < -tol && !r.witness) r.witness = r.grid[i];
    }
    r.verdict = r.min_slack >= -tol;
    return r;
}

bool check_blf_mixability(const PairLoss& loss, double beta, double grid_step, double tol) {
    if (loss.n != 2) throw validation_error("vertex mixability test is binary only");
    ProbVector e1({1.0, 0.0});
    ProbVector e2({0.0, 1.0});
    auto eval = loss.eval;
    auto l1 = [eval, e1](double t) { return eval(e1, binary_prob(t)); };
    auto l2 = [eval, e2](double t) { return eval(e2, binary_prob(t)); };
    return curve_mixability(l1, l2, beta, grid_step, tol);
}

}  // namespace mixlink
