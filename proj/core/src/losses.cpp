#include "mixlink/losses.hpp"

#include <algorithm>

namespace mixlink {

namespace {

Vec log_partial(const ProbVector& p) {
    Vec out(p.n());
    for (std::size_t i = 0; i < p.n(); ++i)
        out[i] = p[i] > 0.0 ? -std::log(p[i]) : kInf;
    return out;
}

Vec square_vector_partial(const ProbVector& q) {
    Vec out(q.n());
    for (std::size_t i = 0; i < q.n(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < q.n(); ++j) {
            double d = (i == j ? 1.0 : 0.0) - q[j];
            s += d * d;
        }
        out[i] = s;
    }
    return out;
}

Vec absolute_partial(const ProbVector& q) {
    Vec out(q.n());
    for (std::size_t i = 0; i < q.n(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < q.n(); ++j)
            s += std::abs((i == j ? 1.0 : 0.0) - q[j]);
        out[i] = s;
    }
    return out;
}

Vec zero_one_partial(const ProbVector& q) {
    double best = *std::max_element(q.entries().begin(), q.entries().end());
    std::size_t ties = 0;
    for (std::size_t i = 0; i < q.n(); ++i)
        if (best - q[i] <= 1e-12) ++ties;
    // ties share the argmax (randomized tie break in expectation)
    Vec out(q.n());
    for (std::size_t i = 0; i < q.n(); ++i)
        out[i] = best - q[i] <= 1e-12 ? 1.0 - 1.0 / static_cast<double>(ties) : 1.0;
    return out;
}

}  // namespace

ProperLossSpec catalog_loss(const std::string& name, int n) {
    if (n < 2) throw validation_error("class count must be >= 2");
    ProperLossSpec spec;
    spec.name = name;
    spec.n = n;
    if (name == "log") {
        spec.partial_loss = log_partial;
        spec.bayes_risk = [](const ProbVector& p) {
            double s = 0.0;
            for (std::size_t i = 0; i < p.n(); ++i)
                if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
            return s;
        };
        if (n == 2) spec.weight = [](double pt) { return w_log(pt); };
        spec.is_fair = true;
        spec.is_strictly_proper = true;
        spec.mixability_override = 1.0;
    } else if (name == "square_vector") {
        spec.partial_loss = square_vector_partial;
        spec.bayes_risk = [](const ProbVector& p) {
            double s = 1.0;
            for (std::size_t i = 0; i < p.n(); ++i) s -= p[i] * p[i];
            return s;
        };
        if (n == 2) spec.weight = [](double) { return 4.0; };
        spec.is_fair = true;
        spec.is_strictly_proper = true;
        spec.mixability_override = 1.0;
    } else if (name == "square_scalar") {
        if (n != 2) throw validation_error("square_scalar is binary only");
        spec.partial_loss = [](const ProbVector& p) {
            double pt = p[0];
            return Vec{(1.0 - pt) * (1.0 - pt), pt * pt};
        };
        spec.bayes_risk = [](const ProbVector& p) { return p[0] * (1.0 - p[0]); };
        spec.weight = [](double) { return 2.0; };
        spec.is_fair = true;
        spec.is_strictly_proper = true;
        spec.mixability_override = 2.0;
    } else if (name == "boosting") {
        if (n != 2) throw validation_error("boosting is binary only");
        spec.partial_loss = [](const ProbVector& p) {
            double pt = p[0];
            if (pt <= 0.0) return Vec{kInf, 0.0};
            if (pt >= 1.0) return Vec{0.0, kInf};
            return Vec{0.5 * std::sqrt((1.0 - pt) / pt), 0.5 * std::sqrt(pt / (1.0 - pt))};
        };
        spec.bayes_risk = [](const ProbVector& p) { return std::sqrt(p[0] * (1.0 - p[0])); };
        spec.weight = [](double pt) { return 0.25 / std::pow(pt * (1.0 - pt), 1.5); };
        spec.is_fair = true;
        spec.is_strictly_proper = true;
        spec.mixability_override = 2.0;
    } else if (name == "absolute") {
        spec.partial_loss = absolute_partial;
        spec.bayes_risk = [](const ProbVector& p) {
            // attained at the vertex of the most likely class
            double best = *std::max_element(p.entries().begin(), p.entries().end());
            return 2.0 * (1.0 - best);
        };
        spec.is_fair = true;
        spec.is_strictly_proper = false;
    } else if (name == "zero_one") {
        spec.partial_loss = zero_one_partial;
        spec.bayes_risk = [](const ProbVector& p) {
            double best = *std::max_element(p.entries().begin(), p.entries().end());
            return 1.0 - best;
        };
        spec.is_fair = true;
        spec.is_strictly_proper = false;
    } else {
        throw validation_error("unknown loss: " + name);
    }
    return spec;
}

double conditional_risk(const ProperLossSpec& loss, const ProbVector& p, const ProbVector& q) {
    if (p.n() != q.n() || static_cast<int>(p.n()) != loss.n)
        throw validation_error("conditional_risk: dimension mismatch");
    Vec l = loss.partial_loss(q);
    double s = 0.0;
    for (std::size_t i = 0; i < p.n(); ++i)
        if (p[i] > 0.0) s += p[i] * l[i];  // 0 * inf = 0
    return s;
}

Vec exp_transform(const Vec& x, double beta) {
    if (!(beta > 0.0)) throw validation_error("beta must be positive");
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = std::exp(-beta * x[i]);
    return z;
}

Vec exp_inverse(const Vec& z, double beta) {
    if (!(beta > 0.0)) throw validation_error("beta must be positive");
    Vec x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(z[i] > 0.0 && z[i] <= 1.0))
            throw validation_error("exp_inverse needs entries in (0, 1]");
        x[i] = -std::log(z[i]) / beta;
    }
    return x;
}

double grid_mixability_estimate(const ProperLossSpec& loss, double step) {
    if (loss.n != 2 || !loss.is_strictly_proper || !loss.weight)
        throw validation_error("mixability needs a binary strictly proper loss with a weight");
    double best = kInf;
    for (double pt = step; pt < 1.0 - 0.5 * step; pt += step) {
        double w = loss.weight(pt);
        if (!(w > 0.0))
            throw std::runtime_error("non-positive weight at p_tilde = " + format_double(pt));
        best = std::min(best, w_log(pt) / w);
    }
    return best;
}

double mixability_constant(const ProperLossSpec& loss) {
    if (loss.mixability_override) return *loss.mixability_override;
    return grid_mixability_estimate(loss);
}

ProperLossSpec scale_loss(const ProperLossSpec& loss, double lambda) {
    if (!(lambda > 0.0)) throw validation_error("scale must be positive");
    ProperLossSpec out = loss;
    out.name = loss.name + "*" + format_double(lambda);
    auto base_partial = loss.partial_loss;
    out.partial_loss = [base_partial, lambda](const ProbVector& p) {
        Vec l = base_partial(p);
        for (double& v : l) v *= lambda;
        return l;
    };
    auto base_risk = loss.bayes_risk;
    out.bayes_risk = [base_risk, lambda](const ProbVector& p) { return lambda * base_risk(p); };
    if (loss.weight) {
        auto base_w = loss.weight;
        out.weight = [base_w, lambda](double pt) { return lambda * base_w(pt); };
    }
    if (loss.mixability_override)
        out.mixability_override = *loss.mixability_override / lambda;
    return out;
}

ProperLossSpec normalize_loss(const ProperLossSpec& loss) {
    if (!loss.weight) throw validation_error("normalize_loss needs a weight function");
    double w_half = loss.weight(0.5);
    ProperLossSpec out = scale_loss(loss, 1.0 / w_half);
    out.name = loss.name + "(normalized)";
    return out;
}

}  // namespace mixlink
