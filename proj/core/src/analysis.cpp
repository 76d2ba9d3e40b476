#include "mixlink/analysis.hpp"

#include <random>
#include <sstream>

namespace mixlink {

namespace {

constexpr double kGridMargin = 1e-3;

std::vector<double> interior_grid(double step) {
    std::vector<double> g;
    for (double pt = kGridMargin; pt < 1.0 - kGridMargin + 0.5 * step; pt += step)
        g.push_back(std::min(pt, 1.0 - kGridMargin));
    return g;
}

void finalize(GridReport& r, double tol) {
    r.min_slack = kInf;
    r.verdict = true;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        double s = std::min(r.slack_lower[i], r.slack_upper[i]);
        if (s < r.min_slack) r.min_slack = s;
        if (s < -tol && !r.witness) r.witness = r.grid[i];
    }
    r.verdict = r.min_slack >= -tol;
}

double weight_derivative(const ProperLossSpec& loss, double pt) {
    // fourth-order stencil with a boundary-proportional step: the weight can
    // blow up like pt^-k near the edges, where a fixed-step first-order
    // difference loses the 1e-8 slack tolerance
    double h = 2e-4 * std::min(pt, 1.0 - pt);
    volatile double snapped = pt + h;  // make pt + h exactly representable
    h = snapped - pt;
    const auto& w = loss.weight;
    return (w(pt - 2.0 * h) - 8.0 * w(pt - h) + 8.0 * w(pt + h) - w(pt + 2.0 * h)) /
           (12.0 * h);
}

}  // namespace

std::string GridReport::to_csv() const {
    std::ostringstream os;
    os << "p_tilde,slack_lower,slack_upper\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        os << format_double(grid[i]) << ',' << format_double(slack_lower[i]) << ','
           << format_double(slack_upper[i]) << '\n';
    return os.str();
}

GridReport check_composite_exp_concavity(const ProperLossSpec& loss, const LinkFunction& link,
                                         double alpha, double tol) {
    if (loss.n != 2 || !loss.is_strictly_proper || !loss.weight)
        throw validation_error("exp-concavity characterization needs a binary strictly proper loss");
    if (!(alpha > 0.0)) throw validation_error("alpha must be positive");
    GridReport r;
    r.grid = interior_grid(kGridMargin);
    r.slack_lower.reserve(r.grid.size());
    r.slack_upper.reserve(r.grid.size());
    for (double pt : r.grid) {
        double w = loss.weight(pt);
        double mid = weight_derivative(loss, pt) / w -
                     link.second_derivative(pt) / link.derivative(pt);
        r.slack_lower.push_back(mid - (-1.0 / pt + alpha * w * pt));
        r.slack_upper.push_back(1.0 / (1.0 - pt) - alpha * w * (1.0 - pt) - mid);
    }
    finalize(r, tol);
    return r;
}

GridReport check_weight_envelope(const ProperLossSpec& loss, const LinkFunction& link,
                                 double alpha, double tol) {
    if (loss.n != 2 || !loss.is_strictly_proper || !loss.weight)
        throw validation_error("weight envelope needs a binary strictly proper loss");
    if (!(alpha > 0.0)) throw validation_error("alpha must be positive");
    ProperLossSpec norm = normalize_loss(loss);
    GridReport r;
    r.necessary_only = true;
    r.scale_used = 1.0 / loss.weight(0.5);
    r.grid = interior_grid(kGridMargin);
    double psi_half = link.forward(0.5);
    double dpsi_half = link.derivative(0.5);
    for (double pt : r.grid) {
        double w = norm.weight(pt);
        double dpsi = link.derivative(pt);
        double dv = link.forward(pt) - psi_half;
        double env_lo = dpsi / (pt * (2.0 * dpsi_half - alpha * dv));
        double env_hi = dpsi / ((1.0 - pt) * (2.0 * dpsi_half + alpha * dv));
        // <= for pt >= 1/2, >= for pt <= 1/2 (both at pt = 1/2)
        double lo = pt >= 0.5 ? w - env_lo : env_lo - w;
        double hi = pt >= 0.5 ? env_hi - w : w - env_hi;
        if (pt == 0.5) {
            lo = std::min(w - env_lo, env_lo - w);
            hi = std::min(env_hi - w, w - env_hi);
        }
        r.slack_lower.push_back(lo);
        r.slack_upper.push_back(hi);
    }
    finalize(r, tol);
    return r;
}

GridReport check_identity_weight_envelope(const ProperLossSpec& loss, double alpha, double tol) {
    return check_weight_envelope(loss, identity_link(), alpha, tol);
}

GridReport check_canonical_exp_concavity(const ProperLossSpec& loss, double alpha, double tol) {
    if (loss.n != 2 || !loss.is_strictly_proper || !loss.weight)
        throw validation_error("canonical condition needs a binary strictly proper loss");
    if (!(alpha > 0.0)) throw validation_error("alpha must be positive");
    GridReport r;
    r.grid = interior_grid(kGridMargin);
    for (double pt : r.grid) {
        double w = loss.weight(pt);
        r.slack_lower.push_back(1.0 / (alpha * pt * pt) - w);
        r.slack_upper.push_back(1.0 / (alpha * (1.0 - pt) * (1.0 - pt)) - w);
    }
    finalize(r, tol);
    return r;
}

SufficientConditionReport check_sufficient_integral_condition(
    const ProperLossSpec& loss, const std::function<double(double)>& a,
    const std::function<double(double)>& b, double alpha, double tol) {
    if (loss.n != 2 || !loss.is_strictly_proper || !loss.weight)
        throw validation_error("sufficient condition needs a binary strictly proper loss");
    ProperLossSpec norm = normalize_loss(loss);
    SufficientConditionReport rep;
    GridReport& r = rep.inequalities;
    r.grid = interior_grid(kGridMargin);
    rep.reconstruction_ok = true;
    // cumulative integrals out of 1/2, one short segment at a time
    std::vector<double> cum(r.grid.size(), 0.0);
    std::ptrdiff_t mid = 0;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        if (std::abs(r.grid[i] - 0.5) < std::abs(r.grid[static_cast<std::size_t>(mid)] - 0.5))
            mid = static_cast<std::ptrdiff_t>(i);
    for (std::ptrdiff_t i = mid - 1; i >= 0; --i) {
        std::size_t u = static_cast<std::size_t>(i);
        cum[u] = cum[u + 1] + integrate(a, r.grid[u], r.grid[u + 1], 1e-12);
    }
    for (std::size_t i = static_cast<std::size_t>(mid) + 1; i < r.grid.size(); ++i)
        cum[i] = cum[i - 1] + integrate(b, r.grid[i - 1], r.grid[i], 1e-12);
    {
        std::size_t u = static_cast<std::size_t>(mid);
        double half_a = integrate(a, r.grid[u], 0.5, 1e-12);
        double half_b = integrate(b, 0.5, r.grid[u], 1e-12);
        for (std::size_t i = 0; i <= u; ++i) cum[i] += half_a;
        cum[u] = r.grid[u] <= 0.5 ? cum[u] : half_b;
        for (std::size_t i = u + 1; i < r.grid.size(); ++i) cum[i] += half_b;
    }
    for (std::size_t gi = 0; gi < r.grid.size(); ++gi) {
        double pt = r.grid[gi];
        bool left = pt <= 0.5;
        double gen = left ? a(pt) : b(pt);
        double integral = cum[gi];
        double bracket = left ? alpha * (1.0 - pt) / pt - 2.0 / (pt * (1.0 - pt))
                              : alpha * pt / (1.0 - pt) - 2.0 / (pt * (1.0 - pt));
        // both chains scaled by pt(1-pt) so equality cases are not swamped by
        // the boundary blow-up of the raw bounds
        double q = pt * (1.0 - pt);
        r.slack_lower.push_back((gen - bracket) * q - integral);
        r.slack_upper.push_back((-alpha - gen) * q);
        double w_rec = left ? 1.0 / (pt * (2.0 - integral))
                            : 1.0 / ((1.0 - pt) * (2.0 - integral));
        double err = std::abs(w_rec - norm.weight(pt));
        rep.reconstruction_max_err = std::max(rep.reconstruction_max_err, err);
    }
    rep.reconstruction_ok = rep.reconstruction_max_err <= 1e-6;
    finalize(r, tol);
    rep.verdict = r.verdict && rep.reconstruction_ok;
    return rep;
}

std::pair<std::function<double(double)>, std::function<double(double)>>
integral_condition_generators(const ProperLossSpec& loss) {
    if (loss.n != 2 || !loss.is_strictly_proper || !loss.weight)
        throw validation_error("generators need a binary strictly proper loss");
    ProperLossSpec norm = normalize_loss(loss);
    auto w = norm.weight;
    auto a = [w](double pt) {
        auto f = [w](double t) { return 1.0 / (t * w(t)); };
        double h = std::min({1e-6, 0.5 * pt, 0.5 * (1.0 - pt)});
        return central_diff(f, pt, h);
    };
    auto b = [w](double pt) {
        auto f = [w](double t) { return 1.0 / ((1.0 - t) * w(t)); };
        double h = std::min({1e-6, 0.5 * pt, 0.5 * (1.0 - pt)});
        return -central_diff(f, pt, h);
    };
    return {a, b};
}

std::pair<std::function<double(double)>, std::function<double(double)>>
beesack_envelope(double alpha) {
    if (!(alpha > 0.0)) throw validation_error("alpha must be positive");
    auto a_min = [alpha](double pt) {
        return -alpha + alpha / (2.0 * pt * pt) - 2.0 / (pt * pt);
    };
    auto b_min = [alpha](double pt) {
        double q = 1.0 - pt;
        return alpha * pt / q + (2.0 * alpha * pt - alpha - 4.0) / (2.0 * q * q);
    };
    return {a_min, b_min};
}

GridReport numeric_exp_concavity(const CompositeLoss& comp, double alpha, double grid_step,
                                 double tol, std::uint64_t seed, int n3_samples) {
    if (!(alpha > 0.0)) throw validation_error("alpha must be positive");
    GridReport r;
    if (comp.base.n == 2) {
        // link values of the interior p_tilde grid; exp-composites evaluated
        // through the base partials directly (avoids inverting the link)
        std::vector<double> pts;
        for (double pt = kGridMargin; pt < 1.0 - kGridMargin + 0.5 * grid_step; pt += grid_step)
            pts.push_back(std::min(pt, 1.0 - kGridMargin));
        std::size_t n = pts.size();
        std::vector<double> v(n), f1(n), f2(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = comp.link.forward(pts[i]);
            Vec l = comp.base.partial_loss(binary_prob(pts[i]));
            f1[i] = std::exp(-alpha * l[0]);
            f2[i] = std::exp(-alpha * l[1]);
        }
        if (!comp.link.increasing) {
            std::reverse(pts.begin(), pts.end());
            std::reverse(v.begin(), v.end());
            std::reverse(f1.begin(), f1.end());
            std::reverse(f2.begin(), f2.end());
        }
        auto dpsi = comp.link.derivative;
        // invert the link at a chord midpoint: the bracketing grid cell is
        // known, so a few Newton steps with a short Simpson correction to the
        // tabulated forward value are enough (no full quadrature per call)
        auto invert_local = [&](double target, std::size_t i, std::size_t j) {
            std::size_t lo = i, hi = j;
            while (hi - lo > 1) {
                std::size_t mid = (lo + hi) / 2;
                (v[mid] <= target ? lo : hi) = mid;
            }
            double a = pts[lo], b = pts[hi];
            double x = a + (b - a) * (target - v[lo]) / (v[hi] - v[lo]);
            for (int it = 0; it < 6; ++it) {
                double mid = 0.5 * (a + x);
                double fwd = v[lo] + (x - a) / 6.0 * (dpsi(a) + 4.0 * dpsi(mid) + dpsi(x));
                double d = dpsi(x);
                if (d == 0.0) break;
                x = std::clamp(x - (fwd - target) / d, std::min(a, b), std::max(a, b));
            }
            return x;
        };
        auto partial = comp.base.partial_loss;
        double worst = kInf;
        double worst_at = pts[0];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 2; j < n; j += 2) {
                double vm = 0.5 * (v[i] + v[j]);
                double ptm = invert_local(vm, i, j);
                Vec lm = partial(binary_prob(ptm));
                double s1 = std::exp(-alpha * lm[0]) - 0.5 * (f1[i] + f1[j]);
                double s2 = std::exp(-alpha * lm[1]) - 0.5 * (f2[i] + f2[j]);
                double s = std::min(s1, s2);
                if (s < worst) {
                    worst = s;
                    worst_at = ptm;
                }
            }
        }
        r.grid = {worst_at};
        r.slack_lower = {worst};
        r.slack_upper = {worst};
    } else if (comp.base.n == 3) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(kGridMargin, 1.0 - kGridMargin);
        auto sample = [&]() {
            for (;;) {
                double x = uni(rng), y = uni(rng);
                if (x + y < 1.0 - kGridMargin) return ProbVector({x, y, 1.0 - x - y});
            }
        };
        double worst = kInf;
        ProbVector worst_p = sample();
        for (int s = 0; s < n3_samples; ++s) {
            ProbVector pa = sample();
            ProbVector pb = sample();
            Vec la = comp.base.partial_loss(pa);
            Vec lb = comp.base.partial_loss(pb);
            ProbVector pm({0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]),
                           0.5 * (pa[2] + pb[2])});
            Vec lm = comp.base.partial_loss(pm);
            for (int y = 0; y < 3; ++y) {
                double slack = std::exp(-alpha * lm[y]) -
                               0.5 * (std::exp(-alpha * la[y]) + std::exp(-alpha * lb[y]));
                if (slack < worst) {
                    worst = slack;
                    worst_p = pm;
                }
            }
        }
        r.grid = {worst_p[0]};
        r.slack_lower = {worst};
        r.slack_upper = {worst};
    } else {
        throw validation_error("numeric exp-concavity supports n = 2 or 3");
    }
    finalize(r, tol);
    return r;
}

bool curve_mixability(const std::function<double(double)>& l1,
                      const std::function<double(double)>& l2, double beta,
                      double grid_step, double tol) {
    // z1 = exp(-beta l1) is increasing in t, z2 decreasing; a midpoint of two
    // curve points must be dominated by the curve point with equal z1.
    auto z1 = [&](double t) { return std::exp(-beta * l1(t)); };
    auto z2 = [&](double t) { return std::exp(-beta * l2(t)); };
    std::vector<double> ts;
    for (double t = kGridMargin; t < 1.0 - kGridMargin + 0.5 * grid_step; t += grid_step)
        ts.push_back(std::min(t, 1.0 - kGridMargin));
    std::size_t n = ts.size();
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = z1(ts[i]);
        b[i] = z2(ts[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; j += 2) {
            double m1 = 0.5 * (a[i] + a[j]);
            double m2 = 0.5 * (b[i] + b[j]);
            double t = solve_monotone(z1, m1, ts[i], ts[j], true, 1e-13);
            if (z2(t) < m2 - tol) return false;
        }
    }
    return true;
}

GridReport numeric_mixability(const ProperLossSpec& loss, double beta, double grid_step,
                              double tol) {
    if (loss.n != 2 || !loss.is_strictly_proper)
        throw validation_error("numeric mixability needs a binary strictly proper loss");
    if (!(beta > 0.0)) throw validation_error("beta must be positive");
    auto partial = loss.partial_loss;
    auto l1 = [partial](double t) { return partial(binary_prob(t))[0]; };
    auto l2 = [partial](double t) { return partial(binary_prob(t))[1]; };
    GridReport r;
    r.grid = {0.5};
    bool ok = curve_mixability(l1, l2, beta, grid_step, tol);
    r.slack_lower = {ok ? 0.0 : -1.0};
    r.slack_upper = r.slack_lower;
    finalize(r, tol);
    return r;
}

}  // namespace mixlink
