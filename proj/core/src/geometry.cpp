#include "mixlink/geometry.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <sstream>

namespace mixlink {

namespace {

void enumerate_grid(int n, int m, Vec& partial, std::vector<ProbVector>& out) {
    if (static_cast<int>(partial.size()) == n - 1) {
        double rest = 1.0;
        for (double v : partial) rest -= v;
        Vec full = partial;
        full.push_back(std::max(0.0, rest));
        out.emplace_back(std::move(full));
        return;
    }
    int used = 0;
    for (double v : partial) used += static_cast<int>(std::lround(v * m));
    for (int k = 0; k + used <= m; ++k) {
        partial.push_back(static_cast<double>(k) / m);
        enumerate_grid(n, m, partial, out);
        partial.pop_back();
    }
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double dist2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

// Convex hull as outward halfspaces normal . x <= offset. A degenerate hull
// (affine dimension below the ambient one) keeps no facets; rays leave it
// immediately.
struct Hull {
    bool degenerate = false;
    std::vector<Vec> normals;
    std::vector<double> offsets;
};

Hull hull_2d(const std::vector<Vec>& pts) {
    std::vector<std::array<double, 2>> p;
    p.reserve(pts.size());
    for (const Vec& v : pts) p.push_back({v[0], v[1]});
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    Hull h;
    if (p.size() < 3) {
        h.degenerate = true;
        return h;
    }
    auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> ch(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(ch[k - 2], ch[k - 1], p[i]) <= 0.0) --k;
        ch[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, lo = k + 1; i-- > 0;) {
        while (k >= lo && cross(ch[k - 2], ch[k - 1], p[i]) <= 0.0) --k;
        ch[k++] = p[i];
    }
    ch.resize(k - 1);
    if (ch.size() < 3) {
        h.degenerate = true;
        return h;
    }
    for (std::size_t i = 0; i < ch.size(); ++i) {
        const auto& a = ch[i];
        const auto& b = ch[(i + 1) % ch.size()];
        // counter-clockwise boundary, outward normal to the right of a -> b
        Vec n = {b[1] - a[1], a[0] - b[0]};
        h.normals.push_back(n);
        h.offsets.push_back(n[0] * a[0] + n[1] * a[1]);
    }
    return h;
}

Hull hull_3d(const std::vector<Vec>& pts_in) {
    using P3 = std::array<double, 3>;
    std::vector<P3> p;
    p.reserve(pts_in.size());
    for (const Vec& v : pts_in) p.push_back({v[0], v[1], v[2]});
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    Hull h;
    if (p.size() < 4) {
        h.degenerate = true;
        return h;
    }
    auto sub = [](const P3& a, const P3& b) {
        return P3{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    };
    auto cross3 = [](const P3& a, const P3& b) {
        return P3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                  a[0] * b[1] - a[1] * b[0]};
    };
    auto dot3 = [](const P3& a, const P3& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    };
    auto norm3 = [&](const P3& a) { return std::sqrt(dot3(a, a)); };

    // Seed tetrahedron: spread points, then the farthest from line and plane.
    std::size_t i1 = 1;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (dist2({p[i][0], p[i][1], p[i][2]}, {p[0][0], p[0][1], p[0][2]}) >
            dist2({p[i1][0], p[i1][1], p[i1][2]}, {p[0][0], p[0][1], p[0][2]}))
            i1 = i;
    P3 d01 = sub(p[i1], p[0]);
    std::size_t i2 = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double a = norm3(cross3(d01, sub(p[i], p[0])));
        if (a > best) {
            best = a;
            i2 = i;
        }
    }
    if (best < 1e-12) {
        h.degenerate = true;
        return h;
    }
    P3 plane_n = cross3(d01, sub(p[i2], p[0]));
    std::size_t i3 = 0;
    best = -1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double v = std::abs(dot3(plane_n, sub(p[i], p[0])));
        if (v > best) {
            best = v;
            i3 = i;
        }
    }
    if (best / norm3(plane_n) < 1e-10) {
        h.degenerate = true;
        return h;
    }

    struct Face {
        std::array<std::size_t, 3> v;
        P3 n;
        double d;
        bool alive = true;
    };
    P3 centroid{};
    for (std::size_t j : {std::size_t{0}, i1, i2, i3})
        for (int c = 0; c < 3; ++c) centroid[c] += 0.25 * p[j][c];
    std::vector<Face> faces;
    auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
        Face f;
        f.v = {a, b, c};
        f.n = cross3(sub(p[b], p[a]), sub(p[c], p[a]));
        f.d = dot3(f.n, p[a]);
        if (dot3(f.n, centroid) > f.d) {
            std::swap(f.v[1], f.v[2]);
            for (int k = 0; k < 3; ++k) f.n[k] = -f.n[k];
            f.d = -f.d;
        }
        faces.push_back(f);
    };
    add_face(0, i1, i2);
    add_face(0, i1, i3);
    add_face(0, i2, i3);
    add_face(i1, i2, i3);

    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i == 0 || i == i1 || i == i2 || i == i3) continue;
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!faces[f].alive) continue;
            double scale = norm3(faces[f].n);
            if (dot3(faces[f].n, p[i]) - faces[f].d > 1e-10 * std::max(1.0, scale))
                visible.push_back(f);
        }
        if (visible.empty()) continue;
        std::set<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t f : visible)
            for (int e = 0; e < 3; ++e)
                edges.insert({faces[f].v[e], faces[f].v[(e + 1) % 3]});
        for (std::size_t f : visible) faces[f].alive = false;
        for (const auto& e : edges) {
            if (edges.count({e.second, e.first})) continue;  // interior edge
            add_face(e.first, e.second, i);
        }
    }
    for (const Face& f : faces) {
        if (!f.alive) continue;
        double scale = std::max(1e-300, norm3(f.n));
        h.normals.push_back({f.n[0] / scale, f.n[1] / scale, f.n[2] / scale});
        h.offsets.push_back(f.d / scale);
    }
    return h;
}

Hull build_hull(const std::vector<Vec>& pts, std::size_t n) {
    if (n == 2) return hull_2d(pts);
    if (n == 3) return hull_3d(pts);
    throw validation_error("ray tests support n = 2 or 3 classes");
}

// Exit parameter of the ray c + t . 1_n from the hull (0 for degenerate hulls
// and points already on an upward facet).
double ray_exit(const Hull& h, const Vec& c) {
    if (h.degenerate) return 0.0;
    double t = kInf;
    for (std::size_t f = 0; f < h.normals.size(); ++f) {
        double along = 0.0;
        for (double v : h.normals[f]) along += v;
        if (along <= 1e-12) continue;
        t = std::min(t, (h.offsets[f] - dot(h.normals[f], c)) / along);
    }
    if (!std::isfinite(t)) return 0.0;
    return std::max(t, 0.0);
}

// Distance from a point to the exp-image of the loss surface, starting from
// the nearest cloud point and refining by a shrinking pattern search in the
// reduced simplex coordinates.
double surface_distance(const ProperLossSpec& loss, const ExpPredictionCloud& cloud,
                        const Vec& e) {
    std::size_t n = e.size();
    std::size_t nearest = 0;
    double best = kInf;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        double d = dist2(cloud.points[i], e);
        if (d < best) {
            best = d;
            nearest = i;
        }
    }
    Vec x(cloud.probs[nearest].entries().begin(),
          cloud.probs[nearest].entries().end() - 1);
    auto eval = [&](const Vec& red) {
        double sum = 0.0;
        for (double v : red) {
            if (v < 0.0 || v > 1.0) return kInf;
            sum += v;
        }
        if (sum > 1.0) return kInf;
        Vec full = red;
        full.push_back(1.0 - sum);
        Vec z = exp_transform(loss.partial_loss(ProbVector(full)), cloud.beta);
        return dist2(z, e);
    };
    double cur = eval(x);
    double h = 1.0 / std::max(1, cloud.resolution);
    while (h > 1e-9) {
        bool improved = false;
        for (std::size_t i = 0; i < n - 1; ++i) {
            for (double sgn : {1.0, -1.0}) {
                Vec trial = x;
                trial[i] += sgn * h;
                double v = eval(trial);
                if (v < cur) {
                    cur = v;
                    x = trial;
                    improved = true;
                }
            }
        }
        if (!improved) h *= 0.5;
    }
    return std::sqrt(cur);
}

RayWitness test_ray(const ProperLossSpec& loss, const ExpPredictionCloud& cloud,
                    const Hull& hull, std::size_t i, std::size_t j, double tol) {
    RayWitness w;
    w.a = cloud.points[i];
    w.b = cloud.points[j];
    std::size_t n = w.a.size();
    w.c.resize(n);
    for (std::size_t k = 0; k < n; ++k) w.c[k] = 0.5 * (w.a[k] + w.b[k]);
    w.exit_travel = ray_exit(hull, w.c);
    double budget = kInf;
    for (double v : w.c) budget = std::min(budget, 1.0 - v);
    w.max_travel = std::max(budget, 0.0);
    w.exit_point = w.c;
    for (double& v : w.exit_point) v += w.exit_travel;
    w.surface_distance = surface_distance(loss, cloud, w.exit_point);
    bool dominated = false;
    for (const Vec& z : cloud.points) {
        bool covers = true;
        for (std::size_t k = 0; k < n; ++k)
            if (z[k] < w.exit_point[k] - tol) {
                covers = false;
                break;
            }
        if (covers) {
            dominated = true;
            break;
        }
    }
    w.escape = w.surface_distance > tol && !dominated;
    return w;
}

}  // namespace

std::string ExpPredictionCloud::to_csv() const {
    std::ostringstream os;
    std::size_t n = probs.empty() ? 0 : probs.front().n();
    for (std::size_t i = 0; i < n; ++i) os << "p_" << (i + 1) << ',';
    for (std::size_t i = 0; i < n; ++i) os << "z_" << (i + 1) << (i + 1 < n ? "," : "\n");
    for (std::size_t r = 0; r < probs.size(); ++r) {
        for (std::size_t i = 0; i < n; ++i) os << format_double(probs[r][i]) << ',';
        for (std::size_t i = 0; i < n; ++i)
            os << format_double(points[r][i]) << (i + 1 < n ? "," : "\n");
    }
    return os.str();
}

std::string RayWitness::to_csv() const {
    std::ostringstream os;
    std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) os << "a_" << (i + 1) << ',';
    for (std::size_t i = 0; i < n; ++i) os << "b_" << (i + 1) << ',';
    for (std::size_t i = 0; i < n; ++i) os << "c_" << (i + 1) << ',';
    os << "escape\n";
    for (std::size_t i = 0; i < n; ++i) os << format_double(a[i]) << ',';
    for (std::size_t i = 0; i < n; ++i) os << format_double(b[i]) << ',';
    for (std::size_t i = 0; i < n; ++i) os << format_double(c[i]) << ',';
    os << (escape ? 1 : 0) << '\n';
    return os.str();
}

ExpPredictionCloud build_cloud(const ProperLossSpec& loss, double beta, int m) {
    if (!(beta > 0.0)) throw validation_error("beta must be positive");
    if (m < 1) throw validation_error("cloud resolution must be >= 1");
    ExpPredictionCloud cloud;
    cloud.beta = beta;
    cloud.resolution = m;
    Vec partial;
    enumerate_grid(loss.n, m, partial, cloud.probs);
    cloud.points.reserve(cloud.probs.size());
    for (const ProbVector& p : cloud.probs)
        cloud.points.push_back(exp_transform(loss.partial_loss(p), beta));
    return cloud;
}

BoundaryCheck check_ne_boundary_condition(const ProperLossSpec& loss,
                                          const ExpPredictionCloud& cloud,
                                          int samples, double tol, std::uint64_t seed) {
    BoundaryCheck out;
    Hull hull = build_hull(cloud.points, static_cast<std::size_t>(loss.n));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, cloud.points.size() - 1);
    for (int s = 0; s < samples; ++s) {
        std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        if (i == j) continue;
        RayWitness w = test_ray(loss, cloud, hull, i, j, tol);
        if (w.escape) {
            out.holds = false;
            out.witness = std::move(w);
            return out;
        }
    }
    return out;
}

std::optional<RayWitness> ray_escape_witness(const ProperLossSpec& loss,
                                             const ExpPredictionCloud& cloud,
                                             int samples, double tol, std::uint64_t seed) {
    BoundaryCheck check = check_ne_boundary_condition(loss, cloud, samples, tol, seed);
    if (!check.holds) return check.witness;
    return std::nullopt;
}

double gamma_p(const ExpPredictionCloud& cloud, const ProbVector& p) {
    double best = -kInf;
    for (const Vec& z : cloud.points) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.n(); ++i) s += p[i] * z[i];
        best = std::max(best, s);
    }
    return -best;
}

SurrogateModel build_surrogate(const ProperLossSpec& loss, double beta, double epsilon,
                               int m, bool augment_tangents) {
    std::size_t n = static_cast<std::size_t>(loss.n);
    if (!(epsilon > 0.0 && epsilon < 1.0 / static_cast<double>(n)))
        throw validation_error("epsilon must lie in (0, 1/n)");
    if (beta > mixability_constant(loss) + 1e-9)
        throw validation_error("beta exceeds the mixability constant of " + loss.name);
    SurrogateModel model;
    model.beta = beta;
    model.epsilon = epsilon;
    model.resolution = m;
    model.cloud = build_cloud(loss, beta, m);
    for (const ProbVector& q : model.cloud.probs) {
        bool interior = true;
        for (std::size_t i = 0; i < n; ++i) {
            // integer barycentric test, robust at k/m == epsilon
            double k = std::lround(q[i] * m);
            if (!(k > m * epsilon + 1e-12)) {
                interior = false;
                break;
            }
        }
        if (interior) model.normals.push_back(q);
    }
    if (model.normals.empty())
        throw validation_error("no grid normals inside the epsilon-interior simplex");
    if (augment_tangents) {
        for (std::size_t r = 0; r < model.cloud.probs.size(); ++r) {
            const ProbVector& p = model.cloud.probs[r];
            const Vec& z = model.cloud.points[r];
            Vec d(n);
            double sum = 0.0;
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (!(z[i] > 0.0)) {
                    ok = false;
                    break;
                }
                d[i] = p[i] / z[i];  // p_i e^{beta l_i(p)}
                sum += d[i];
            }
            if (!ok) continue;
            double mn = kInf;
            for (std::size_t i = 0; i < n; ++i) {
                d[i] /= sum;
                mn = std::min(mn, d[i]);
            }
            if (mn > epsilon + 1e-12) model.normals.emplace_back(std::move(d));
        }
    }
    model.support.reserve(model.normals.size());
    for (const ProbVector& q : model.normals) model.support.push_back(-gamma_p(model.cloud, q));
    return model;
}

SurrogateSolution surrogate_loss(const SurrogateModel& model, const ProbVector& p) {
    std::size_t n = p.n();
    if (model.cloud.points.empty() || model.cloud.points.front().size() != n)
        throw validation_error("probability dimension does not match the model");
    std::size_t m = model.normals.size();

    // strictly feasible start just below the cloud point nearest to p
    Vec z0;
    {
        std::size_t nearest = 0;
        double best = kInf;
        for (std::size_t r = 0; r < model.cloud.probs.size(); ++r) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                d += (model.cloud.probs[r][i] - p[i]) * (model.cloud.probs[r][i] - p[i]);
            if (d < best) {
                best = d;
                nearest = r;
            }
        }
        z0 = model.cloud.points[nearest];
    }
    // coordinates with p_i = 0 drop out: their optimum is x_i = 0 (infinite
    // partial loss), and keeping them in the barrier destroys conditioning
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < n; ++i)
        if (p[i] > 1e-12) act.push_back(i);
    std::size_t na = act.size();
    Vec x(n, 0.0);
    for (std::size_t i : act) x[i] = std::clamp(0.9 * z0[i], 1e-8, 0.999);
    auto feasible = [&](const Vec& xx) {
        for (std::size_t i : act)
            if (!(xx[i] > 0.0 && xx[i] < 1.0)) return false;
        for (std::size_t j = 0; j < m; ++j) {
            double s = model.support[j];
            for (std::size_t i : act) s -= model.normals[j][i] * xx[i];
            if (!(s > 0.0)) return false;
        }
        return true;
    };
    for (int guard = 0; !feasible(x); ++guard) {
        if (guard > 60) throw std::runtime_error("no strictly feasible surrogate start");
        for (std::size_t i : act) x[i] *= 0.5;
    }

    double total_constraints = static_cast<double>(m + 2 * na);
    double t = 1.0;
    int iterations = 0;
    Vec slack(m);
    auto refresh_slack = [&](const Vec& xx) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = model.support[j];
            for (std::size_t i : act) s -= model.normals[j][i] * xx[i];
            slack[j] = s;
        }
    };
    while (true) {
        for (int newton = 0; newton < 200; ++newton) {
            refresh_slack(x);
            Vec g(na, 0.0);
            std::vector<Vec> H(na, Vec(na, 0.0));
            for (std::size_t a = 0; a < na; ++a) {
                double xi = x[act[a]];
                g[a] = -t * p[act[a]] / xi - 1.0 / xi + 1.0 / (1.0 - xi);
                H[a][a] = t * p[act[a]] / (xi * xi) + 1.0 / (xi * xi) +
                          1.0 / ((1.0 - xi) * (1.0 - xi));
            }
            for (std::size_t j = 0; j < m; ++j) {
                double inv = 1.0 / slack[j];
                for (std::size_t a = 0; a < na; ++a) {
                    double qa = model.normals[j][act[a]];
                    g[a] += qa * inv;
                    for (std::size_t b = 0; b <= a; ++b)
                        H[a][b] += qa * model.normals[j][act[b]] * inv * inv;
                }
            }
            for (std::size_t a = 0; a < na; ++a)
                for (std::size_t b = a + 1; b < na; ++b) H[a][b] = H[b][a];
            // solve H step = -g by Gaussian elimination with partial pivoting
            Vec step(na);
            {
                std::vector<Vec> A = H;
                Vec rhs(na);
                for (std::size_t a = 0; a < na; ++a) rhs[a] = -g[a];
                for (std::size_t col = 0; col < na; ++col) {
                    std::size_t piv = col;
                    for (std::size_t r = col + 1; r < na; ++r)
                        if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
                    std::swap(A[col], A[piv]);
                    std::swap(rhs[col], rhs[piv]);
                    for (std::size_t r = col + 1; r < na; ++r) {
                        double f = A[r][col] / A[col][col];
                        for (std::size_t cc = col; cc < na; ++cc) A[r][cc] -= f * A[col][cc];
                        rhs[r] -= f * rhs[col];
                    }
                }
                for (std::size_t a = na; a-- > 0;) {
                    double s = rhs[a];
                    for (std::size_t cc = a + 1; cc < na; ++cc) s -= A[a][cc] * step[cc];
                    step[a] = s / A[a][a];
                }
            }
            double decrement = 0.0;
            for (std::size_t a = 0; a < na; ++a) decrement -= g[a] * step[a];
            ++iterations;
            if (iterations > 100000)
                throw std::runtime_error("surrogate solver iteration cap exceeded");
            // the dual certificate only needs lambda << 1/sqrt(constraints);
            // tighter targets are unreachable at the final barrier scale
            if (decrement * 0.5 < 1e-9) break;
            // damped Newton: the barrier is self-concordant, so 1/(1+lambda)
            // steps converge without value-based line searches (which lose
            // precision once t * objective dwarfs machine epsilon)
            double lambda = std::sqrt(std::max(decrement, 0.0));
            double alpha = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
            Vec trial = x;
            for (int ls = 0; ls < 60; ++ls) {
                for (std::size_t a = 0; a < na; ++a) trial[act[a]] = x[act[a]] + alpha * step[a];
                if (feasible(trial)) break;
                alpha *= 0.5;
            }
            x = trial;
        }
        if (total_constraints / t <= 0.5 * model.duality_gap_tol) break;
        t *= 20.0;
    }

    SurrogateSolution sol;
    sol.x = x;
    sol.iterations = iterations;
    // dual certificate from the centered barrier multipliers
    refresh_slack(x);
    double primal = 0.0;
    for (std::size_t i : act) primal -= p[i] * std::log(x[i]);
    double dual = 0.0;
    Vec aggregated(n, 0.0);
    double mu_c = 0.0, nu_1 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double mu = 1.0 / (t * slack[j]);
        mu_c += mu * model.support[j];
        for (std::size_t i : act) aggregated[i] += mu * model.normals[j][i];
    }
    for (std::size_t i : act) {
        double nu = 1.0 / (t * (1.0 - x[i]));
        double rho = 1.0 / (t * x[i]);
        aggregated[i] += nu - rho;
        nu_1 += nu;
    }
    for (std::size_t i : act) {
        if (!(aggregated[i] > 0.0)) {
            dual = -kInf;
            break;
        }
        dual += p[i] * std::log(aggregated[i] / p[i]) + p[i];
    }
    dual -= mu_c + nu_1;
    sol.duality_gap = primal - dual;
    if (!(sol.duality_gap <= model.duality_gap_tol))
        throw std::runtime_error("surrogate duality gap " + format_double(sol.duality_gap) +
                                 " above tolerance");
    sol.loss_vector.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sol.loss_vector[i] = -std::log(x[i]) / model.beta;
    return sol;
}

bool in_S_epsilon(const ProperLossSpec& loss, double beta, double epsilon,
                  const ProbVector& p) {
    Vec l = loss.partial_loss(p);
    double sum = 0.0;
    Vec d(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) {
        d[i] = p[i] * std::exp(beta * l[i]);
        if (!std::isfinite(d[i])) return false;
        sum += d[i];
    }
    double mn = kInf;
    for (double v : d) mn = std::min(mn, v / sum);
    return mn > epsilon;
}

}  // namespace mixlink
