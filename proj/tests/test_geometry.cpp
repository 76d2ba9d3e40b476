#include <doctest.h>

#include <algorithm>

#include "mixlink/geometry.hpp"

using namespace mixlink;

TEST_CASE("cloud sizes follow the barycentric grid") {
    ExpPredictionCloud c2 = build_cloud(catalog_loss("log", 2), 1.0, 4);
    CHECK(c2.points.size() == 5);
    ExpPredictionCloud c3 = build_cloud(catalog_loss("square_vector", 3), 1.0, 4);
    CHECK(c3.points.size() == 15);
}

TEST_CASE("log cloud at beta 1 reproduces the probabilities") {
    ExpPredictionCloud c = build_cloud(catalog_loss("log", 2), 1.0, 10);
    for (std::size_t r = 0; r < c.points.size(); ++r) {
        CHECK(c.points[r][0] == doctest::Approx(c.probs[r][0]).epsilon(1e-12));
        CHECK(c.points[r][1] == doctest::Approx(c.probs[r][1]).epsilon(1e-12));
    }
}

TEST_CASE("support values of the exp-prediction set") {
    ExpPredictionCloud lc = build_cloud(catalog_loss("log", 2), 1.0, 200);
    CHECK(gamma_p(lc, binary_prob(0.5)) == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(gamma_p(lc, binary_prob(1.0)) == doctest::Approx(-1.0).epsilon(1e-9));
    ExpPredictionCloud sc = build_cloud(catalog_loss("square_scalar", 2), 2.0, 200);
    CHECK(gamma_p(sc, binary_prob(1.0)) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(gamma_p(sc, binary_prob(0.5)) ==
          doctest::Approx(-std::exp(-0.5)).epsilon(1e-5));
}

TEST_CASE("northeast boundary condition") {
    ProperLossSpec log2 = catalog_loss("log", 2);
    ExpPredictionCloud lc2 = build_cloud(log2, 1.0, 100);
    CHECK(check_ne_boundary_condition(log2, lc2).holds);

    ProperLossSpec log3 = catalog_loss("log", 3);
    ExpPredictionCloud lc3 = build_cloud(log3, 1.0, 40);
    CHECK(check_ne_boundary_condition(log3, lc3).holds);
    CHECK(!ray_escape_witness(log3, lc3, 500).has_value());

    ProperLossSpec sv3 = catalog_loss("square_vector", 3);
    ExpPredictionCloud sc3 = build_cloud(sv3, 1.0, 60);
    BoundaryCheck bc = check_ne_boundary_condition(sv3, sc3);
    CHECK(!bc.holds);
    CHECK(bc.witness.has_value());
}

TEST_CASE("escape witness invariants") {
    ProperLossSpec sv3 = catalog_loss("square_vector", 3);
    ExpPredictionCloud cloud = build_cloud(sv3, 1.0, 60);
    auto w = ray_escape_witness(sv3, cloud);
    REQUIRE(w.has_value());
    CHECK(w->escape);
    CHECK(w->surface_distance > 1e-3);
    CHECK(w->exit_travel >= 0.0);
    CHECK(w->exit_travel <= w->max_travel + 1e-12);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(w->exit_point[i] ==
              doctest::Approx(0.5 * (w->a[i] + w->b[i]) + w->exit_travel).epsilon(1e-9));
    // the exit point is not dominated by any sampled loss point
    for (const Vec& z : cloud.points) {
        bool dominates = true;
        for (std::size_t i = 0; i < 3; ++i)
            if (z[i] < w->exit_point[i] - 1e-3) dominates = false;
        CHECK(!dominates);
    }
}

TEST_CASE("geometry serialization headers") {
    ExpPredictionCloud c = build_cloud(catalog_loss("log", 2), 1.0, 2);
    CHECK(c.to_csv().rfind("p_1,p_2,z_1,z_2\n", 0) == 0);
    ProperLossSpec sv3 = catalog_loss("square_vector", 3);
    ExpPredictionCloud cloud = build_cloud(sv3, 1.0, 60);
    auto w = ray_escape_witness(sv3, cloud);
    REQUIRE(w.has_value());
    CHECK(w->to_csv().rfind("a_1,a_2,a_3,b_1,b_2,b_3,c_1,c_2,c_3,escape\n", 0) == 0);
}

TEST_CASE("surrogate normal counts from the interior grid") {
    SurrogateModel m2 = build_surrogate(catalog_loss("log", 2), 1.0, 0.4, 100, false);
    CHECK(m2.normals.size() == 19);
    SurrogateModel m3 = build_surrogate(catalog_loss("square_vector", 3), 1.0, 0.05, 60, false);
    CHECK(m3.normals.size() == 1225);
    CHECK_THROWS_AS(build_surrogate(catalog_loss("log", 2), 1.0, 0.6, 100), validation_error);
    CHECK_THROWS_AS(build_surrogate(catalog_loss("log", 2), 1.5, 0.1, 100), validation_error);
}

TEST_CASE("surrogate halfspaces support the cloud") {
    SurrogateModel m = build_surrogate(catalog_loss("log", 2), 1.0, 0.2, 60);
    for (std::size_t k = 0; k < m.normals.size(); ++k) {
        CHECK(m.support[k] > 0.0);
        double best = -kInf;
        for (const Vec& z : m.cloud.points) {
            double dot = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) dot += m.normals[k][i] * z[i];
            CHECK(dot <= m.support[k] + 1e-9);
            best = std::max(best, dot);
        }
        CHECK(best == doctest::Approx(m.support[k]).epsilon(1e-9));
    }
}

TEST_CASE("surrogate equals the loss on the agreement region") {
    SurrogateModel m = build_surrogate(catalog_loss("log", 2), 1.0, 0.2, 400);
    for (double pt : {0.35, 0.5, 0.65}) {
        ProbVector p = binary_prob(pt);
        REQUIRE(in_S_epsilon(catalog_loss("log", 2), 1.0, 0.2, p));
        SurrogateSolution s = surrogate_loss(m, p);
        CHECK(s.duality_gap <= m.duality_gap_tol);
        Vec l = catalog_loss("log", 2).partial_loss(p);
        CHECK(s.loss_vector[0] == doctest::Approx(l[0]).epsilon(5e-4));
        CHECK(s.loss_vector[1] == doctest::Approx(l[1]).epsilon(5e-4));
    }
}

TEST_CASE("surrogate for three classes stays certified") {
    SurrogateModel m = build_surrogate(catalog_loss("square_vector", 3), 1.0, 0.05, 60);
    SurrogateSolution s = surrogate_loss(m, ProbVector({1.0 / 3, 1.0 / 3, 1.0 / 3}));
    CHECK(s.duality_gap <= m.duality_gap_tol);
    for (double v : s.loss_vector) CHECK(v == doctest::Approx(2.0 / 3).epsilon(1e-4));
}

TEST_CASE("agreement region membership") {
    ProperLossSpec log2 = catalog_loss("log", 2);
    // d is uniform for the log loss, so membership only depends on epsilon
    CHECK(in_S_epsilon(log2, 1.0, 0.4, binary_prob(0.9)));
    CHECK(!in_S_epsilon(log2, 1.0, 0.5, binary_prob(0.5)));
    ProperLossSpec sq = catalog_loss("square_scalar", 2);
    CHECK(in_S_epsilon(sq, 2.0, 0.2, binary_prob(0.5)));
    CHECK(!in_S_epsilon(sq, 2.0, 0.2, binary_prob(0.99)));
}

TEST_CASE("near the vertex the surrogate departs from the loss") {
    ProperLossSpec sq = catalog_loss("square_scalar", 2);
    SurrogateModel m = build_surrogate(sq, 2.0, 0.3, 200);
    ProbVector p = binary_prob(0.98);
    REQUIRE(!in_S_epsilon(sq, 2.0, 0.3, p));
    SurrogateSolution s = surrogate_loss(m, p);
    Vec l = sq.partial_loss(p);
    double diff = std::abs(s.loss_vector[0] - l[0]) + std::abs(s.loss_vector[1] - l[1]);
    CHECK(diff > 1e-3);
}
