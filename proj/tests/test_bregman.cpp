#include <doctest.h>

#include "mixlink/bregman.hpp"

using namespace mixlink;

namespace {

BregmanGenerator neg_risk_generator(const ProperLossSpec& loss) {
    auto risk = loss.bayes_risk;
    BregmanGenerator gen;
    gen.phi = [risk](const ReducedProb& s) { return -risk(lift(s)); };
    return gen;
}

}  // namespace

TEST_CASE("divergence of the negative entropy is KL") {
    BregmanGenerator gen = neg_risk_generator(catalog_loss("log", 2));
    double d = bregman_divergence(gen, ReducedProb({0.5}), ReducedProb({0.25}));
    CHECK(d == doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-6));
    CHECK(d == doctest::Approx(0.143841).epsilon(1e-4));
    CHECK(bregman_divergence(gen, ReducedProb({0.3}), ReducedProb({0.3})) ==
          doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("divergence of the square generator") {
    BregmanGenerator gen = neg_risk_generator(catalog_loss("square_vector", 2));
    // phi(s) = sum s_i^2 - 1, so B(s, s0) = 2 (st - st0)^2 on the binary simplex
    for (double s : {0.2, 0.5, 0.9})
        for (double s0 : {0.1, 0.6})
            CHECK(bregman_divergence(gen, ReducedProb({s}), ReducedProb({s0})) ==
                  doctest::Approx(2.0 * (s - s0) * (s - s0)).epsilon(1e-6));
}

TEST_CASE("generator gradient prefers the closed form") {
    PairLoss blf = blf_from_proper_loss(catalog_loss("log", 2));
    // blf(e1, v) = -log v1 for the log generator
    for (double v : {0.1, 0.4, 0.8})
        CHECK(blf.eval(ProbVector({1.0, 0.0}), binary_prob(v)) ==
              doctest::Approx(-std::log(v)).epsilon(1e-9));
}

TEST_CASE("vertex reconstruction of fair proper losses") {
    struct Case {
        const char* name;
        int n;
    } cases[] = {{"log", 2}, {"square_vector", 2}, {"square_vector", 3}, {"square_scalar", 2}};
    for (const auto& c : cases) {
        ProperLossSpec loss = catalog_loss(c.name, c.n);
        PairLoss blf = blf_from_proper_loss(loss);
        std::vector<ProbVector> preds;
        if (c.n == 2) {
            preds = {binary_prob(0.2), binary_prob(0.5), binary_prob(0.77)};
        } else {
            preds = {ProbVector({0.2, 0.3, 0.5}), ProbVector({1.0 / 3, 1.0 / 3, 1.0 / 3})};
        }
        for (const ProbVector& q : preds) {
            Vec l = loss.partial_loss(q);
            for (int i = 0; i < c.n; ++i) {
                Vec e(c.n, 0.0);
                e[i] = 1.0;
                CHECK(std::abs(blf.eval(ProbVector(e), q) - l[i]) < 1e-9);
            }
        }
    }
    CHECK_THROWS_AS(blf_from_proper_loss(catalog_loss("absolute", 2)), validation_error);
}

TEST_CASE("kl loss values and infinities") {
    CHECK(kl_loss(ProbVector({0.5, 0.5}), ProbVector({0.25, 0.75})) ==
          doctest::Approx(0.143841).epsilon(1e-4));
    CHECK(kl_loss(ProbVector({0.3, 0.7}), ProbVector({0.3, 0.7})) == 0.0);
    CHECK(std::isinf(kl_loss(ProbVector({0.5, 0.5}), ProbVector({1.0, 0.0}))));
    CHECK(kl_loss(ProbVector({1.0, 0.0}), ProbVector({1.0, 0.0})) == 0.0);
    PairLoss kl = kl_pair_loss(3);
    CHECK(kl.eval(ProbVector({0.2, 0.3, 0.5}), ProbVector({0.2, 0.3, 0.5})) ==
          doctest::Approx(0.0));
}

TEST_CASE("kl agrees with the log-loss Bregman form") {
    PairLoss blf = blf_from_proper_loss(catalog_loss("log", 2));
    for (double y : {0.2, 0.5, 0.8})
        for (double v : {0.1, 0.6, 0.9})
            CHECK(blf.eval(binary_prob(y), binary_prob(v)) ==
                  doctest::Approx(kl_loss(binary_prob(y), binary_prob(v))).epsilon(1e-7));
}

TEST_CASE("pointwise pair mixability condition") {
    PairLoss kl = kl_pair_loss(2);
    GridReport r = check_pair_mixability_condition(kl, 1.0, 1.0);
    CHECK(r.verdict);
    CHECK(!check_pair_mixability_condition(kl, 1.0, 2.0).verdict);
    PairLoss sq = blf_from_proper_loss(catalog_loss("square_scalar", 2));
    CHECK(check_pair_mixability_condition(sq, 2.0, 1.0).verdict);
    CHECK_THROWS_AS(check_pair_mixability_condition(kl, -1.0, 1.0), validation_error);
    CHECK_THROWS_AS(check_pair_mixability_condition(kl, 1.0, 0.5), validation_error);
}

TEST_CASE("vertex mixability of pair losses") {
    PairLoss kl = kl_pair_loss(2);
    CHECK(check_blf_mixability(kl, 1.0));
    CHECK(!check_blf_mixability(kl, 1.2));
    PairLoss sq = blf_from_proper_loss(catalog_loss("square_scalar", 2));
    CHECK(check_blf_mixability(sq, 2.0));
    CHECK(!check_blf_mixability(sq, 3.0));
}

TEST_CASE("generators are midpoint convex") {
    for (const char* name : {"log", "square_vector", "boosting"}) {
        BregmanGenerator gen = neg_risk_generator(catalog_loss(name, 2));
        for (double a : {0.1, 0.4, 0.7})
            for (double b : {0.2, 0.6, 0.9}) {
                double mid = gen.phi(ReducedProb({0.5 * (a + b)}));
                double chord = 0.5 * (gen.phi(ReducedProb({a})) + gen.phi(ReducedProb({b})));
                CHECK(mid <= chord + 1e-12);
            }
    }
}
