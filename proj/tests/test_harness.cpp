#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mixlink/harness.hpp"

using namespace mixlink;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("mixlink_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("outcome generation") {
    OutcomeSpec sure;
    sure.p = 1.0;
    sure.T = 50;
    for (int y : generate_outcomes(sure)) CHECK(y == 2);

    OutcomeSpec spec;
    spec.p = 0.7;
    spec.T = 100000;
    spec.seed = 42;
    std::vector<int> a = generate_outcomes(spec);
    std::vector<int> b = generate_outcomes(spec);
    CHECK(a == b);
    double mean = 0.0;
    for (int y : a) mean += y == 2 ? 1.0 : 0.0;
    mean /= static_cast<double>(a.size());
    CHECK(mean == doctest::Approx(0.7).epsilon(0.015));

    spec.seed = 43;
    CHECK(generate_outcomes(spec) != a);
}

TEST_CASE("expert settings") {
    std::vector<int> outcomes = {1, 2, 2, 1};
    ExpertPool s1 = build_experts(parse_expert_setting("1"), outcomes);
    CHECK(s1.N == 2);
    Vec p1 = s1.predict(0);
    CHECK(p1[0] == 0.0);
    CHECK(p1[1] == 1.0);

    ExpertPool s2 = build_experts(parse_expert_setting("setting2"), outcomes);
    CHECK(s2.N == 3);
    // the extra expert is an oracle for the realized outcome
    CHECK(s2.predict(0)[2] == 0.0);
    CHECK(s2.predict(1)[2] == 1.0);

    ExpertPool s3 = build_experts(parse_expert_setting("3"), outcomes);
    CHECK(s3.N == 101);
    CHECK(s3.predict(2)[50] == doctest::Approx(0.5));

    CHECK(parse_expert_setting("some/file.csv").kind == ExpertSettingSpec::Kind::file);
}

TEST_CASE("outcome csv ingestion") {
    fs::path dir = fresh_dir("ingest");
    fs::path good = dir / "good.csv";
    std::ofstream(good) << "t,y,e1,e2\n1,0,0.2,0.8\n2,1,0.3,0.6\n3,1,0.4,0.4\n";
    IngestedData data = ingest_outcome_csv(good.string());
    CHECK(data.outcomes == std::vector<int>{1, 2, 2});
    REQUIRE(data.expert_predictions.has_value());
    CHECK(data.expert_predictions->size() == 3);
    CHECK((*data.expert_predictions)[1][1] == doctest::Approx(0.6));

    ExpertPool pool = pool_from_predictions(*data.expert_predictions);
    CHECK(pool.N == 2);
    CHECK(pool.predict(2)[0] == doctest::Approx(0.4));

    fs::path bare = dir / "bare.csv";
    std::ofstream(bare) << "t,y\n1,1\n2,0\n";
    IngestedData plain = ingest_outcome_csv(bare.string());
    CHECK(plain.outcomes == std::vector<int>{2, 1});
    CHECK(!plain.expert_predictions.has_value());

    fs::path bad = dir / "bad.csv";
    std::ofstream(bad) << "t,y\n1,0\n2,7\n";
    CHECK_THROWS_AS(ingest_outcome_csv(bad.string()), validation_error);
    fs::path ragged = dir / "ragged.csv";
    std::ofstream(ragged) << "t,y,e1\n1,0,0.5\n2,1\n";
    CHECK_THROWS_AS(ingest_outcome_csv(ragged.string()), validation_error);
    CHECK_THROWS_AS(ingest_outcome_csv((dir / "missing.csv").string()), std::exception);
}

TEST_CASE("cell seeds are stable and distinct") {
    std::uint64_t s = cell_seed(1, 0.5, 0.1, 1, Substitution::inverse_loss);
    CHECK(s == cell_seed(1, 0.5, 0.1, 1, Substitution::inverse_loss));
    CHECK(s != cell_seed(2, 0.5, 0.1, 1, Substitution::inverse_loss));
    CHECK(s != cell_seed(1, 0.7, 0.1, 1, Substitution::inverse_loss));
    CHECK(s != cell_seed(1, 0.5, 0.3, 1, Substitution::inverse_loss));
    CHECK(s != cell_seed(1, 0.5, 0.1, 2, Substitution::inverse_loss));
    CHECK(s != cell_seed(1, 0.5, 0.1, 1, Substitution::best_lookahead));
}

TEST_CASE("full sweep of the square game") {
    std::vector<double> etas = {0.1, 0.3, 0.5};
    std::vector<double> ps = {0.5, 0.7, 0.9, 1.0};
    std::vector<int> settings = {1, 2, 3};
    std::vector<Substitution> substs = {
        Substitution::best_lookahead, Substitution::worst_lookahead,
        Substitution::inverse_loss, Substitution::weighted_average};

    fs::path dir = fresh_dir("sweep_a");
    SweepResult r = sweep_square_game(etas, ps, settings, substs, dir.string(), 2024);
    CHECK(r.cells.size() == 144);
    std::string manifest = slurp(r.manifest_path);
    CHECK(manifest.rfind("file,substitution,eta,p,setting,N,final_regret,bound\n", 0) == 0);
    for (const SweepCell& cell : r.cells) {
        CHECK(fs::exists(dir / cell.file));
        CHECK(cell.bound == doctest::Approx(std::log(static_cast<double>(cell.N)) / cell.eta));
        // the averaged prediction is safe here (eta <= 0.5), so every variant
        // that the theory covers must respect the bound
        if (cell.substitution == Substitution::inverse_loss ||
            cell.substitution == Substitution::worst_lookahead ||
            cell.substitution == Substitution::best_lookahead)
            CHECK(cell.final_regret <= cell.bound + 1e-6);
    }

    fs::path dir2 = fresh_dir("sweep_b");
    SweepResult r2 = sweep_square_game(etas, ps, settings, substs, dir2.string(), 2024);
    CHECK(slurp(r2.manifest_path) == manifest);
    CHECK(slurp(dir2 / r2.cells[17].file) == slurp(dir / r.cells[17].file));
}
