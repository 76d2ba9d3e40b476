#pragma once

#include "mixlink/engine.hpp"

namespace mixlink {

struct OutcomeSpec {
    enum class Kind { bernoulli, file } kind = Kind::bernoulli;
    double p = 0.5;           // probability of class 2 ("success")
    std::size_t T = 100;
    std::uint64_t seed = 0;
    std::string path;
};

// Seeded, platform-stable Bernoulli sequence of classes in {1, 2}.
std::vector<int> generate_outcomes(const OutcomeSpec& spec);

struct ExpertSettingSpec {
    enum class Kind { setting1, setting2, setting3, file } kind = Kind::setting1;
    std::string path;
};

ExpertSettingSpec parse_expert_setting(const std::string& s);

// setting1: constants {0, 1}; setting2: those plus an oracle that predicts the
// realized outcome; setting3: 101 constants 0.00..1.00.
ExpertPool build_experts(const ExpertSettingSpec& spec, const std::vector<int>& outcomes);

// CSV with header t,y[,e1,...,eN]; y in {0,1} maps to classes {1,2}.
struct IngestedData {
    std::vector<int> outcomes;
    std::optional<std::vector<Vec>> expert_predictions;
};
IngestedData ingest_outcome_csv(const std::string& path);

ExpertPool pool_from_predictions(const std::vector<Vec>& predictions);

// Full sweep of the scalar square-loss game: every combination of
// substitution x eta x outcome probability x expert setting, one trace CSV
// per cell plus a manifest listing final regrets.
struct SweepCell {
    Substitution substitution;
    double eta;
    double p;
    int setting;
    std::string file;
    std::size_t N;
    double final_regret;
    double bound;
};
struct SweepResult {
    std::vector<SweepCell> cells;
    std::string manifest_path;
};
SweepResult sweep_square_game(const std::vector<double>& etas, const std::vector<double>& ps,
                              const std::vector<int>& settings,
                              const std::vector<Substitution>& substitutions,
                              const std::string& out_dir, std::uint64_t master_seed,
                              std::size_t T = 100);

std::uint64_t cell_seed(std::uint64_t master_seed, double p, double eta, int setting,
                        Substitution subst);

}  // namespace mixlink
