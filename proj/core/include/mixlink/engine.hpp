#pragma once

#include "mixlink/links.hpp"

namespace mixlink {

// Binary game view of a loss: predictions live in [v_lo, v_hi], outcomes are
// classes 1 and 2 (y index 0 and 1 here). For proper losses the prediction is
// the reported probability of class 2; for composites it is the link value.
struct GameLoss {
    std::string name;
    std::function<double(int y, double v)> loss;  // y in {0,1}
    double v_lo = 0.0;
    double v_hi = 1.0;
    // Solve l_y(v) = target within the prediction interval (monotone).
    std::function<double(int y, double target)> solve_partial;
    // Solve l_2(v) / l_1(v) = ratio (the ratio is monotone in v).
    std::function<double(double ratio)> solve_ratio;
    // Largest alpha for which the loss is known exp-concave (validation of
    // weighted-average prediction); unset means unknown.
    std::optional<double> exp_concavity_limit;
};

GameLoss game_loss_from_proper(const ProperLossSpec& spec);
GameLoss game_loss_from_composite(const CompositeLoss& comp);

enum class Algorithm { AA, WAA };
enum class Substitution { best_lookahead, worst_lookahead, inverse_loss, weighted_average };

Algorithm parse_algorithm(const std::string& s);
Substitution parse_substitution(const std::string& s);
std::string to_string(Substitution s);

struct GameConfig {
    GameLoss loss;
    Algorithm algorithm = Algorithm::AA;
    Substitution substitution = Substitution::inverse_loss;
    double eta = 1.0;
    std::uint64_t seed = 0;
    // Permit weighted-average prediction beyond the verified exp-concavity range.
    bool allow_unsafe_average = false;
};

// Experts' predictions per round; outcomes are fixed up front so oracle-style
// experts can be represented.
struct ExpertPool {
    std::size_t N = 0;
    std::function<Vec(std::size_t t)> predict;
};

Vec update_weights(const Vec& weights, const Vec& losses, double eta);

// g(j) = -(1/eta) log sum_i w_i exp(-eta l_j(v_i)), computed with a max shift.
Vec generalized_prediction(const Vec& weights, const std::vector<Vec>& expert_loss_vectors,
                           double eta);

// Map a generalized prediction to a permitted prediction. Look-ahead variants
// receive the revealed outcome y in {0,1} (ignored otherwise); the weighted
// average additionally needs the current weights and expert predictions.
double substitute(const GameConfig& config, const Vec& g, int y,
                  const Vec& weights, const Vec& expert_predictions);

struct StepResult {
    double prediction = 0.0;
    double loss = 0.0;
    Vec expert_losses;
    Vec new_weights;
};
StepResult aa_step(const GameConfig& config, const Vec& weights,
                   const Vec& expert_predictions, int outcome);
StepResult waa_step(const GameConfig& config, const Vec& weights,
                    const Vec& expert_predictions, int outcome);

struct TraceRow {
    std::size_t t = 0;
    int outcome = 0;  // class index, 1-based in serialized form
    double prediction = 0.0;
    double loss = 0.0;
    double cum_loss = 0.0;
    double best_expert_cum = 0.0;
    double regret = 0.0;
    double bound = 0.0;
};

struct RegretTrace {
    std::vector<TraceRow> rows;
    Vec expert_cum_losses;
    double final_regret = 0.0;
    double bound = 0.0;

    std::string to_csv() const;  // header: t,outcome,prediction,loss,cum_loss,best_expert_cum,regret,bound
};

// outcomes are classes in {1, 2}.
RegretTrace run_game(const GameConfig& config, const ExpertPool& pool,
                     const std::vector<int>& outcomes);

double regret_bound(std::size_t N, double eta);

}  // namespace mixlink
