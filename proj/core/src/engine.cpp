#include "mixlink/engine.hpp"

#include <algorithm>
#include <sstream>

namespace mixlink {

namespace {

constexpr double kEdge = 1e-12;

// Build the monotone solvers shared by both game-loss constructors. Direction
// is read off near the interval ends so infinite boundary losses are fine.
void attach_solvers(GameLoss& game) {
    double lo = game.v_lo;
    double hi = game.v_hi;
    double margin = 1e-9 * (hi - lo);
    auto loss = game.loss;
    game.solve_partial = [loss, lo, hi, margin](int y, double target) {
        bool increasing = loss(y, hi - margin) > loss(y, lo + margin);
        return solve_monotone([loss, y](double v) { return loss(y, v); }, target, lo, hi,
                              increasing, 1e-12);
    };
    game.solve_ratio = [loss, lo, hi, margin](double ratio) {
        auto r = [loss](double v) {
            double l1 = loss(0, v);
            double l2 = loss(1, v);
            if (l1 <= 0.0) return kInf;
            return l2 / l1;
        };
        bool increasing = r(hi - margin) > r(lo + margin);
        return solve_monotone(r, ratio, lo + margin, hi - margin, increasing, 1e-12);
    };
}

}  // namespace

GameLoss game_loss_from_proper(const ProperLossSpec& spec) {
    if (spec.n != 2) throw validation_error("game losses are binary");
    GameLoss game;
    game.name = spec.name;
    auto partial = spec.partial_loss;
    // prediction v is the reported probability of class 2
    game.loss = [partial](int y, double v) {
        if (y != 0 && y != 1) throw validation_error("outcome index out of range");
        return partial(binary_prob(1.0 - v))[static_cast<std::size_t>(y)];
    };
    game.v_lo = 0.0;
    game.v_hi = 1.0;
    if (spec.name == "log") game.exp_concavity_limit = 1.0;
    if (spec.name == "square_scalar") game.exp_concavity_limit = 0.5;
    if (spec.name == "square_vector") game.exp_concavity_limit = 0.25;
    attach_solvers(game);
    return game;
}

GameLoss game_loss_from_composite(const CompositeLoss& comp) {
    if (comp.base.n != 2) throw validation_error("game losses are binary");
    GameLoss game;
    game.name = comp.base.name + " o " + comp.link.name;
    CompositeLoss local = comp;
    game.loss = [local](int y, double v) { return composite_partial(local, y + 1, v); };
    game.v_lo = comp.link.v_lo;
    game.v_hi = comp.link.v_hi;
    attach_solvers(game);
    return game;
}

Algorithm parse_algorithm(const std::string& s) {
    if (s == "aa" || s == "AA") return Algorithm::AA;
    if (s == "waa" || s == "WAA") return Algorithm::WAA;
    throw validation_error("unknown algorithm: " + s);
}

Substitution parse_substitution(const std::string& s) {
    if (s == "best" || s == "best_lookahead") return Substitution::best_lookahead;
    if (s == "worst" || s == "worst_lookahead") return Substitution::worst_lookahead;
    if (s == "inverse" || s == "inverse_loss") return Substitution::inverse_loss;
    if (s == "average" || s == "weighted_average") return Substitution::weighted_average;
    throw validation_error("unknown substitution: " + s);
}

std::string to_string(Substitution s) {
    switch (s) {
        case Substitution::best_lookahead: return "best_lookahead";
        case Substitution::worst_lookahead: return "worst_lookahead";
        case Substitution::inverse_loss: return "inverse_loss";
        case Substitution::weighted_average: return "weighted_average";
    }
    return "?";
}

Vec update_weights(const Vec& weights, const Vec& losses, double eta) {
    if (weights.size() != losses.size())
        throw validation_error("update_weights: dimension mismatch");
    if (!(eta > 0.0)) throw validation_error("eta must be positive");
    Vec next(weights.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        next[i] = weights[i] * std::exp(-eta * losses[i]);
        sum += next[i];
    }
    if (!(sum > 0.0)) throw std::runtime_error("all expert weight mass vanished");
    for (double& v : next) v /= sum;
    return next;
}

Vec generalized_prediction(const Vec& weights, const std::vector<Vec>& expert_loss_vectors,
                           double eta) {
    if (weights.empty() || weights.size() != expert_loss_vectors.size())
        throw validation_error("generalized_prediction: dimension mismatch");
    std::size_t n = expert_loss_vectors.front().size();
    Vec g(n);
    for (std::size_t j = 0; j < n; ++j) {
        double shift = kInf;
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (weights[i] > 0.0) shift = std::min(shift, expert_loss_vectors[i][j]);
        if (!std::isfinite(shift)) {
            g[j] = kInf;
            continue;
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (weights[i] > 0.0)
                sum += weights[i] * std::exp(-eta * (expert_loss_vectors[i][j] - shift));
        g[j] = shift - std::log(sum) / eta;
    }
    return g;
}

double substitute(const GameConfig& config, const Vec& g, int y, const Vec& weights,
                  const Vec& expert_predictions) {
    if (g.size() != 2) throw validation_error("substitution is binary only");
    const GameLoss& loss = config.loss;
    switch (config.substitution) {
        case Substitution::best_lookahead:
        case Substitution::worst_lookahead: {
            if (y != 0 && y != 1) throw validation_error("look-ahead needs the outcome");
            // endpoint attaining l_y(v) = g_y is the worst choice for outcome y
            double worst = loss.solve_partial(y, g[static_cast<std::size_t>(y)]);
            if (config.substitution == Substitution::worst_lookahead) return worst;
            return loss.solve_partial(1 - y, g[static_cast<std::size_t>(1 - y)]);
        }
        case Substitution::inverse_loss: {
            if (!(g[0] > 0.0)) {
                if (g[0] == 0.0 && g[1] > 0.0)
                    throw validation_error("inverse loss ratio has zero denominator");
                // both components zero: any endpoint attains them
                return loss.solve_partial(0, g[0]);
            }
            return loss.solve_ratio(g[1] / g[0]);
        }
        case Substitution::weighted_average: {
            bool verified = loss.exp_concavity_limit &&
                            config.eta <= *loss.exp_concavity_limit + 1e-12;
            if (!verified && !config.allow_unsafe_average)
                throw validation_error(
                    "weighted average substitution needs a verified exp-concave eta "
                    "(or the unsafe override)");
            double v = 0.0;
            for (std::size_t i = 0; i < weights.size(); ++i)
                v += weights[i] * expert_predictions[i];
            return v;
        }
    }
    throw validation_error("unknown substitution");
}

StepResult aa_step(const GameConfig& config, const Vec& weights,
                   const Vec& expert_predictions, int outcome) {
    const GameLoss& loss = config.loss;
    std::vector<Vec> vectors(expert_predictions.size());
    for (std::size_t i = 0; i < expert_predictions.size(); ++i)
        vectors[i] = {loss.loss(0, expert_predictions[i]), loss.loss(1, expert_predictions[i])};
    Vec g = generalized_prediction(weights, vectors, config.eta);
    StepResult step;
    step.prediction = substitute(config, g, outcome, weights, expert_predictions);
    step.loss = loss.loss(outcome, step.prediction);
    step.expert_losses.resize(expert_predictions.size());
    for (std::size_t i = 0; i < expert_predictions.size(); ++i)
        step.expert_losses[i] = vectors[i][static_cast<std::size_t>(outcome)];
    step.new_weights = update_weights(weights, step.expert_losses, config.eta);
    return step;
}

StepResult waa_step(const GameConfig& config, const Vec& weights,
                    const Vec& expert_predictions, int outcome) {
    const GameLoss& loss = config.loss;
    StepResult step;
    step.prediction = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        step.prediction += weights[i] * expert_predictions[i];
    step.loss = loss.loss(outcome, step.prediction);
    step.expert_losses.resize(expert_predictions.size());
    for (std::size_t i = 0; i < expert_predictions.size(); ++i)
        step.expert_losses[i] = loss.loss(outcome, expert_predictions[i]);
    step.new_weights = update_weights(weights, step.expert_losses, config.eta);
    return step;
}

std::string RegretTrace::to_csv() const {
    std::ostringstream os;
    os << "t,outcome,prediction,loss,cum_loss,best_expert_cum,regret,bound\n";
    for (const TraceRow& r : rows)
        os << r.t << ',' << r.outcome << ',' << format_double(r.prediction) << ','
           << format_double(r.loss) << ',' << format_double(r.cum_loss) << ','
           << format_double(r.best_expert_cum) << ',' << format_double(r.regret) << ','
           << format_double(r.bound) << '\n';
    return os.str();
}

RegretTrace run_game(const GameConfig& config, const ExpertPool& pool,
                     const std::vector<int>& outcomes) {
    if (pool.N == 0) throw validation_error("expert pool is empty");
    if (!(config.eta > 0.0)) throw validation_error("eta must be positive");
    RegretTrace trace;
    trace.bound = regret_bound(pool.N, config.eta);
    trace.expert_cum_losses.assign(pool.N, 0.0);
    Vec weights(pool.N, 1.0 / static_cast<double>(pool.N));
    double cum = 0.0;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        int y = outcomes[t];
        if (y != 1 && y != 2)
            throw validation_error("outcome at round " + std::to_string(t + 1) +
                                   " must be class 1 or 2");
        Vec preds = pool.predict(t);
        if (preds.size() != pool.N)
            throw std::runtime_error("expert pool returned wrong arity at round " +
                                     std::to_string(t + 1));
        for (double v : preds)
            if (!(v >= config.loss.v_lo - 1e-9 && v <= config.loss.v_hi + 1e-9))
                throw validation_error("expert prediction outside the prediction space at round " +
                                       std::to_string(t + 1));
        StepResult step;
        try {
            step = config.algorithm == Algorithm::AA ? aa_step(config, weights, preds, y - 1)
                                                     : waa_step(config, weights, preds, y - 1);
        } catch (const validation_error&) {
            throw;
        } catch (const std::exception& e) {
            throw std::runtime_error("round " + std::to_string(t + 1) + ": " + e.what());
        }
        cum += step.loss;
        for (std::size_t i = 0; i < pool.N; ++i)
            trace.expert_cum_losses[i] += step.expert_losses[i];
        double best = *std::min_element(trace.expert_cum_losses.begin(),
                                        trace.expert_cum_losses.end());
        TraceRow row;
        row.t = t + 1;
        row.outcome = y;
        row.prediction = step.prediction;
        row.loss = step.loss;
        row.cum_loss = cum;
        row.best_expert_cum = best;
        row.regret = cum - best;
        row.bound = trace.bound;
        trace.rows.push_back(row);
        weights = step.new_weights;
    }
    trace.final_regret = trace.rows.empty() ? 0.0 : trace.rows.back().regret;
    return trace;
}

double regret_bound(std::size_t N, double eta) {
    if (N < 1) throw validation_error("need at least one expert");
    if (!(eta > 0.0)) throw validation_error("eta must be positive");
    return std::log(static_cast<double>(N)) / eta;
}

}  // namespace mixlink
