#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mixlink/analysis.hpp"
#include "mixlink/bregman.hpp"
#include "mixlink/geometry.hpp"
#include "mixlink/harness.hpp"

using namespace mixlink;

namespace {

Vec parse_vec(const std::string& s) {
    Vec out;
    std::string cell;
    std::istringstream is(s);
    while (std::getline(is, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw validation_error("bad number '" + cell + "' in '" + s + "'");
        }
    }
    if (out.empty()) throw validation_error("empty vector '" + s + "'");
    return out;
}

LinkFunction make_link(const std::string& name, const ProperLossSpec& loss, double beta) {
    if (name == "identity") return identity_link();
    if (name == "canonical") return canonical_link(loss);
    if (name == "expconcavifying" || name == "psi_star") return exp_concavifying_link(loss);
    if (name == "geometric") return geometric_link(loss, beta);
    throw validation_error("unknown link: " + name);
}

void write_or_print(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

void print_report(const GridReport& r) {
    std::cout << "verdict: " << (r.verdict ? "true" : "false");
    if (r.verdict && r.necessary_only) std::cout << " (inconclusive_if_true)";
    std::cout << "\nmin_slack: " << format_double(r.min_slack) << '\n';
    if (r.witness) std::cout << "witness: " << format_double(*r.witness) << '\n';
}

int run_cli(int argc, char** argv) {
    CLI::App app{"proper losses, links, mixability checks and expert-advice games"};
    app.set_config("--config");
    app.require_subcommand(1);

    std::string loss_name = "log", link_name = "identity", out_path, q_str, p_str;
    int n = 2;
    double alpha = 1.0, beta = 1.0, eta = 0.3, v_value = 0.5, epsilon = 0.05;

    auto* losses = app.add_subcommand("losses", "evaluate catalog losses");
    auto* losses_eval = losses->add_subcommand("eval", "partial losses and risks");
    losses_eval->add_option("--loss", loss_name)->required();
    losses_eval->add_option("--n", n);
    losses_eval->add_option("--q", q_str, "prediction distribution, comma separated")->required();
    losses_eval->add_option("--p", p_str, "outcome distribution for the conditional risk");

    auto* check = app.add_subcommand("check", "mixability and exp-concavity checks");
    auto* chk_mix = check->add_subcommand("mixability", "grid mixability");
    chk_mix->add_option("--loss", loss_name)->required();
    chk_mix->add_option("--beta", beta, "also run the midpoint curve test at this beta");
    bool have_beta = false;
    chk_mix->callback([&] { have_beta = chk_mix->count("--beta") > 0; });
    auto* chk_exp = check->add_subcommand("expconcavity", "midpoint exp-concavity");
    chk_exp->add_option("--loss", loss_name)->required();
    chk_exp->add_option("--alpha", alpha)->required();
    chk_exp->add_option("--link", link_name);
    chk_exp->add_option("--beta", beta, "beta for the geometric link");
    chk_exp->add_option("--n", n);
    bool normalize = false;
    chk_exp->add_flag("--normalize", normalize, "scale the loss to weight 1 at 1/2");
    auto* chk_p6 = check->add_subcommand("prop6", "necessary weight envelope");
    chk_p6->add_option("--loss", loss_name)->required();
    chk_p6->add_option("--alpha", alpha)->required();
    chk_p6->add_option("--link", link_name);
    chk_p6->add_option("--beta", beta);
    chk_p6->add_option("--out", out_path, "write the grid report CSV here");
    auto* chk_t7 = check->add_subcommand("thm7", "sufficient integral condition");
    chk_t7->add_option("--loss", loss_name)->required();
    chk_t7->add_option("--alpha", alpha)->required();

    auto* link = app.add_subcommand("link", "link evaluation and inversion");
    auto* link_eval = link->add_subcommand("eval", "psi(p_tilde)");
    link_eval->add_option("--loss", loss_name)->required();
    link_eval->add_option("--link", link_name)->required();
    link_eval->add_option("--beta", beta);
    link_eval->add_option("--p", p_str)->required();
    auto* link_inv = link->add_subcommand("invert", "psi^{-1}(v)");
    link_inv->add_option("--loss", loss_name)->required();
    link_inv->add_option("--link", link_name)->required();
    link_inv->add_option("--beta", beta);
    link_inv->add_option("--v", v_value)->required();

    auto* run = app.add_subcommand("run", "one expert-advice game");
    std::string algo = "aa", subst = "inverse_loss", experts = "1", outcomes = "bernoulli";
    double bern_p = 0.5;
    std::size_t horizon = 100;
    std::uint64_t seed = 0;
    run->add_option("--loss", loss_name);
    run->add_option("--algo", algo);
    run->add_option("--subst", subst);
    run->add_option("--eta", eta);
    run->add_option("--experts", experts, "1|2|3 or a prediction CSV");
    run->add_option("--outcomes", outcomes, "'bernoulli' or an outcome CSV");
    run->add_option("--p", bern_p, "Bernoulli success probability");
    run->add_option("--T", horizon);
    run->add_option("--seed", seed);
    run->add_option("--out", out_path, "trace CSV path");
    bool unsafe_avg = false;
    run->add_flag("--allow-unsafe-average", unsafe_avg);

    auto* sweep = app.add_subcommand("sweep", "full square-loss sweep");
    std::string sweep_dir = "sweep_out";
    sweep->add_option("--out", sweep_dir);
    sweep->add_option("--seed", seed);
    sweep->add_option("--T", horizon);

    auto* geometry = app.add_subcommand("geometry", "exp-prediction geometry");
    int resolution = 60, samples = 2000;
    auto* geo_cloud = geometry->add_subcommand("cloud", "exp-transformed loss grid");
    geo_cloud->add_option("--loss", loss_name)->required();
    geo_cloud->add_option("--n", n);
    geo_cloud->add_option("--beta", beta);
    geo_cloud->add_option("--m", resolution);
    geo_cloud->add_option("--out", out_path);
    auto* geo_sur = geometry->add_subcommand("surrogate", "hyperplane surrogate loss");
    geo_sur->add_option("--loss", loss_name)->required();
    geo_sur->add_option("--n", n);
    geo_sur->add_option("--beta", beta);
    geo_sur->add_option("--epsilon", epsilon);
    geo_sur->add_option("--m", resolution);
    geo_sur->add_option("--p", p_str)->required();
    auto* geo_wit = geometry->add_subcommand("witness", "ray escape search");
    geo_wit->add_option("--loss", loss_name)->required();
    geo_wit->add_option("--n", n);
    geo_wit->add_option("--beta", beta);
    geo_wit->add_option("--m", resolution);
    geo_wit->add_option("--samples", samples);
    geo_wit->add_option("--seed", seed);
    geo_wit->add_option("--out", out_path);

    auto* bregman = app.add_subcommand("bregman", "divergences and pair losses");
    auto* breg_kl = bregman->add_subcommand("kl", "KL loss");
    std::string y_str;
    breg_kl->add_option("--y", y_str)->required();
    breg_kl->add_option("--v", p_str)->required();
    auto* breg_check = bregman->add_subcommand("check", "pair-loss mixability conditions");
    std::string pair_name = "kl";
    double c_beta = 1.0;
    breg_check->add_option("--pair", pair_name, "kl or blf:<loss>");
    breg_check->add_option("--beta", beta);
    breg_check->add_option("--c", c_beta);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // bad flags are validation errors
    }

    if (losses_eval->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, n);
        ProbVector q(parse_vec(q_str));
        Vec l = loss.partial_loss(q);
        std::cout << "partial_loss:";
        for (double v : l) std::cout << ' ' << format_double(v);
        std::cout << '\n';
        if (!p_str.empty()) {
            ProbVector p(parse_vec(p_str));
            std::cout << "conditional_risk: " << format_double(conditional_risk(loss, p, q))
                      << '\n';
            std::cout << "bayes_risk: " << format_double(loss.bayes_risk(p)) << '\n';
        }
    } else if (chk_mix->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, 2);
        std::cout << "grid_estimate: " << format_double(grid_mixability_estimate(loss)) << '\n';
        std::cout << "constant: " << format_double(mixability_constant(loss)) << '\n';
        if (have_beta) {
            GridReport r = numeric_mixability(loss, beta);
            std::cout << "midpoint_test(beta=" << format_double(beta)
                      << "): " << (r.verdict ? "true" : "false") << '\n';
        }
    } else if (chk_exp->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, n);
        if (normalize) loss = normalize_loss(loss);
        CompositeLoss comp{loss, n == 2 ? make_link(link_name, loss, beta) : identity_link()};
        print_report(numeric_exp_concavity(comp, alpha));
    } else if (chk_p6->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, 2);
        GridReport r = link_name == "identity"
                           ? check_identity_weight_envelope(loss, alpha)
                           : check_weight_envelope(loss, make_link(link_name, loss, beta), alpha);
        print_report(r);
        if (!out_path.empty()) write_or_print(out_path, r.to_csv());
    } else if (chk_t7->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, 2);
        auto [a, b] = integral_condition_generators(loss);
        SufficientConditionReport rep = check_sufficient_integral_condition(loss, a, b, alpha);
        std::cout << "verdict: " << (rep.verdict ? "true" : "false") << '\n';
        std::cout << "min_slack: " << format_double(rep.inequalities.min_slack) << '\n';
        std::cout << "reconstruction_max_err: " << format_double(rep.reconstruction_max_err)
                  << '\n';
    } else if (link_eval->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, 2);
        LinkFunction lk = make_link(link_name, loss, beta);
        double pt = parse_vec(p_str)[0];
        std::cout << "psi: " << format_double(lk.forward(pt)) << '\n';
        std::cout << "psi_prime: " << format_double(lk.derivative(pt)) << '\n';
    } else if (link_inv->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, 2);
        LinkFunction lk = make_link(link_name, loss, beta);
        std::cout << "p_tilde: " << format_double(invert_link(lk, v_value)) << '\n';
    } else if (run->parsed()) {
        GameConfig config;
        config.loss = game_loss_from_proper(catalog_loss(loss_name, 2));
        config.algorithm = parse_algorithm(algo);
        config.substitution = parse_substitution(subst);
        config.eta = eta;
        config.seed = seed;
        config.allow_unsafe_average = unsafe_avg;
        OutcomeSpec ospec;
        if (outcomes == "bernoulli") {
            ospec.p = bern_p;
            ospec.T = horizon;
            ospec.seed = seed;
        } else {
            ospec.kind = OutcomeSpec::Kind::file;
            ospec.path = outcomes;
        }
        std::vector<int> ys = generate_outcomes(ospec);
        ExpertPool pool = build_experts(parse_expert_setting(experts), ys);
        RegretTrace trace = run_game(config, pool, ys);
        std::cout << "final_regret: " << format_double(trace.final_regret) << '\n';
        std::cout << "bound: " << format_double(trace.bound) << '\n';
        if (!out_path.empty()) write_or_print(out_path, trace.to_csv());
    } else if (sweep->parsed()) {
        SweepResult result = sweep_square_game(
            {0.1, 0.3, 0.5}, {0.5, 0.7, 0.9, 1.0}, {1, 2, 3},
            {Substitution::best_lookahead, Substitution::worst_lookahead,
             Substitution::inverse_loss, Substitution::weighted_average},
            sweep_dir, seed, horizon);
        std::cout << "cells: " << result.cells.size() << '\n';
        std::cout << "manifest: " << result.manifest_path << '\n';
    } else if (geo_cloud->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, n);
        write_or_print(out_path, build_cloud(loss, beta, resolution).to_csv());
    } else if (geo_sur->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, n);
        SurrogateModel model = build_surrogate(loss, beta, epsilon, resolution);
        ProbVector p(parse_vec(p_str));
        SurrogateSolution sol = surrogate_loss(model, p);
        std::cout << "surrogate_loss:";
        for (double v : sol.loss_vector) std::cout << ' ' << format_double(v);
        std::cout << '\n';
        std::cout << "duality_gap: " << format_double(sol.duality_gap) << '\n';
        std::cout << "in_S_epsilon: "
                  << (in_S_epsilon(loss, beta, epsilon, p) ? "true" : "false") << '\n';
    } else if (geo_wit->parsed()) {
        ProperLossSpec loss = catalog_loss(loss_name, n);
        ExpPredictionCloud cloud = build_cloud(loss, beta, resolution);
        auto witness = ray_escape_witness(loss, cloud, samples, 1e-3, seed == 0 ? 1 : seed);
        if (witness) {
            std::cout << "witness: found (surface distance "
                      << format_double(witness->surface_distance) << ")\n";
            if (!out_path.empty()) write_or_print(out_path, witness->to_csv());
        } else {
            std::cout << "witness: none\n";
        }
    } else if (breg_kl->parsed()) {
        ProbVector y(parse_vec(y_str));
        ProbVector v(parse_vec(p_str));
        std::cout << "kl_loss: " << format_double(kl_loss(y, v)) << '\n';
    } else if (breg_check->parsed()) {
        PairLoss pair;
        if (pair_name == "kl") pair = kl_pair_loss(2);
        else if (pair_name.rfind("blf:", 0) == 0)
            pair = blf_from_proper_loss(catalog_loss(pair_name.substr(4), 2));
        else
            throw validation_error("unknown pair loss: " + pair_name);
        GridReport r = check_pair_mixability_condition(pair, beta, c_beta);
        std::cout << "pointwise_condition: " << (r.verdict ? "true" : "false") << '\n';
        std::cout << "vertex_mixability: "
                  << (check_blf_mixability(pair, beta) ? "true" : "false") << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
