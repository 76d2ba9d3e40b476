#include "mixlink/harness.hpp"

#include <filesystem>
#include <random>
#include <fstream>
#include <sstream>

namespace mixlink {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw validation_error("malformed number '" + s + "' at line " +
                               std::to_string(line_no));
    }
}

}  // namespace

std::vector<int> generate_outcomes(const OutcomeSpec& spec) {
    if (spec.kind == OutcomeSpec::Kind::file) return ingest_outcome_csv(spec.path).outcomes;
    if (!(spec.p >= 0.0 && spec.p <= 1.0))
        throw validation_error("Bernoulli probability must lie in [0, 1]");
    std::mt19937_64 rng(spec.seed);
    std::vector<int> out;
    out.reserve(spec.T);
    for (std::size_t t = 0; t < spec.T; ++t) {
        // explicit 53-bit draw, identical across platforms
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        out.push_back(u < spec.p ? 2 : 1);
    }
    return out;
}

ExpertSettingSpec parse_expert_setting(const std::string& s) {
    ExpertSettingSpec spec;
    if (s == "1" || s == "setting1") spec.kind = ExpertSettingSpec::Kind::setting1;
    else if (s == "2" || s == "setting2") spec.kind = ExpertSettingSpec::Kind::setting2;
    else if (s == "3" || s == "setting3") spec.kind = ExpertSettingSpec::Kind::setting3;
    else {
        spec.kind = ExpertSettingSpec::Kind::file;
        spec.path = s;
    }
    return spec;
}

ExpertPool build_experts(const ExpertSettingSpec& spec, const std::vector<int>& outcomes) {
    ExpertPool pool;
    switch (spec.kind) {
        case ExpertSettingSpec::Kind::setting1:
            pool.N = 2;
            pool.predict = [](std::size_t) { return Vec{0.0, 1.0}; };
            return pool;
        case ExpertSettingSpec::Kind::setting2: {
            pool.N = 3;
            std::vector<int> ys = outcomes;
            pool.predict = [ys](std::size_t t) {
                if (t >= ys.size()) throw std::runtime_error("oracle expert past horizon");
                return Vec{0.0, 1.0, ys[t] == 2 ? 1.0 : 0.0};
            };
            return pool;
        }
        case ExpertSettingSpec::Kind::setting3: {
            pool.N = 101;
            pool.predict = [](std::size_t) {
                Vec v(101);
                for (int k = 0; k <= 100; ++k) v[static_cast<std::size_t>(k)] = k / 100.0;
                return v;
            };
            return pool;
        }
        case ExpertSettingSpec::Kind::file: {
            IngestedData data = ingest_outcome_csv(spec.path);
            if (!data.expert_predictions)
                throw validation_error("expert file has no prediction columns: " + spec.path);
            return pool_from_predictions(*data.expert_predictions);
        }
    }
    throw validation_error("unknown expert setting");
}

IngestedData ingest_outcome_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw validation_error("empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t" || header[1] != "y")
        throw validation_error("expected header t,y[,e1,...] in " + path);
    std::size_t experts = header.size() - 2;
    IngestedData data;
    if (experts > 0) data.expert_predictions = std::vector<Vec>{};
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw validation_error("row with " + std::to_string(cells.size()) +
                                   " cells (expected " + std::to_string(header.size()) +
                                   ") at line " + std::to_string(line_no));
        double y = parse_number(cells[1], line_no);
        if (y != 0.0 && y != 1.0)
            throw validation_error("outcome must be 0 or 1 at line " + std::to_string(line_no));
        data.outcomes.push_back(y == 1.0 ? 2 : 1);
        if (experts > 0) {
            Vec preds(experts);
            for (std::size_t i = 0; i < experts; ++i) {
                preds[i] = parse_number(cells[i + 2], line_no);
                if (!(preds[i] >= 0.0 && preds[i] <= 1.0))
                    throw validation_error("expert prediction outside [0, 1] at line " +
                                           std::to_string(line_no));
            }
            data.expert_predictions->push_back(std::move(preds));
        }
    }
    return data;
}

ExpertPool pool_from_predictions(const std::vector<Vec>& predictions) {
    if (predictions.empty()) throw validation_error("no prediction rows");
    ExpertPool pool;
    pool.N = predictions.front().size();
    for (const Vec& row : predictions)
        if (row.size() != pool.N) throw validation_error("ragged prediction rows");
    std::vector<Vec> rows = predictions;
    pool.predict = [rows](std::size_t t) {
        if (t >= rows.size()) throw std::runtime_error("prediction file past horizon");
        return rows[t];
    };
    return pool;
}

std::uint64_t cell_seed(std::uint64_t master_seed, double p, double eta, int setting,
                        Substitution subst) {
    std::string key = "p=" + format_double(p) + "|eta=" + format_double(eta) +
                      "|setting=" + std::to_string(setting) + "|subst=" + to_string(subst) +
                      "|master=" + std::to_string(master_seed);
    return stable_hash(key);
}

SweepResult sweep_square_game(const std::vector<double>& etas, const std::vector<double>& ps,
                              const std::vector<int>& settings,
                              const std::vector<Substitution>& substitutions,
                              const std::string& out_dir, std::uint64_t master_seed,
                              std::size_t T) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    GameLoss square = game_loss_from_proper(catalog_loss("square_scalar", 2));
    SweepResult result;
    std::ostringstream manifest;
    manifest << "file,substitution,eta,p,setting,N,final_regret,bound\n";
    for (Substitution subst : substitutions) {
        for (double eta : etas) {
            for (double p : ps) {
                for (int setting : settings) {
                    OutcomeSpec ospec;
                    ospec.p = p;
                    ospec.T = T;
                    ospec.seed = cell_seed(master_seed, p, eta, setting, subst);
                    std::vector<int> outcomes = generate_outcomes(ospec);
                    ExpertPool pool =
                        build_experts(parse_expert_setting(std::to_string(setting)), outcomes);
                    GameConfig config;
                    config.loss = square;
                    config.algorithm = Algorithm::AA;
                    config.substitution = subst;
                    config.eta = eta;
                    config.seed = ospec.seed;
                    RegretTrace trace = run_game(config, pool, outcomes);
                    SweepCell cell;
                    cell.substitution = subst;
                    cell.eta = eta;
                    cell.p = p;
                    cell.setting = setting;
                    cell.N = pool.N;
                    cell.final_regret = trace.final_regret;
                    cell.bound = trace.bound;
                    cell.file = "sweep_" + to_string(subst) + "_eta" + format_double(eta) +
                                "_p" + format_double(p) + "_s" + std::to_string(setting) +
                                ".csv";
                    std::ofstream out(fs::path(out_dir) / cell.file);
                    if (!out) throw std::runtime_error("cannot write " + cell.file);
                    out << trace.to_csv();
                    manifest << cell.file << ',' << to_string(subst) << ','
                             << format_double(eta) << ',' << format_double(p) << ',' << setting
                             << ',' << cell.N << ',' << format_double(cell.final_regret) << ','
                             << format_double(cell.bound) << '\n';
                    result.cells.push_back(std::move(cell));
                }
            }
        }
    }
    fs::path mpath = fs::path(out_dir) / "manifest.csv";
    std::ofstream mout(mpath);
    if (!mout) throw std::runtime_error("cannot write manifest");
    mout << manifest.str();
    result.manifest_path = mpath.string();
    return result;
}

}  // namespace mixlink
