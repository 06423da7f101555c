#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shsbm/enumeration.hpp"
#include "shsbm/errors.hpp"
#include "shsbm/experiments.hpp"
#include "shsbm/json_io.hpp"
#include "shsbm/mle.hpp"
#include "shsbm/model.hpp"
#include "shsbm/oracles.hpp"
#include "shsbm/parallel.hpp"
#include "shsbm/rng.hpp"
#include "shsbm/thresholds.hpp"

namespace {

using Json = nlohmann::ordered_json;

// Truth stream tag shared with the batch harness so `sample --seed S` and a
// one-trial batch at the same seed draw the same hidden truth.
constexpr std::uint64_t kTruthTag = 0x74727574;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) shsbm::fail("io_error", "cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) shsbm::fail("io_error", "cannot open '" + path + "' for writing");
    out << content;
    if (!out) shsbm::fail("io_error", "failed writing '" + path + "'");
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_file(out_path, content);
    }
}

shsbm::ThresholdParams threshold_params(double c0, double constant,
                                        const std::string& mode) {
    shsbm::ThresholdParams params;
    params.c0 = c0;
    params.C_upper = constant;
    params.mode = shsbm::mode_from_name(mode);
    params.validate();
    return params;
}

std::pair<double, double> sigma_pair(const shsbm::Instance& instance) {
    return {instance.dist_in.sub_gaussian_sq, instance.dist_out.sub_gaussian_sq};
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int jobs = 0;  // resolved via default_jobs() when 0
};

int resolved_jobs(int jobs) { return jobs > 0 ? jobs : shsbm::default_jobs(); }

int cmd_sample(const CommonFlags& flags, const std::string& truth_path) {
    const shsbm::Instance instance = shsbm::instance_from_json(read_file(flags.config_path));
    shsbm::Hypothesis truth;
    if (truth_path.empty()) {
        shsbm::Rng truth_rng(shsbm::mix64(flags.seed ^ kTruthTag));
        truth = shsbm::random_hypothesis(instance.config.n, instance.config.r,
                                         instance.config.k, truth_rng);
    } else {
        truth = shsbm::hypothesis_from_json(read_file(truth_path));
        if (truth.n() != instance.config.n || truth.r != instance.config.r ||
            truth.k != instance.config.k) {
            shsbm::fail("shape_mismatch", "truth file does not match the config");
        }
    }

    shsbm::TensorFile file;
    file.tensor = shsbm::sample_weights(instance.config, truth, instance.dist_in,
                                        instance.dist_out, flags.seed);
    file.dist_in = instance.dist_in;
    file.dist_out = instance.dist_out;
    file.seed = flags.seed;

    Json out;
    out["schema_version"] = 1;
    out["truth"] = Json::parse(shsbm::hypothesis_to_json(truth));
    out["weights"] = Json::parse(shsbm::tensor_file_to_json(file));
    emit(flags.out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_recover(const CommonFlags& flags, const std::string& weights_path,
                const std::string& truth_path, int r_flag, int k_flag, bool minimize) {
    const Json parsed = Json::parse(read_file(weights_path), nullptr, false);
    if (parsed.is_discarded()) shsbm::fail("parse_error", "malformed JSON");

    std::optional<shsbm::Hypothesis> truth;
    std::string tensor_text;
    if (parsed.contains("weights")) {
        tensor_text = parsed.at("weights").dump();
        if (parsed.contains("truth")) {
            truth = shsbm::hypothesis_from_json(parsed.at("truth").dump());
        }
    } else {
        tensor_text = parsed.dump();
    }
    if (!truth_path.empty()) truth = shsbm::hypothesis_from_json(read_file(truth_path));

    const shsbm::TensorFile file = shsbm::tensor_file_from_json(tensor_text);
    const shsbm::ModelConfig& config = file.tensor.config;
    if (r_flag > 0 && r_flag != config.r) {
        shsbm::fail("config_mismatch", "--r disagrees with the weights file");
    }
    if (k_flag > 0 && k_flag != config.k) {
        shsbm::fail("config_mismatch", "--k disagrees with the weights file");
    }

    const shsbm::Sense sense = minimize || config.q > config.p ? shsbm::Sense::minimize
                                                               : shsbm::Sense::maximize;
    const int jobs = resolved_jobs(flags.jobs);

    Json out;
    out["schema_version"] = 1;
    if (truth) {
        const auto [result, margin] =
            shsbm::solve_with_margin(file.tensor, *truth, sense, jobs);
        out["best_score"] = result.best_score;
        out["classes_evaluated"] = result.classes_evaluated;
        out["unique"] = result.unique;
        out["argmax_count"] = result.argmax_classes.size();
        out["hypothesis"] =
            Json::parse(shsbm::hypothesis_to_json(result.argmax_classes.front()));
        out["success"] = shsbm::recovery_success(result, *truth);
        out["score_margin"] = margin;
    } else {
        const shsbm::MleResult result =
            shsbm::solve(file.tensor, config.r, config.k, sense, jobs);
        out["best_score"] = result.best_score;
        out["classes_evaluated"] = result.classes_evaluated;
        out["unique"] = result.unique;
        out["argmax_count"] = result.argmax_classes.size();
        out["hypothesis"] =
            Json::parse(shsbm::hypothesis_to_json(result.argmax_classes.front()));
    }
    emit(flags.out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_threshold(const CommonFlags& flags, double c0, double constant,
                  const std::string& mode, const std::string& preset) {
    const shsbm::Instance instance = shsbm::instance_from_json(read_file(flags.config_path));
    const shsbm::ThresholdParams params = threshold_params(c0, constant, mode);
    const shsbm::ThresholdReport report =
        preset.empty()
            ? shsbm::classify(instance.config, params, sigma_pair(instance))
            : shsbm::preset_thresholds(shsbm::preset_from_name(preset), instance.config,
                                       params, sigma_pair(instance));
    emit(flags.out_path, shsbm::threshold_report_to_json(report));
    return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& grid_path, std::uint64_t trials,
              double c0, double constant, const std::string& mode) {
    const Json parsed = Json::parse(read_file(grid_path), nullptr, false);
    if (parsed.is_discarded()) shsbm::fail("parse_error", "malformed JSON");
    const Json& points = parsed.is_array()
                             ? parsed
                             : (parsed.contains("points") ? parsed.at("points") : parsed);
    if (!points.is_array() || points.empty()) {
        shsbm::fail("parse_error", "grid must be a non-empty array of config points");
    }

    std::vector<shsbm::Instance> grid;
    grid.reserve(points.size());
    for (const Json& point : points) {
        grid.push_back(shsbm::instance_from_json(point.dump()));
    }

    const shsbm::ThresholdParams params = threshold_params(c0, constant, mode);
    const auto rows =
        shsbm::sweep(grid, trials, flags.seed, resolved_jobs(flags.jobs), params);

    if (flags.out_path.empty()) {
        std::cout << shsbm::sweep_to_json(rows);
        return 0;
    }
    // --out BASE writes BASE.json, BASE.csv and, for a complete 2-D grid,
    // BASE.svg.
    write_file(flags.out_path + ".json", shsbm::sweep_to_json(rows));
    write_file(flags.out_path + ".csv", shsbm::sweep_to_csv(rows));
    try {
        write_file(flags.out_path + ".svg", shsbm::sweep_to_svg(rows));
    } catch (const shsbm::Error& error) {
        if (error.code() != "invalid_argument") throw;
        std::cerr << "skipping SVG: " << error.what() << "\n";
    }
    return 0;
}

int cmd_verify(const CommonFlags& flags, const std::string& suite, int max_n) {
    shsbm::VerifyCaps caps;
    caps.seed = flags.seed;
    if (max_n > 0) caps.max_n = max_n;

    std::vector<std::string> ids;
    if (suite == "all") {
        ids = shsbm::all_lemma_ids();
    } else {
        std::stringstream stream(suite);
        std::string id;
        while (std::getline(stream, id, ',')) {
            if (!id.empty()) ids.push_back(id);
        }
        if (ids.empty()) shsbm::fail("invalid_argument", "--suite names no checks");
    }

    bool all_pass = true;
    std::vector<shsbm::LemmaReport> reports;
    reports.reserve(ids.size());
    for (const std::string& id : ids) {
        reports.push_back(shsbm::verify_lemma(id, caps));
        all_pass = all_pass && reports.back().pass();
        std::cerr << (reports.back().pass() ? "pass " : "FAIL ") << id << " ("
                  << reports.back().instances_checked << " instances)\n";
    }
    emit(flags.out_path, shsbm::lemma_reports_to_json(reports));
    return all_pass ? 0 : 1;
}

int cmd_mi(const CommonFlags& flags) {
    const shsbm::Instance instance = shsbm::instance_from_json(read_file(flags.config_path));
    if (instance.dist_in.family != shsbm::Family::bernoulli ||
        instance.dist_out.family != shsbm::Family::bernoulli) {
        shsbm::fail("unsupported_divergence", "exact MI supports Bernoulli weights only");
    }
    emit(flags.out_path, shsbm::mi_result_to_json(shsbm::exact_mi(instance.config)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact community recovery laboratory for planted sub-hypergraph models"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string truth_path;
    std::string weights_path;
    std::string grid_path;
    std::string mode = "min";
    std::string preset;
    std::string suite = "all";
    double c0 = 0.5;
    double constant = 1.0;
    std::uint64_t trials = 100;
    int r_flag = 0;
    int k_flag = 0;
    int max_n = 0;
    bool minimize = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", flags.out_path, "write the result here instead of stdout");
        cmd->add_option("--jobs", flags.jobs, "worker threads (default: SHSBM_JOBS or cores)")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* sample = app.add_subcommand("sample", "draw a weight tensor from the model");
    sample->add_option("--config", flags.config_path, "model config JSON file")->required();
    sample->add_option("--seed", flags.seed, "base seed");
    sample->add_option("--truth", truth_path, "planted truth JSON file (default: random)");
    add_common(sample);

    CLI::App* recover = app.add_subcommand("recover", "run the exact search on a tensor");
    recover->add_option("--weights", weights_path, "weight tensor JSON file")->required();
    recover->add_option("--truth", truth_path, "truth JSON file for success reporting");
    recover->add_option("--r", r_flag, "expected community count")->check(CLI::PositiveNumber);
    recover->add_option("--k", k_flag, "expected community size")->check(CLI::PositiveNumber);
    recover->add_flag("--minimize", minimize, "force score minimization");
    add_common(recover);

    CLI::App* threshold = app.add_subcommand("threshold", "evaluate recovery thresholds");
    threshold->add_option("--config", flags.config_path, "model config JSON file")->required();
    threshold->add_option("--c0", c0, "lower-bound slack constant");
    threshold->add_option("--constant", constant, "upper-bound constant");
    threshold->add_option("--mode", mode, "denominator mode")
        ->check(CLI::IsMember({"min", "max", "sigma", "min_mode", "max_mode", "sigma_mode"}));
    threshold->add_option("--preset", preset, "specialized regime")
        ->check(CLI::IsMember({"planted_sbm", "densest_sub", "multipartite"}));
    add_common(threshold);

    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo phase-diagram sweep");
    sweep->add_option("--grid", grid_path, "grid JSON file (array of config points)")
        ->required();
    sweep->add_option("--trials", trials, "trials per grid point")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", flags.seed, "base seed");
    sweep->add_option("--c0", c0, "lower-bound slack constant");
    sweep->add_option("--constant", constant, "upper-bound constant");
    sweep->add_option("--mode", mode, "denominator mode")
        ->check(CLI::IsMember({"min", "max", "sigma", "min_mode", "max_mode", "sigma_mode"}));
    add_common(sweep);

    CLI::App* verify = app.add_subcommand("verify", "run the invariant check suite");
    verify->add_option("--suite", suite, "'all' or comma-separated check names");
    verify->add_option("--max-n", max_n, "largest node count to sweep")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", flags.seed, "base seed");
    add_common(verify);

    CLI::App* mi = app.add_subcommand("mi", "exact mutual information vs its bound");
    mi->add_option("--config", flags.config_path, "model config JSON file")->required();
    add_common(mi);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sample->parsed()) return cmd_sample(flags, truth_path);
        if (recover->parsed()) {
            return cmd_recover(flags, weights_path, truth_path, r_flag, k_flag, minimize);
        }
        if (threshold->parsed()) return cmd_threshold(flags, c0, constant, mode, preset);
        if (sweep->parsed()) return cmd_sweep(flags, grid_path, trials, c0, constant, mode);
        if (verify->parsed()) return cmd_verify(flags, suite, max_n);
        if (mi->parsed()) return cmd_mi(flags);
        return 2;
    } catch (const shsbm::Error& error) {
        Json out;
        out["error"]["code"] = error.code();
        out["error"]["message"] = error.what();
        std::cout << out.dump(2) << "\n";
        return 1;
    } catch (const std::exception& error) {
        Json out;
        out["error"]["code"] = "internal_error";
        out["error"]["message"] = error.what();
        std::cout << out.dump(2) << "\n";
        return 1;
    }
}
