#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "shsbm/errors.hpp"
#include "shsbm/experiments.hpp"
#include "shsbm/json_io.hpp"
#include "shsbm/model.hpp"
#include "shsbm/thresholds.hpp"

using namespace shsbm;

namespace {

bool throws_code(const std::string& code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& error) {
        return error.code() == code;
    }
    return false;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

std::size_t count_of(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

TensorFile noiseless_file() {
    TensorFile file;
    file.tensor.config = ModelConfig{6, 2, 3, 2, 1.0, 0.0};
    Hypothesis truth{2, 3, {0, 0, 0, 1, 1, 1}};
    file.tensor = expected_tensor(file.tensor.config, truth);
    file.dist_in = WeightDistribution::point_mass(1.0);
    file.dist_out = WeightDistribution::point_mass(0.0);
    file.seed = 42;
    return file;
}

}  // namespace

TEST_CASE("tensor files round trip byte-for-byte") {
    SUBCASE("sparse noiseless tensor stores only the six unit entries") {
        const TensorFile file = noiseless_file();
        const std::string text = tensor_file_to_json(file);
        const nlohmann::json parsed = nlohmann::json::parse(text);
        CHECK(parsed.at("schema_version") == 1);
        CHECK(parsed.at("entries").size() == 6);  // 2 * C(3,2) within-pairs
        CHECK(parsed.at("default") == 0.0);
        CHECK(parsed.at("seed") == 42);

        const TensorFile reread = tensor_file_from_json(text);
        CHECK(reread.tensor.values == file.tensor.values);
        CHECK(reread.seed == file.seed);
        CHECK(reread.dist_in.family == Family::point_mass);
        CHECK(tensor_file_to_json(reread) == text);
    }
    SUBCASE("dense beta tensor keeps every weight exactly") {
        ModelConfig config{6, 2, 3, 2, 0.8, 0.3};
        Hypothesis truth{2, 3, {0, 0, 0, 1, 1, 1}};
        TensorFile file;
        file.dist_in = WeightDistribution::beta_mean(0.8, 3.0);
        file.dist_out = WeightDistribution::beta_mean(0.3, 3.0);
        file.tensor = sample_weights(config, truth, file.dist_in, file.dist_out, 77);
        file.seed = 77;

        const std::string text = tensor_file_to_json(file);
        CHECK(nlohmann::json::parse(text).at("entries").size() == 15);  // all of C(6,2)
        const TensorFile reread = tensor_file_from_json(text);
        CHECK(reread.tensor.values == file.tensor.values);
        CHECK(reread.dist_in.precision == 3.0);
        CHECK(tensor_file_to_json(reread) == text);
    }
}

TEST_CASE("tensor file parsing rejects malformed input") {
    const std::string good = tensor_file_to_json(noiseless_file());

    CHECK(throws_code("parse_error", [] { tensor_file_from_json("not json {"); }));
    CHECK(throws_code("parse_error", [&] {
        nlohmann::json broken = nlohmann::json::parse(good);
        broken.erase("config");
        tensor_file_from_json(broken.dump());
    }));
    CHECK(throws_code("parse_error", [&] {
        nlohmann::json broken = nlohmann::json::parse(good);
        broken["entries"].push_back(broken["entries"][0]);  // duplicate subset
        tensor_file_from_json(broken.dump());
    }));
    CHECK(throws_code("parse_error", [&] {
        nlohmann::json broken = nlohmann::json::parse(good);
        broken["entries"][0] = {0, 1};  // missing the weight
        tensor_file_from_json(broken.dump());
    }));
    CHECK(throws_code("invalid_subset", [&] {
        nlohmann::json broken = nlohmann::json::parse(good);
        broken["entries"][0] = {0, 9, 1.0};  // node id out of range
        tensor_file_from_json(broken.dump());
    }));
    CHECK(throws_code("invalid_config", [&] {
        nlohmann::json broken = nlohmann::json::parse(good);
        broken["entries"][0] = {0, 1, 1.5};  // weight above 1
        tensor_file_from_json(broken.dump());
    }));
}

TEST_CASE("instance parsing fills Bernoulli defaults") {
    const Instance flat =
        instance_from_json(R"({"n":4,"r":1,"k":2,"m":2,"p":0.8,"q":0.3})");
    CHECK(flat.config.n == 4);
    CHECK(flat.dist_in.family == Family::bernoulli);
    CHECK(flat.dist_in.mean == 0.8);
    CHECK(flat.dist_out.mean == 0.3);

    const Instance nested = instance_from_json(R"({
        "config": {"n":4,"r":1,"k":2,"m":2,"p":0.8,"q":0.3},
        "dist_in": {"family":"beta_mean","mean":0.8,"precision":3.0},
        "dist_out": {"family":"beta_mean","mean":0.3,"precision":3.0}
    })");
    CHECK(nested.dist_in.family == Family::beta_mean);
    CHECK(nested.dist_in.precision == 3.0);

    CHECK(throws_code("parse_error", [] {
        instance_from_json(R"({"n":4,"r":1,"k":2,"m":2,"p":0.8})");  // no q
    }));
    CHECK(throws_code("config_mismatch", [] {
        instance_from_json(R"({
            "config": {"n":4,"r":1,"k":2,"m":2,"p":0.8,"q":0.3},
            "dist_in": {"family":"bernoulli","mean":0.7}
        })");
    }));
}

TEST_CASE("hypotheses round trip, bare or wrapped") {
    Hypothesis y{2, 2, {0, 1, 0, 1, 2}};
    const std::string text = hypothesis_to_json(y);
    CHECK(hypothesis_from_json(text) == y);

    const Hypothesis wrapped =
        hypothesis_from_json(R"({"truth": {"r":1,"k":2,"labels":[0,0,1]}})");
    CHECK(wrapped.labels == std::vector<int>{0, 0, 1});

    CHECK(throws_code("parse_error",
                      [] { hypothesis_from_json(R"({"r":1,"k":2})"); }));
    CHECK(throws_code("invalid_config",
                      [] { hypothesis_from_json(R"({"r":1,"k":2,"labels":[0,1,1]})"); }));
}

TEST_CASE("threshold reports encode non-finite statistics as strings") {
    const ThresholdReport report =
        classify(ModelConfig{12, 2, 4, 3, 1.0, 0.0}, ThresholdParams{});
    const std::string text = threshold_report_to_json(report);
    CHECK(contains(text, "\"d_pq\": \"inf\""));
    CHECK(contains(text, "\"signal_ratio_min\": \"inf\""));
    CHECK(contains(text, "\"signal_ratio_sigma\": \"nan\""));
    CHECK(contains(text, "\"mi_upper\": \"inf\""));
    CHECK(contains(text, "\"classification\": \"indeterminate_gap\""));
    // Finite values stay numbers.
    CHECK(contains(text, "\"signal_ratio_max\": 1.0"));

    const ThresholdReport preset = preset_thresholds(
        Preset::densest_sub, ModelConfig{16, 1, 4, 2, 0.8, 0.3}, ThresholdParams{});
    const std::string preset_text = threshold_report_to_json(preset);
    CHECK(contains(preset_text, "\"preset\": \"densest_sub\""));
    CHECK(contains(preset_text, "\"bullet_denominator_lower\": \"p(1-q)\""));
}

TEST_CASE("batch serialization carries outcomes but never timing or jobs") {
    Instance instance = Instance::bernoulli(ModelConfig{6, 1, 3, 2, 0.9, 0.1});
    BatchOptions options;
    options.keep_per_trial = true;
    const BatchResult batch = run_batch(instance, 8, 5, options);
    const std::string text = batch_to_json(batch);
    const nlohmann::json parsed = nlohmann::json::parse(text);
    CHECK(parsed.at("trials") == 8);
    CHECK(parsed.at("per_trial").size() == 8);
    CHECK_FALSE(contains(text, "elapsed"));
    CHECK_FALSE(contains(text, "jobs"));
    for (const auto& row : parsed.at("per_trial")) {
        CHECK(row.contains("success"));
        CHECK(row.contains("score_margin"));
    }

    BatchOptions plain;
    const std::string compact = batch_to_json(run_batch(instance, 8, 5, plain));
    CHECK_FALSE(contains(compact, "per_trial"));

    // jobs only affect wall time, never the serialized bytes.
    BatchOptions parallel = options;
    parallel.jobs = 8;
    CHECK(batch_to_json(run_batch(instance, 8, 5, parallel)) == text);
}

TEST_CASE("sweep csv has the documented columns") {
    std::vector<Instance> grid = {Instance::bernoulli(ModelConfig{4, 1, 2, 2, 0.5, 0.25})};
    const std::vector<SweepRow> rows = sweep(grid, 8, 3, 1, ThresholdParams{});
    const std::string csv = sweep_to_csv(rows);

    const std::string header =
        "n,r,k,m,p,q,trials,successes,rate,wilson_low,wilson_high,d_pq,mi_upper,"
        "fano_floor,lower_rhs,upper_rhs,classification\n";
    REQUIRE(csv.substr(0, header.size()) == header);

    const std::string body = csv.substr(header.size());
    CHECK(body.substr(0, 18) == "4,1,2,2,0.5,0.25,8");
    CHECK(contains(body, ",impossible_minimax\n"));
    CHECK(count_of(csv, "\n") == 2);  // header + one data row
}

TEST_CASE("sweep json mirrors the csv rows") {
    std::vector<Instance> grid = {Instance::bernoulli(ModelConfig{4, 1, 2, 2, 0.5, 0.25}),
                                  Instance::bernoulli(ModelConfig{4, 1, 2, 2, 0.9, 0.25})};
    const std::vector<SweepRow> rows = sweep(grid, 6, 9, 1, ThresholdParams{});
    const nlohmann::json parsed = nlohmann::json::parse(sweep_to_json(rows));
    REQUIRE(parsed.at("rows").size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& row = parsed.at("rows")[i];
        CHECK(row.at("p") == rows[i].instance.config.p);
        CHECK(row.at("successes") == rows[i].successes);
        CHECK(row.at("classification") ==
              classification_name(rows[i].threshold.classification));
    }
}

TEST_CASE("sweep heatmap") {
    std::vector<Instance> grid;
    for (int n : {4, 12}) {
        for (double p : {0.55, 0.95}) {
            grid.push_back(Instance::bernoulli(ModelConfig{n, 1, 2, 2, p, 0.45}));
        }
    }
    const std::vector<SweepRow> rows = sweep(grid, 5, 21, 1, ThresholdParams{});
    const std::string svg = sweep_to_svg(rows);

    SUBCASE("one annotated rect per grid point") {
        CHECK(count_of(svg, "<rect") == 4);
        for (const SweepRow& row : rows) {
            CHECK(contains(svg, "data-rate=\"" + nlohmann::json(row.rate).dump() + "\""));
            CHECK(contains(svg, "data-classification=\"" +
                                    classification_name(row.threshold.classification) +
                                    "\""));
        }
        CHECK(count_of(svg, "data-lower-rhs=") == 4);
        CHECK(count_of(svg, "data-upper-rhs=") == 4);
    }
    SUBCASE("axes name the two varying fields") {
        CHECK(contains(svg, ">n</text>"));
        CHECK(contains(svg, ">p</text>"));
        // Integer fields label without a decimal point.
        CHECK(contains(svg, ">12</text>"));
        CHECK(contains(svg, ">0.55</text>"));
    }
    SUBCASE("classification changes draw a boundary") {
        // p = 0.55 is impossible at both n, p = 0.95 is not, so the boundary
        // crosses the p axis once in each of the two grid columns.
        CHECK(rows[0].threshold.classification == Classification::impossible_minimax);
        CHECK(rows[1].threshold.classification != Classification::impossible_minimax);
        CHECK(count_of(svg, "class=\"boundary\"") == 2);
    }
    SUBCASE("grids that are not complete 2-D lattices are rejected") {
        std::vector<SweepRow> incomplete(rows.begin(), rows.end() - 1);
        CHECK(throws_code("invalid_argument", [&] { sweep_to_svg(incomplete); }));
        std::vector<SweepRow> point(rows.begin(), rows.begin() + 1);
        CHECK(throws_code("invalid_argument", [&] { sweep_to_svg(point); }));
        CHECK(throws_code("invalid_argument", [] { sweep_to_svg({}); }));
    }
}

TEST_CASE("mi and lemma and fano reports serialize with a schema version") {
    const std::string mi = mi_result_to_json(MIResult{0.25, 0.5, 0.25});
    CHECK(contains(mi, "\"schema_version\": 1"));
    CHECK(contains(mi, "\"exact_mi\": 0.25"));

    LemmaReport lemma;
    lemma.lemma_id = "d_range";
    lemma.instances_checked = 3;
    lemma.max_violation = -0.5;
    const nlohmann::json lemmas = nlohmann::json::parse(lemma_reports_to_json({lemma}));
    CHECK(lemmas.at("all_pass") == true);
    CHECK(lemmas.at("reports")[0].at("lemma_id") == "d_range");
    CHECK(lemmas.at("reports")[0].at("pass") == true);

    LemmaReport failing = lemma;
    failing.max_violation = 0.25;
    const nlohmann::json mixed =
        nlohmann::json::parse(lemma_reports_to_json({lemma, failing}));
    CHECK(mixed.at("all_pass") == false);

    FanoReport fano;
    fano.trials = 10;
    fano.failures = 9;
    fano.empirical_error = 0.9;
    fano.floor_value = 0.7;
    fano.pass = true;
    const std::string fano_text = fano_report_to_json(fano);
    CHECK(contains(fano_text, "\"fano_floor\": 0.7"));
    CHECK(contains(fano_text, "\"pass\": true"));
}
