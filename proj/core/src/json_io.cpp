#include "shsbm/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "shsbm/combinatorics.hpp"
#include "shsbm/errors.hpp"

namespace shsbm {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

Json parse_text(const std::string& text) {
    Json parsed = Json::parse(text, nullptr, false);
    if (parsed.is_discarded()) fail("parse_error", "malformed JSON");
    return parsed;
}

const Json& require(const Json& object, const char* key) {
    if (!object.is_object() || !object.contains(key)) {
        fail("parse_error", std::string("missing field '") + key + "'");
    }
    return object.at(key);
}

int require_int(const Json& object, const char* key) {
    const Json& value = require(object, key);
    if (!value.is_number_integer()) {
        fail("parse_error", std::string("field '") + key + "' must be an integer");
    }
    return value.get<int>();
}

double require_double(const Json& object, const char* key) {
    const Json& value = require(object, key);
    if (!value.is_number()) {
        fail("parse_error", std::string("field '") + key + "' must be a number");
    }
    return value.get<double>();
}

std::string require_string(const Json& object, const char* key) {
    const Json& value = require(object, key);
    if (!value.is_string()) {
        fail("parse_error", std::string("field '") + key + "' must be a string");
    }
    return value.get<std::string>();
}

// Doubles stay JSON numbers while finite; non-finite values become the
// strings "inf" / "-inf" / "nan" (plain JSON has no encoding for them).
Json encode_double(double value) {
    if (std::isfinite(value)) return value;
    if (std::isnan(value)) return "nan";
    return value > 0.0 ? "inf" : "-inf";
}

std::string plain_double(double value) {
    if (std::isfinite(value)) return Json(value).dump();
    if (std::isnan(value)) return "nan";
    return value > 0.0 ? "inf" : "-inf";
}

Json config_to_json(const ModelConfig& config) {
    Json out;
    out["n"] = config.n;
    out["r"] = config.r;
    out["k"] = config.k;
    out["m"] = config.m;
    out["p"] = config.p;
    out["q"] = config.q;
    return out;
}

ModelConfig config_from_json(const Json& object) {
    ModelConfig config;
    config.n = require_int(object, "n");
    config.r = require_int(object, "r");
    config.k = require_int(object, "k");
    config.m = require_int(object, "m");
    config.p = require_double(object, "p");
    config.q = require_double(object, "q");
    config.validate();
    return config;
}

Json dist_to_json(const WeightDistribution& dist) {
    Json out;
    out["family"] = family_name(dist.family);
    out["mean"] = dist.mean;
    if (dist.family == Family::beta_mean) out["precision"] = dist.precision;
    out["sub_gaussian_sq"] = dist.sub_gaussian_sq;
    return out;
}

WeightDistribution dist_from_json(const Json& object) {
    const Family family = family_from_name(require_string(object, "family"));
    const double mean = require_double(object, "mean");
    WeightDistribution dist;
    switch (family) {
        case Family::bernoulli:
            dist = WeightDistribution::bernoulli(mean);
            break;
        case Family::beta_mean:
            dist = WeightDistribution::beta_mean(mean, require_double(object, "precision"));
            break;
        case Family::point_mass:
            dist = WeightDistribution::point_mass(mean);
            break;
    }
    if (object.contains("sub_gaussian_sq")) {
        dist.sub_gaussian_sq = require_double(object, "sub_gaussian_sq");
    }
    dist.validate();
    return dist;
}

Json sweep_row_to_json(const SweepRow& row) {
    Json out;
    out["n"] = row.instance.config.n;
    out["r"] = row.instance.config.r;
    out["k"] = row.instance.config.k;
    out["m"] = row.instance.config.m;
    out["p"] = row.instance.config.p;
    out["q"] = row.instance.config.q;
    out["trials"] = row.trials;
    out["successes"] = row.successes;
    out["rate"] = row.rate;
    out["wilson_low"] = row.wilson.low;
    out["wilson_high"] = row.wilson.high;
    out["d_pq"] = encode_double(row.threshold.d_pq);
    out["mi_upper"] = encode_double(row.threshold.mi_upper);
    out["fano_floor"] = row.threshold.fano_floor;
    out["lower_rhs"] = row.threshold.lower_rhs;
    out["upper_rhs"] = row.threshold.upper_rhs;
    out["classification"] = classification_name(row.threshold.classification);
    return out;
}

}  // namespace

std::string tensor_file_to_json(const TensorFile& file) {
    file.tensor.validate();
    const ModelConfig& config = file.tensor.config;
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["config"] = config_to_json(config);
    out["dist_in"] = dist_to_json(file.dist_in);
    out["dist_out"] = dist_to_json(file.dist_out);
    out["seed"] = file.seed;
    const double default_value = 0.0;
    out["default"] = default_value;
    Json entries = Json::array();
    std::vector<int> subset(config.m);
    for (int i = 0; i < config.m; ++i) subset[i] = i;
    std::uint64_t rank = 0;
    do {
        const double value = file.tensor.values[rank];
        if (value != default_value) {
            Json entry = Json::array();
            for (int node : subset) entry.push_back(node);
            entry.push_back(value);
            entries.push_back(std::move(entry));
        }
        ++rank;
    } while (subset_next(subset, config.n));
    out["entries"] = std::move(entries);
    return out.dump(2) + "\n";
}

TensorFile tensor_file_from_json(const std::string& text) {
    const Json parsed = parse_text(text);
    TensorFile file;
    file.tensor.config = config_from_json(require(parsed, "config"));
    file.dist_in = dist_from_json(require(parsed, "dist_in"));
    file.dist_out = dist_from_json(require(parsed, "dist_out"));
    const Json& seed = require(parsed, "seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
        fail("parse_error", "field 'seed' must be an integer");
    }
    file.seed = seed.get<std::uint64_t>();

    double default_value = 0.0;
    if (parsed.contains("default")) default_value = require_double(parsed, "default");

    const ModelConfig& config = file.tensor.config;
    file.tensor.values.assign(config.edge_count(), default_value);
    const Json& entries = require(parsed, "entries");
    if (!entries.is_array()) fail("parse_error", "field 'entries' must be an array");
    std::vector<bool> seen(file.tensor.values.size(), false);
    for (const Json& entry : entries) {
        if (!entry.is_array() || entry.size() != static_cast<std::size_t>(config.m) + 1) {
            fail("parse_error", "each entry must be [i1..im, w]");
        }
        std::vector<int> subset(config.m);
        for (int i = 0; i < config.m; ++i) {
            if (!entry[i].is_number_integer()) {
                fail("parse_error", "entry indices must be integers");
            }
            subset[i] = entry[i].get<int>();
        }
        if (!entry[config.m].is_number()) fail("parse_error", "entry weight must be a number");
        const std::uint64_t rank = subset_rank(subset, config.n, config.m);
        if (seen[rank]) fail("parse_error", "duplicate tensor entry");
        seen[rank] = true;
        file.tensor.values[rank] = entry[config.m].get<double>();
    }
    file.tensor.validate();
    return file;
}

Instance instance_from_json(const std::string& text) {
    const Json parsed = parse_text(text);
    Instance instance;
    // Accept either a flat config object or one nested under "config".
    const Json& config_node = parsed.contains("config") ? parsed.at("config") : parsed;
    instance.config = config_from_json(config_node);
    instance.dist_in = parsed.contains("dist_in")
                           ? dist_from_json(parsed.at("dist_in"))
                           : WeightDistribution::bernoulli(instance.config.p);
    instance.dist_out = parsed.contains("dist_out")
                            ? dist_from_json(parsed.at("dist_out"))
                            : WeightDistribution::bernoulli(instance.config.q);
    instance.validate();
    return instance;
}

std::string hypothesis_to_json(const Hypothesis& y) {
    y.validate();
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["r"] = y.r;
    out["k"] = y.k;
    out["labels"] = y.labels;
    return out.dump(2) + "\n";
}

Hypothesis hypothesis_from_json(const std::string& text) {
    const Json parsed = parse_text(text);
    const Json& node = parsed.contains("truth") ? parsed.at("truth") : parsed;
    Hypothesis y;
    y.r = require_int(node, "r");
    y.k = require_int(node, "k");
    const Json& labels = require(node, "labels");
    if (!labels.is_array()) fail("parse_error", "field 'labels' must be an array");
    for (const Json& label : labels) {
        if (!label.is_number_integer()) fail("parse_error", "labels must be integers");
        y.labels.push_back(label.get<int>());
    }
    y.validate();
    return y;
}

std::string threshold_report_to_json(const ThresholdReport& report) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    if (!report.preset.empty()) {
        out["preset"] = report.preset;
        out["bullet_denominator_lower"] = report.bullet_denominator_lower;
        out["bullet_denominator_upper"] = report.bullet_denominator_upper;
    }
    out["d_pq"] = encode_double(report.d_pq);
    out["signal_ratio_min"] = encode_double(report.signal_ratio_min);
    out["signal_ratio_max"] = encode_double(report.signal_ratio_max);
    out["signal_ratio_sigma"] = encode_double(report.signal_ratio_sigma);
    out["mi_upper"] = encode_double(report.mi_upper);
    out["fano_floor"] = report.fano_floor;
    out["lower_rhs"] = report.lower_rhs;
    out["upper_rhs"] = report.upper_rhs;
    out["classification"] = classification_name(report.classification);
    return out.dump(2) + "\n";
}

std::string mi_result_to_json(const MIResult& result) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["exact_mi"] = result.exact_mi;
    out["lemma2_bound"] = result.lemma2_bound;
    out["slack"] = result.slack;
    return out.dump(2) + "\n";
}

std::string lemma_reports_to_json(const std::vector<LemmaReport>& reports) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    bool all_pass = true;
    Json rows = Json::array();
    for (const LemmaReport& report : reports) {
        Json row;
        row["lemma_id"] = report.lemma_id;
        row["instances_checked"] = report.instances_checked;
        row["max_violation"] = encode_double(report.max_violation);
        row["pass"] = report.pass();
        row["details"] = report.details;
        all_pass = all_pass && report.pass();
        rows.push_back(std::move(row));
    }
    out["all_pass"] = all_pass;
    out["reports"] = std::move(rows);
    return out.dump(2) + "\n";
}

std::string batch_to_json(const BatchResult& batch) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["trials"] = batch.trials;
    out["successes"] = batch.successes;
    out["labeled_successes"] = batch.labeled_successes;
    out["rate"] = batch.rate;
    out["wilson_low"] = batch.wilson.low;
    out["wilson_high"] = batch.wilson.high;
    if (!batch.per_trial.empty()) {
        Json rows = Json::array();
        for (const TrialResult& trial : batch.per_trial) {
            Json row;
            row["success"] = trial.success;
            row["labeled_success"] = trial.labeled_success;
            row["score_margin"] = trial.score_margin;
            rows.push_back(std::move(row));
        }
        out["per_trial"] = std::move(rows);
    }
    return out.dump(2) + "\n";
}

std::string fano_report_to_json(const FanoReport& report) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["trials"] = report.trials;
    out["failures"] = report.failures;
    out["empirical_error"] = report.empirical_error;
    out["error_wilson_low"] = report.error_interval.low;
    out["error_wilson_high"] = report.error_interval.high;
    out["fano_floor"] = report.floor_value;
    out["margin"] = report.margin;
    out["pass"] = report.pass;
    return out.dump(2) + "\n";
}

std::string sweep_to_json(const std::vector<SweepRow>& rows) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    Json array = Json::array();
    for (const SweepRow& row : rows) array.push_back(sweep_row_to_json(row));
    out["rows"] = std::move(array);
    return out.dump(2) + "\n";
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "n,r,k,m,p,q,trials,successes,rate,wilson_low,wilson_high,d_pq,mi_upper,"
           "fano_floor,lower_rhs,upper_rhs,classification\n";
    for (const SweepRow& row : rows) {
        const ModelConfig& config = row.instance.config;
        out << config.n << ',' << config.r << ',' << config.k << ',' << config.m << ','
            << plain_double(config.p) << ',' << plain_double(config.q) << ','
            << row.trials << ',' << row.successes << ',' << plain_double(row.rate) << ','
            << plain_double(row.wilson.low) << ',' << plain_double(row.wilson.high) << ','
            << plain_double(row.threshold.d_pq) << ','
            << plain_double(row.threshold.mi_upper) << ','
            << plain_double(row.threshold.fano_floor) << ','
            << plain_double(row.threshold.lower_rhs) << ','
            << plain_double(row.threshold.upper_rhs) << ','
            << classification_name(row.threshold.classification) << '\n';
    }
    return out.str();
}

std::string sweep_to_svg(const std::vector<SweepRow>& rows) {
    if (rows.empty()) fail("invalid_argument", "empty sweep");

    const std::vector<std::string> field_names = {"n", "r", "k", "m", "p", "q"};
    const auto field_value = [](const SweepRow& row, std::size_t field) -> double {
        const ModelConfig& c = row.instance.config;
        switch (field) {
            case 0: return c.n;
            case 1: return c.r;
            case 2: return c.k;
            case 3: return c.m;
            case 4: return c.p;
            default: return c.q;
        }
    };

    const auto field_label = [](std::size_t field, double value) {
        return field < 4 ? std::to_string(static_cast<int>(value)) : plain_double(value);
    };

    std::vector<std::size_t> varying;
    for (std::size_t field = 0; field < field_names.size(); ++field) {
        std::set<double> values;
        for (const SweepRow& row : rows) values.insert(field_value(row, field));
        if (values.size() > 1) varying.push_back(field);
    }
    if (varying.size() != 2) {
        fail("invalid_argument", "heatmap needs exactly two varying config fields");
    }
    const std::size_t x_field = varying[0];
    const std::size_t y_field = varying[1];

    std::set<double> x_set, y_set;
    for (const SweepRow& row : rows) {
        x_set.insert(field_value(row, x_field));
        y_set.insert(field_value(row, y_field));
    }
    const std::vector<double> xs(x_set.begin(), x_set.end());
    const std::vector<double> ys(y_set.begin(), y_set.end());
    if (rows.size() != xs.size() * ys.size()) {
        fail("invalid_argument", "heatmap needs a complete grid");
    }

    // row index per cell, ys reversed so larger values sit on top
    std::vector<std::vector<int>> cell(ys.size(), std::vector<int>(xs.size(), -1));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto xi = static_cast<std::size_t>(
            std::lower_bound(xs.begin(), xs.end(), field_value(rows[i], x_field)) -
            xs.begin());
        const auto yi = static_cast<std::size_t>(
            std::lower_bound(ys.begin(), ys.end(), field_value(rows[i], y_field)) -
            ys.begin());
        if (cell[yi][xi] != -1) fail("invalid_argument", "duplicate grid point");
        cell[yi][xi] = static_cast<int>(i);
    }

    constexpr int kCell = 44;
    constexpr int kLeft = 70;
    constexpr int kTop = 40;
    constexpr int kBottom = 55;
    constexpr int kRight = 20;
    const int width = kLeft + kCell * static_cast<int>(xs.size()) + kRight;
    const int height = kTop + kCell * static_cast<int>(ys.size()) + kBottom;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "  <style>text{font:12px sans-serif;}</style>\n";

    // Fixed fields go into the title line.
    std::ostringstream title;
    title << "success rate";
    for (std::size_t field = 0; field < field_names.size(); ++field) {
        if (field == x_field || field == y_field) continue;
        title << ' ' << field_names[field] << '='
              << field_label(field, field_value(rows.front(), field));
    }
    title << " trials=" << rows.front().trials;
    svg << "  <text x=\"" << kLeft << "\" y=\"22\">" << title.str() << "</text>\n";

    const auto cell_x = [&](std::size_t xi) {
        return kLeft + static_cast<int>(xi) * kCell;
    };
    const auto cell_y = [&](std::size_t yi) {
        // ys index 0 (smallest) renders at the bottom
        return kTop + static_cast<int>(ys.size() - 1 - yi) * kCell;
    };

    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            const SweepRow& row = rows[static_cast<std::size_t>(cell[yi][xi])];
            const double rate = row.rate;
            const int red = static_cast<int>(std::lround(255.0 - (255.0 - 32.0) * rate));
            const int green = static_cast<int>(std::lround(255.0 - (255.0 - 96.0) * rate));
            const int blue = static_cast<int>(std::lround(255.0 - (255.0 - 168.0) * rate));
            svg << "  <rect x=\"" << cell_x(xi) << "\" y=\"" << cell_y(yi) << "\" width=\""
                << kCell << "\" height=\"" << kCell << "\" fill=\"rgb(" << red << ','
                << green << ',' << blue << ")\" stroke=\"#888\" stroke-width=\"1\""
                << " data-rate=\"" << plain_double(rate) << "\""
                << " data-lower-rhs=\"" << plain_double(row.threshold.lower_rhs) << "\""
                << " data-upper-rhs=\"" << plain_double(row.threshold.upper_rhs) << "\""
                << " data-classification=\""
                << classification_name(row.threshold.classification) << "\"/>\n";
        }
    }

    // Theory boundary: edges between cells whose classification differs.
    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
        for (std::size_t xi = 0; xi + 1 < xs.size(); ++xi) {
            const auto left = rows[static_cast<std::size_t>(cell[yi][xi])].threshold;
            const auto right = rows[static_cast<std::size_t>(cell[yi][xi + 1])].threshold;
            if (left.classification == right.classification) continue;
            const int x = cell_x(xi + 1);
            svg << "  <line class=\"boundary\" x1=\"" << x << "\" y1=\"" << cell_y(yi)
                << "\" x2=\"" << x << "\" y2=\"" << cell_y(yi) + kCell
                << "\" stroke=\"#d04020\" stroke-width=\"3\"/>\n";
        }
    }
    for (std::size_t yi = 0; yi + 1 < ys.size(); ++yi) {
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            const auto low = rows[static_cast<std::size_t>(cell[yi][xi])].threshold;
            const auto high = rows[static_cast<std::size_t>(cell[yi + 1][xi])].threshold;
            if (low.classification == high.classification) continue;
            const int y = cell_y(yi);  // top edge of the lower cell
            svg << "  <line class=\"boundary\" x1=\"" << cell_x(xi) << "\" y1=\"" << y
                << "\" x2=\"" << cell_x(xi) + kCell << "\" y2=\"" << y
                << "\" stroke=\"#d04020\" stroke-width=\"3\"/>\n";
        }
    }

    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        svg << "  <text x=\"" << cell_x(xi) + kCell / 2 << "\" y=\""
            << kTop + static_cast<int>(ys.size()) * kCell + 16
            << "\" text-anchor=\"middle\">" << field_label(x_field, xs[xi]) << "</text>\n";
    }
    svg << "  <text x=\"" << kLeft + static_cast<int>(xs.size()) * kCell / 2 << "\" y=\""
        << height - 14 << "\" text-anchor=\"middle\">" << field_names[x_field]
        << "</text>\n";
    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
        svg << "  <text x=\"" << kLeft - 8 << "\" y=\"" << cell_y(yi) + kCell / 2 + 4
            << "\" text-anchor=\"end\">" << field_label(y_field, ys[yi]) << "</text>\n";
    }
    svg << "  <text x=\"16\" y=\"" << kTop + static_cast<int>(ys.size()) * kCell / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << kTop + static_cast<int>(ys.size()) * kCell / 2 << ")\">" << field_names[y_field]
        << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace shsbm
