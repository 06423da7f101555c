#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shsbm/experiments.hpp"
#include "shsbm/model.hpp"
#include "shsbm/oracles.hpp"
#include "shsbm/thresholds.hpp"

namespace shsbm {

// All emitters produce deterministic text: fixed key order, shortest
// round-trip doubles, non-finite values encoded as "inf"/"-inf"/"nan"
// strings.  Timing and job counts never appear, so equal seeds give
// byte-identical files regardless of parallelism.

// Weight tensor with its sampling metadata.  The JSON form is sparse:
// entries equal to the declared default value are omitted.
struct TensorFile {
    WeightTensor tensor;
    WeightDistribution dist_in;
    WeightDistribution dist_out;
    std::uint64_t seed = 0;
};

std::string tensor_file_to_json(const TensorFile& file);
TensorFile tensor_file_from_json(const std::string& text);

// Model config plus optional dist_in/dist_out objects (default: Bernoulli
// with the config's p and q).
Instance instance_from_json(const std::string& text);

std::string hypothesis_to_json(const Hypothesis& y);
Hypothesis hypothesis_from_json(const std::string& text);

std::string threshold_report_to_json(const ThresholdReport& report);
std::string mi_result_to_json(const MIResult& result);
std::string lemma_reports_to_json(const std::vector<LemmaReport>& reports);
std::string batch_to_json(const BatchResult& batch);
std::string fano_report_to_json(const FanoReport& report);

std::string sweep_to_json(const std::vector<SweepRow>& rows);

// Columns: n,r,k,m,p,q,trials,successes,rate,wilson_low,wilson_high,
// d_pq,mi_upper,fano_floor,lower_rhs,upper_rhs,classification.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Heatmap for a complete 2-D grid (exactly two config fields varying).  One
// rect per point carrying data-rate / data-lower-rhs / data-upper-rhs /
// data-classification attributes; edges between cells whose classification
// differs are overlaid as the theory boundary.
std::string sweep_to_svg(const std::vector<SweepRow>& rows);

}  // namespace shsbm
