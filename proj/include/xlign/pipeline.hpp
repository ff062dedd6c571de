//  Copyright 2026 xlign authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#ifndef XLIGN_PIPELINE_HPP
#define XLIGN_PIPELINE_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xlign/align.hpp"
#include "xlign/normalize.hpp"
#include "xlign/rcsls.hpp"
#include "xlign/retrieval.hpp"

namespace xlign {

// One normalize -> align -> evaluate run. Both languages always receive
// the same normalization method.
struct PipelineConfig {
  std::string src_path;
  std::string tgt_path;
  std::string train_dict_path;
  std::string test_dict_path;
  std::string valid_dict_path;  // optional; rcsls only

  NormalizationMethod normalization = NormalizationMethod::none();
  bool perturb_zeros = false;

  std::string method = "procrustes";  // procrustes | procrustes-refine | rcsls
  RefineConfig refine;
  RcslsConfig rcsls;

  RetrievalCriterion criterion = RetrievalCriterion::csls();
  int penalty_pool = 0;

  unsigned long long seed = 0;
  long max_vocab = 0;
  std::string out_dir;  // artifacts land here; must be creatable
  std::string tag;      // column label in tables (e.g. language pair)
};

struct PipelineResult {
  EvaluationReport evaluation;
  LinearMap map;
  std::optional<NormalizationReport> src_norm;
  std::optional<NormalizationReport> tgt_norm;
  std::string record_path;
  std::string record_json;
};

// Runs the three stages, writing W.map, evaluation.json, normalization
// reports and a run.json record under cfg.out_dir. A stage failure
// removes any partially written artifacts and rethrows with the stage
// name. Identical config + seed reproduces every artifact byte for byte
// except the record's timestamp field.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// FNV-1a 64 of the canonical config serialization, hex encoded.
std::string config_hash(const PipelineConfig& cfg);

// Canonical JSON echo of the config (what config_hash digests).
std::string config_json(const PipelineConfig& cfg);

struct RunSummary {
  std::string method;
  std::string normalization;
  std::string tag;
  double accuracy = 0.0;

  bool operator==(const RunSummary&) const = default;
};

// Reads method/normalization/tag/accuracy out of a run.json record.
RunSummary load_run_record(const std::string& path);

// Rows are method x normalization, columns are tags, cells accuracy*100
// to one decimal; the best normalization per method and column is starred.
// Every method x normalization row must cover the same tag set and no
// (method, normalization, tag) may repeat; DataError otherwise.
std::string emit_table(const std::vector<RunSummary>& runs);

// "method,normalization,tag,accuracy" with full-precision accuracy.
std::string emit_csv(const std::vector<RunSummary>& runs);
std::vector<RunSummary> parse_csv(std::istream& in);

}  // namespace xlign

#endif  // XLIGN_PIPELINE_HPP
