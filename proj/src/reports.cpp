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

#include "xlign/reports.hpp"

#include <json.hpp>

namespace xlign {

std::string to_json(const NormalizationReport& report) {
  nlohmann::json j;
  j["converged"] = report.converged;
  j["rounds"] = nlohmann::json::array();
  for (const auto& r : report.rounds) {
    j["rounds"].push_back({
        {"round", r.round},
        {"max_length_residual", r.max_length_residual},
        {"mean_norm_residual", r.mean_norm_residual},
        {"iterate_delta", r.iterate_delta},
        {"min_column_length", r.min_column_length},
    });
  }
  return j.dump(2) + "\n";
}

std::string to_json(const EvaluationReport& report) {
  nlohmann::json j;
  j["accuracy"] = report.accuracy;
  j["correct"] = report.correct;
  j["total_queries"] = report.total_queries;
  j["criterion"] = report.criterion;
  j["predictions"] = nlohmann::json::array();
  for (const auto& p : report.predictions) {
    j["predictions"].push_back({
        {"source", p.source},
        {"predicted", p.predicted},
        {"score", p.score},
        {"correct", p.correct},
    });
  }
  return j.dump(2) + "\n";
}

}  // namespace xlign
