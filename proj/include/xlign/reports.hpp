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

#ifndef XLIGN_REPORTS_HPP
#define XLIGN_REPORTS_HPP

#include <string>

#include "xlign/normalize.hpp"
#include "xlign/retrieval.hpp"

namespace xlign {

// Key-sorted, indented JSON; deterministic for identical inputs.
std::string to_json(const NormalizationReport& report);
std::string to_json(const EvaluationReport& report);

}  // namespace xlign

#endif  // XLIGN_REPORTS_HPP
