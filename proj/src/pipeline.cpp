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

#include "xlign/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "xlign/errors.hpp"
#include "xlign/reports.hpp"
#include "xlign/vec_io.hpp"
#include "xlign/version.hpp"

namespace fs = std::filesystem;

namespace xlign {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json config_echo(const PipelineConfig& cfg) {
  nlohmann::json j;
  j["src_path"] = cfg.src_path;
  j["tgt_path"] = cfg.tgt_path;
  j["train_dict_path"] = cfg.train_dict_path;
  j["test_dict_path"] = cfg.test_dict_path;
  j["valid_dict_path"] = cfg.valid_dict_path;
  j["normalization"] = cfg.normalization.name();
  j["norm_rounds"] = cfg.normalization.rounds;
  j["norm_tolerance"] = cfg.normalization.tolerance;
  j["perturb_zeros"] = cfg.perturb_zeros;
  j["method"] = cfg.method;
  j["refine_steps"] = cfg.refine.steps;
  j["refine_pool"] = cfg.refine.synthetic_pool;
  j["refine_knn"] = cfg.refine.knn;
  j["rcsls_learning_rates"] = cfg.rcsls.learning_rates;
  j["rcsls_epochs"] = cfg.rcsls.epoch_candidates;
  j["rcsls_knn"] = cfg.rcsls.knn;
  j["rcsls_neighbor_pool"] = cfg.rcsls.neighbor_pool;
  j["rcsls_batch_size"] = cfg.rcsls.batch_size;
  j["rcsls_holdout"] = cfg.rcsls.holdout;
  j["criterion"] = cfg.criterion.name();
  j["criterion_knn"] = cfg.criterion.knn;
  j["penalty_pool"] = cfg.penalty_pool;
  j["seed"] = cfg.seed;
  j["max_vocab"] = cfg.max_vocab;
  j["tag"] = cfg.tag;
  return j;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void remove_artifacts(const std::vector<fs::path>& files) {
  std::error_code ec;
  for (const auto& f : files) fs::remove(f, ec);
}

}  // namespace

std::string config_json(const PipelineConfig& cfg) {
  return config_echo(cfg).dump(2);
}

std::string config_hash(const PipelineConfig& cfg) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(config_json(cfg))));
  return buf;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  if (cfg.method != "procrustes" && cfg.method != "procrustes-refine" &&
      cfg.method != "rcsls") {
    throw UsageError("pipeline: unknown method '" + cfg.method + "'");
  }
  if (cfg.out_dir.empty()) throw UsageError("pipeline: out_dir is required");
  fs::create_directories(cfg.out_dir);

  std::vector<fs::path> written;
  auto write_text = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(cfg.out_dir) / name;
    written.push_back(path);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    return path.string();
  };

  std::string current_stage = "load";
  try {
    VecParseOptions vec_opts;
    vec_opts.max_vocab = cfg.max_vocab;
    EmbeddingSpace src = read_vec_file(cfg.src_path, vec_opts);
    EmbeddingSpace tgt = read_vec_file(cfg.tgt_path, vec_opts);
    const DictionaryLoad train = load_dictionary_file(cfg.train_dict_path, src, tgt);
    const DictionaryLoad test = load_dictionary_file(cfg.test_dict_path, src, tgt);
    if (train.pairs.empty()) {
      throw DataError("no usable training pair in '" + cfg.train_dict_path + "'");
    }
    if (test.multi.empty()) {
      throw DataError("no usable test pair in '" + cfg.test_dict_path + "'");
    }
    std::optional<SeedDictionary> valid;
    if (!cfg.valid_dict_path.empty()) {
      valid = load_dictionary_file(cfg.valid_dict_path, src, tgt).pairs;
    }

    current_stage = "normalize";
    PipelineResult result;
    // Both languages always receive the same treatment.
    auto [src_n, src_rep] = normalize_with(src, cfg.normalization, cfg.perturb_zeros);
    auto [tgt_n, tgt_rep] = normalize_with(tgt, cfg.normalization, cfg.perturb_zeros);
    src = std::move(src_n);
    tgt = std::move(tgt_n);
    result.src_norm = std::move(src_rep);
    result.tgt_norm = std::move(tgt_rep);
    if (cfg.method == "rcsls") {
      // RCSLS needs exactly unit-length inputs; reference pipelines
      // re-normalize embeddings at load time for the same reason.
      src = length_normalize(src, cfg.perturb_zeros);
      tgt = length_normalize(tgt, cfg.perturb_zeros);
    }

    current_stage = "align";
    nlohmann::json extras;
    if (cfg.method == "procrustes") {
      result.map = procrustes_fit(src, tgt, train.pairs);
    } else if (cfg.method == "procrustes-refine") {
      const RefineResult r = refine(src, tgt, train.pairs, cfg.refine);
      result.map = r.map;
      extras["refine_dictionary_sizes"] = r.dictionary_sizes;
      if (r.stopped_early) extras["refine_warning"] = r.warning;
    } else {
      RcslsConfig rc = cfg.rcsls;
      rc.seed = cfg.seed;
      const RcslsResult r = rcsls_train(src, tgt, train.pairs, valid, rc);
      result.map = r.map;
      extras["rcsls_learning_rate"] = r.learning_rate;
      extras["rcsls_epochs"] = r.epochs;
      extras["rcsls_validation_p1"] = r.validation_p1;
      extras["rcsls_loss_trace"] = r.loss_trace;
    }

    current_stage = "evaluate";
    RetrievalOptions opts;
    opts.criterion = cfg.criterion;
    opts.penalty_pool = cfg.penalty_pool;
    result.evaluation = evaluate_p1(result.map, src, tgt, test.multi, opts);

    current_stage = "write";
    std::ostringstream map_text;
    write_map(result.map, map_text);
    nlohmann::json artifacts;
    artifacts["map"] = write_text("W.map", map_text.str());
    artifacts["evaluation"] = write_text("evaluation.json", to_json(result.evaluation));
    if (result.src_norm) {
      artifacts["src_normalization"] =
          write_text("src_norm.json", to_json(*result.src_norm));
    }
    if (result.tgt_norm) {
      artifacts["tgt_normalization"] =
          write_text("tgt_norm.json", to_json(*result.tgt_norm));
    }

    nlohmann::json record;
    record["xlign_version"] = XLIGN_VERSION;
    record["config"] = config_echo(cfg);
    record["config_hash"] = config_hash(cfg);
    record["seed"] = cfg.seed;
    record["tag"] = cfg.tag;
    record["method"] = cfg.method;
    record["normalization"] = cfg.normalization.name();
    record["accuracy"] = result.evaluation.accuracy;
    record["correct"] = result.evaluation.correct;
    record["queries"] = result.evaluation.total_queries;
    record["skipped_train_pairs"] = train.skipped;
    record["skipped_test_pairs"] = test.skipped;
    record["artifacts"] = artifacts;
    if (!extras.empty()) record["details"] = extras;
    record["timestamp"] = utc_timestamp();
    result.record_json = record.dump(2) + "\n";
    result.record_path = write_text("run.json", result.record_json);
    return result;
  } catch (const UsageError& e) {
    remove_artifacts(written);
    throw UsageError("stage " + current_stage + ": " + e.what());
  } catch (const DataError& e) {
    remove_artifacts(written);
    throw DataError("stage " + current_stage + ": " + e.what());
  } catch (const NumericError& e) {
    remove_artifacts(written);
    throw NumericError("stage " + current_stage + ": " + e.what());
  } catch (const IoError& e) {
    remove_artifacts(written);
    throw IoError("stage " + current_stage + ": " + e.what());
  } catch (const std::exception& e) {
    remove_artifacts(written);
    throw NumericError("stage " + current_stage + ": " + e.what());
  }
}

RunSummary load_run_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid run record: " + e.what());
  }
  RunSummary out;
  try {
    out.method = j.at("method").get<std::string>();
    out.normalization = j.at("normalization").get<std::string>();
    out.tag = j.at("tag").get<std::string>();
    out.accuracy = j.at("accuracy").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": run record missing a field: " + e.what());
  }
  return out;
}

namespace {

// none, cl, iternorm first, anything else by first appearance.
int norm_rank(const std::string& name) {
  if (name == "none") return 0;
  if (name == "cl") return 1;
  if (name == "iternorm") return 2;
  return 3;
}

struct TableIndex {
  std::vector<std::string> methods;  // first-appearance order
  std::vector<std::string> norms;    // canonical order
  std::vector<std::string> tags;     // first-appearance order
  std::map<std::tuple<std::string, std::string, std::string>, double> cells;
};

TableIndex index_runs(const std::vector<RunSummary>& runs) {
  if (runs.empty()) throw DataError("table: no run records");
  TableIndex ix;
  auto push_unique = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : runs) {
    push_unique(ix.methods, r.method);
    push_unique(ix.norms, r.normalization);
    push_unique(ix.tags, r.tag);
    auto key = std::make_tuple(r.method, r.normalization, r.tag);
    if (!ix.cells.emplace(key, r.accuracy).second) {
      throw DataError("table: duplicate record for " + r.method + "/" +
                      r.normalization + "/" + r.tag);
    }
  }
  std::stable_sort(ix.norms.begin(), ix.norms.end(),
                   [](const std::string& a, const std::string& b) {
                     return norm_rank(a) < norm_rank(b);
                   });
  for (const auto& m : ix.methods) {
    for (const auto& n : ix.norms) {
      bool any = false;
      for (const auto& t : ix.tags) {
        any = any || ix.cells.count({m, n, t}) > 0;
      }
      if (!any) continue;  // a method need not cover every normalization
      for (const auto& t : ix.tags) {
        if (!ix.cells.count({m, n, t})) {
          throw DataError("table: inconsistent column sets, missing " + m + "/" +
                          n + "/" + t);
        }
      }
    }
  }
  return ix;
}

}  // namespace

std::string emit_table(const std::vector<RunSummary>& runs) {
  const TableIndex ix = index_runs(runs);

  auto cell_text = [&](const std::string& m, const std::string& n,
                       const std::string& t, bool best) {
    auto it = ix.cells.find({m, n, t});
    if (it == ix.cells.end()) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%.1f", best ? "*" : "", it->second * 100.0);
    return std::string(buf);
  };

  // Best normalization per method and column.
  std::set<std::tuple<std::string, std::string, std::string>> best;
  for (const auto& m : ix.methods) {
    for (const auto& t : ix.tags) {
      double top = -1.0;
      std::string top_norm;
      for (const auto& n : ix.norms) {
        auto it = ix.cells.find({m, n, t});
        if (it != ix.cells.end() && it->second > top) {
          top = it->second;
          top_norm = n;
        }
      }
      if (!top_norm.empty()) best.insert({m, top_norm, t});
    }
  }

  std::size_t method_w = std::string("Method").size();
  std::size_t norm_w = std::string("Normalization").size();
  for (const auto& m : ix.methods) method_w = std::max(method_w, m.size());
  for (const auto& n : ix.norms) norm_w = std::max(norm_w, n.size());
  std::vector<std::size_t> tag_w;
  for (const auto& t : ix.tags) tag_w.push_back(std::max<std::size_t>(t.size(), 6));

  std::ostringstream out;
  auto pad = [&](const std::string& s, std::size_t w) {
    out << s << std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  pad("Method", method_w + 2);
  pad("Normalization", norm_w + 2);
  for (std::size_t c = 0; c < ix.tags.size(); ++c) pad(ix.tags[c], tag_w[c] + 2);
  out << '\n';
  for (const auto& m : ix.methods) {
    bool first_row = true;
    for (const auto& n : ix.norms) {
      bool any = false;
      for (const auto& t : ix.tags) any = any || ix.cells.count({m, n, t}) > 0;
      if (!any) continue;
      pad(first_row ? m : "", method_w + 2);
      first_row = false;
      pad(n, norm_w + 2);
      for (std::size_t c = 0; c < ix.tags.size(); ++c) {
        pad(cell_text(m, n, ix.tags[c], best.count({m, n, ix.tags[c]}) > 0),
            tag_w[c] + 2);
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string emit_csv(const std::vector<RunSummary>& runs) {
  const TableIndex ix = index_runs(runs);
  std::ostringstream out;
  out << "method,normalization,tag,accuracy\n";
  for (const auto& m : ix.methods) {
    for (const auto& n : ix.norms) {
      for (const auto& t : ix.tags) {
        auto it = ix.cells.find({m, n, t});
        if (it == ix.cells.end()) continue;
        out << m << ',' << n << ',' << t << ',' << g17(it->second) << '\n';
      }
    }
  }
  return out.str();
}

std::vector<RunSummary> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "method,normalization,tag,accuracy") {
    throw DataError("csv: missing header 'method,normalization,tag,accuracy'");
  }
  std::vector<RunSummary> out;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() < 4) {
      throw DataError("csv: line " + std::to_string(line_no) +
                      ": expected method,normalization,tag,accuracy");
    }
    RunSummary r;
    r.method = fields[0];
    r.normalization = fields[1];
    // A tag may itself contain commas; accuracy is always the last field.
    r.tag = fields[2];
    for (std::size_t k = 3; k + 1 < fields.size(); ++k) r.tag += "," + fields[k];
    try {
      r.accuracy = std::stod(fields.back());
    } catch (const std::exception&) {
      throw DataError("csv: line " + std::to_string(line_no) +
                      ": bad accuracy '" + fields.back() + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace xlign
