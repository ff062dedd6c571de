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

#include "xlign/xlign.h"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "xlign/align.hpp"
#include "xlign/embedding_space.hpp"
#include "xlign/errors.hpp"
#include "xlign/normalize.hpp"
#include "xlign/pipeline.hpp"
#include "xlign/rcsls.hpp"
#include "xlign/reports.hpp"
#include "xlign/retrieval.hpp"
#include "xlign/synthetic.hpp"
#include "xlign/vec_io.hpp"
#include "xlign/version.hpp"

using xlign::DataError;
using xlign::IoError;
using xlign::NumericError;
using xlign::UsageError;

struct xlign_space {
  xlign::EmbeddingSpace impl;
};
struct xlign_dictionary {
  xlign::DictionaryLoad impl;
};
struct xlign_map {
  xlign::LinearMap impl;
};
struct xlign_norm_report {
  xlign::NormalizationReport impl;
};
struct xlign_eval_report {
  xlign::EvaluationReport impl;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
xlign_status wrap(Fn&& fn) {
  try {
    fn();
    return XLIGN_OK;
  } catch (const UsageError& e) {
    g_last_error = e.what();
    return XLIGN_E_USAGE;
  } catch (const DataError& e) {
    g_last_error = e.what();
    return XLIGN_E_DATA;
  } catch (const NumericError& e) {
    g_last_error = e.what();
    return XLIGN_E_NUMERIC;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return XLIGN_E_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return XLIGN_E_NUMERIC;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw UsageError(what);
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<double> parse_double_list(const char* text, const char* what) {
  std::vector<double> out;
  const std::string s(text);
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    const std::string tok = s.substr(start, comma - start);
    if (!tok.empty()) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size()) {
        throw UsageError(std::string(what) + ": bad entry '" + tok + "'");
      }
      out.push_back(v);
    }
    start = comma + 1;
  }
  if (out.empty()) throw UsageError(std::string(what) + ": empty list");
  return out;
}

std::vector<int> parse_int_list(const char* text, const char* what) {
  std::vector<int> out;
  for (double v : parse_double_list(text, what)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw UsageError(std::string(what) + ": expected integers");
    }
    out.push_back(i);
  }
  return out;
}

xlign::RetrievalOptions make_retrieval_options(const char* criterion, int knn,
                                               int penalty_pool) {
  require(criterion != nullptr, "criterion is required");
  xlign::RetrievalOptions opts;
  opts.criterion = xlign::RetrievalCriterion::parse(criterion, knn);
  opts.penalty_pool = penalty_pool;
  return opts;
}

}  // namespace

extern "C" {

const char* xlign_version(void) { return XLIGN_VERSION; }

const char* xlign_last_error(void) { return g_last_error.c_str(); }

void xlign_string_free(char* s) { delete[] s; }

xlign_status xlign_space_read_vec(const char* path, long max_vocab,
                                  xlign_space** out) {
  return wrap([&] {
    require(path && out, "path and out are required");
    xlign::VecParseOptions opts;
    opts.max_vocab = max_vocab;
    std::vector<std::string> warnings;
    *out = new xlign_space{xlign::read_vec_file(path, opts, &warnings)};
    for (const auto& w : warnings) {
      std::fprintf(stderr, "xlign: warning: %s: %s\n", path, w.c_str());
    }
  });
}

xlign_status xlign_space_write_vec(const xlign_space* space, const char* path) {
  return wrap([&] {
    require(space && path, "space and path are required");
    xlign::write_vec_file(space->impl, path);
  });
}

void xlign_space_free(xlign_space* space) { delete space; }

long xlign_space_dim(const xlign_space* space) {
  return space ? space->impl.dim() : 0;
}

long xlign_space_size(const xlign_space* space) {
  return space ? space->impl.size() : 0;
}

const char* xlign_space_word(const xlign_space* space, long index) {
  if (!space || index < 0 || index >= space->impl.size()) return nullptr;
  return space->impl.word(static_cast<int>(index)).c_str();
}

long xlign_space_index(const xlign_space* space, const char* word) {
  if (!space || !word) return -1;
  return space->impl.index_of(word);
}

xlign_status xlign_space_normalize(xlign_space* space, const char* method,
                                   int rounds, double tolerance,
                                   int perturb_zeros,
                                   xlign_norm_report** report_out) {
  return wrap([&] {
    require(space && method, "space and method are required");
    const auto parsed = xlign::NormalizationMethod::parse(method, rounds, tolerance);
    auto [result, report] =
        xlign::normalize_with(space->impl, parsed, perturb_zeros != 0);
    space->impl = std::move(result);
    if (report_out) {
      *report_out = report ? new xlign_norm_report{std::move(*report)} : nullptr;
    }
  });
}

xlign_status xlign_space_residuals(const xlign_space* space,
                                   double* max_length_residual,
                                   double* mean_norm_residual,
                                   double* min_column_length) {
  return wrap([&] {
    require(space != nullptr, "space is required");
    const auto res = xlign::constraint_residuals(space->impl);
    if (max_length_residual) *max_length_residual = res.max_length_residual;
    if (mean_norm_residual) *mean_norm_residual = res.mean_norm_residual;
    if (min_column_length) *min_column_length = res.min_column_length;
  });
}

double xlign_space_mean_vector_length(const xlign_space* space) {
  return space ? xlign::mean_vector_length(space->impl) : 0.0;
}

void xlign_norm_report_free(xlign_norm_report* report) { delete report; }

int xlign_norm_report_converged(const xlign_norm_report* report) {
  return report && report->impl.converged ? 1 : 0;
}

long xlign_norm_report_rounds(const xlign_norm_report* report) {
  return report ? static_cast<long>(report->impl.rounds.size()) : 0;
}

xlign_status xlign_norm_report_round(const xlign_norm_report* report,
                                     long index, double* max_length_residual,
                                     double* mean_norm_residual,
                                     double* iterate_delta,
                                     double* min_column_length) {
  return wrap([&] {
    require(report != nullptr, "report is required");
    require(index >= 0 &&
                index < static_cast<long>(report->impl.rounds.size()),
            "round index out of range");
    const auto& r = report->impl.rounds[index];
    if (max_length_residual) *max_length_residual = r.max_length_residual;
    if (mean_norm_residual) *mean_norm_residual = r.mean_norm_residual;
    if (iterate_delta) *iterate_delta = r.iterate_delta;
    if (min_column_length) *min_column_length = r.min_column_length;
  });
}

xlign_status xlign_norm_report_json(const xlign_norm_report* report,
                                    char** json_out) {
  return wrap([&] {
    require(report && json_out, "report and json_out are required");
    *json_out = copy_string(xlign::to_json(report->impl));
  });
}

xlign_status xlign_dictionary_read(const char* path, const xlign_space* src,
                                   const xlign_space* tgt,
                                   xlign_dictionary** out) {
  return wrap([&] {
    require(path && src && tgt && out, "path, spaces and out are required");
    *out = new xlign_dictionary{
        xlign::load_dictionary_file(path, src->impl, tgt->impl)};
  });
}

void xlign_dictionary_free(xlign_dictionary* dict) { delete dict; }

long xlign_dictionary_pairs(const xlign_dictionary* dict) {
  return dict ? static_cast<long>(dict->impl.pairs.size()) : 0;
}

long xlign_dictionary_skipped(const xlign_dictionary* dict) {
  return dict ? dict->impl.skipped : 0;
}

xlign_status xlign_map_read(const char* path, xlign_map** out) {
  return wrap([&] {
    require(path && out, "path and out are required");
    *out = new xlign_map{xlign::read_map_file(path)};
  });
}

xlign_status xlign_map_write(const xlign_map* map, const char* path) {
  return wrap([&] {
    require(map && path, "map and path are required");
    xlign::write_map_file(map->impl, path);
  });
}

void xlign_map_free(xlign_map* map) { delete map; }

long xlign_map_dim(const xlign_map* map) { return map ? map->impl.dim() : 0; }

int xlign_map_orthogonal(const xlign_map* map) {
  return map && map->impl.orthogonal ? 1 : 0;
}

double xlign_map_orthogonality_residual(const xlign_map* map) {
  return map ? map->impl.orthogonality_residual : 0.0;
}

xlign_status xlign_fit_procrustes(const xlign_space* src,
                                  const xlign_space* tgt,
                                  const xlign_dictionary* train,
                                  xlign_map** out) {
  return wrap([&] {
    require(src && tgt && train && out, "spaces, dictionary and out are required");
    *out = new xlign_map{
        xlign::procrustes_fit(src->impl, tgt->impl, train->impl.pairs)};
  });
}

xlign_status xlign_fit_refine(const xlign_space* src, const xlign_space* tgt,
                              const xlign_dictionary* train, int steps,
                              int synthetic_pool, int knn, xlign_map** out) {
  return wrap([&] {
    require(src && tgt && train && out, "spaces, dictionary and out are required");
    xlign::RefineConfig cfg;
    cfg.steps = steps;
    cfg.synthetic_pool = synthetic_pool;
    cfg.knn = knn;
    *out = new xlign_map{
        xlign::refine(src->impl, tgt->impl, train->impl.pairs, cfg).map};
  });
}

xlign_status xlign_fit_rcsls(const xlign_space* src, const xlign_space* tgt,
                             const xlign_dictionary* train,
                             const xlign_dictionary* valid, const char* lr_grid,
                             const char* epoch_grid, int knn, int neighbor_pool,
                             int batch_size, int holdout,
                             unsigned long long seed, double* chosen_lr,
                             int* chosen_epochs, xlign_map** out) {
  return wrap([&] {
    require(src && tgt && train && out, "spaces, dictionary and out are required");
    xlign::RcslsConfig cfg;
    if (lr_grid) cfg.learning_rates = parse_double_list(lr_grid, "lr grid");
    if (epoch_grid) cfg.epoch_candidates = parse_int_list(epoch_grid, "epoch grid");
    cfg.knn = knn;
    cfg.neighbor_pool = neighbor_pool;
    cfg.batch_size = batch_size;
    if (holdout > 0) cfg.holdout = holdout;
    cfg.seed = seed;
    std::optional<xlign::SeedDictionary> valid_pairs;
    if (valid) valid_pairs = valid->impl.pairs;
    const auto result =
        xlign::rcsls_train(src->impl, tgt->impl, train->impl.pairs, valid_pairs, cfg);
    if (chosen_lr) *chosen_lr = result.learning_rate;
    if (chosen_epochs) *chosen_epochs = result.epochs;
    *out = new xlign_map{result.map};
  });
}

xlign_status xlign_translate(const xlign_map* map, const xlign_space* src,
                             const xlign_space* tgt, const long* query_indices,
                             long n_queries, const char* criterion, int knn,
                             int topk, int penalty_pool,
                             long* target_indices_out, double* scores_out) {
  return wrap([&] {
    require(map && src && tgt && query_indices && target_indices_out,
            "map, spaces, queries and output buffer are required");
    require(n_queries >= 1, "n_queries must be >= 1");
    std::vector<int> queries(query_indices, query_indices + n_queries);
    const auto opts = make_retrieval_options(criterion, knn, penalty_pool);
    const auto ranked =
        xlign::translate_topk(map->impl, src->impl, tgt->impl, queries, topk, opts);
    for (long q = 0; q < n_queries; ++q) {
      for (int r = 0; r < topk; ++r) {
        const long slot = q * topk + r;
        if (r < static_cast<int>(ranked[q].size())) {
          target_indices_out[slot] = ranked[q][r].target_index;
          if (scores_out) scores_out[slot] = ranked[q][r].score;
        } else {
          target_indices_out[slot] = -1;
          if (scores_out) scores_out[slot] = 0.0;
        }
      }
    }
  });
}

xlign_status xlign_evaluate(const xlign_map* map, const xlign_space* src,
                            const xlign_space* tgt, const xlign_dictionary* test,
                            const char* criterion, int knn, int penalty_pool,
                            xlign_eval_report** out) {
  return wrap([&] {
    require(map && src && tgt && test && out,
            "map, spaces, dictionary and out are required");
    const auto opts = make_retrieval_options(criterion, knn, penalty_pool);
    *out = new xlign_eval_report{xlign::evaluate_p1(
        map->impl, src->impl, tgt->impl, test->impl.multi, opts)};
  });
}

void xlign_eval_report_free(xlign_eval_report* report) { delete report; }

double xlign_eval_report_accuracy(const xlign_eval_report* report) {
  return report ? report->impl.accuracy : 0.0;
}

long xlign_eval_report_queries(const xlign_eval_report* report) {
  return report ? report->impl.total_queries : 0;
}

long xlign_eval_report_correct(const xlign_eval_report* report) {
  return report ? report->impl.correct : 0;
}

xlign_status xlign_eval_report_json(const xlign_eval_report* report,
                                    char** json_out) {
  return wrap([&] {
    require(report && json_out, "report and json_out are required");
    *json_out = copy_string(xlign::to_json(report->impl));
  });
}

xlign_status xlign_neighbors(const xlign_space* space, const char* word, int k,
                             long* indices_out, double* cosines_out,
                             long* found_out) {
  return wrap([&] {
    require(space && word && indices_out && cosines_out && found_out,
            "space, word and output buffers are required");
    const auto entries = xlign::neighborhood(space->impl, word, k);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      indices_out[i] = space->impl.index_of(entries[i].word);
      cosines_out[i] = entries[i].cosine;
    }
    *found_out = static_cast<long>(entries.size());
  });
}

xlign_status xlign_wordsim(const xlign_space* space, const char* dataset_path,
                           double* rho_out, long* covered_out,
                           long* skipped_out) {
  return wrap([&] {
    require(space && dataset_path && rho_out, "space, path and rho_out required");
    const auto dataset = xlign::load_similarity_dataset_file(dataset_path);
    const auto result = xlign::spearman_wordsim(space->impl, dataset);
    *rho_out = result.rho;
    if (covered_out) *covered_out = result.covered_pairs;
    if (skipped_out) *skipped_out = result.skipped_pairs;
  });
}

xlign_status xlign_synth_write(long n, long d, double noise_sigma,
                               double offset_norm, double scale_min,
                               double scale_max, double spectrum_decay,
                               long train_pairs, long test_pairs,
                               unsigned long long seed, const char* out_dir) {
  return wrap([&] {
    require(out_dir != nullptr, "out_dir is required");
    xlign::SyntheticSpec spec;
    spec.n = static_cast<int>(n);
    spec.d = static_cast<int>(d);
    spec.noise_sigma = noise_sigma;
    spec.mean_offset =
        xlign::offset_with_norm(static_cast<int>(d), offset_norm, seed);
    spec.length_scale_min = scale_min;
    spec.length_scale_max = scale_max;
    spec.spectrum_decay = spectrum_decay;
    spec.train_pairs = static_cast<int>(train_pairs);
    spec.test_pairs = static_cast<int>(test_pairs);
    spec.seed = seed;
    const auto world = xlign::generate_synthetic(spec);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    xlign::write_vec_file(world.src, (dir / "src.vec").string());
    xlign::write_vec_file(world.tgt, (dir / "tgt.vec").string());
    auto write_dict = [&](const xlign::SeedDictionary& dict, const char* name) {
      std::ofstream out(dir / name);
      if (!out) throw IoError(std::string("cannot open '") + name + "' for writing");
      xlign::write_dictionary(dict, world.src, world.tgt, out);
    };
    write_dict(world.train_dict, "train.txt");
    write_dict(world.test_dict, "test.txt");
    xlign::LinearMap q;
    q.matrix = world.rotation;
    q.orthogonal = true;
    q.orthogonality_residual =
        (q.matrix.transpose() * q.matrix -
         xlign::Matrix::Identity(q.matrix.cols(), q.matrix.cols()))
            .norm();
    xlign::write_map_file(q, (dir / "rotation.map").string());
  });
}

void xlign_pipeline_config_init(xlign_pipeline_config* cfg) {
  if (!cfg) return;
  std::memset(cfg, 0, sizeof(*cfg));
  cfg->normalization = "none";
  cfg->norm_rounds = 5;
  cfg->norm_tolerance = 0.0;
  cfg->method = "procrustes";
  cfg->refine_steps = 5;
  cfg->refine_pool = 10000;
  cfg->rcsls_neighbor_pool = 50000;
  cfg->rcsls_batch_size = 512;
  cfg->rcsls_holdout = 500;
  cfg->knn = 10;
  cfg->criterion = "csls";
}

xlign_status xlign_run_pipeline(const xlign_pipeline_config* cfg,
                                double* accuracy_out) {
  return wrap([&] {
    require(cfg != nullptr, "config is required");
    require(cfg->src_path && cfg->tgt_path && cfg->train_dict_path &&
                cfg->test_dict_path && cfg->out_dir,
            "src, tgt, dictionaries and out_dir are required");
    xlign::PipelineConfig pc;
    pc.src_path = cfg->src_path;
    pc.tgt_path = cfg->tgt_path;
    pc.train_dict_path = cfg->train_dict_path;
    pc.test_dict_path = cfg->test_dict_path;
    pc.valid_dict_path = cfg->valid_dict_path ? cfg->valid_dict_path : "";
    pc.normalization = xlign::NormalizationMethod::parse(
        cfg->normalization ? cfg->normalization : "none", cfg->norm_rounds,
        cfg->norm_tolerance);
    pc.perturb_zeros = cfg->perturb_zeros != 0;
    pc.method = cfg->method ? cfg->method : "procrustes";
    pc.refine.steps = cfg->refine_steps;
    pc.refine.synthetic_pool = cfg->refine_pool;
    pc.refine.knn = cfg->knn;
    if (cfg->rcsls_lr_grid) {
      pc.rcsls.learning_rates = parse_double_list(cfg->rcsls_lr_grid, "lr grid");
    }
    if (cfg->rcsls_epoch_grid) {
      pc.rcsls.epoch_candidates = parse_int_list(cfg->rcsls_epoch_grid, "epoch grid");
    }
    pc.rcsls.knn = cfg->knn;
    pc.rcsls.neighbor_pool = cfg->rcsls_neighbor_pool;
    pc.rcsls.batch_size = cfg->rcsls_batch_size;
    if (cfg->rcsls_holdout > 0) pc.rcsls.holdout = cfg->rcsls_holdout;
    pc.criterion = xlign::RetrievalCriterion::parse(
        cfg->criterion ? cfg->criterion : "csls", cfg->knn);
    pc.penalty_pool = cfg->penalty_pool;
    pc.seed = cfg->seed;
    pc.max_vocab = cfg->max_vocab;
    pc.out_dir = cfg->out_dir;
    pc.tag = cfg->tag ? cfg->tag : "";
    const auto result = xlign::run_pipeline(pc);
    if (accuracy_out) *accuracy_out = result.evaluation.accuracy;
  });
}

xlign_status xlign_emit_table(const char* const* record_paths, long n_records,
                              char** table_out, char** csv_out) {
  return wrap([&] {
    require(record_paths != nullptr && n_records >= 1,
            "at least one record path is required");
    std::vector<xlign::RunSummary> runs;
    runs.reserve(n_records);
    for (long i = 0; i < n_records; ++i) {
      require(record_paths[i] != nullptr, "record path is null");
      runs.push_back(xlign::load_run_record(record_paths[i]));
    }
    if (table_out) *table_out = copy_string(xlign::emit_table(runs));
    if (csv_out) *csv_out = copy_string(xlign::emit_csv(runs));
  });
}

}  // extern "C"
