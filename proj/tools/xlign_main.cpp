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

// Command-line frontend. Talks to the core exclusively through the C API
// in xlign/xlign.h. Exit codes: 0 success, 1 usage, 2 data, 3 numerical.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "xlign/xlign.h"

namespace {

struct CliExit {
  int code;
};

int exit_code_for(xlign_status status) {
  switch (status) {
    case XLIGN_OK:
      return 0;
    case XLIGN_E_USAGE:
      return 1;
    case XLIGN_E_DATA:
    case XLIGN_E_IO:
      return 2;
    default:
      return 3;
  }
}

void check(xlign_status status) {
  if (status != XLIGN_OK) {
    std::cerr << "error: " << xlign_last_error() << "\n";
    throw CliExit{exit_code_for(status)};
  }
}

struct SpaceDeleter {
  void operator()(xlign_space* p) const { xlign_space_free(p); }
};
struct DictDeleter {
  void operator()(xlign_dictionary* p) const { xlign_dictionary_free(p); }
};
struct MapDeleter {
  void operator()(xlign_map* p) const { xlign_map_free(p); }
};
struct NormReportDeleter {
  void operator()(xlign_norm_report* p) const { xlign_norm_report_free(p); }
};
struct EvalReportDeleter {
  void operator()(xlign_eval_report* p) const { xlign_eval_report_free(p); }
};

using SpacePtr = std::unique_ptr<xlign_space, SpaceDeleter>;
using DictPtr = std::unique_ptr<xlign_dictionary, DictDeleter>;
using MapPtr = std::unique_ptr<xlign_map, MapDeleter>;
using NormReportPtr = std::unique_ptr<xlign_norm_report, NormReportDeleter>;
using EvalReportPtr = std::unique_ptr<xlign_eval_report, EvalReportDeleter>;

SpacePtr read_space(const std::string& path, long max_vocab) {
  xlign_space* raw = nullptr;
  check(xlign_space_read_vec(path.c_str(), max_vocab, &raw));
  return SpacePtr(raw);
}

DictPtr read_dict(const std::string& path, const xlign_space* src,
                  const xlign_space* tgt) {
  xlign_dictionary* raw = nullptr;
  check(xlign_dictionary_read(path.c_str(), src, tgt, &raw));
  return DictPtr(raw);
}

MapPtr read_map(const std::string& path) {
  xlign_map* raw = nullptr;
  check(xlign_map_read(path.c_str(), &raw));
  return MapPtr(raw);
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  xlign_string_free(s);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    throw CliExit{2};
  }
  out << content;
}

// Shared flag bundle for the pipeline-shaped commands (align, grid).
struct FitOptions {
  int refine_steps = 5;
  int refine_pool = 10000;
  std::string rcsls_lr_grid = "1,10,25,50";
  std::string rcsls_epoch_grid = "10,20";
  int rcsls_pool = 50000;
  int rcsls_batch = 512;
  int rcsls_holdout = 500;
  int knn = 10;
  unsigned long long seed = 0;
};

void add_fit_options(CLI::App* cmd, FitOptions& fit) {
  cmd->add_option("--refine-steps", fit.refine_steps, "Refinement steps");
  cmd->add_option("--refine-pool", fit.refine_pool,
                  "Frequency pool for synthetic dictionaries");
  cmd->add_option("--rcsls-lr-grid", fit.rcsls_lr_grid,
                  "Comma-separated learning-rate candidates");
  cmd->add_option("--rcsls-epoch-grid", fit.rcsls_epoch_grid,
                  "Comma-separated epoch candidates");
  cmd->add_option("--rcsls-pool", fit.rcsls_pool, "RCSLS neighbor pool");
  cmd->add_option("--rcsls-batch", fit.rcsls_batch, "RCSLS batch size");
  cmd->add_option("--rcsls-holdout", fit.rcsls_holdout,
                  "Validation pairs held out when no --valid-dict");
  cmd->add_option("--knn", fit.knn, "CSLS neighborhood size");
  cmd->add_option("--seed", fit.seed, "Random seed");
}

int cmd_normalize(const std::string& in_path, const std::string& out_path,
                  const std::string& method, int rounds, double tolerance,
                  bool perturb, const std::string& report_path, long max_vocab) {
  SpacePtr space = read_space(in_path, max_vocab);
  xlign_norm_report* raw_report = nullptr;
  check(xlign_space_normalize(space.get(), method.c_str(), rounds, tolerance,
                              perturb ? 1 : 0, &raw_report));
  NormReportPtr report(raw_report);
  check(xlign_space_write_vec(space.get(), out_path.c_str()));
  if (!report_path.empty()) {
    if (!report) {
      std::cerr << "error: --report requires --method iternorm\n";
      return 1;
    }
    char* json = nullptr;
    check(xlign_norm_report_json(report.get(), &json));
    write_file(report_path, take_string(json));
  }
  double len_res = 0.0, mean_res = 0.0, min_len = 0.0;
  check(xlign_space_residuals(space.get(), &len_res, &mean_res, &min_len));
  std::fprintf(stderr,
               "normalized %ld words (method %s): length residual %.3e, "
               "mean residual %.3e\n",
               xlign_space_size(space.get()), method.c_str(), len_res, mean_res);
  return 0;
}

int cmd_align(const std::string& method, const std::string& src_path,
              const std::string& tgt_path, const std::string& train_path,
              const std::string& valid_path, const std::string& out_path,
              const FitOptions& fit, long max_vocab) {
  SpacePtr src = read_space(src_path, max_vocab);
  SpacePtr tgt = read_space(tgt_path, max_vocab);
  DictPtr train = read_dict(train_path, src.get(), tgt.get());
  if (xlign_dictionary_skipped(train.get()) > 0) {
    std::fprintf(stderr, "warning: %ld training pairs skipped (out of vocabulary)\n",
                 xlign_dictionary_skipped(train.get()));
  }

  xlign_map* raw = nullptr;
  if (method == "procrustes") {
    check(xlign_fit_procrustes(src.get(), tgt.get(), train.get(), &raw));
  } else if (method == "procrustes-refine") {
    check(xlign_fit_refine(src.get(), tgt.get(), train.get(), fit.refine_steps,
                           fit.refine_pool, fit.knn, &raw));
  } else if (method == "rcsls") {
    DictPtr valid;
    if (!valid_path.empty()) valid = read_dict(valid_path, src.get(), tgt.get());
    double lr = 0.0;
    int epochs = 0;
    check(xlign_fit_rcsls(src.get(), tgt.get(), train.get(), valid.get(),
                          fit.rcsls_lr_grid.c_str(), fit.rcsls_epoch_grid.c_str(),
                          fit.knn, fit.rcsls_pool, fit.rcsls_batch,
                          fit.rcsls_holdout, fit.seed, &lr, &epochs, &raw));
    std::fprintf(stderr, "rcsls: selected lr %g, %d epochs\n", lr, epochs);
  } else {
    std::cerr << "error: unknown method '" << method << "'\n";
    return 1;
  }
  MapPtr map(raw);
  check(xlign_map_write(map.get(), out_path.c_str()));
  std::fprintf(stderr, "wrote %s (orthogonal: %s, ||W'W - I|| = %.3e)\n",
               out_path.c_str(), xlign_map_orthogonal(map.get()) ? "yes" : "no",
               xlign_map_orthogonality_residual(map.get()));
  return 0;
}

int cmd_translate(const std::string& map_path, const std::string& src_path,
                  const std::string& tgt_path, const std::string& criterion,
                  int knn, int topk, int penalty_pool,
                  std::vector<std::string> words, bool use_stdin,
                  long max_vocab) {
  MapPtr map = read_map(map_path);
  SpacePtr src = read_space(src_path, max_vocab);
  SpacePtr tgt = read_space(tgt_path, max_vocab);

  if (use_stdin) {
    std::string w;
    while (std::cin >> w) words.push_back(w);
  }
  if (words.empty()) {
    std::cerr << "error: no words to translate (pass words or --stdin)\n";
    return 1;
  }

  std::vector<long> queries;
  std::vector<std::string> resolved;
  for (const auto& w : words) {
    const long idx = xlign_space_index(src.get(), w.c_str());
    if (idx < 0) {
      std::fprintf(stderr, "warning: '%s' not in source vocabulary, skipped\n",
                   w.c_str());
      continue;
    }
    queries.push_back(idx);
    resolved.push_back(w);
  }
  if (queries.empty()) {
    std::cerr << "error: every requested word is out of vocabulary\n";
    return 2;
  }

  std::vector<long> targets(queries.size() * topk);
  std::vector<double> scores(queries.size() * topk);
  check(xlign_translate(map.get(), src.get(), tgt.get(), queries.data(),
                        static_cast<long>(queries.size()), criterion.c_str(),
                        knn, topk, penalty_pool, targets.data(), scores.data()));
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (int r = 0; r < topk; ++r) {
      const long t = targets[q * topk + r];
      if (t < 0) continue;
      std::printf("%s\t%s\t%.6f\n", resolved[q].c_str(),
                  xlign_space_word(tgt.get(), t), scores[q * topk + r]);
    }
  }
  return 0;
}

int cmd_evaluate(const std::string& map_path, const std::string& src_path,
                 const std::string& tgt_path, const std::string& test_path,
                 const std::string& criterion, int knn, int penalty_pool,
                 const std::string& out_path, long max_vocab) {
  MapPtr map = read_map(map_path);
  SpacePtr src = read_space(src_path, max_vocab);
  SpacePtr tgt = read_space(tgt_path, max_vocab);
  DictPtr test = read_dict(test_path, src.get(), tgt.get());

  xlign_eval_report* raw = nullptr;
  check(xlign_evaluate(map.get(), src.get(), tgt.get(), test.get(),
                       criterion.c_str(), knn, penalty_pool, &raw));
  EvalReportPtr report(raw);
  std::printf("P@1 = %.4f (%ld/%ld), criterion %s\n",
              xlign_eval_report_accuracy(report.get()),
              xlign_eval_report_correct(report.get()),
              xlign_eval_report_queries(report.get()), criterion.c_str());
  if (!out_path.empty()) {
    char* json = nullptr;
    check(xlign_eval_report_json(report.get(), &json));
    write_file(out_path, take_string(json));
  }
  return 0;
}

int cmd_simsuite(const std::string& space_path,
                 const std::vector<std::string>& datasets, long max_vocab) {
  SpacePtr space = read_space(space_path, max_vocab);
  std::printf("%-24s %10s %8s %8s\n", "dataset", "rho_x100", "covered", "skipped");
  for (const auto& path : datasets) {
    double rho = 0.0;
    long covered = 0, skipped = 0;
    check(xlign_wordsim(space.get(), path.c_str(), &rho, &covered, &skipped));
    std::printf("%-24s %10.1f %8ld %8ld\n",
                std::filesystem::path(path).filename().c_str(), rho * 100.0,
                covered, skipped);
  }
  return 0;
}

int cmd_neighbors(const std::string& space_path, const std::string& word, int k,
                  const std::string& space_b_path, const std::string& word_b,
                  long max_vocab) {
  SpacePtr space = read_space(space_path, max_vocab);
  auto print_block = [&](xlign_space* s, const std::string& w) {
    std::vector<long> indices(k);
    std::vector<double> cosines(k);
    long found = 0;
    check(xlign_neighbors(s, w.c_str(), k, indices.data(), cosines.data(), &found));
    std::printf("%s:\n", w.c_str());
    for (long i = 0; i < found; ++i) {
      std::printf("  %-24s %.4f\n", xlign_space_word(s, indices[i]), cosines[i]);
    }
  };
  print_block(space.get(), word);
  if (!space_b_path.empty() || !word_b.empty()) {
    if (word_b.empty()) {
      std::cerr << "error: --word-b is required with --space-b\n";
      return 1;
    }
    SpacePtr space_b =
        space_b_path.empty() ? SpacePtr() : read_space(space_b_path, max_vocab);
    print_block(space_b ? space_b.get() : space.get(), word_b);
  }
  return 0;
}

struct SynthArgs {
  std::string out_dir;
  long n = 2000;
  long d = 50;
  double noise_sigma = 0.05;
  double offset_norm = 0.5;
  double scale_min = 0.5;
  double scale_max = 2.0;
  double spectrum_decay = 2.0;
  long train_pairs = 500;
  long test_pairs = 500;
  unsigned long long seed = 0;
};

int cmd_synth(const SynthArgs& a) {
  check(xlign_synth_write(a.n, a.d, a.noise_sigma, a.offset_norm, a.scale_min,
                          a.scale_max, a.spectrum_decay, a.train_pairs,
                          a.test_pairs, a.seed, a.out_dir.c_str()));
  std::fprintf(stderr, "wrote synthetic world (n=%ld, d=%ld, seed=%llu) to %s\n",
               a.n, a.d, a.seed, a.out_dir.c_str());
  std::printf("%s/src.vec\n%s/tgt.vec\n%s/train.txt\n%s/test.txt\n%s/rotation.map\n",
              a.out_dir.c_str(), a.out_dir.c_str(), a.out_dir.c_str(),
              a.out_dir.c_str(), a.out_dir.c_str());
  return 0;
}

struct GridArgs {
  std::string src_path, tgt_path, train_path, test_path, valid_path;
  std::string methods = "procrustes";
  std::string norms = "none,cl,iternorm";
  std::string out_dir;
  std::string tag = "run";
  std::string criterion = "csls";
  std::string csv_path;
  int rounds = 5;
  double tolerance = 0.0;
  bool perturb = false;
  int penalty_pool = 0;
  long max_vocab = 0;
  FitOptions fit;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    if (comma > start) out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

int cmd_grid(const GridArgs& a) {
  const auto methods = split_csv(a.methods);
  const auto norms = split_csv(a.norms);
  if (methods.empty() || norms.empty()) {
    std::cerr << "error: --methods and --norms must be non-empty\n";
    return 1;
  }
  std::vector<std::string> records;
  for (const auto& method : methods) {
    for (const auto& norm : norms) {
      xlign_pipeline_config cfg;
      xlign_pipeline_config_init(&cfg);
      cfg.src_path = a.src_path.c_str();
      cfg.tgt_path = a.tgt_path.c_str();
      cfg.train_dict_path = a.train_path.c_str();
      cfg.test_dict_path = a.test_path.c_str();
      cfg.valid_dict_path = a.valid_path.empty() ? nullptr : a.valid_path.c_str();
      cfg.normalization = norm.c_str();
      cfg.norm_rounds = a.rounds;
      cfg.norm_tolerance = a.tolerance;
      cfg.perturb_zeros = a.perturb ? 1 : 0;
      cfg.method = method.c_str();
      cfg.refine_steps = a.fit.refine_steps;
      cfg.refine_pool = a.fit.refine_pool;
      cfg.rcsls_lr_grid = a.fit.rcsls_lr_grid.c_str();
      cfg.rcsls_epoch_grid = a.fit.rcsls_epoch_grid.c_str();
      cfg.rcsls_neighbor_pool = a.fit.rcsls_pool;
      cfg.rcsls_batch_size = a.fit.rcsls_batch;
      cfg.rcsls_holdout = a.fit.rcsls_holdout;
      cfg.knn = a.fit.knn;
      cfg.criterion = a.criterion.c_str();
      cfg.penalty_pool = a.penalty_pool;
      cfg.seed = a.fit.seed;
      cfg.max_vocab = a.max_vocab;
      const std::string run_dir =
          a.out_dir + "/" + a.tag + "_" + method + "_" + norm;
      cfg.out_dir = run_dir.c_str();
      cfg.tag = a.tag.c_str();
      double accuracy = 0.0;
      std::fprintf(stderr, "running %s / %s ...\n", method.c_str(), norm.c_str());
      check(xlign_run_pipeline(&cfg, &accuracy));
      std::fprintf(stderr, "  P@1 = %.4f\n", accuracy);
      records.push_back(run_dir + "/run.json");
    }
  }

  std::vector<const char*> paths;
  paths.reserve(records.size());
  for (const auto& r : records) paths.push_back(r.c_str());
  char* table = nullptr;
  char* csv = nullptr;
  check(xlign_emit_table(paths.data(), static_cast<long>(paths.size()), &table,
                         a.csv_path.empty() ? nullptr : &csv));
  std::printf("%s", take_string(table).c_str());
  if (!a.csv_path.empty()) write_file(a.csv_path, take_string(csv));
  return 0;
}

int cmd_report(const std::vector<std::string>& records,
               const std::string& csv_path) {
  std::vector<const char*> paths;
  paths.reserve(records.size());
  for (const auto& r : records) paths.push_back(r.c_str());
  char* table = nullptr;
  char* csv = nullptr;
  check(xlign_emit_table(paths.data(), static_cast<long>(paths.size()), &table,
                         csv_path.empty() ? nullptr : &csv));
  std::printf("%s", take_string(table).c_str());
  if (!csv_path.empty()) write_file(csv_path, take_string(csv));
  return 0;
}

int cmd_fetch_instructions(const std::string& data_dir,
                           const std::string& languages) {
  const auto langs = split_csv(languages);
  std::printf(
      "# Commands to fetch the benchmark data (nothing is downloaded for you).\n"
      "# Expect several GB; the vectors are ~6 GB each.\n\n"
      "mkdir -p %s\ncd %s\n\n# English fastText vectors (Wikipedia)\n"
      "curl -O https://dl.fbaipublicfiles.com/fasttext/vectors-wiki/wiki.en.vec\n\n",
      data_dir.c_str(), data_dir.c_str());
  for (const auto& lang : langs) {
    std::printf(
        "# %s vectors and train/test dictionaries\n"
        "curl -O https://dl.fbaipublicfiles.com/fasttext/vectors-wiki/wiki.%s.vec\n"
        "curl -O https://dl.fbaipublicfiles.com/arrival/dictionaries/en-%s.0-5000.txt\n"
        "curl -O https://dl.fbaipublicfiles.com/arrival/dictionaries/en-%s.5000-6500.txt\n\n",
        lang.c_str(), lang.c_str(), lang.c_str(), lang.c_str());
  }
  std::printf(
      "# WS-353 word-similarity dataset, converted to 'word_a word_b score':\n"
      "curl -LO http://www.gabrilovich.com/resources/data/wordsim353/wordsim353.zip\n"
      "unzip -o wordsim353.zip combined.tab\n"
      "tail -n +2 combined.tab | tr '\\t' ' ' > ws353.txt\n\n"
      "# Afterwards, point the tools at %s, e.g.:\n"
      "#   xlign grid --src %s/wiki.en.vec --tgt %s/wiki.ja.vec \\\n"
      "#     --train-dict %s/en-ja.0-5000.txt --test-dict %s/en-ja.5000-6500.txt \\\n"
      "#     --methods procrustes --norms none,cl,iternorm --max-vocab 200000 \\\n"
      "#     --out-dir runs --tag en-ja\n",
      data_dir.c_str(), data_dir.c_str(), data_dir.c_str(), data_dir.c_str(),
      data_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xlign: cross-lingual word embedding alignment toolkit"};
  app.set_version_flag("--version", std::string(xlign_version()));
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);

  int rc = 0;

  // normalize
  auto* norm_cmd = app.add_subcommand(
      "normalize", "Normalize an embedding space and write it back out");
  std::string n_in, n_out, n_method = "iternorm", n_report;
  int n_rounds = 5;
  double n_tol = 0.0;
  bool n_perturb = false;
  long n_max_vocab = 0;
  norm_cmd->add_option("input", n_in, "Input .vec file")->required();
  norm_cmd->add_option("output", n_out, "Output .vec file")->required();
  norm_cmd->add_option("--method", n_method, "none | cl | iternorm");
  norm_cmd->add_option("--rounds", n_rounds, "IterNorm round budget");
  norm_cmd->add_option("--tolerance", n_tol, "IterNorm early-stop tolerance");
  norm_cmd->add_flag("--perturb-zeros", n_perturb,
                     "Replace zero vectors with tiny noise instead of failing");
  norm_cmd->add_option("--report", n_report, "Write the round-by-round report JSON");
  norm_cmd->add_option("--max-vocab", n_max_vocab, "Keep only the first N words");
  norm_cmd->callback([&] {
    rc = cmd_normalize(n_in, n_out, n_method, n_rounds, n_tol, n_perturb,
                       n_report, n_max_vocab);
  });

  // align
  auto* align_cmd = app.add_subcommand("align", "Fit a linear map from a seed dictionary");
  std::string a_method = "procrustes", a_src, a_tgt, a_train, a_valid, a_out;
  long a_max_vocab = 0;
  FitOptions a_fit;
  align_cmd->add_option("--method", a_method, "procrustes | procrustes-refine | rcsls");
  align_cmd->add_option("--src", a_src, "Source .vec")->required();
  align_cmd->add_option("--tgt", a_tgt, "Target .vec")->required();
  align_cmd->add_option("--train-dict", a_train, "Training dictionary")->required();
  align_cmd->add_option("--valid-dict", a_valid, "Validation dictionary (rcsls)");
  align_cmd->add_option("--out", a_out, "Output map file")->required();
  align_cmd->add_option("--max-vocab", a_max_vocab, "Keep only the first N words");
  add_fit_options(align_cmd, a_fit);
  align_cmd->callback([&] {
    rc = cmd_align(a_method, a_src, a_tgt, a_train, a_valid, a_out, a_fit,
                   a_max_vocab);
  });

  // translate
  auto* tr_cmd = app.add_subcommand("translate", "Translate words with a fitted map");
  std::string t_map, t_src, t_tgt, t_criterion = "csls";
  int t_knn = 10, t_topk = 1, t_pool = 0;
  long t_max_vocab = 0;
  bool t_stdin = false;
  std::vector<std::string> t_words;
  tr_cmd->add_option("--map", t_map, "Map file")->required();
  tr_cmd->add_option("--src", t_src, "Source .vec")->required();
  tr_cmd->add_option("--tgt", t_tgt, "Target .vec")->required();
  tr_cmd->add_option("--criterion", t_criterion, "nn | csls");
  tr_cmd->add_option("--knn", t_knn, "CSLS neighborhood size");
  tr_cmd->add_option("--topk", t_topk, "Predictions per word");
  tr_cmd->add_option("--penalty-pool", t_pool, "CSLS penalty pool (0 = all)");
  tr_cmd->add_option("--max-vocab", t_max_vocab, "Keep only the first N words");
  tr_cmd->add_flag("--stdin", t_stdin, "Read words from standard input");
  tr_cmd->add_option("words", t_words, "Words to translate");
  tr_cmd->callback([&] {
    rc = cmd_translate(t_map, t_src, t_tgt, t_criterion, t_knn, t_topk, t_pool,
                       t_words, t_stdin, t_max_vocab);
  });

  // evaluate
  auto* ev_cmd = app.add_subcommand("evaluate", "P@1 against a test dictionary");
  std::string e_map, e_src, e_tgt, e_test, e_criterion = "csls", e_out;
  int e_knn = 10, e_pool = 0;
  long e_max_vocab = 0;
  ev_cmd->add_option("--map", e_map, "Map file")->required();
  ev_cmd->add_option("--src", e_src, "Source .vec")->required();
  ev_cmd->add_option("--tgt", e_tgt, "Target .vec")->required();
  ev_cmd->add_option("--test-dict", e_test, "Test dictionary")->required();
  ev_cmd->add_option("--criterion", e_criterion, "nn | csls");
  ev_cmd->add_option("--knn", e_knn, "CSLS neighborhood size");
  ev_cmd->add_option("--penalty-pool", e_pool, "CSLS penalty pool (0 = all)");
  ev_cmd->add_option("--out", e_out, "Write the evaluation report JSON");
  ev_cmd->add_option("--max-vocab", e_max_vocab, "Keep only the first N words");
  ev_cmd->callback([&] {
    rc = cmd_evaluate(e_map, e_src, e_tgt, e_test, e_criterion, e_knn, e_pool,
                      e_out, e_max_vocab);
  });

  // simsuite
  auto* sim_cmd = app.add_subcommand("simsuite", "Monolingual word-similarity scores");
  std::string s_space;
  std::vector<std::string> s_datasets;
  long s_max_vocab = 0;
  sim_cmd->add_option("--space", s_space, "Embedding .vec")->required();
  sim_cmd->add_option("--dataset", s_datasets, "Similarity dataset file(s)")
      ->required();
  sim_cmd->add_option("--max-vocab", s_max_vocab, "Keep only the first N words");
  sim_cmd->callback([&] { rc = cmd_simsuite(s_space, s_datasets, s_max_vocab); });

  // neighbors
  auto* nb_cmd = app.add_subcommand("neighbors", "Nearest neighbors of a word");
  std::string nb_space, nb_word, nb_space_b, nb_word_b;
  int nb_k = 5;
  long nb_max_vocab = 0;
  nb_cmd->add_option("--space", nb_space, "Embedding .vec")->required();
  nb_cmd->add_option("--word", nb_word, "Query word")->required();
  nb_cmd->add_option("--k", nb_k, "Neighbors to list");
  nb_cmd->add_option("--space-b", nb_space_b, "Second space for a side-by-side view");
  nb_cmd->add_option("--word-b", nb_word_b, "Word to look up in the second space");
  nb_cmd->add_option("--max-vocab", nb_max_vocab, "Keep only the first N words");
  nb_cmd->callback([&] {
    rc = cmd_neighbors(nb_space, nb_word, nb_k, nb_space_b, nb_word_b,
                       nb_max_vocab);
  });

  // synth
  auto* sy_cmd = app.add_subcommand("synth", "Generate a synthetic benchmark world");
  SynthArgs sy;
  sy_cmd->add_option("--out-dir", sy.out_dir, "Output directory")->required();
  sy_cmd->add_option("--n", sy.n, "Vocabulary size per language");
  sy_cmd->add_option("--d", sy.d, "Embedding dimension");
  sy_cmd->add_option("--noise-sigma", sy.noise_sigma, "Target-side Gaussian noise");
  sy_cmd->add_option("--offset-norm", sy.offset_norm, "Source mean-offset norm");
  sy_cmd->add_option("--scale-min", sy.scale_min, "Per-column scale lower bound");
  sy_cmd->add_option("--scale-max", sy.scale_max, "Per-column scale upper bound");
  sy_cmd->add_option("--spectrum-decay", sy.spectrum_decay,
                     "Base covariance power-law exponent");
  sy_cmd->add_option("--train-pairs", sy.train_pairs, "Training pairs");
  sy_cmd->add_option("--test-pairs", sy.test_pairs, "Held-out test pairs");
  sy_cmd->add_option("--seed", sy.seed, "Random seed");
  sy_cmd->callback([&] { rc = cmd_synth(sy); });

  // grid
  auto* gr_cmd = app.add_subcommand(
      "grid", "Run method x normalization pipelines and print the table");
  GridArgs gr;
  gr_cmd->add_option("--src", gr.src_path, "Source .vec")->required();
  gr_cmd->add_option("--tgt", gr.tgt_path, "Target .vec")->required();
  gr_cmd->add_option("--train-dict", gr.train_path, "Training dictionary")->required();
  gr_cmd->add_option("--test-dict", gr.test_path, "Test dictionary")->required();
  gr_cmd->add_option("--valid-dict", gr.valid_path, "Validation dictionary (rcsls)");
  gr_cmd->add_option("--methods", gr.methods, "Comma-separated alignment methods");
  gr_cmd->add_option("--norms", gr.norms, "Comma-separated normalizations");
  gr_cmd->add_option("--out-dir", gr.out_dir, "Run-record directory")->required();
  gr_cmd->add_option("--tag", gr.tag, "Column label for the table");
  gr_cmd->add_option("--criterion", gr.criterion, "nn | csls");
  gr_cmd->add_option("--rounds", gr.rounds, "IterNorm round budget");
  gr_cmd->add_option("--tolerance", gr.tolerance, "IterNorm tolerance");
  gr_cmd->add_flag("--perturb-zeros", gr.perturb, "Perturb zero vectors");
  gr_cmd->add_option("--penalty-pool", gr.penalty_pool, "CSLS penalty pool (0 = all)");
  gr_cmd->add_option("--max-vocab", gr.max_vocab, "Keep only the first N words");
  gr_cmd->add_option("--csv", gr.csv_path, "Also write the table as CSV");
  add_fit_options(gr_cmd, gr.fit);
  gr_cmd->callback([&] { rc = cmd_grid(gr); });

  // report
  auto* rp_cmd = app.add_subcommand("report", "Render run records into a table");
  std::vector<std::string> rp_records;
  std::string rp_csv;
  rp_cmd->add_option("records", rp_records, "run.json files")->required();
  rp_cmd->add_option("--csv", rp_csv, "Also write the table as CSV");
  rp_cmd->callback([&] { rc = cmd_report(rp_records, rp_csv); });

  // fetch-instructions
  auto* fi_cmd = app.add_subcommand(
      "fetch-instructions", "Print download commands for the benchmark data");
  std::string fi_dir = "data";
  std::string fi_langs = "ja,es";
  fi_cmd->add_option("--data-dir", fi_dir, "Where the data should live");
  fi_cmd->add_option("--languages", fi_langs, "Comma-separated target languages");
  fi_cmd->callback([&] { rc = cmd_fetch_instructions(fi_dir, fi_langs); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const CliExit& e) {
    return e.code;
  }
  return rc;
}
