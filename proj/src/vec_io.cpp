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

#include "xlign/vec_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "xlign/errors.hpp"

namespace xlign {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Splits on runs of whitespace; tokens are arbitrary non-whitespace bytes.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view tok, long line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw DataError("line " + std::to_string(line_no) + ": '" +
                    std::string(tok) + "' is not a number");
  }
  if (!std::isfinite(v)) {
    throw DataError("line " + std::to_string(line_no) + ": non-finite value '" +
                    std::string(tok) + "'");
  }
  return v;
}

long parse_long(std::string_view tok, long line_no, const char* what) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw DataError("line " + std::to_string(line_no) + ": bad " +
                    std::string(what) + " '" + std::string(tok) + "'");
  }
  return v;
}

void append_g17(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

EmbeddingSpace parse_vec(std::istream& in, const VecParseOptions& opts,
                         std::vector<std::string>* warnings) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty stream, expected 'n d' header");
  auto header = tokenize(line);
  if (header.size() != 2) {
    throw DataError("line 1: malformed header, expected 'n d'");
  }
  const long n_declared = parse_long(header[0], 1, "word count");
  const long d = parse_long(header[1], 1, "dimension");
  if (n_declared < 1) throw DataError("line 1: empty vocabulary (n = " +
                                      std::to_string(n_declared) + ")");
  if (d < 1) throw DataError("line 1: dimension must be >= 1, got " +
                             std::to_string(d));

  const long n_keep =
      (opts.max_vocab > 0 && opts.max_vocab < n_declared) ? opts.max_vocab : n_declared;

  std::vector<std::string> vocab;
  vocab.reserve(n_keep);
  Matrix matrix(d, n_keep);
  std::unordered_set<std::string> seen;
  seen.reserve(n_keep);

  long kept = 0;
  // Truncation fills up to n_keep distinct words and then stops reading;
  // the tail of a truncated file is never parsed.
  for (long row = 0; row < n_declared && kept < n_keep; ++row) {
    const long line_no = row + 2;
    if (!std::getline(in, line)) {
      throw DataError("line " + std::to_string(line_no) +
                      ": unexpected end of stream, header declared " +
                      std::to_string(n_declared) + " words");
    }
    auto toks = tokenize(line);
    if (toks.empty()) {
      throw DataError("line " + std::to_string(line_no) + ": blank row");
    }
    if (static_cast<long>(toks.size()) != d + 1) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(d) + " values for word '" +
                      std::string(toks[0]) + "', found " +
                      std::to_string(toks.size() - 1));
    }
    std::string word(toks[0]);
    if (!seen.insert(word).second) {
      if (warnings) {
        warnings->push_back("line " + std::to_string(line_no) +
                            ": duplicate word '" + word + "' dropped");
      }
      continue;
    }
    for (long k = 0; k < d; ++k) {
      matrix(k, kept) = parse_double(toks[k + 1], line_no);
    }
    vocab.push_back(std::move(word));
    ++kept;
  }
  if (kept == 0) throw DataError("no usable rows (all duplicates?)");
  matrix.conservativeResize(Eigen::NoChange, kept);
  return EmbeddingSpace(std::move(vocab), std::move(matrix));
}

EmbeddingSpace read_vec_file(const std::string& path, const VecParseOptions& opts,
                             std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return parse_vec(in, opts, warnings);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_vec(const EmbeddingSpace& space, std::ostream& out) {
  const int n = space.size();
  const int d = space.dim();
  std::string buf;
  buf.reserve(64 + static_cast<std::size_t>(d) * 26);
  out << n << ' ' << d << '\n';
  for (int i = 0; i < n; ++i) {
    buf = space.word(i);
    for (int k = 0; k < d; ++k) {
      buf += ' ';
      append_g17(buf, space.matrix()(k, i));
    }
    buf += '\n';
    out << buf;
  }
  if (!out) throw IoError("write failed while emitting vectors");
}

void write_vec_file(const EmbeddingSpace& space, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_vec(space, out);
}

DictionaryLoad load_dictionary(std::istream& in, const EmbeddingSpace& src,
                               const EmbeddingSpace& tgt) {
  DictionaryLoad out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() < 2) {
      throw DataError("line " + std::to_string(line_no) +
                      ": expected 'source target', got a single token");
    }
    const int i = src.index_of(std::string(toks[0]));
    const int j = tgt.index_of(std::string(toks[1]));
    if (i < 0 || j < 0) {
      ++out.skipped;
      continue;
    }
    out.pairs.pairs.emplace_back(i, j);
    out.multi.entries[i].insert(j);
  }
  return out;
}

DictionaryLoad load_dictionary_file(const std::string& path,
                                    const EmbeddingSpace& src,
                                    const EmbeddingSpace& tgt) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return load_dictionary(in, src, tgt);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_dictionary(const SeedDictionary& dict, const EmbeddingSpace& src,
                      const EmbeddingSpace& tgt, std::ostream& out) {
  for (const auto& [i, j] : dict.pairs) {
    out << src.word(i) << ' ' << tgt.word(j) << '\n';
  }
  if (!out) throw IoError("write failed while emitting dictionary");
}

SimilarityDataset load_similarity_dataset(std::istream& in) {
  SimilarityDataset out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() < 3) {
      throw DataError("line " + std::to_string(line_no) +
                      ": expected 'word_a word_b score'");
    }
    SimilarityDataset::Item item;
    item.word_a = std::string(toks[0]);
    item.word_b = std::string(toks[1]);
    item.human_score = parse_double(toks[2], line_no);
    out.items.push_back(std::move(item));
  }
  if (out.items.empty()) throw DataError("similarity dataset is empty");
  return out;
}

SimilarityDataset load_similarity_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return load_similarity_dataset(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace xlign
