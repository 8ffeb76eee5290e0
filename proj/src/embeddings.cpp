#include "wassret/embeddings.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "wassret/error.hpp"
#include "wassret/utf8.hpp"

namespace wassret {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t word_hash(std::string_view word, std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ULL ^ splitmix64(seed);
  for (unsigned char c : word) h = (h ^ c) * 0x100000001B3ULL;
  return splitmix64(h);
}

[[noreturn]] void line_error(const std::filesystem::path& path,
                             std::size_t lineno, const std::string& what) {
  throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

const double* EmbeddingTable::find(const std::string& word) const {
  auto it = index.find(word);
  return it == index.end() ? nullptr : row(it->second);
}

void EmbeddingTable::insert(const std::string& word,
                            const std::vector<double>& vec) {
  if (dim == 0) dim = vec.size();
  if (vec.size() != dim) {
    throw DataError("embedding dimension mismatch for word '" + word + "'");
  }
  if (index.count(word) != 0) return;  // first occurrence wins
  index.emplace(word, words.size());
  words.push_back(word);
  data.insert(data.end(), vec.begin(), vec.end());
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const std::string& language) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) line_error(path, 1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  char* end = nullptr;
  const char* cur = line.c_str();
  const long count = std::strtol(cur, &end, 10);
  if (end == cur || count < 0) {
    line_error(path, 1, "malformed header, expected `count dim`");
  }
  cur = end;
  const long dim = std::strtol(cur, &end, 10);
  if (end == cur || dim <= 0) {
    line_error(path, 1, "malformed header, expected `count dim`");
  }
  while (*end == ' ') ++end;
  if (*end != '\0') line_error(path, 1, "trailing junk after header");

  EmbeddingTable table;
  table.language = language;
  table.dim = static_cast<std::size_t>(dim);
  table.words.reserve(static_cast<std::size_t>(count));
  table.data.reserve(static_cast<std::size_t>(count) * table.dim);

  std::vector<double> vec(table.dim);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const std::size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0) {
      line_error(path, lineno, "expected `word v1 ... vD`");
    }
    const std::string word = line.substr(0, sp);

    cur = line.c_str() + sp;
    std::size_t got = 0;
    while (true) {
      while (*cur == ' ') ++cur;
      if (*cur == '\0') break;
      const double v = std::strtod(cur, &end);
      if (end == cur || (*end != ' ' && *end != '\0')) {
        line_error(path, lineno, "non-numeric component starting at '" +
                                     std::string(cur).substr(0, 16) + "'");
      }
      if (got >= table.dim) {
        line_error(path, lineno,
                   "expected " + std::to_string(table.dim) + " components");
      }
      vec[got++] = v;
      cur = end;
    }
    if (got != table.dim) {
      line_error(path, lineno, "expected " + std::to_string(table.dim) +
                                   " components, got " + std::to_string(got));
    }

    if (table.index.count(word) != 0) continue;  // first occurrence wins
    table.index.emplace(word, table.words.size());
    table.words.push_back(word);
    table.data.insert(table.data.end(), vec.begin(), vec.end());
  }
  return table;
}

int levenshtein(std::string_view a, std::string_view b) {
  const std::u32string ua = utf8::decode(a);
  const std::u32string ub = utf8::decode(b);
  const std::size_t la = ua.size();
  const std::size_t lb = ub.size();
  std::vector<int> row(lb + 1);
  for (std::size_t j = 0; j <= lb; ++j) row[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= la; ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= lb; ++j) {
      const int subst = diag + (ua[i - 1] == ub[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
    }
  }
  return row[lb];
}

int levenshtein_bounded(const std::u32string& a, const std::u32string& b,
                        int bound) {
  const std::size_t la = a.size();
  const std::size_t lb = b.size();
  const auto diff = la > lb ? la - lb : lb - la;
  if (diff > static_cast<std::size_t>(bound)) return bound + 1;

  std::vector<int> row(lb + 1);
  for (std::size_t j = 0; j <= lb; ++j) row[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= la; ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    int row_min = row[0];
    for (std::size_t j = 1; j <= lb; ++j) {
      const int subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
      row_min = std::min(row_min, row[j]);
    }
    if (row_min > bound) return bound + 1;
  }
  return std::min(row[lb], bound + 1);
}

void collapse_cross_lingual(EmbeddingTable& a, EmbeddingTable& b) {
  if (a.dim != b.dim) {
    throw DataError("cannot collapse tables of dimension " +
                    std::to_string(a.dim) + " and " + std::to_string(b.dim));
  }
  EmbeddingTable& larger = b.size() > a.size() ? b : a;
  EmbeddingTable& smaller = b.size() > a.size() ? a : b;
  for (std::size_t i = 0; i < smaller.size(); ++i) {
    if (const double* src = larger.find(smaller.words[i])) {
      std::copy(src, src + larger.dim,
                smaller.data.data() + i * smaller.dim);
    }
  }
}

Resolver::Resolver(const EmbeddingTable& table, const OovPolicy& policy)
    : table_(table), policy_(policy) {}

const double* Resolver::resolve(const std::string& word) {
  if (const double* hit = table_.find(word)) return hit;
  if (policy_.mode == OovMode::Off) return nullptr;

  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(word);
  if (it != cache_.end()) return it->second;
  const double* found = lookup_oov(word);
  cache_.emplace(word, found);
  return found;
}

const double* Resolver::lookup_oov(const std::string& word) {
  if (decoded_vocab_.empty() && !table_.words.empty()) {
    decoded_vocab_.reserve(table_.size());
    for (const std::string& w : table_.words) {
      decoded_vocab_.push_back(utf8::decode(w));
    }
  }
  const std::u32string target = utf8::decode(word);
  const int t = policy_.threshold;

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < decoded_vocab_.size(); ++i) {
    if (levenshtein_bounded(target, decoded_vocab_[i], t) <= t) {
      candidates.push_back(i);
    }
  }
  if (candidates.empty()) return nullptr;
  if (candidates.size() == 1) return table_.row(candidates[0]);

  if (policy_.tie_break == TieBreak::Lexicographic) {
    std::size_t best = candidates[0];
    for (std::size_t idx : candidates) {
      if (table_.words[idx] < table_.words[best]) best = idx;
    }
    return table_.row(best);
  }
  const std::uint64_t h = word_hash(word, policy_.seed);
  return table_.row(candidates[h % candidates.size()]);
}

EmbeddedDistribution embed_distribution(const DiscreteDistribution& dist,
                                        Resolver& resolver) {
  EmbeddedDistribution out;
  out.dist.source_doc = dist.source_doc;
  const std::size_t dim = resolver.table().dim;

  double total = 0.0;
  for (std::size_t i = 0; i < dist.words.size(); ++i) {
    if (const double* vec = resolver.resolve(dist.words[i])) {
      out.dist.words.push_back(dist.words[i]);
      out.dist.weights.push_back(dist.weights[i]);
      out.vectors.insert(out.vectors.end(), vec, vec + dim);
      total += dist.weights[i];
    } else {
      out.dropped.push_back(dist.words[i]);
    }
  }
  if (out.dist.words.empty()) {
    throw DataError("no support word of document '" + dist.source_doc +
                    "' could be embedded");
  }
  for (double& w : out.dist.weights) w /= total;
  return out;
}

EmbeddedDistribution embed_distribution(const DiscreteDistribution& dist,
                                        const EmbeddingTable& table,
                                        const OovPolicy& policy) {
  Resolver resolver(table, policy);
  return embed_distribution(dist, resolver);
}

}  // namespace wassret
