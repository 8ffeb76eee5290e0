#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace wassret {

// Documents are truncated to the first kMaxTokens surviving tokens and must
// keep at least kMinTokens of them ("more than five words").
inline constexpr std::size_t kMaxTokens = 500;
inline constexpr std::size_t kMinTokens = 6;

struct RawDocument {
  std::string id;
  std::string text;
  std::string language;
};

struct Document {
  std::string id;
  std::string language;
  std::vector<std::string> tokens;  // lowercase, filtered, <= kMaxTokens
  std::unordered_map<std::string, int> counts;

  // Distinct words in first-occurrence order; sum of counts == tokens.size().
  std::vector<std::string> support() const;
};

struct Rejection {
  std::string id;
  std::string reason;
};

struct Corpus {
  std::vector<Document> documents;
  std::unordered_map<std::string, int> doc_freq;
  std::unordered_map<std::string, std::size_t> index_by_id;

  std::size_t size() const { return documents.size(); }
  const Document* find(const std::string& id) const;
};

using StopwordSet = std::unordered_set<std::string>;

// Whitespace split followed by stripping leading/trailing punctuation from
// each token; tokens that strip to nothing are dropped.
std::vector<std::string> tokenize(std::string_view text);

// lowercase -> tokenize -> drop stopwords and digit-bearing tokens ->
// truncate to kMaxTokens -> reject if fewer than kMinTokens survive.
// Stopwords must already be lowercase.
std::optional<Document> preprocess(const RawDocument& raw,
                                   const StopwordSet& stopwords,
                                   Rejection* rejection = nullptr);

struct CorpusBuild {
  Corpus corpus;
  std::vector<Rejection> rejected;
};

// Throws DataError if no document survives preprocessing.
CorpusBuild build_corpus(const std::vector<RawDocument>& raws,
                         const StopwordSet& stopwords);

// UTF-8 TSV, one `id<TAB>text` per line. Throws DataError on missing tab,
// empty id or duplicate id, naming the offending line.
std::vector<RawDocument> load_raw_corpus(const std::filesystem::path& path,
                                         const std::string& language);

// One lowercase token per line; blank lines ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);

// TSV `id<TAB>reason`, one line per rejected document.
void write_rejection_log(const std::filesystem::path& path,
                         const std::vector<Rejection>& rejected);

}  // namespace wassret
