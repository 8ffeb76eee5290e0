#include "wassret/corpus.hpp"

#include <fstream>
#include <sstream>

#include "wassret/error.hpp"
#include "wassret/utf8.hpp"

namespace wassret {

namespace {

bool contains_digit(std::string_view token) {
  for (char c : token) {
    if (c >= '0' && c <= '9') return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> Document::support() const {
  std::vector<std::string> words;
  words.reserve(counts.size());
  std::unordered_set<std::string_view> seen;
  for (const std::string& tok : tokens) {
    if (seen.insert(tok).second) words.push_back(tok);
  }
  return words;
}

const Document* Corpus::find(const std::string& id) const {
  auto it = index_by_id.find(id);
  return it == index_by_id.end() ? nullptr : &documents[it->second];
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const std::u32string points = utf8::decode(text);
  std::size_t i = 0;
  while (i < points.size()) {
    while (i < points.size() && utf8::is_space(points[i])) ++i;
    std::size_t begin = i;
    while (i < points.size() && !utf8::is_space(points[i])) ++i;
    if (begin == i) break;
    std::size_t end = i;
    while (begin < end && utf8::is_strippable_punct(points[begin])) ++begin;
    while (end > begin && utf8::is_strippable_punct(points[end - 1])) --end;
    if (begin < end) {
      tokens.push_back(
          utf8::encode(std::u32string_view(points.data() + begin, end - begin)));
    }
  }
  return tokens;
}

std::optional<Document> preprocess(const RawDocument& raw,
                                   const StopwordSet& stopwords,
                                   Rejection* rejection) {
  Document doc;
  doc.id = raw.id;
  doc.language = raw.language;

  for (std::string& tok : tokenize(utf8::lowercase(raw.text))) {
    if (contains_digit(tok)) continue;
    if (stopwords.count(tok) != 0) continue;
    doc.tokens.push_back(std::move(tok));
    if (doc.tokens.size() == kMaxTokens) break;
  }

  if (doc.tokens.size() < kMinTokens) {
    if (rejection != nullptr) {
      std::ostringstream why;
      why << "too-short: " << doc.tokens.size() << " tokens after filtering, "
          << kMinTokens << " required";
      *rejection = Rejection{raw.id, why.str()};
    }
    return std::nullopt;
  }
  for (const std::string& tok : doc.tokens) ++doc.counts[tok];
  return doc;
}

CorpusBuild build_corpus(const std::vector<RawDocument>& raws,
                         const StopwordSet& stopwords) {
  CorpusBuild out;
  for (const RawDocument& raw : raws) {
    Rejection rejection;
    if (auto doc = preprocess(raw, stopwords, &rejection)) {
      out.corpus.index_by_id.emplace(doc->id, out.corpus.documents.size());
      out.corpus.documents.push_back(std::move(*doc));
    } else {
      out.rejected.push_back(std::move(rejection));
    }
  }
  if (out.corpus.documents.empty()) {
    throw DataError("no document survived preprocessing");
  }
  for (const Document& doc : out.corpus.documents) {
    for (const auto& [word, count] : doc.counts) ++out.corpus.doc_freq[word];
  }
  return out;
}

std::vector<RawDocument> load_raw_corpus(const std::filesystem::path& path,
                                         const std::string& language) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path.string());

  std::vector<RawDocument> out;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected id<TAB>text");
    }
    std::string id = line.substr(0, tab);
    if (id.empty()) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": empty document id");
    }
    if (!seen_ids.insert(id).second) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": duplicate document id '" + id + "'");
    }
    out.push_back(RawDocument{std::move(id), line.substr(tab + 1), language});
  }
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file: " + path.string());
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

void write_rejection_log(const std::filesystem::path& path,
                         const std::vector<Rejection>& rejected) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write rejection log: " + path.string());
  for (const Rejection& r : rejected) out << r.id << '\t' << r.reason << '\n';
}

}  // namespace wassret
