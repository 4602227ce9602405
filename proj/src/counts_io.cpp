#include "simlm/counts_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "simlm/errors.hpp"

namespace simlm {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t sp = line.find(' ', start);
    out.push_back(line.substr(start, sp == std::string_view::npos ? sp : sp - start));
    if (sp == std::string_view::npos) break;
    start = sp + 1;
  }
  return out;
}

Count parse_count(std::string_view field, std::size_t line_no) {
  Count value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    throw ParseError(line_no, "bad count '" + std::string(field) + "'");
  return value;
}

bool has_space(std::string_view w) {
  return w.find_first_of(" \t\n\r\v\f") != std::string_view::npos;
}

}  // namespace

void write_counts(std::ostream &out, const Vocabulary &vocab, const CountTable &table) {
  if (vocab.size() != table.vocab_size())
    throw ValidationError("vocabulary and count table sizes differ");
  out << "N " << table.total_bigrams() << '\n';
  for (WordId w = 0; w < vocab.size(); ++w) {
    if (has_space(vocab.word(w)) || vocab.word(w).empty())
      throw ValidationError("word '" + vocab.word(w) + "' cannot be serialized");
    out << "U " << vocab.word(w) << ' ' << table.unigram(w) << '\n';
  }
  for (const auto &b : table.bigrams())
    out << "B " << vocab.word(b.first) << ' ' << vocab.word(b.second) << ' ' << b.count
        << '\n';
}

void write_counts_file(const std::string &path, const Vocabulary &vocab,
                       const CountTable &table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_counts(out, vocab, table);
  if (!out) throw IoError("error writing " + path);
}

CorpusCounts read_counts(std::istream &in) {
  CorpusCounts result;
  std::vector<Count> unigram;
  std::vector<BigramCount> bigrams;
  Count header_total = -1;
  bool saw_unk = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto f = split_fields(line);
    if (line_no == 1) {
      if (f.size() != 2 || f[0] != "N") throw ParseError(line_no, "expected header 'N <count>'");
      header_total = parse_count(f[1], line_no);
      if (header_total < 0) throw ValidationError("negative total bigram count");
      continue;
    }
    if (f[0] == "U") {
      if (f.size() != 3 || f[1].empty()) throw ParseError(line_no, "expected 'U <word> <count>'");
      Count c = parse_count(f[2], line_no);
      if (c < 0) throw ValidationError("line " + std::to_string(line_no) + ": negative count");
      if (!bigrams.empty())
        throw ParseError(line_no, "unigram line after bigram lines");
      if (unigram.empty()) {
        if (f[1] != kUnkWord)
          throw ValidationError("first unigram line must be " + std::string(kUnkWord));
        saw_unk = true;
        unigram.push_back(c);
        continue;
      }
      if (result.vocab.find(f[1]))
        throw ValidationError("line " + std::to_string(line_no) + ": duplicate word '" +
                              std::string(f[1]) + "'");
      result.vocab.add(f[1]);
      unigram.push_back(c);
    } else if (f[0] == "B") {
      if (f.size() != 4 || f[1].empty() || f[2].empty())
        throw ParseError(line_no, "expected 'B <word1> <word2> <count>'");
      Count c = parse_count(f[3], line_no);
      auto w1 = result.vocab.find(f[1]);
      auto w2 = result.vocab.find(f[2]);
      if (!w1 || !w2)
        throw ValidationError("line " + std::to_string(line_no) + ": bigram uses unknown word");
      if (c <= 0)
        throw ValidationError("line " + std::to_string(line_no) + ": bigram count must be positive");
      bigrams.push_back({*w1, *w2, c});
    } else {
      throw ParseError(line_no, "unknown record type '" + std::string(f[0]) + "'");
    }
  }
  if (line_no == 0) throw ParseError(1, "empty counts file");
  if (!saw_unk) throw ValidationError("counts file has no " + std::string(kUnkWord) + " entry");
  result.table = CountTable::from_parts(std::move(unigram), std::move(bigrams));
  if (result.table.total_bigrams() != header_total)
    throw ValidationError("header N=" + std::to_string(header_total) +
                          " disagrees with bigram total " +
                          std::to_string(result.table.total_bigrams()));
  return result;
}

CorpusCounts read_counts_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_counts(in);
}

}  // namespace simlm
