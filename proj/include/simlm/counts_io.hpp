#ifndef SIMLM_COUNTS_IO_HPP
#define SIMLM_COUNTS_IO_HPP

#include <iosfwd>
#include <string>

#include "simlm/counts.hpp"

namespace simlm {

// Line-oriented text format:
//   N <total_bigrams>
//   U <word> <count>          one per vocabulary entry, in id order, <unk> first
//   B <word1> <word2> <count> one per stored bigram, in (id1, id2) order
// Fields are separated by single spaces.
void write_counts(std::ostream &out, const Vocabulary &vocab, const CountTable &table);
void write_counts_file(const std::string &path, const Vocabulary &vocab,
                       const CountTable &table);

// Throws ParseError (with line number) on malformed lines and ValidationError
// when the parsed counts break a table invariant.
CorpusCounts read_counts(std::istream &in);
CorpusCounts read_counts_file(const std::string &path);

}  // namespace simlm

#endif  // SIMLM_COUNTS_IO_HPP
