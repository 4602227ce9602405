#include "simlm/vocabulary.hpp"

namespace simlm {

Vocabulary::Vocabulary() { add(kUnkWord); }

WordId Vocabulary::add(std::string_view word) {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  auto id = static_cast<WordId>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), id);
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  return std::nullopt;
}

WordId Vocabulary::lookup(std::string_view word) const {
  return find(word).value_or(unk_id());
}

}  // namespace simlm
