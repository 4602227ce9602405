#ifndef SIMLM_VOCABULARY_HPP
#define SIMLM_VOCABULARY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace simlm {

using WordId = std::uint32_t;
using Count = std::int64_t;

inline constexpr std::string_view kUnkWord = "<unk>";

// Dense word <-> id map. Id 0 is always the unknown-word sentinel.
class Vocabulary {
 public:
  Vocabulary();

  // Returns the id of `word`, inserting it if new. Inserting kUnkWord returns
  // unk_id().
  WordId add(std::string_view word);

  std::optional<WordId> find(std::string_view word) const;
  // Unknown words map to unk_id().
  WordId lookup(std::string_view word) const;

  const std::string &word(WordId id) const { return words_.at(id); }
  const std::vector<std::string> &words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  WordId unk_id() const { return 0; }

  bool operator==(const Vocabulary &other) const { return words_ == other.words_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId, Hash, std::equal_to<>> ids_;
};

}  // namespace simlm

#endif  // SIMLM_VOCABULARY_HPP
