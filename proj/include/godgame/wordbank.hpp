#pragma once

#include "godgame/errors.hpp"
#include "godgame/rng.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace godgame {

inline constexpr size_t kPoolSize = 1000;
inline constexpr size_t kCommonSize = 100;

struct WordFrequency {
    std::string word;
    uint64_t count = 0;
};

using WordFrequencyTable = std::vector<WordFrequency>;

// `word<TAB>count` per line, lowercase tokens, no header. Throws
// MalformedLine (with the line number) or ParseError on duplicates.
WordFrequencyTable parse_word_frequencies(std::string_view text);
WordFrequencyTable load_word_frequencies(const std::filesystem::path& path);

// The fixed 1000-word vocabulary, sorted for lookup.
class Vocabulary {
public:
    explicit Vocabulary(std::vector<std::string> words);

    bool contains(std::string_view word) const;
    const std::vector<std::string>& sorted_words() const { return sorted_; }
    size_t size() const { return sorted_.size(); }

private:
    std::vector<std::string> sorted_;
};

enum class WordGroup : uint8_t { Common, Uncommon };

struct DrawOutcome {
    std::string word;
    WordGroup group = WordGroup::Common;
    size_t pre_draw_position = 1; // 1-based

    bool operator==(const DrawOutcome&) const = default;
};

// Ordered gacha queue. Positions 1..100 form the common group, 101..1000
// the uncommon group; every draw sends the drawn word to position 1000.
class WordPool {
public:
    WordPool() = default; // empty; only useful as an assignment target

    const std::vector<std::string>& queue() const { return queue_; }
    const Vocabulary& vocabulary() const { return *vocabulary_; }
    std::shared_ptr<const Vocabulary> shared_vocabulary() const { return vocabulary_; }

    // 1-based position of a word, or 0 if absent.
    size_t position_of(std::string_view word) const;

    // Picks a group 50:50, then a uniform position inside it. Does not rotate.
    size_t sample_position(Rng& rng) const;

    // Draws and rotates in place.
    DrawOutcome draw(Rng& rng);
    // Moves the word at the 1-based position to the back of the queue.
    DrawOutcome take_at(size_t position);

    // Five distinct words, uniform over the full vocabulary; the queue is untouched.
    std::vector<std::string> draw_treasure(Rng& rng) const;

    // One word per line, line number = position.
    std::string snapshot() const;
    static WordPool from_snapshot(std::string_view text);

    bool operator==(const WordPool& other) const { return queue_ == other.queue_; }

private:
    friend WordPool build_pool(const WordFrequencyTable& table);
    explicit WordPool(std::vector<std::string> queue);

    std::vector<std::string> queue_;
    std::shared_ptr<const Vocabulary> vocabulary_;
};

// Top 1000 words by descending count, ties broken lexicographically.
// Throws InsufficientVocabulary.
WordPool build_pool(const WordFrequencyTable& table);

// Pure form of WordPool::draw.
std::pair<DrawOutcome, WordPool> draw_word(const WordPool& pool, Rng& rng);
inline std::vector<std::string> draw_treasure(const WordPool& pool, Rng& rng) { return pool.draw_treasure(rng); }

inline constexpr WordGroup group_of_position(size_t position) {
    return position <= kCommonSize ? WordGroup::Common : WordGroup::Uncommon;
}

// The player's collected multiset of words.
class WordInventory {
public:
    WordInventory() = default;
    explicit WordInventory(std::shared_ptr<const Vocabulary> vocabulary) : vocabulary_(std::move(vocabulary)) {}

    uint32_t count(std::string_view word) const;
    uint64_t total() const;
    const std::map<std::string, uint32_t, std::less<>>& counts() const { return counts_; }
    bool empty() const { return counts_.empty(); }

    // Throws UnknownWord if the word is outside the vocabulary.
    void grant(const std::string& word);
    // True when every word's multiplicity in the list is owned.
    bool covers(const std::vector<std::string>& words) const;
    // Throws InsufficientWords or UnknownWord; unchanged on error.
    void spend(const std::vector<std::string>& words);

    bool operator==(const WordInventory& other) const { return counts_ == other.counts_; }

private:
    std::shared_ptr<const Vocabulary> vocabulary_;
    std::map<std::string, uint32_t, std::less<>> counts_;
};

WordInventory grant(WordInventory inventory, const std::string& word);
WordInventory spend(WordInventory inventory, const std::vector<std::string>& words);

} // namespace godgame
