#include "godgame/wordbank.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace godgame {

namespace {

bool is_token(std::string_view w) {
    if (w.empty()) return false;
    return std::all_of(w.begin(), w.end(), [](unsigned char c) {
        return c > ' ' && c != 0x7f && !(c >= 'A' && c <= 'Z');
    });
}

std::map<std::string_view, uint32_t> multiplicities(const std::vector<std::string>& words) {
    std::map<std::string_view, uint32_t> m;
    for (const auto& w : words) ++m[w];
    return m;
}

} // namespace

WordFrequencyTable parse_word_frequencies(std::string_view text) {
    WordFrequencyTable table;
    std::set<std::string, std::less<>> seen;
    size_t line_no = 0;
    size_t start = 0;
    while (start < text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        const size_t tab = line.find('\t');
        if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
            throw LineError(ErrorCode::MalformedLine, line_no, "expected word<TAB>count");
        }
        const std::string_view word = line.substr(0, tab);
        const std::string_view count_text = line.substr(tab + 1);
        uint64_t count = 0;
        auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
        if (ec != std::errc{} || ptr != count_text.data() + count_text.size() || count == 0) {
            throw LineError(ErrorCode::MalformedLine, line_no, "count must be a positive integer");
        }
        if (!is_token(word)) throw LineError(ErrorCode::MalformedLine, line_no, "word must be a lowercase token");
        if (!seen.emplace(word).second) {
            throw LineError(ErrorCode::ParseError, line_no, "duplicate word '" + std::string(word) + "'");
        }
        table.push_back({std::string(word), count});
    }
    return table;
}

WordFrequencyTable load_word_frequencies(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GameError(ErrorCode::IoError, "cannot open word frequency file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_word_frequencies(buf.str());
}

Vocabulary::Vocabulary(std::vector<std::string> words) : sorted_(std::move(words)) {
    std::sort(sorted_.begin(), sorted_.end());
    if (std::adjacent_find(sorted_.begin(), sorted_.end()) != sorted_.end()) {
        throw GameError(ErrorCode::ParseError, "vocabulary contains duplicate words");
    }
}

bool Vocabulary::contains(std::string_view word) const {
    return std::binary_search(sorted_.begin(), sorted_.end(), word);
}

WordPool::WordPool(std::vector<std::string> queue)
    : queue_(std::move(queue)), vocabulary_(std::make_shared<Vocabulary>(queue_)) {}

WordPool build_pool(const WordFrequencyTable& table) {
    std::set<std::string_view> distinct;
    for (const auto& e : table) distinct.insert(e.word);
    if (distinct.size() < kPoolSize) {
        throw GameError(ErrorCode::InsufficientVocabulary,
                        "word table has " + std::to_string(distinct.size()) + " distinct words, need 1000");
    }
    std::vector<const WordFrequency*> order;
    order.reserve(table.size());
    for (const auto& e : table) order.push_back(&e);
    std::sort(order.begin(), order.end(), [](const WordFrequency* a, const WordFrequency* b) {
        if (a->count != b->count) return a->count > b->count;
        return a->word < b->word;
    });

    std::vector<std::string> queue;
    queue.reserve(kPoolSize);
    std::set<std::string_view> taken;
    for (const auto* e : order) {
        if (queue.size() == kPoolSize) break;
        if (taken.insert(e->word).second) queue.push_back(e->word);
    }
    return WordPool(std::move(queue));
}

size_t WordPool::position_of(std::string_view word) const {
    auto it = std::find(queue_.begin(), queue_.end(), word);
    return it == queue_.end() ? 0 : static_cast<size_t>(it - queue_.begin()) + 1;
}

size_t WordPool::sample_position(Rng& rng) const {
    if (rng.coin()) return 1 + rng.uniform_below(kCommonSize);
    return kCommonSize + 1 + rng.uniform_below(kPoolSize - kCommonSize);
}

DrawOutcome WordPool::take_at(size_t position) {
    if (position < 1 || position > queue_.size()) {
        throw GameError(ErrorCode::InvalidIndex, "pool position " + std::to_string(position) + " out of range");
    }
    DrawOutcome out{queue_[position - 1], group_of_position(position), position};
    auto it = queue_.begin() + static_cast<std::ptrdiff_t>(position - 1);
    std::rotate(it, it + 1, queue_.end());
    return out;
}

DrawOutcome WordPool::draw(Rng& rng) {
    return take_at(sample_position(rng));
}

std::vector<std::string> WordPool::draw_treasure(Rng& rng) const {
    // Partial Fisher-Yates over positions.
    std::vector<size_t> idx(queue_.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::vector<std::string> out;
    for (size_t i = 0; i < 5; ++i) {
        const size_t j = i + static_cast<size_t>(rng.uniform_below(idx.size() - i));
        std::swap(idx[i], idx[j]);
        out.push_back(queue_[idx[i]]);
    }
    return out;
}

std::string WordPool::snapshot() const {
    std::string out;
    for (const auto& w : queue_) {
        out += w;
        out += '\n';
    }
    return out;
}

WordPool WordPool::from_snapshot(std::string_view text) {
    std::vector<std::string> queue;
    size_t start = 0;
    size_t line_no = 0;
    while (start < text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!is_token(line)) throw LineError(ErrorCode::MalformedLine, line_no, "expected one word");
        queue.emplace_back(line);
    }
    if (queue.size() != kPoolSize) {
        throw GameError(ErrorCode::InsufficientVocabulary,
                        "pool snapshot holds " + std::to_string(queue.size()) + " words, expected 1000");
    }
    return WordPool(std::move(queue));
}

std::pair<DrawOutcome, WordPool> draw_word(const WordPool& pool, Rng& rng) {
    WordPool next = pool;
    DrawOutcome out = next.draw(rng);
    return {std::move(out), std::move(next)};
}

uint32_t WordInventory::count(std::string_view word) const {
    auto it = counts_.find(word);
    return it == counts_.end() ? 0 : it->second;
}

uint64_t WordInventory::total() const {
    uint64_t n = 0;
    for (const auto& [w, c] : counts_) n += c;
    return n;
}

void WordInventory::grant(const std::string& word) {
    if (vocabulary_ && !vocabulary_->contains(word)) {
        throw GameError(ErrorCode::UnknownWord, "'" + word + "' is not in the word pool");
    }
    ++counts_[word];
}

bool WordInventory::covers(const std::vector<std::string>& words) const {
    for (const auto& [w, n] : multiplicities(words)) {
        if (count(w) < n) return false;
    }
    return true;
}

void WordInventory::spend(const std::vector<std::string>& words) {
    const auto need = multiplicities(words);
    for (const auto& [w, n] : need) {
        if (vocabulary_ && !vocabulary_->contains(w)) {
            throw GameError(ErrorCode::UnknownWord, "'" + std::string(w) + "' is not in the word pool");
        }
        if (count(w) < n) {
            throw GameError(ErrorCode::InsufficientWords, "not enough copies of '" + std::string(w) + "'");
        }
    }
    for (const auto& [w, n] : need) {
        auto it = counts_.find(w);
        it->second -= n;
        if (it->second == 0) counts_.erase(it);
    }
}

WordInventory grant(WordInventory inventory, const std::string& word) {
    inventory.grant(word);
    return inventory;
}

WordInventory spend(WordInventory inventory, const std::vector<std::string>& words) {
    inventory.spend(words);
    return inventory;
}

} // namespace godgame
