#include "scratch_anomalies/miner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace scratch_anomalies {

namespace {

class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t size, bool value = false)
        : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        trim();
    }

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

    Bits& operator&=(const Bits& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] &= other.words_[w];
        }
        return *this;
    }

    std::size_t count() const {
        std::size_t total = 0;
        for (const auto word : words_) {
            total += static_cast<std::size_t>(std::popcount(word));
        }
        return total;
    }

    // True when both sets agree on every index below `limit`.
    bool equal_below(const Bits& other, std::size_t limit) const {
        const std::size_t full = limit / 64;
        for (std::size_t w = 0; w < full; ++w) {
            if (words_[w] != other.words_[w]) {
                return false;
            }
        }
        if (const std::size_t rest = limit % 64; rest != 0) {
            const std::uint64_t mask = (std::uint64_t{1} << rest) - 1;
            return ((words_[full] ^ other.words_[full]) & mask) == 0;
        }
        return true;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            for (std::uint64_t word = words_[w]; word != 0; word &= word - 1) {
                fn(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
            }
        }
    }

private:
    void trim() {
        if (const std::size_t rest = size_ % 64; rest != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << rest) - 1;
        }
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Close-by-One enumeration of the concepts of the (script x property)
// context whose extent reaches the support threshold.
class ClosedSetMiner {
public:
    ClosedSetMiner(const PropertyDB& db, int min_support, int min_pattern_size)
        : db_(db),
          min_support_(static_cast<std::size_t>(min_support)),
          min_size_(static_cast<std::size_t>(min_pattern_size)) {
        const PropertySet universe = db.universe();
        attributes_.assign(universe.begin(), universe.end());
        const std::size_t rows = db.rows.size();
        const std::size_t attrs = attributes_.size();
        row_bits_.assign(rows, Bits(attrs));
        column_bits_.assign(attrs, Bits(rows));
        for (std::size_t r = 0; r < rows; ++r) {
            for (const auto& property : db.rows[r].properties) {
                const auto a = static_cast<std::size_t>(
                    std::lower_bound(attributes_.begin(), attributes_.end(), property) - attributes_.begin());
                row_bits_[r].set(a);
                column_bits_[a].set(r);
            }
        }
    }

    std::vector<Pattern> run() {
        const std::size_t rows = db_.rows.size();
        if (rows < min_support_ || rows == 0) {
            return {};
        }
        Bits extent(rows, true);
        expand(extent, close(extent), 0);
        return std::move(found_);
    }

private:
    Bits close(const Bits& extent) const {
        Bits intent(attributes_.size(), true);
        extent.for_each([&](std::size_t r) { intent &= row_bits_[r]; });
        return intent;
    }

    void expand(const Bits& extent, const Bits& intent, std::size_t from) {
        emit(extent, intent);
        for (std::size_t j = from; j < attributes_.size(); ++j) {
            if (intent.test(j)) {
                continue;
            }
            Bits narrowed = extent;
            narrowed &= column_bits_[j];
            if (narrowed.count() < min_support_) {
                continue;
            }
            const Bits closed = close(narrowed);
            if (closed.equal_below(intent, j)) {
                expand(narrowed, closed, j + 1);
            }
        }
    }

    void emit(const Bits& extent, const Bits& intent) {
        const std::size_t size = intent.count();
        if (size == 0 || size < min_size_) {
            return;
        }
        Pattern pattern;
        intent.for_each([&](std::size_t a) { pattern.properties.insert(attributes_[a]); });
        extent.for_each([&](std::size_t r) { pattern.supporters.insert(db_.rows[r].script); });
        pattern.support = static_cast<int>(pattern.supporters.size());
        found_.push_back(std::move(pattern));
    }

    const PropertyDB& db_;
    std::size_t min_support_;
    std::size_t min_size_;
    std::vector<TemporalProperty> attributes_;
    std::vector<Bits> row_bits_;
    std::vector<Bits> column_bits_;
    std::vector<Pattern> found_;
};

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::ActorAgnostic ? "AA" : "AS"; }

int default_min_support(std::size_t rows) {
    const auto tenth = static_cast<int>(std::ceil(static_cast<double>(rows) / 10.0));
    return std::max(3, tenth);
}

void MinerConfig::validate() const {
    if (min_support && *min_support < 1) {
        throw std::invalid_argument("min-support must be >= 1");
    }
    if (min_pattern_size < 1) {
        throw std::invalid_argument("min-pattern-size must be >= 1");
    }
    if (max_missing < 1) {
        throw std::invalid_argument("max-missing must be >= 1");
    }
    if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
        throw std::invalid_argument("min-confidence must be within [0, 1]");
    }
    if (top_n < 1) {
        throw std::invalid_argument("top must be >= 1");
    }
}

int MinerConfig::support_for(std::size_t group_rows) const {
    return min_support.value_or(default_min_support(group_rows));
}

PropertySet PropertyDB::universe() const {
    PropertySet all;
    for (const auto& row : rows) {
        all.insert(row.properties.begin(), row.properties.end());
    }
    return all;
}

std::vector<Pattern> mine_patterns(const PropertyDB& db, int min_support, int min_pattern_size) {
    if (min_support < 1 || min_pattern_size < 1) {
        throw std::invalid_argument("min_support and min_pattern_size must be >= 1");
    }
    std::vector<Pattern> patterns = ClosedSetMiner(db, min_support, min_pattern_size).run();
    std::sort(patterns.begin(), patterns.end(), [](const Pattern& a, const Pattern& b) {
        if (a.support != b.support) {
            return a.support > b.support;
        }
        if (a.properties.size() != b.properties.size()) {
            return a.properties.size() > b.properties.size();
        }
        return a.properties < b.properties;
    });
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        patterns[i].pattern_id = static_cast<int>(i);
    }
    return patterns;
}

}  // namespace scratch_anomalies
