#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "tempograph/error.hpp"

namespace tempograph {

// 1-based position in a discrete, ordered time domain.
struct TimePoint {
    std::uint32_t index = 1;

    constexpr TimePoint() = default;
    constexpr explicit TimePoint(std::uint32_t i) : index(i) {}

    friend constexpr auto operator<=>(TimePoint, TimePoint) = default;
};

// Contiguous, inclusive range of time points. [t,t] is a single instant.
struct Interval {
    TimePoint start;
    TimePoint end;

    constexpr Interval() = default;
    constexpr Interval(TimePoint s, TimePoint e) : start(s), end(e) {}
    constexpr Interval(std::uint32_t s, std::uint32_t e) : start(s), end(e) {}

    static constexpr Interval at(TimePoint t) { return {t, t}; }

    constexpr std::uint32_t length() const { return end.index - start.index + 1; }
    constexpr bool contains(TimePoint t) const { return start <= t && t <= end; }
    constexpr bool well_formed() const { return start.index >= 1 && start <= end; }

    friend constexpr auto operator<=>(const Interval&, const Interval&) = default;
};

inline std::string to_string(const Interval& iv) {
    if (iv.start == iv.end) return "[" + std::to_string(iv.start.index) + "]";
    return "[" + std::to_string(iv.start.index) + "," + std::to_string(iv.end.index) + "]";
}

// Set of time points stored as a bitset; bit (t-1) represents instant t.
class TimeSet {
public:
    TimeSet() = default;
    TimeSet(std::initializer_list<std::uint32_t> points) {
        for (auto p : points) insert(TimePoint{p});
    }

    static TimeSet of(const Interval& iv) {
        TimeSet s;
        for (auto t = iv.start.index; t <= iv.end.index; ++t) s.insert(TimePoint{t});
        return s;
    }

    void insert(TimePoint t) {
        const auto bit = t.index - 1;
        const auto word = bit / 64;
        if (words_.size() <= word) words_.resize(word + 1, 0);
        words_[word] |= std::uint64_t{1} << (bit % 64);
    }

    bool contains(TimePoint t) const {
        if (t.index == 0) return false;
        const auto bit = t.index - 1;
        const auto word = bit / 64;
        return word < words_.size() && ((words_[word] >> (bit % 64)) & 1U);
    }

    bool empty() const {
        return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
    }

    std::size_t size() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    // True when every instant of iv is in the set.
    bool covers(const Interval& iv) const {
        for (auto t = iv.start.index; t <= iv.end.index; ++t)
            if (!contains(TimePoint{t})) return false;
        return true;
    }

    bool intersects(const Interval& iv) const { return latest_in(iv).has_value(); }

    // Latest member inside iv, if any.
    std::optional<TimePoint> latest_in(const Interval& iv) const {
        for (auto t = iv.end.index; t >= iv.start.index && t >= 1; --t)
            if (contains(TimePoint{t})) return TimePoint{t};
        return std::nullopt;
    }

    std::optional<TimePoint> first() const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] != 0)
                return TimePoint{static_cast<std::uint32_t>(w * 64 + std::countr_zero(words_[w]) + 1)};
        return std::nullopt;
    }

    std::optional<TimePoint> last() const {
        for (std::size_t w = words_.size(); w-- > 0;)
            if (words_[w] != 0)
                return TimePoint{static_cast<std::uint32_t>(w * 64 + 63 - std::countl_zero(words_[w]) + 1)};
        return std::nullopt;
    }

    TimeSet restricted_to(const Interval& iv) const {
        TimeSet out;
        for (auto t = iv.start.index; t <= iv.end.index; ++t)
            if (contains(TimePoint{t})) out.insert(TimePoint{t});
        return out;
    }

    TimeSet& operator|=(const TimeSet& other) {
        if (words_.size() < other.words_.size()) words_.resize(other.words_.size(), 0);
        for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }

    TimeSet& operator&=(const TimeSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
        return *this;
    }

    friend TimeSet operator|(TimeSet a, const TimeSet& b) { return a |= b; }
    friend TimeSet operator&(TimeSet a, const TimeSet& b) { return a &= b; }

    std::vector<TimePoint> points() const {
        std::vector<TimePoint> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto bits = words_[w];
            while (bits != 0) {
                const auto b = std::countr_zero(bits);
                out.emplace_back(static_cast<std::uint32_t>(w * 64 + b + 1));
                bits &= bits - 1;
            }
        }
        return out;
    }

    friend bool operator==(const TimeSet& a, const TimeSet& b) {
        const auto n = std::max(a.words_.size(), b.words_.size());
        for (std::size_t i = 0; i < n; ++i) {
            const auto x = i < a.words_.size() ? a.words_[i] : 0;
            const auto y = i < b.words_.size() ? b.words_[i] : 0;
            if (x != y) return false;
        }
        return true;
    }

private:
    std::vector<std::uint64_t> words_;
};

}  // namespace tempograph
