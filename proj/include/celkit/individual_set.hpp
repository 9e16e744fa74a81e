#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace celkit {

// Subset of a fixed universe of individuals, packed 64 per word.
// Complement/union/intersection run over whole words; bits past the
// universe size stay zero.
class IndividualSet {
public:
    IndividualSet() = default;
    explicit IndividualSet(std::size_t universe_size, bool full = false)
        : universe_(universe_size), bits_((universe_size + 63) / 64, full ? ~0ULL : 0ULL) {
        clear_tail();
    }

    std::size_t universe_size() const { return universe_; }

    bool contains(std::size_t i) const {
        assert(i < universe_);
        return (bits_[i >> 6] >> (i & 63)) & 1ULL;
    }
    void insert(std::size_t i) {
        assert(i < universe_);
        bits_[i >> 6] |= 1ULL << (i & 63);
    }
    void erase(std::size_t i) {
        assert(i < universe_);
        bits_[i >> 6] &= ~(1ULL << (i & 63));
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : bits_) n += std::popcount(w);
        return n;
    }
    bool empty() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }

    IndividualSet& operator&=(const IndividualSet& o) {
        assert(universe_ == o.universe_);
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
        return *this;
    }
    IndividualSet& operator|=(const IndividualSet& o) {
        assert(universe_ == o.universe_);
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
        return *this;
    }
    IndividualSet& operator-=(const IndividualSet& o) {
        assert(universe_ == o.universe_);
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
        return *this;
    }

    friend IndividualSet operator&(IndividualSet a, const IndividualSet& b) { return a &= b; }
    friend IndividualSet operator|(IndividualSet a, const IndividualSet& b) { return a |= b; }
    friend IndividualSet operator-(IndividualSet a, const IndividualSet& b) { return a -= b; }

    IndividualSet complement() const {
        IndividualSet out(*this);
        for (auto& w : out.bits_) w = ~w;
        out.clear_tail();
        return out;
    }

    bool operator==(const IndividualSet& o) const {
        return universe_ == o.universe_ && bits_ == o.bits_;
    }
    bool operator!=(const IndividualSet& o) const { return !(*this == o); }

    bool is_subset_of(const IndividualSet& o) const {
        assert(universe_ == o.universe_);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & ~o.bits_[i]) return false;
        return true;
    }

    std::size_t intersection_count(const IndividualSet& o) const {
        assert(universe_ == o.universe_);
        std::size_t n = 0;
        for (std::size_t i = 0; i < bits_.size(); ++i) n += std::popcount(bits_[i] & o.bits_[i]);
        return n;
    }
    std::size_t difference_count(const IndividualSet& o) const {
        assert(universe_ == o.universe_);
        std::size_t n = 0;
        for (std::size_t i = 0; i < bits_.size(); ++i) n += std::popcount(bits_[i] & ~o.bits_[i]);
        return n;
    }

    // Member indices in increasing order.
    std::vector<std::size_t> to_indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                unsigned bit = std::countr_zero(word);
                out.push_back((w << 6) + bit);
                word &= word - 1;
            }
        }
        return out;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                unsigned bit = std::countr_zero(word);
                fn((w << 6) + bit);
                word &= word - 1;
            }
        }
    }

private:
    void clear_tail() {
        if (universe_ & 63) bits_.back() &= (1ULL << (universe_ & 63)) - 1;
    }

    std::size_t universe_ = 0;
    std::vector<std::uint64_t> bits_;
};

}  // namespace celkit
