#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <vector>

namespace problo {

// Finite multiset over a totally ordered element type. Stored as element -> positive count.
template <class T>
class Multiset {
public:
    using map_type = std::map<T, std::size_t>;
    using const_iterator = typename map_type::const_iterator;

    Multiset() = default;

    Multiset(std::initializer_list<T> items) {
        for (const auto& item : items) {
            add(item);
        }
    }

    template <class It>
    Multiset(It first, It last) {
        for (; first != last; ++first) {
            add(*first);
        }
    }

    void add(const T& item, std::size_t copies = 1) {
        if (copies == 0) {
            return;
        }
        counts_[item] += copies;
        size_ += copies;
    }

    // Removes up to `copies` occurrences; returns false (and changes nothing) if not enough are present.
    bool remove(const T& item, std::size_t copies = 1) {
        if (copies == 0) {
            return true;
        }
        auto it = counts_.find(item);
        if (it == counts_.end() || it->second < copies) {
            return false;
        }
        it->second -= copies;
        size_ -= copies;
        if (it->second == 0) {
            counts_.erase(it);
        }
        return true;
    }

    std::size_t count(const T& item) const {
        auto it = counts_.find(item);
        return it == counts_.end() ? 0 : it->second;
    }

    bool contains(const Multiset& other) const {
        for (const auto& [item, copies] : other.counts_) {
            if (count(item) < copies) {
                return false;
            }
        }
        return true;
    }

    Multiset& operator+=(const Multiset& other) {
        for (const auto& [item, copies] : other.counts_) {
            add(item, copies);
        }
        return *this;
    }

    // Precondition: contains(other).
    Multiset& operator-=(const Multiset& other) {
        for (const auto& [item, copies] : other.counts_) {
            remove(item, copies);
        }
        return *this;
    }

    friend Multiset operator+(Multiset lhs, const Multiset& rhs) { return lhs += rhs; }
    friend Multiset operator-(Multiset lhs, const Multiset& rhs) { return lhs -= rhs; }

    std::size_t size() const { return size_; }
    std::size_t distinct() const { return counts_.size(); }
    bool empty() const { return size_ == 0; }

    const_iterator begin() const { return counts_.begin(); }
    const_iterator end() const { return counts_.end(); }

    // Elements with repetition, in ascending order.
    std::vector<T> elements() const {
        std::vector<T> out;
        out.reserve(size_);
        for (const auto& [item, copies] : counts_) {
            out.insert(out.end(), copies, item);
        }
        return out;
    }

    friend bool operator==(const Multiset& a, const Multiset& b) { return a.counts_ == b.counts_; }
    friend bool operator!=(const Multiset& a, const Multiset& b) { return !(a == b); }
    friend bool operator<(const Multiset& a, const Multiset& b) { return a.counts_ < b.counts_; }

private:
    map_type counts_;
    std::size_t size_ = 0;
};

} // namespace problo
