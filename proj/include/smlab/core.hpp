#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smlab {

enum class Side { Men, Women };

inline Side opposite(Side s) { return s == Side::Men ? Side::Women : Side::Men; }

inline const char* side_name(Side s) { return s == Side::Men ? "men" : "women"; }

// One agent of the two-sided market. Indices are 0-based internally; labels
// render 1-based ("m1".."mn", "w1".."wn") to match all human-facing output.
struct AgentIndex {
    Side side;
    int index;

    std::string label() const {
        return (side == Side::Men ? "m" : "w") + std::to_string(index + 1);
    }

    friend bool operator==(const AgentIndex&, const AgentIndex&) = default;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    enum class Kind { DuplicateEntry, OutOfRange, RowLengthMismatch };

    ValidationError(Kind kind, AgentIndex row, int value, const std::string& what)
        : Error(what), kind(kind), row(row), value(value) {}

    Kind kind;
    AgentIndex row;  // owner of the offending preference row
    int value;       // offending entry (or observed length for RowLengthMismatch)
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(int got, int expected)
        : Error("dimension mismatch: got " + std::to_string(got) + ", expected " +
                std::to_string(expected)),
          got(got),
          expected(expected) {}

    int got;
    int expected;
};

class InstanceTooLarge : public Error {
public:
    InstanceTooLarge(int n, int ceiling)
        : Error("instance too large: n = " + std::to_string(n) + " exceeds ceiling " +
                std::to_string(ceiling)),
          n(n),
          ceiling(ceiling) {}

    int n;
    int ceiling;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line(line) {}

    int line;  // 1-based line in the input text
};

class UnknownFixture : public Error {
public:
    explicit UnknownFixture(const std::string& name)
        : Error("unknown fixture: " + name) {}
};

class LabelingInvalid : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void check_permutation_row(std::span<const int> row, int n, AgentIndex owner) {
    if (static_cast<int>(row.size()) != n) {
        throw ValidationError(ValidationError::Kind::RowLengthMismatch, owner,
                              static_cast<int>(row.size()),
                              "preference row for " + owner.label() + " has " +
                                  std::to_string(row.size()) + " entries, expected " +
                                  std::to_string(n));
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : row) {
        if (v < 0 || v >= n) {
            throw ValidationError(ValidationError::Kind::OutOfRange, owner, v,
                                  "preference row for " + owner.label() +
                                      " contains out-of-range entry " + std::to_string(v + 1));
        }
        if (seen[static_cast<std::size_t>(v)]) {
            throw ValidationError(ValidationError::Kind::DuplicateEntry, owner, v,
                                  "preference row for " + owner.label() +
                                      " contains duplicate entry " + std::to_string(v + 1));
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

inline std::vector<int> inverse_permutation(std::span<const int> perm) {
    std::vector<int> inv(perm.size());
    for (int i = 0; i < static_cast<int>(perm.size()); ++i) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
    return inv;
}

}  // namespace detail

// Per-agent lookup table: rank[agent][partner] = position of the partner in the
// agent's preference row (0 = most preferred). Mutual inverse of the rows.
using RankTable = std::vector<std::vector<int>>;

// Complete strict preferences of n men over n women and vice versa.
// Immutable after construction; safe to share across threads.
class PreferenceProfile {
public:
    static PreferenceProfile validated(int n, std::vector<std::vector<int>> men_rows,
                                       std::vector<std::vector<int>> women_rows) {
        if (n < 1) throw Error("profile size must be at least 1");
        if (static_cast<int>(men_rows.size()) != n) {
            throw ValidationError(ValidationError::Kind::RowLengthMismatch,
                                  AgentIndex{Side::Men, static_cast<int>(men_rows.size())},
                                  static_cast<int>(men_rows.size()),
                                  "expected " + std::to_string(n) + " men's rows, got " +
                                      std::to_string(men_rows.size()));
        }
        if (static_cast<int>(women_rows.size()) != n) {
            throw ValidationError(ValidationError::Kind::RowLengthMismatch,
                                  AgentIndex{Side::Women, static_cast<int>(women_rows.size())},
                                  static_cast<int>(women_rows.size()),
                                  "expected " + std::to_string(n) + " women's rows, got " +
                                      std::to_string(women_rows.size()));
        }
        for (int i = 0; i < n; ++i) {
            detail::check_permutation_row(men_rows[static_cast<std::size_t>(i)], n, AgentIndex{Side::Men, i});
            detail::check_permutation_row(women_rows[static_cast<std::size_t>(i)], n, AgentIndex{Side::Women, i});
        }
        return PreferenceProfile(n, std::move(men_rows), std::move(women_rows));
    }

    int size() const noexcept { return n_; }

    const std::vector<std::vector<int>>& rows(Side side) const {
        return side == Side::Men ? men_prefs_ : women_prefs_;
    }

    std::span<const int> row(Side side, int agent) const {
        return rows(side)[static_cast<std::size_t>(agent)];
    }

    std::span<const int> man_row(int man) const { return row(Side::Men, man); }
    std::span<const int> woman_row(int woman) const { return row(Side::Women, woman); }

    const RankTable& ranks(Side side) const {
        return side == Side::Men ? men_rank_ : women_rank_;
    }

    // position of `partner` in `agent`'s row; 0 = most preferred
    int rank(Side side, int agent, int partner) const {
        return ranks(side)[static_cast<std::size_t>(agent)][static_cast<std::size_t>(partner)];
    }

    bool prefers(Side side, int agent, int a, int b) const {
        return rank(side, agent, a) < rank(side, agent, b);
    }

    bool prefers(AgentIndex agent, int a, int b) const {
        return prefers(agent.side, agent.index, a, b);
    }

    friend bool operator==(const PreferenceProfile& x, const PreferenceProfile& y) {
        return x.n_ == y.n_ && x.men_prefs_ == y.men_prefs_ && x.women_prefs_ == y.women_prefs_;
    }

private:
    PreferenceProfile(int n, std::vector<std::vector<int>> men_rows,
                      std::vector<std::vector<int>> women_rows)
        : n_(n), men_prefs_(std::move(men_rows)), women_prefs_(std::move(women_rows)) {
        men_rank_.resize(static_cast<std::size_t>(n));
        women_rank_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            men_rank_[static_cast<std::size_t>(i)] = detail::inverse_permutation(men_prefs_[static_cast<std::size_t>(i)]);
            women_rank_[static_cast<std::size_t>(i)] = detail::inverse_permutation(women_prefs_[static_cast<std::size_t>(i)]);
        }
    }

    int n_;
    std::vector<std::vector<int>> men_prefs_;
    std::vector<std::vector<int>> women_prefs_;
    RankTable men_rank_;
    RankTable women_rank_;
};

// Bijection between men and women; the two directions are kept mutually inverse.
class Matching {
public:
    Matching() = default;

    static Matching from_man_to_woman(std::vector<int> man_to_woman) {
        const int n = static_cast<int>(man_to_woman.size());
        detail::check_permutation_row(man_to_woman, n, AgentIndex{Side::Men, 0});
        Matching m;
        m.woman_to_man_ = detail::inverse_permutation(man_to_woman);
        m.man_to_woman_ = std::move(man_to_woman);
        return m;
    }

    int size() const noexcept { return static_cast<int>(man_to_woman_.size()); }

    int woman_of(int man) const { return man_to_woman_[static_cast<std::size_t>(man)]; }
    int man_of(int woman) const { return woman_to_man_[static_cast<std::size_t>(woman)]; }

    int partner_of(AgentIndex agent) const {
        return agent.side == Side::Men ? woman_of(agent.index) : man_of(agent.index);
    }

    const std::vector<int>& man_to_woman() const { return man_to_woman_; }
    const std::vector<int>& woman_to_man() const { return woman_to_man_; }

    friend bool operator==(const Matching& a, const Matching& b) {
        return a.man_to_woman_ == b.man_to_woman_;
    }

    friend std::strong_ordering operator<=>(const Matching& a, const Matching& b) {
        return a.man_to_woman_ <=> b.man_to_woman_;
    }

private:
    std::vector<int> man_to_woman_;
    std::vector<int> woman_to_man_;
};

// A relabeling of the market: slot i of the ordering names the original agent
// that becomes m_{i+1} / w_{i+1} after renaming.
class ProfileOrdering {
public:
    ProfileOrdering(std::vector<int> men_order, std::vector<int> women_order) {
        if (men_order.size() != women_order.size()) {
            throw DimensionMismatch(static_cast<int>(women_order.size()),
                                    static_cast<int>(men_order.size()));
        }
        const int n = static_cast<int>(men_order.size());
        detail::check_permutation_row(men_order, n, AgentIndex{Side::Men, 0});
        detail::check_permutation_row(women_order, n, AgentIndex{Side::Women, 0});
        men_ = std::move(men_order);
        women_ = std::move(women_order);
    }

    static ProfileOrdering identity(int n) {
        std::vector<int> id(static_cast<std::size_t>(n));
        std::iota(id.begin(), id.end(), 0);
        return ProfileOrdering(id, id);
    }

    int size() const noexcept { return static_cast<int>(men_.size()); }

    const std::vector<int>& men() const { return men_; }
    const std::vector<int>& women() const { return women_; }

    const std::vector<int>& order(Side side) const { return side == Side::Men ? men_ : women_; }

    ProfileOrdering inverse() const {
        return ProfileOrdering(detail::inverse_permutation(men_), detail::inverse_permutation(women_));
    }

    friend bool operator==(const ProfileOrdering&, const ProfileOrdering&) = default;

private:
    std::vector<int> men_;
    std::vector<int> women_;
};

// Renames agents by the given ordering and rewrites every row in the new names.
// relabel(p, identity) == p and relabel(relabel(p, o), o.inverse()) == p.
inline PreferenceProfile relabel(const PreferenceProfile& profile, const ProfileOrdering& ordering) {
    const int n = profile.size();
    if (ordering.size() != n) throw DimensionMismatch(ordering.size(), n);
    const std::vector<int> new_man = detail::inverse_permutation(ordering.men());
    const std::vector<int> new_woman = detail::inverse_permutation(ordering.women());

    std::vector<std::vector<int>> men_rows(static_cast<std::size_t>(n)), women_rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto src = profile.man_row(ordering.men()[static_cast<std::size_t>(i)]);
        auto& dst = men_rows[static_cast<std::size_t>(i)];
        dst.reserve(static_cast<std::size_t>(n));
        for (int w : src) dst.push_back(new_woman[static_cast<std::size_t>(w)]);
    }
    for (int j = 0; j < n; ++j) {
        auto src = profile.woman_row(ordering.women()[static_cast<std::size_t>(j)]);
        auto& dst = women_rows[static_cast<std::size_t>(j)];
        dst.reserve(static_cast<std::size_t>(n));
        for (int m : src) dst.push_back(new_man[static_cast<std::size_t>(m)]);
    }
    return PreferenceProfile::validated(n, std::move(men_rows), std::move(women_rows));
}

}  // namespace smlab
