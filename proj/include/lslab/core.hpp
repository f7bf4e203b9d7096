#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lslab {

// Point sets are bitmasks over the point indices of a FiniteSpace.
using PointSet = std::uint64_t;
using Point = std::uint8_t;

inline constexpr std::size_t kMaxPoints = 64;
inline constexpr Point kNoPoint = 0xff;

inline constexpr PointSet bit(std::size_t i) { return PointSet{1} << i; }
inline constexpr bool contains(PointSet s, std::size_t i) { return (s >> i) & 1u; }
inline constexpr bool is_subset(PointSet a, PointSet b) { return (a & ~b) == 0; }
inline int popcount(PointSet s) { return std::popcount(s); }
inline constexpr PointSet full_set(std::size_t n) { return n >= 64 ? ~PointSet{0} : bit(n) - 1; }

template <typename F>
void for_each_point(PointSet s, F&& f) {
    while (s) {
        const int i = std::countr_zero(s);
        f(static_cast<std::size_t>(i));
        s &= s - 1;
    }
}

inline std::vector<std::size_t> points_of(PointSet s) {
    std::vector<std::size_t> out;
    for_each_point(s, [&](std::size_t i) { out.push_back(i); });
    return out;
}

class Error : public std::runtime_error {
public:
    enum class Kind {
        NotAPartialOrder,
        EmptySpace,
        SizeCapExceeded,
        NotAnAutomorphism,
        GroupTooLarge,
        HypothesisUnmet,
        FenceNotFound,
        NotConnected,
        DomainViolation,
        LeftDomain,
        FixtureUnconstructible,
        ParseError,
        ValidationError,
        InvalidArgument,
    };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline const char* to_string(Error::Kind k) {
    switch (k) {
    case Error::Kind::NotAPartialOrder: return "NotAPartialOrder";
    case Error::Kind::EmptySpace: return "EmptySpace";
    case Error::Kind::SizeCapExceeded: return "SizeCapExceeded";
    case Error::Kind::NotAnAutomorphism: return "NotAnAutomorphism";
    case Error::Kind::GroupTooLarge: return "GroupTooLarge";
    case Error::Kind::HypothesisUnmet: return "HypothesisUnmet";
    case Error::Kind::FenceNotFound: return "FenceNotFound";
    case Error::Kind::NotConnected: return "NotConnected";
    case Error::Kind::DomainViolation: return "DomainViolation";
    case Error::Kind::LeftDomain: return "LeftDomain";
    case Error::Kind::FixtureUnconstructible: return "FixtureUnconstructible";
    case Error::Kind::ParseError: return "ParseError";
    case Error::Kind::ValidationError: return "ValidationError";
    case Error::Kind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Size caps for the exhaustive operations. Raising them above the defaults
/// is allowed; callers that do so should warn (the CLI does).
struct Limits {
    std::size_t map_points = 12;      // map enumeration and fence search
    std::size_t subset_points = 16;   // subset-level operations (covers, axioms)
    std::size_t group_order = 48;
    std::size_t max_search_states = 4'000'000;

    bool exceeds_defaults() const {
        const Limits d{};
        return map_points > d.map_points || subset_points > d.subset_points ||
               group_order > d.group_order;
    }
};

/// Natural number or Infinite, with the ordering conventions used throughout:
/// inf >= inf, inf >= n, and inf >= inf - n.
class ExtNat {
public:
    constexpr ExtNat() = default;
    constexpr ExtNat(long long v) : value_(v) {}  // NOLINT(implicit)

    static constexpr ExtNat infinite() {
        ExtNat e;
        e.inf_ = true;
        return e;
    }

    constexpr bool is_infinite() const { return inf_; }
    constexpr bool is_finite() const { return !inf_; }
    constexpr long long value() const { return value_; }

    friend constexpr bool operator==(const ExtNat& a, const ExtNat& b) {
        return a.inf_ == b.inf_ && (a.inf_ || a.value_ == b.value_);
    }
    friend constexpr bool operator<(const ExtNat& a, const ExtNat& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator>(const ExtNat& a, const ExtNat& b) { return b < a; }
    friend constexpr bool operator<=(const ExtNat& a, const ExtNat& b) { return !(b < a); }
    friend constexpr bool operator>=(const ExtNat& a, const ExtNat& b) { return !(a < b); }

    friend constexpr ExtNat operator+(const ExtNat& a, const ExtNat& b) {
        if (a.inf_ || b.inf_) return infinite();
        return ExtNat(a.value_ + b.value_);
    }

    constexpr ExtNat truncated(long long n) const {
        return (inf_ || value_ > n) ? ExtNat(n) : *this;
    }

    std::string str() const { return inf_ ? "inf" : std::to_string(value_); }

    friend std::ostream& operator<<(std::ostream& os, const ExtNat& e) { return os << e.str(); }

private:
    long long value_ = 0;
    bool inf_ = false;
};

/// A right-hand side of the form `minuend - subtrahend` (subtrahend optional).
struct Difference {
    ExtNat minuend;
    ExtNat subtrahend = 0;

    std::string str() const {
        if (subtrahend == ExtNat(0)) return minuend.str();
        return minuend.str() + " - " + subtrahend.str();
    }
};

/// lhs >= minuend - subtrahend under the infinity conventions:
/// x - inf is dominated by everything, inf - n = inf, inf >= inf - n.
inline bool dominates(const ExtNat& lhs, const Difference& rhs) {
    if (rhs.subtrahend.is_infinite()) return true;
    if (rhs.minuend.is_infinite()) return lhs.is_infinite();
    if (lhs.is_infinite()) return true;
    return lhs.value() >= rhs.minuend.value() - rhs.subtrahend.value();
}

/// Same comparison, with an extended right-hand side on both ends.
inline bool dominates(const ExtNat& lhs, const ExtNat& rhs) { return dominates(lhs, Difference{rhs, 0}); }

}  // namespace lslab
