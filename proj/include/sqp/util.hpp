#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sqp {

// Error taxonomy. Everything thrown by the library derives from sqp::error,
// so callers can distinguish "bad input" from "bug in this library".
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input could not be read at all (bad PD syntax, malformed JSON, bad CSV row).
struct parse_error : error {
    using error::error;
};

// Input parsed but does not describe a legal object (non-planar data,
// mismatched arc endpoints, Euler characteristic off).
struct structural_error : error {
    using error::error;
};

// Crossing data admits no consistent set of strand orientations.
struct orientation_error : structural_error {
    using structural_error::structural_error;
};

// An operation was invoked on an object that does not satisfy its
// preconditions (e.g. asking for the generalized surface of a diagram that
// is not of the right class).
struct precondition_error : error {
    using error::error;
};

// A configured work cap was exceeded.
struct resource_error : error {
    using error::error;
};

// A structural fact that the reduction machinery is entitled to rely on
// failed to hold.  Reaching this means either corrupted input slipped past
// validation or an internal inconsistency; the message carries enough state
// to replay.
struct reduction_invariant_error : error {
    using error::error;
};

// Plain bug.
struct internal_error : error {
    using error::error;
};

// FNV-1a, 64-bit.  Used for certificate state hashes; stability across
// platforms matters, speed does not.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Deterministic RNG: mt19937_64 is bit-exact across platforms, and we draw
// with explicit modular reduction instead of std::uniform_int_distribution
// (whose output is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw internal_error("Rng::below(0)");
        // rejection sampling keeps the draw unbiased and still deterministic
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        for (;;) {
            std::uint64_t v = eng_();
            if (v < limit) return v % n;
        }
    }

    int range(int lo, int hi) {  // inclusive ends
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return below(2) == 1; }

private:
    std::mt19937_64 eng_;
};

// Cooperative work cap; tick() from inner loops of anything exponential.
class WorkBudget {
public:
    explicit WorkBudget(std::uint64_t cap) : left_(cap) {}

    void tick(std::uint64_t n = 1) {
        if (n > left_)
            throw resource_error("work cap exceeded");
        left_ -= n;
    }

    std::uint64_t left() const { return left_; }

private:
    std::uint64_t left_;
};

constexpr std::uint64_t kDefaultWorkCap = 10'000'000ull;

class UnionFind {
public:
    explicit UnionFind(int n) : p_(n), rank_(n, 0), comps_(n) {
        for (int i = 0; i < n; ++i) p_[i] = i;
    }

    int find(int a) {
        while (p_[a] != a) {
            p_[a] = p_[p_[a]];
            a = p_[a];
        }
        return a;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        p_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        --comps_;
        return true;
    }

    bool same(int a, int b) { return find(a) == find(b); }
    int comps() const { return comps_; }
    int size() const { return static_cast<int>(p_.size()); }

private:
    std::vector<int> p_, rank_;
    int comps_;
};

}  // namespace sqp
