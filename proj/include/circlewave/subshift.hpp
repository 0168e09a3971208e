#ifndef CIRCLEWAVE_SUBSHIFT_HPP
#define CIRCLEWAVE_SUBSHIFT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace circlewave::subshift {

/// Two-sided {0,1} sequence with eventually-constant tails: x_i equals
/// left_symbol for all i < start, the core word for start <= i < start+len,
/// and right_symbol beyond.  Canonical form strips leading core symbols
/// equal to the left tail and trailing ones equal to the right tail; a
/// uniform sequence (left == right, empty core) normalizes start to 0.
/// All operations are exact.
class BiSequence {
public:
    BiSequence(int left, std::string core, int right, long long core_start);

    static BiSequence uniform(int symbol);
    /// x^0 = ...000.111...
    static BiSequence step_zero_one();
    /// x^n = ...000.1^n 0^n 111...
    static BiSequence family_point(int n);

    int at(long long i) const;
    int left_symbol() const { return left_; }
    int right_symbol() const { return right_; }
    const std::string& core() const { return core_; }
    long long core_start() const { return start_; }
    long long core_end() const { return start_ + static_cast<long long>(core_.size()); }

    bool operator==(const BiSequence& other) const;

    /// "L:0 core:1110010 R:1 origin:3" -- origin is the absolute index of
    /// the first core symbol (for an empty core, of the right tail).
    std::string serialize() const;
    static BiSequence deserialize(const std::string& text);

private:
    void canonicalize();

    int left_;
    int right_;
    std::string core_; // '0'/'1'
    long long start_;  // absolute index of core_[0]
};

/// sigma^n: (shift_by(x,n))_i = x_{i+n}; negative n shifts the other way.
BiSequence shift_by(const BiSequence& x, long long n);

/// True iff no factor of x matches the forbidden words 1 0^m 1^n 0 with
/// m,n >= 1.  Scanning the core padded by one tail symbol on each side
/// suffices because the tails are eventually constant.
bool membership(const BiSequence& x);

/// Largest k such that x and y agree on the window [-k, k-1]; nullopt when
/// x == y.  This is the documented off-by-one convention: if the central
/// symbols x_0, y_0 differ, k = 0 and the distance below is 2^0 = 1.
std::optional<long long> agreement_radius(const BiSequence& x, const BiSequence& y);

/// d(x,y) = 2^{-k} with k from agreement_radius, 0 when x == y.  k_max only
/// caps the reported exponent (distances below 2^{-k_max} snap to it);
/// correctness of the comparison itself is exact.
double metric(const BiSequence& x, const BiSequence& y, int k_max = 1074);

/// The two uniform sequences, verified by exhaustively shifting every
/// canonical family point with parameters up to n_cap and checking metric
/// convergence to one of them in each direction.
std::vector<BiSequence> limit_points(int n_cap = 20);

struct NonwanderingRow {
    int n = 0;
    long long k_close = 0;  // agreement radius of (x^0, x^n)
    long long k_return = 0; // agreement radius of (x^0, sigma^{2n} x^n)
    double d_close = 0.0;
    double d_return = 0.0;
};

struct NonwanderingDemo {
    std::vector<NonwanderingRow> rows;
    bool x0_is_limit_point = false; // x^0 equals one of the uniform points?
    bool all_rows_exact = false;    // every row has both distances == 2^{-n}
};

/// Rows (n, d(x^0,x^n), d(x^0, sigma^{2n} x^n)) for n = 1..n_max; the
/// recurrence certificate that x^0 is non-wandering yet not a limit point.
NonwanderingDemo nonwandering_demo(int n_max);

} // namespace circlewave::subshift

#endif
