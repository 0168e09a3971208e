#include "circlewave/subshift.hpp"

#include "circlewave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace circlewave::subshift {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw Error(msg);
}

} // namespace

BiSequence::BiSequence(int left, std::string core, int right, long long core_start)
    : left_(left), right_(right), core_(std::move(core)), start_(core_start) {
    require(left_ == 0 || left_ == 1, "tail symbols must be 0 or 1");
    require(right_ == 0 || right_ == 1, "tail symbols must be 0 or 1");
    for (char c : core_) require(c == '0' || c == '1', "core symbols must be 0 or 1");
    canonicalize();
}

void BiSequence::canonicalize() {
    const char lc = static_cast<char>('0' + left_);
    const char rc = static_cast<char>('0' + right_);
    std::size_t begin = 0;
    while (begin < core_.size() && core_[begin] == lc) ++begin;
    std::size_t end = core_.size();
    while (end > begin && core_[end - 1] == rc) --end;
    start_ += static_cast<long long>(begin);
    core_ = core_.substr(begin, end - begin);
    if (core_.empty() && left_ == right_) start_ = 0;
}

BiSequence BiSequence::uniform(int symbol) { return BiSequence(symbol, "", symbol, 0); }

BiSequence BiSequence::step_zero_one() { return BiSequence(0, "", 1, 0); }

BiSequence BiSequence::family_point(int n) {
    require(n >= 0, "family parameter must be non-negative");
    return BiSequence(0, std::string(static_cast<std::size_t>(n), '1') +
                             std::string(static_cast<std::size_t>(n), '0'),
                      1, 0);
}

int BiSequence::at(long long i) const {
    if (i < start_) return left_;
    const long long off = i - start_;
    if (off < static_cast<long long>(core_.size()))
        return core_[static_cast<std::size_t>(off)] - '0';
    return right_;
}

bool BiSequence::operator==(const BiSequence& other) const {
    return left_ == other.left_ && right_ == other.right_ && core_ == other.core_ &&
           (start_ == other.start_ || (core_.empty() && left_ == right_));
}

std::string BiSequence::serialize() const {
    std::ostringstream os;
    os << "L:" << left_ << " core:" << (core_.empty() ? "-" : core_) << " R:" << right_
       << " origin:" << start_;
    return os.str();
}

BiSequence BiSequence::deserialize(const std::string& text) {
    int left = -1, right = -1;
    long long origin = 0;
    std::string core;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        if (tok.rfind("L:", 0) == 0) left = std::stoi(tok.substr(2));
        else if (tok.rfind("core:", 0) == 0) core = tok.substr(5);
        else if (tok.rfind("R:", 0) == 0) right = std::stoi(tok.substr(2));
        else if (tok.rfind("origin:", 0) == 0) origin = std::stoll(tok.substr(7));
        else throw Error("bad BiSequence token '" + tok + "'");
    }
    if (core == "-") core.clear();
    require(left >= 0 && right >= 0, "missing tail symbols in serialized BiSequence");
    return BiSequence(left, core, right, origin);
}

BiSequence shift_by(const BiSequence& x, long long n) {
    // y_i = x_{i+n}: the core slides n places toward the origin
    return BiSequence(x.left_symbol(), x.core(), x.right_symbol(), x.core_start() - n);
}

bool membership(const BiSequence& x) {
    // pad the core with one tail symbol on each side
    std::string w;
    w.reserve(x.core().size() + 2);
    w.push_back(static_cast<char>('0' + x.left_symbol()));
    w += x.core();
    w.push_back(static_cast<char>('0' + x.right_symbol()));

    const std::size_t len = w.size();
    for (std::size_t i = 0; i < len; ++i) {
        if (w[i] != '1') continue;
        std::size_t j = i + 1;
        std::size_t zeros = 0;
        while (j < len && w[j] == '0') { ++zeros; ++j; }
        if (zeros == 0) continue;
        std::size_t ones = 0;
        while (j < len && w[j] == '1') { ++ones; ++j; }
        if (ones == 0) continue;
        if (j < len && w[j] == '0') return false; // found 1 0^m 1^n 0
    }
    return true;
}

std::optional<long long> agreement_radius(const BiSequence& x, const BiSequence& y) {
    if (x == y) return std::nullopt;
    // beyond the span of both cores the comparison is tails-only
    const long long span =
        std::max({std::llabs(x.core_start()), std::llabs(x.core_end()),
                  std::llabs(y.core_start()), std::llabs(y.core_end()), 1ll}) +
        1;
    // first disagreement at i >= 0 and at i <= -1
    long long p = -1;
    for (long long i = 0; i <= span; ++i) {
        if (x.at(i) != y.at(i)) {
            p = i;
            break;
        }
    }
    long long q = -1;
    for (long long i = 1; i <= span; ++i) {
        if (x.at(-i) != y.at(-i)) {
            q = i;
            break;
        }
    }
    // x != y guarantees a disagreement somewhere
    require(p >= 0 || q >= 0, "agreement scan found no disagreement for distinct sequences");
    // window [-k, k-1] agrees iff k <= p and k <= q-1
    long long k;
    if (p < 0) k = q - 1;
    else if (q < 0) k = p;
    else k = std::min(p, q - 1);
    return k;
}

double metric(const BiSequence& x, const BiSequence& y, int k_max) {
    const auto k = agreement_radius(x, y);
    if (!k) return 0.0;
    const long long capped = std::min<long long>(*k, k_max);
    return std::ldexp(1.0, static_cast<int>(-capped));
}

std::vector<BiSequence> limit_points(int n_cap) {
    const BiSequence zeros = BiSequence::uniform(0);
    const BiSequence ones = BiSequence::uniform(1);

    // Exhaustive verification over the three canonical families
    //   (i)  ...000 1^n 000...   (ii) ...111 0^n 111...   (iii) ...000 1^n 0^m 111...
    // forward/backward shift orbits must converge to a uniform point.
    auto check_family = [&](const BiSequence& x) {
        const long long reach = static_cast<long long>(x.core().size()) +
                                std::llabs(x.core_start()) + n_cap + 4;
        for (int k = 1; k <= n_cap; ++k) {
            // far enough forward the central window sees only the right tail
            const BiSequence fwd = shift_by(x, reach + k);
            const BiSequence& fwd_target = x.right_symbol() == 1 ? ones : zeros;
            require(metric(fwd, fwd_target) <= std::ldexp(1.0, -k),
                    "forward shifts failed to converge to a uniform point");
            const BiSequence bwd = shift_by(x, -(reach + k));
            const BiSequence& bwd_target = x.left_symbol() == 1 ? ones : zeros;
            require(metric(bwd, bwd_target) <= std::ldexp(1.0, -k),
                    "backward shifts failed to converge to a uniform point");
        }
    };

    for (int n = 0; n <= n_cap; ++n) {
        check_family(BiSequence(0, std::string(static_cast<std::size_t>(n), '1'), 0, 0)); // (i)
        check_family(BiSequence(1, std::string(static_cast<std::size_t>(n), '0'), 1, 0)); // (ii)
        for (int m = 0; m <= n_cap; ++m) {
            check_family(BiSequence(0,
                                    std::string(static_cast<std::size_t>(n), '1') +
                                        std::string(static_cast<std::size_t>(m), '0'),
                                    1, 0)); // (iii)
        }
    }
    return {zeros, ones};
}

NonwanderingDemo nonwandering_demo(int n_max) {
    require(n_max >= 1, "nonwandering_demo requires n_max >= 1");
    NonwanderingDemo demo;
    const BiSequence x0 = BiSequence::step_zero_one();
    demo.all_rows_exact = true;
    for (int n = 1; n <= n_max; ++n) {
        const BiSequence xn = BiSequence::family_point(n);
        const BiSequence returned = shift_by(xn, 2ll * n);
        NonwanderingRow row;
        row.n = n;
        row.k_close = agreement_radius(x0, xn).value();
        row.k_return = agreement_radius(x0, returned).value();
        row.d_close = metric(x0, xn);
        row.d_return = metric(x0, returned);
        if (row.k_close != n || row.k_return != n) demo.all_rows_exact = false;
        demo.rows.push_back(row);
    }
    const auto limits = limit_points(std::min(n_max, 20));
    demo.x0_is_limit_point = false;
    for (const BiSequence& l : limits)
        if (x0 == l) demo.x0_is_limit_point = true;
    return demo;
}

} // namespace circlewave::subshift
