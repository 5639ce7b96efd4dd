#pragma once

// Leading constants q_k in
//     sum_v Re(e^{i phi} a_v)^k Nv^{-s} = q_k(phi) * log(1/(s-1)) + O(1)
// (equality for k = 3, 4; upper bound for k = 6, 8).
//
// Expanding Re(z)^k = 2^{-k} sum_n C(k,n) z^{k-n} conj(z)^n, the n-th term is
// governed by the pole order P(n, r) of L(s, pi^{x (k-n)} x conj(pi)^{x n}) and
// carries the phase e^{i (k-2n) phi}.  Because P(n, r) = P(k-n, r) the sum is a
// cosine polynomial.  Prime-power contributions (t >= 2) are dropped by
// positivity, which is why k = 6, 8 give upper bounds only.

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "pole_calculus.hpp"

namespace hecke {

using Rational = mpq_class;

inline Integer binomial(int k, int n) {
    if (n < 0 || n > k) return 0;
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(n));
    return out;
}

/// phi -> sum_h c_h cos(h phi), exact rational coefficients.
class FourierCosPoly {
public:
    FourierCosPoly() = default;
    explicit FourierCosPoly(const Rational& constant) { add(0, constant); }

    void add(int harmonic, const Rational& c) {
        if (harmonic < 0) throw std::invalid_argument("FourierCosPoly: harmonic must be nonnegative");
        Rational& slot = coeffs_[harmonic];
        slot += c;
        slot.canonicalize();
        if (slot == 0) coeffs_.erase(harmonic);
    }

    Rational coefficient(int harmonic) const {
        auto it = coeffs_.find(harmonic);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    const std::map<int, Rational>& coefficients() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    int max_harmonic() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    double operator()(double phi) const {
        double v = 0.0;
        for (const auto& [h, c] : coeffs_) v += c.get_d() * std::cos(h * phi);
        return v;
    }

    /// sum |c_h|, an upper bound for the maximum over phi (attained at phi = 0
    /// when every coefficient is nonnegative).
    Rational abs_sum() const {
        Rational s = 0;
        for (const auto& [h, c] : coeffs_) s += abs(c);
        return s;
    }

    friend bool operator==(const FourierCosPoly& a, const FourierCosPoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    std::map<int, Rational> coeffs_;
};

/// "5/16 + 1/32 cos(6φ)"
inline std::string to_string(const FourierCosPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [h, c] : p.coefficients()) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        os << Rational(abs(c)).get_str();
        if (h > 0) os << " cos(" << h << "φ)";
    }
    return os.str();
}

/// Certain pole order P(n, r); throws if the interval is not a single value.
inline int certain_pole_order(int k, int n, const Hypotheses& h) {
    const PoleInterval p = moment_pole_order(k, n, h);
    if (!p.is_certain())
        throw std::logic_error("moment constants: pole order for k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                               " is not determined");
    return p.lo;
}

inline FourierCosPoly moment_poly(int k, const Hypotheses& h) {
    if (k != 3 && k != 4 && k != 6) throw std::invalid_argument("moment_poly: k must be 3, 4 or 6");
    h.validate();
    const Rational scale(Integer(1), Integer(1) << k);
    FourierCosPoly out;
    for (int n = 0; 2 * n <= k; ++n) {
        const int p_n = certain_pole_order(k, n, h);
        const int p_mirror = certain_pole_order(k, k - n, h);
        // e^{i h phi} P(n) + e^{-i h phi} P(k-n): the sine part is (P(n) - P(k-n)) sin(h phi)
        if (p_n != p_mirror)
            throw std::logic_error("moment_poly: pole orders not symmetric under n <-> k-n; sine terms survive");
        const int harmonic = k - 2 * n;
        const int weight = harmonic == 0 ? p_n : p_n + p_mirror;
        out.add(harmonic, scale * Rational(binomial(k, n) * weight));
    }
    return out;
}

inline FourierCosPoly moment_poly(int k, int r) { return moment_poly(k, Hypotheses::with_order(r)); }

/// 2^{-6} sum_n C(6,n) P(n,r): every |cos| bounded by 1.
inline Rational q6_upper(const Hypotheses& h) {
    Rational s = 0;
    for (int n = 0; n <= 6; ++n) s += Rational(binomial(6, n) * certain_pole_order(6, n, h));
    s /= 64;
    return s;
}

inline Rational q6_upper(int r) { return q6_upper(Hypotheses::with_order(r)); }

/// 2^{-8} sum_n C(8,n) A(n,r).hi
inline Rational q8_upper(const Hypotheses& h) {
    Rational s = 0;
    for (int n = 0; n <= 8; ++n) s += Rational(binomial(8, n) * a_table(n, h).hi);
    s /= 256;
    return s;
}

inline Rational q8_upper(int r) { return q8_upper(Hypotheses::with_order(r)); }

/// max of q8_upper(r) over all r >= 6.  Every rule in the k = 8 product tests
/// r | c with |c| <= 20 (c = 0 only at n = 4, which is r-independent), so for
/// r > 20 the table is constant and the maximum is attained in 6..20.
inline Rational q8_uniform_high_order(Sym4SelfTwist mode = Sym4SelfTwist::unknown) {
    Rational best = 0;
    for (int r = 6; r <= 21; ++r) {
        Hypotheses h = Hypotheses::with_order(r);
        h.sym4_self_twist = mode;
        best = std::max(best, q8_upper(h));
    }
    return best;
}

enum class BoundKind { equality, upper };

inline const char* to_string(BoundKind k) { return k == BoundKind::equality ? "equality" : "upper"; }

struct MomentBounds {
    int r = 0;
    Rational q3;
    FourierCosPoly q4;
    BoundKind q4_kind = BoundKind::equality;
    FourierCosPoly q6;
    BoundKind q6_kind = BoundKind::upper;
    Rational q6_upper;
    /// per-r table value
    Rational q8_upper;
    /// value fed to the density pipeline: the table value for r <= 5, the
    /// uniform bound over r >= 6 otherwise
    Rational q8_pipeline;
};

inline MomentBounds moment_bounds(const Hypotheses& h) {
    h.validate();
    MomentBounds b;
    b.r = h.r;
    const FourierCosPoly k3 = moment_poly(3, h);
    if (!k3.is_zero()) throw std::logic_error("moment_bounds: third moment has a nonzero leading term");
    b.q3 = 0;
    b.q4 = moment_poly(4, h);
    b.q6 = moment_poly(6, h);
    b.q6_upper = hecke::q6_upper(h);
    b.q8_upper = hecke::q8_upper(h);
    b.q8_pipeline = h.r >= 6 ? q8_uniform_high_order(h.sym4_self_twist) : b.q8_upper;
    return b;
}

inline MomentBounds moment_bounds(int r) { return moment_bounds(Hypotheses::with_order(r)); }

}  // namespace hecke
