#pragma once

// Exact arithmetic in the virtual representation ring of GL(2).
//
// A class function of GL(2) is stored as a Laurent polynomial in the two
// Satake parameters alpha, beta.  Irreducible building blocks are
// Sym^a (x) det^b, whose character is sum_{u+v=a} alpha^{u+b} beta^{v+b}.

#include <compare>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace hecke {

using Integer = mpz_class;

/// alpha^i beta^j, exponents may be negative.
struct Monomial {
    int i = 0;
    int j = 0;
    auto operator<=>(const Monomial&) const = default;
};

/// Sym^a (x) det^b.  a >= 0.
struct SymDet {
    int a = 0;
    int b = 0;
    auto operator<=>(const SymDet&) const = default;
};

using SymDetMultiplicities = std::map<SymDet, Integer>;

/// Element of Z[alpha^{+-1}, beta^{+-1}].  No symmetry requirement.
class LaurentPoly {
public:
    using Terms = std::map<Monomial, Integer>;

    LaurentPoly() = default;
    explicit LaurentPoly(Terms terms) : terms_(std::move(terms)) { prune(); }

    static LaurentPoly monomial(int i, int j, Integer c = 1) {
        Terms t;
        t[{i, j}] = std::move(c);
        return LaurentPoly(std::move(t));
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Integer coefficient(Monomial m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Integer(0) : it->second;
    }

    bool is_swap_symmetric() const {
        for (const auto& [m, c] : terms_) {
            if (coefficient({m.j, m.i}) != c) return false;
        }
        return true;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [m, c] : o.terms_) terms_[m] += c;
        prune();
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [m, c] : o.terms_) terms_[m] -= c;
        prune();
        return *this;
    }
    LaurentPoly& operator*=(const Integer& k) {
        for (auto& [m, c] : terms_) c *= k;
        prune();
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const Integer& k) { return a *= k; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        Terms out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out[{ma.i + mb.i, ma.j + mb.j}] += ca * cb;
        return LaurentPoly(std::move(out));
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

private:
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second == 0)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    Terms terms_;
};

/// Swap-symmetric Laurent polynomial, i.e. a virtual character of GL(2).
class VirtualCharacter {
public:
    VirtualCharacter() = default;

    explicit VirtualCharacter(LaurentPoly p) : poly_(std::move(p)) {
        if (!poly_.is_swap_symmetric())
            throw std::invalid_argument("VirtualCharacter: polynomial is not symmetric under alpha <-> beta");
    }

    static VirtualCharacter trivial() { return VirtualCharacter(LaurentPoly::monomial(0, 0)); }
    static VirtualCharacter standard() {
        return VirtualCharacter(LaurentPoly::monomial(1, 0) + LaurentPoly::monomial(0, 1));
    }
    static VirtualCharacter det(int b) { return VirtualCharacter(LaurentPoly::monomial(b, b)); }

    const LaurentPoly& poly() const { return poly_; }
    Integer coefficient(Monomial m) const { return poly_.coefficient(m); }
    bool is_zero() const { return poly_.is_zero(); }

    VirtualCharacter& operator+=(const VirtualCharacter& o) {
        poly_ += o.poly_;
        return *this;
    }
    VirtualCharacter& operator-=(const VirtualCharacter& o) {
        poly_ -= o.poly_;
        return *this;
    }
    friend VirtualCharacter operator+(VirtualCharacter a, const VirtualCharacter& b) { return a += b; }
    friend VirtualCharacter operator-(VirtualCharacter a, const VirtualCharacter& b) { return a -= b; }
    friend VirtualCharacter operator*(const VirtualCharacter& a, const Integer& k) {
        VirtualCharacter out;
        out.poly_ = a.poly_ * k;
        return out;
    }
    friend bool operator==(const VirtualCharacter& a, const VirtualCharacter& b) { return a.poly_ == b.poly_; }

private:
    friend VirtualCharacter tensor(const VirtualCharacter&, const VirtualCharacter&);
    friend VirtualCharacter dual(const VirtualCharacter&);
    LaurentPoly poly_;
};

inline VirtualCharacter char_of_symdet(SymDet c) {
    if (c.a < 0) throw std::invalid_argument("char_of_symdet: negative symmetric power");
    LaurentPoly::Terms t;
    for (int u = 0; u <= c.a; ++u) t[{u + c.b, c.a - u + c.b}] = 1;
    return VirtualCharacter(LaurentPoly(std::move(t)));
}

inline VirtualCharacter tensor(const VirtualCharacter& x, const VirtualCharacter& y) {
    VirtualCharacter out;
    out.poly_ = x.poly_ * y.poly_;
    return out;
}

/// alpha -> alpha^{-1}, beta -> beta^{-1}.
inline VirtualCharacter dual(const VirtualCharacter& x) {
    LaurentPoly::Terms t;
    for (const auto& [m, c] : x.poly_.terms()) t[{-m.i, -m.j}] = c;
    VirtualCharacter out;
    out.poly_ = LaurentPoly(std::move(t));
    return out;
}

inline VirtualCharacter character_of(const SymDetMultiplicities& mults) {
    VirtualCharacter out;
    for (const auto& [c, k] : mults) out += char_of_symdet(c) * k;
    return out;
}

/// Peel off the monomial with the widest exponent gap i-j (i >= j); its
/// coefficient is the multiplicity of Sym^{i-j} (x) det^j.  Terminates
/// because every subtraction removes the current widest gap.
inline SymDetMultiplicities decompose_to_symdet(const LaurentPoly& x) {
    if (!x.is_swap_symmetric())
        throw std::invalid_argument("decompose_to_symdet: input is not symmetric under alpha <-> beta");
    SymDetMultiplicities out;
    LaurentPoly rest = x;
    while (!rest.is_zero()) {
        const Monomial* best = nullptr;
        for (const auto& [m, c] : rest.terms()) {
            if (m.i < m.j) continue;
            if (best == nullptr || m.i - m.j > best->i - best->j) best = &m;
        }
        // symmetric and nonzero, so some term has i >= j
        const SymDet sd{best->i - best->j, best->j};
        const Integer k = rest.coefficient(*best);
        out[sd] += k;
        rest -= char_of_symdet(sd).poly() * k;
    }
    for (auto it = out.begin(); it != out.end();) {
        if (it->second == 0)
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

inline SymDetMultiplicities decompose_to_symdet(const VirtualCharacter& x) { return decompose_to_symdet(x.poly()); }

/// Character of pi^{x m} x conj(pi)^{x n}, with conj(pi) realised as the dual
/// of the standard character, decomposed into Sym-det classes.
inline VirtualCharacter tensor_power_character(int m, int n) {
    if (m < 0 || n < 0) throw std::invalid_argument("tensor_power: exponents must be nonnegative");
    VirtualCharacter acc = VirtualCharacter::trivial();
    const VirtualCharacter std_char = VirtualCharacter::standard();
    const VirtualCharacter conj_char = dual(std_char);
    for (int k = 0; k < m; ++k) acc = tensor(acc, std_char);
    for (int k = 0; k < n; ++k) acc = tensor(acc, conj_char);
    return acc;
}

inline SymDetMultiplicities tensor_power(int m, int n) { return decompose_to_symdet(tensor_power_character(m, n)); }

/// Sum of multiplicity * (a+1).
inline Integer dimension(const SymDetMultiplicities& mults) {
    Integer total = 0;
    for (const auto& [c, k] : mults) total += k * (c.a + 1);
    return total;
}

inline std::string to_string(SymDet c) {
    std::string s = "Sym" + std::to_string(c.a);
    if (c.b != 0) s += "⊗det^" + std::to_string(c.b);
    return s;
}

/// "Sym3⊗det^-1: 1, Sym1: 2"; highest symmetric power first.
inline std::string to_string(const SymDetMultiplicities& mults) {
    std::ostringstream os;
    bool first = true;
    for (auto it = mults.rbegin(); it != mults.rend(); ++it) {
        if (!first) os << ", ";
        first = false;
        os << to_string(it->first) << ": " << it->second.get_str();
    }
    return os.str();
}

}  // namespace hecke
