#pragma once

// Products of incomplete L-functions built from pi, its symmetric powers and
// powers of the central character omega, and their exact character check
// against pi^{x m} x conj(pi)^{x n}.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rep_ring.hpp"

namespace hecke {

enum class FactorKind { gl1, cusp_twist, rankin_selberg };

/// One factor L(s, .)^multiplicity:
///   gl1             L(s, omega^j)
///   cusp_twist      L(s, Sym^a pi (x) omega^j)
///   rankin_selberg  L(s, Sym^a pi x Sym^b pi (x) omega^j), a >= b
struct LFactor {
    FactorKind kind = FactorKind::gl1;
    int sym_a = 0;
    int sym_b = 0;
    int omega_exp = 0;
    int multiplicity = 1;

    static LFactor gl1(int j, int mult = 1) { return {FactorKind::gl1, 0, 0, j, mult}; }
    static LFactor cusp_twist(int a, int j, int mult = 1) { return {FactorKind::cusp_twist, a, 0, j, mult}; }
    static LFactor rankin_selberg(int a, int b, int j, int mult = 1) {
        return {FactorKind::rankin_selberg, a, b, j, mult};
    }

    friend bool operator==(const LFactor&, const LFactor&) = default;
};

inline void validate(const LFactor& f) {
    if (f.multiplicity < 1) throw std::invalid_argument("LFactor: multiplicity must be positive");
    switch (f.kind) {
        case FactorKind::gl1:
            if (f.sym_a != 0 || f.sym_b != 0) throw std::invalid_argument("LFactor: GL1 factor carries no Sym degree");
            break;
        case FactorKind::cusp_twist:
            if (f.sym_a < 1 || f.sym_b != 0) throw std::invalid_argument("LFactor: cusp twist needs Sym degree >= 1");
            break;
        case FactorKind::rankin_selberg:
            if (f.sym_b < 1 || f.sym_a < f.sym_b)
                throw std::invalid_argument("LFactor: Rankin-Selberg needs symA >= symB >= 1");
            break;
    }
}

struct Factorization {
    std::string label;
    std::vector<LFactor> factors;
};

inline void validate(const Factorization& f) {
    if (f.factors.empty()) throw std::invalid_argument("Factorization: empty product");
    for (const auto& x : f.factors) validate(x);
}

inline VirtualCharacter character_of(const LFactor& f) {
    validate(f);
    VirtualCharacter c;
    switch (f.kind) {
        case FactorKind::gl1:
            c = VirtualCharacter::det(f.omega_exp);
            break;
        case FactorKind::cusp_twist:
            c = char_of_symdet({f.sym_a, f.omega_exp});
            break;
        case FactorKind::rankin_selberg:
            c = tensor(char_of_symdet({f.sym_a, f.omega_exp}), char_of_symdet({f.sym_b, 0}));
            break;
    }
    return c * Integer(f.multiplicity);
}

inline VirtualCharacter character_of(const Factorization& f) {
    validate(f);
    VirtualCharacter c;
    for (const auto& x : f.factors) c += character_of(x);
    return c;
}

struct FactorizationCheck {
    bool matches = false;
    /// expected minus claimed, in Sym-det classes; empty when matches.
    SymDetMultiplicities difference;
};

inline FactorizationCheck check_factorization(int m, int n, const Factorization& f) {
    const VirtualCharacter diff = tensor_power_character(m, n) - character_of(f);
    return {diff.is_zero(), decompose_to_symdet(diff)};
}

inline bool verify_factorization(int m, int n, const Factorization& f) { return check_factorization(m, n, f).matches; }

inline std::string to_string(const LFactor& f) {
    auto twist = [](int j) { return j == 0 ? std::string() : "⊗ω^" + std::to_string(j); };
    std::string body;
    switch (f.kind) {
        case FactorKind::gl1:
            body = "ω^" + std::to_string(f.omega_exp);
            break;
        case FactorKind::cusp_twist:
            body = "Sym" + std::to_string(f.sym_a) + twist(f.omega_exp);
            break;
        case FactorKind::rankin_selberg:
            body = "Sym" + std::to_string(f.sym_a) + "×Sym" + std::to_string(f.sym_b) + twist(f.omega_exp);
            break;
    }
    std::string s = "L(" + body + ")";
    if (f.multiplicity != 1) s += "^" + std::to_string(f.multiplicity);
    return s;
}

inline std::string to_string(const Factorization& f) {
    std::string s;
    for (const auto& x : f.factors) {
        if (!s.empty()) s += " ";
        s += to_string(x);
    }
    return s;
}

/// The isobaric factorizations of L(s, pi^{x m} x conj(pi)^{x n}) used for
/// the third through eighth moments.  Each depends only on n (m = k - n).
namespace shapes {

inline Factorization k3(int n) {
    return {"k3", {LFactor::cusp_twist(3, -n), LFactor::cusp_twist(1, 1 - n, 2)}};
}

inline Factorization k4(int n) {
    return {"k4", {LFactor::cusp_twist(4, -n), LFactor::cusp_twist(2, 1 - n, 3), LFactor::gl1(2 - n, 2)}};
}

/// Sym^3 x Sym^3 route.
inline Factorization k6_sym3(int n) {
    return {"k6-sym3x3",
            {LFactor::rankin_selberg(3, 3, -n), LFactor::rankin_selberg(3, 1, 1 - n, 4),
             LFactor::rankin_selberg(1, 1, 2 - n, 4)}};
}

/// Sym^4 x Sym^2 route.
inline Factorization k6_sym4(int n) {
    return {"k6-sym4x2",
            {LFactor::rankin_selberg(4, 2, -n), LFactor::cusp_twist(4, 1 - n), LFactor::rankin_selberg(2, 2, 1 - n, 3),
             LFactor::cusp_twist(2, 2 - n, 5), LFactor::gl1(3 - n, 2)}};
}

inline Factorization k8(int n) {
    return {"k8",
            {LFactor::rankin_selberg(4, 4, -n), LFactor::rankin_selberg(2, 2, 2 - n, 9), LFactor::gl1(4 - n, 4),
             LFactor::rankin_selberg(4, 2, 1 - n, 6), LFactor::cusp_twist(4, 2 - n, 4),
             LFactor::cusp_twist(2, 3 - n, 12)}};
}

/// All factorizations recorded for the k-th moment at split (k - n, n).
inline std::vector<Factorization> for_moment(int k, int n) {
    if (n < 0 || n > k) throw std::invalid_argument("shapes::for_moment: need 0 <= n <= k");
    switch (k) {
        case 3:
            return {k3(n)};
        case 4:
            return {k4(n)};
        case 6:
            return {k6_sym3(n), k6_sym4(n)};
        case 8:
            return {k8(n)};
        default:
            throw std::invalid_argument("shapes::for_moment: k must be 3, 4, 6 or 8");
    }
}

}  // namespace shapes

}  // namespace hecke
