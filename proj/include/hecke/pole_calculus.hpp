#pragma once

// Certified intervals for the order of the pole at s = 1 of incomplete
// L-function products, for pi unitary cuspidal on GL(2), non-self-dual, not of
// solvable polyhedral type, with central character omega of exact order r.
//
// Rules (per unit multiplicity):
//   L(omega^j)                       pole iff r | j
//   L(Sym^a (x) omega^j), a = 1..4   invertible (cuspidal on GL(a+1))
//   L(Sym^a x Sym^b (x) omega^j)     invertible when a != b
//   L(Sym^a x Sym^a (x) omega^j)     a <= 3: pole iff r | (j + a) (no nontrivial self-twists)
//                                    a = 4:  pole if r | (j + 4); undecided if only r | 5(j + 4)
// The a = 4 case is undecided because no characterisation of self-twists of
// Sym^4 is known; comparing central characters only gives the necessary
// condition r | 5(j + 4).

#include <algorithm>
#include <iterator>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "factorization.hpp"

namespace hecke {

/// How an undecided Sym^4 self-twist is resolved.  `unknown` is the honest
/// state of knowledge; `excluded` is for what-if analysis.
enum class Sym4SelfTwist { unknown, excluded };

struct Hypotheses {
    int r = 2;  // exact order of the central character
    bool non_self_dual = true;
    bool not_solvable_polyhedral = true;
    Sym4SelfTwist sym4_self_twist = Sym4SelfTwist::unknown;

    void validate() const {
        if (r < 2) throw std::invalid_argument("Hypotheses: central character order r must be >= 2");
        if (!non_self_dual) throw std::invalid_argument("Hypotheses: only non-self-dual pi is supported");
        if (!not_solvable_polyhedral)
            throw std::invalid_argument("Hypotheses: pi of solvable polyhedral type is not supported");
    }

    static Hypotheses with_order(int r) {
        Hypotheses h;
        h.r = r;
        h.validate();
        return h;
    }
};

struct PoleInterval {
    int lo = 0;
    int hi = 0;

    static PoleInterval exact(int k) { return {k, k}; }
    bool is_certain() const { return lo == hi; }

    PoleInterval& operator+=(const PoleInterval& o) {
        lo += o.lo;
        hi += o.hi;
        return *this;
    }
    friend PoleInterval operator+(PoleInterval a, const PoleInterval& b) { return a += b; }
    friend PoleInterval operator*(PoleInterval a, int k) { return {a.lo * k, a.hi * k}; }
    friend bool operator==(const PoleInterval&, const PoleInterval&) = default;
};

inline std::optional<PoleInterval> intersect(const PoleInterval& a, const PoleInterval& b) {
    const int lo = std::max(a.lo, b.lo);
    const int hi = std::min(a.hi, b.hi);
    if (lo > hi) return std::nullopt;
    return PoleInterval{lo, hi};
}

inline std::string to_string(const PoleInterval& p) {
    return "[" + std::to_string(p.lo) + "," + std::to_string(p.hi) + "]";
}

/// Rule set is self-contradictory (two valid factorizations disagree).
class InconsistentRules : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {
inline bool divides(long r, long x) { return x % r == 0; }
}  // namespace detail

inline PoleInterval pole_order_factor(const LFactor& f, const Hypotheses& h) {
    h.validate();
    validate(f);
    if (f.sym_a > 4) throw std::invalid_argument("pole_order_factor: no automorphy available beyond Sym^4");

    const long r = h.r;
    PoleInterval unit{0, 0};
    switch (f.kind) {
        case FactorKind::gl1:
            if (detail::divides(r, f.omega_exp)) unit = {1, 1};
            break;
        case FactorKind::cusp_twist:
            break;
        case FactorKind::rankin_selberg: {
            if (f.sym_a != f.sym_b) break;
            const long shift = static_cast<long>(f.omega_exp) + f.sym_a;
            if (detail::divides(r, shift)) {
                unit = {1, 1};
            } else if (f.sym_a == 4 && detail::divides(r, 5 * shift) &&
                       h.sym4_self_twist == Sym4SelfTwist::unknown) {
                unit = {0, 1};
            }
            break;
        }
    }
    return unit * f.multiplicity;
}

inline PoleInterval pole_order_product(const Factorization& f, const Hypotheses& h) {
    validate(f);
    PoleInterval total{0, 0};
    for (const auto& x : f.factors) total += pole_order_factor(x, h);
    return total;
}

/// Every factorization must describe L(s, pi^{x m} x conj(pi)^{x n}); the
/// true order lies in each of their intervals, hence in the intersection.
inline PoleInterval reconcile(std::span<const Factorization> fs, int m, int n, const Hypotheses& h) {
    if (fs.empty()) throw std::invalid_argument("reconcile: no factorizations given");
    std::optional<PoleInterval> acc;
    for (const auto& f : fs) {
        const auto check = check_factorization(m, n, f);
        if (!check.matches)
            throw std::invalid_argument("reconcile: factorization '" + f.label +
                                        "' does not match the tensor power; difference " +
                                        to_string(check.difference));
        const PoleInterval p = pole_order_product(f, h);
        acc = acc ? intersect(*acc, p) : std::optional<PoleInterval>(p);
        if (!acc) throw InconsistentRules("reconcile: factorizations give disjoint pole-order intervals");
    }
    return *acc;
}

/// Hypothesis-free view: each factor that can possibly have a pole (GL1 and
/// Rankin-Selberg squares) contributes {0, multiplicity}; everything else
/// contributes {0}.  Returns the set of attainable total orders.
inline std::set<int> possible_pole_orders(const Factorization& f) {
    validate(f);
    std::set<int> acc{0};
    for (const auto& x : f.factors) {
        const bool may_pole =
            x.kind == FactorKind::gl1 || (x.kind == FactorKind::rankin_selberg && x.sym_a == x.sym_b);
        if (!may_pole) continue;
        std::set<int> next;
        for (int v : acc) {
            next.insert(v);
            next.insert(v + x.multiplicity);
        }
        acc = std::move(next);
    }
    return acc;
}

inline std::set<int> reconcile_possible_orders(std::span<const Factorization> fs, int m, int n) {
    if (fs.empty()) throw std::invalid_argument("reconcile_possible_orders: no factorizations given");
    std::optional<std::set<int>> acc;
    for (const auto& f : fs) {
        if (!verify_factorization(m, n, f))
            throw std::invalid_argument("reconcile_possible_orders: factorization '" + f.label + "' does not match");
        const auto p = possible_pole_orders(f);
        if (!acc) {
            acc = p;
            continue;
        }
        std::set<int> both;
        std::set_intersection(acc->begin(), acc->end(), p.begin(), p.end(), std::inserter(both, both.begin()));
        acc = std::move(both);
    }
    return *acc;
}

/// Pole order of L(s, pi^{x (k-n)} x conj(pi)^{x n}) at s = 1, k in {3,4,6,8}.
inline PoleInterval moment_pole_order(int k, int n, const Hypotheses& h) {
    const auto fs = shapes::for_moment(k, n);
    return reconcile(fs, k - n, n, h);
}

/// Order of the pole of the k = 8 Dirichlet series A(n, r) at s = 1.
inline PoleInterval a_table(int n, const Hypotheses& h) {
    if (n < 0 || n > 8) throw std::invalid_argument("a_table: n must be in 0..8");
    return moment_pole_order(8, n, h);
}

inline PoleInterval a_table(int n, int r) { return a_table(n, Hypotheses::with_order(r)); }

}  // namespace hecke
