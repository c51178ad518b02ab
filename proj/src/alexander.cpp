#include "knotlab/laurent.hpp"

#include <cstdlib>
#include <numeric>
#include <type_traits>

namespace knotlab {

namespace {

template <class T>
bool is_zero_entry(const T& x) {
    if constexpr (std::is_same_v<T, LaurentPoly>) return x.is_zero();
    else return x == 0;
}

template <class T>
T divide_exact(const T& a, const T& b) {
    if constexpr (std::is_same_v<T, LaurentPoly>) {
        auto q = exact_divide(a, b);
        if (!q) throw Error(Errc::ParseError, "Bareiss step is not exact");
        return *q;
    } else {
        return a / b;
    }
}

template <class T>
T bareiss(std::vector<std::vector<T>> m) {
    const size_t n = m.size();
    if (n == 0) return T(1);
    T prev(1);
    bool negate = false;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (is_zero_entry(m[k][k])) {
            size_t r = k + 1;
            while (r < n && is_zero_entry(m[r][k])) ++r;
            if (r == n) return T(0);
            std::swap(m[k], m[r]);
            negate = !negate;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = divide_exact(T(m[i][j] * m[k][k] - m[i][k] * m[k][j]), prev);
            m[i][k] = T(0);
        }
        prev = m[k][k];
    }
    return negate ? T(-m[n - 1][n - 1]) : m[n - 1][n - 1];
}

using PolyMatrix = std::vector<std::vector<LaurentPoly>>;

PolyMatrix identity(int n) {
    PolyMatrix m(n, std::vector<LaurentPoly>(n));
    for (int i = 0; i < n; ++i) m[i][i] = LaurentPoly(1);
    return m;
}

PolyMatrix multiply(const PolyMatrix& a, const PolyMatrix& b) {
    const size_t n = a.size();
    PolyMatrix c(n, std::vector<LaurentPoly>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (size_t j = 0; j < n; ++j)
                if (!b[k][j].is_zero()) c[i][j] = c[i][j] + a[i][k] * b[k][j];
        }
    return c;
}

// Reduced Burau matrix of sigma_i^{sign} on n strands (size n-1), i 1-based.
PolyMatrix burau(int i, int sign, int n) {
    const int m = n - 1;
    PolyMatrix b = identity(m);
    const LaurentPoly t = LaurentPoly::monomial(1, 1);
    const LaurentPoly ti = LaurentPoly::monomial(1, -1);
    const int r = i - 1;  // row of the -t entry
    if (m == 1) {
        b[0][0] = sign > 0 ? -t : -ti;
        return b;
    }
    if (sign > 0) {
        b[r][r] = -t;
        if (r > 0) b[r][r - 1] = t;
        if (r + 1 < m) b[r][r + 1] = LaurentPoly(1);
    } else {
        b[r][r] = -ti;
        if (r > 0) b[r][r - 1] = LaurentPoly(1);
        if (r + 1 < m) b[r][r + 1] = ti;
    }
    return b;
}

LaurentPoly geometric_sum(int k) {
    std::vector<BigInt> c(k, BigInt(1));
    return LaurentPoly(0, std::move(c));
}

}  // namespace

LaurentPoly det_bareiss(std::vector<std::vector<LaurentPoly>> m) { return bareiss(std::move(m)); }
BigInt det_bareiss(std::vector<std::vector<BigInt>> m) { return bareiss(std::move(m)); }

std::vector<int> braid_permutation(const std::vector<int>& braid, int strands) {
    std::vector<int> pos(strands);  // pos[s] = current position of strand s
    std::iota(pos.begin(), pos.end(), 0);
    std::vector<int> at(strands);  // at[p] = strand at position p
    std::iota(at.begin(), at.end(), 0);
    for (int g : braid) {
        int p = std::abs(g) - 1;
        std::swap(at[p], at[p + 1]);
        pos[at[p]] = p;
        pos[at[p + 1]] = p + 1;
    }
    return pos;
}

LaurentPoly alexander_from_braid(const std::vector<int>& braid, int strands) {
    int n = strands;
    for (int g : braid) {
        if (g == 0) throw Error(Errc::ParseError, "braid generator 0");
        n = std::max(n, std::abs(g) + 1);
    }
    n = std::max(n, 1);
    std::vector<int> perm = braid_permutation(braid, n);
    int s = 0, len = 0;
    do {
        s = perm[s];
        ++len;
    } while (s != 0);
    if (len != n) throw Error(Errc::NotAKnot, "braid closure has more than one component");
    if (n == 1) return LaurentPoly(1);
    PolyMatrix b = identity(n - 1);
    for (int g : braid) b = multiply(b, burau(std::abs(g), g > 0 ? 1 : -1, n));
    PolyMatrix m = identity(n - 1);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) m[i][j] = m[i][j] - b[i][j];
    LaurentPoly d = det_bareiss(m);
    auto q = exact_divide(d, geometric_sum(n));
    if (!q) throw Error(Errc::NotAKnot, "Burau determinant not divisible by 1+t+...+t^(n-1)");
    return normalize_alexander(*q);
}

LaurentPoly alexander_from_relators(int generators, const std::vector<std::vector<int>>& relators,
                                    const std::vector<int>& weights) {
    const int g = generators;
    if (g == 1) return LaurentPoly(1);
    std::vector<std::vector<LaurentPoly>> fox;
    for (const auto& w : relators) {
        std::vector<LaurentPoly> row(g);
        int prefix = 0;
        for (int letter : w) {
            int j = std::abs(letter) - 1;
            if (letter > 0) {
                row[j] = row[j] + LaurentPoly::monomial(1, prefix);
                prefix += weights[j];
            } else {
                prefix -= weights[j];
                row[j] = row[j] - LaurentPoly::monomial(1, prefix);
            }
        }
        fox.push_back(std::move(row));
    }
    int col = -1;
    for (int j = 0; j < g; ++j)
        if (weights[j] != 0 && (col < 0 || std::abs(weights[j]) < std::abs(weights[col]))) col = j;
    if (col < 0) throw Error(Errc::PresentationInvalid, "no generator with nonzero abelian image");
    const int rows = static_cast<int>(fox.size());
    if (rows < g - 1) throw Error(Errc::PresentationInvalid, "too few relators");
    LaurentPoly best;
    // Every (g-1)-subset of relators; keep the minor of least span.
    std::vector<int> pick(g - 1);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        std::vector<std::vector<LaurentPoly>> m;
        for (int r : pick) {
            std::vector<LaurentPoly> row;
            for (int j = 0; j < g; ++j)
                if (j != col) row.push_back(fox[r][j]);
            m.push_back(std::move(row));
        }
        LaurentPoly d = det_bareiss(m);
        if (!d.is_zero() && (best.is_zero() || d.span() < best.span())) best = d;
        int k = g - 2;
        while (k >= 0 && pick[k] == rows - (g - 1) + k) --k;
        if (k < 0) break;
        ++pick[k];
        for (int j = k + 1; j < g - 1; ++j) pick[j] = pick[j - 1] + 1;
    }
    if (best.is_zero()) throw Error(Errc::PresentationInvalid, "Alexander matrix has no nonzero minor");
    auto q = exact_divide(best, geometric_sum(std::abs(weights[col])));
    if (!q) throw Error(Errc::PresentationInvalid, "Fox minor not divisible by the column factor");
    return normalize_alexander(*q);
}

}  // namespace knotlab
