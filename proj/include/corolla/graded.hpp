#pragma once

// Finite graded vector spaces over Q with named bases, sparse graded maps,
// Koszul signs, and exact homology via Gaussian elimination.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corolla/error.hpp"
#include "corolla/rational.hpp"

namespace corolla {

struct BasisElem {
    std::string name;
    int degree = 0;
};

struct GradedSpace {
    // Kept sorted by (degree, name) so serialization and representative
    // choices are deterministic.
    std::vector<BasisElem> basis;

    GradedSpace() = default;
    explicit GradedSpace(std::vector<BasisElem> b) : basis(std::move(b)) {
        std::sort(basis.begin(), basis.end(), [](const BasisElem& x, const BasisElem& y) {
            return std::tie(x.degree, x.name) < std::tie(y.degree, y.name);
        });
        for (size_t i = 0; i + 1 < basis.size(); ++i)
            if (basis[i].name == basis[i + 1].name)
                fail_argument("duplicate basis name: " + basis[i].name);
    }

    bool has(const std::string& name) const {
        for (auto& b : basis)
            if (b.name == name) return true;
        return false;
    }
    int degree_of(const std::string& name) const {
        for (auto& b : basis)
            if (b.name == name) return b.degree;
        fail_argument("unknown basis element: " + name);
    }
    std::vector<std::string> names_in_degree(int deg) const {
        std::vector<std::string> out;
        for (auto& b : basis)
            if (b.degree == deg) out.push_back(b.name);
        return out;
    }
    std::map<int, int> dims() const {
        std::map<int, int> d;
        for (auto& b : basis) d[b.degree]++;
        return d;
    }
};

// Sparse vector in a named basis. Zero coefficients are never stored.
using Elem = std::map<std::string, Rat>;

inline void elem_add(Elem& e, const std::string& name, const Rat& c) {
    if (c == 0) return;
    auto it = e.find(name);
    if (it == e.end()) {
        e.emplace(name, c);
    } else {
        it->second += c;
        if (it->second == 0) e.erase(it);
    }
}

inline Elem elem_scale(const Elem& e, const Rat& c) {
    Elem out;
    if (c == 0) return out;
    for (auto& [n, v] : e) out.emplace(n, v * c);
    return out;
}

inline Elem elem_sum(const Elem& a, const Elem& b) {
    Elem out = a;
    for (auto& [n, v] : b) elem_add(out, n, v);
    return out;
}

// Degree of a nonzero homogeneous element; nullopt for 0 or mixed.
inline std::optional<int> elem_degree(const GradedSpace& sp, const Elem& e) {
    std::optional<int> deg;
    for (auto& [n, v] : e) {
        int d = sp.degree_of(n);
        if (!deg) deg = d;
        else if (*deg != d) return std::nullopt;
    }
    return deg;
}

inline std::string elem_pretty(const Elem& e) {
    if (e.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [n, v] : e) {
        Rat c = v;
        if (first) {
            if (c < 0) { s += "-"; c = -c; }
        } else {
            s += c < 0 ? " - " : " + ";
            if (c < 0) c = -c;
        }
        if (c != 1) s += rat_pretty(c) + " ";
        s += n;
        first = false;
    }
    return s;
}

// order[i] = original index (0-based) now sitting in position i.
// Returns the Koszul sign of permuting graded symbols of the given degrees.
inline int koszul_sign(const std::vector<size_t>& order, const std::vector<int>& degrees) {
    if (order.size() != degrees.size()) fail_argument("koszul_sign: length mismatch");
    size_t n = order.size();
    {
        std::vector<char> seen(n, 0);
        for (size_t v : order) {
            if (v >= n || seen[v]) fail_argument("koszul_sign: not a permutation");
            seen[v] = 1;
        }
    }
    int sign = 1;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (order[i] > order[j] && (degrees[order[i]] & 1) && (degrees[order[j]] & 1))
                sign = -sign;
    return sign;
}

// Graded linear map between named bases, stored column-sparse.
struct GradedMap {
    GradedSpace source, target;
    int degree = 0;
    std::map<std::string, Elem> cols;  // basis name -> image

    Elem apply(const Elem& e) const {
        Elem out;
        for (auto& [n, c] : e) {
            auto it = cols.find(n);
            if (it == cols.end()) continue;
            for (auto& [m, v] : it->second) elem_add(out, m, v * c);
        }
        return out;
    }

    void set(const std::string& from, Elem img) {
        if (img.empty()) cols.erase(from);
        else cols[from] = std::move(img);
    }
};

inline GradedMap compose(const GradedMap& f, const GradedMap& g) {
    if (g.target.basis.size() != f.source.basis.size())
        fail_argument("compose: space mismatch");
    for (size_t i = 0; i < g.target.basis.size(); ++i)
        if (g.target.basis[i].name != f.source.basis[i].name ||
            g.target.basis[i].degree != f.source.basis[i].degree)
            fail_argument("compose: space mismatch");
    GradedMap out;
    out.source = g.source;
    out.target = f.target;
    out.degree = f.degree + g.degree;
    for (auto& [n, img] : g.cols) {
        Elem v = f.apply(img);
        if (!v.empty()) out.cols[n] = std::move(v);
    }
    return out;
}

// Rank of a dense rational matrix (rows of equal length), destructive Gauss.
inline int matrix_rank(std::vector<std::vector<Rat>> m) {
    int rank = 0;
    size_t rows = m.size();
    size_t colcount = rows ? m[0].size() : 0;
    size_t r = 0;
    for (size_t c = 0; c < colcount && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c] / m[r][c];
            for (size_t j = c; j < colcount; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

// Kernel basis of the linear map sending the j-th generator to column j,
// expressed as coefficient vectors over the generators.
inline std::vector<std::vector<Rat>> kernel_basis(std::vector<std::vector<Rat>> m, size_t ncols) {
    // m: rows = target dimension, ncols = source dimension.
    size_t rows = m.size();
    std::vector<int> pivot_of_col(ncols, -1);
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        Rat inv = 1 / m[r][c];
        for (size_t j = 0; j < ncols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (size_t j = 0; j < ncols; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_of_col[c] = static_cast<int>(r);
        ++r;
    }
    std::vector<std::vector<Rat>> ker;
    for (size_t c = 0; c < ncols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<Rat> v(ncols, Rat(0));
        v[c] = 1;
        for (size_t c2 = 0; c2 < ncols; ++c2)
            if (pivot_of_col[c2] >= 0) v[c2] = -m[static_cast<size_t>(pivot_of_col[c2])][c];
        ker.push_back(std::move(v));
    }
    return ker;
}

struct HomologyResult {
    int dimension = 0;
    std::vector<Elem> representatives;  // cycles spanning a complement of the boundaries
};

namespace detail {
inline std::vector<std::vector<Rat>> block_matrix(const GradedMap& d,
                                                  const std::vector<std::string>& src,
                                                  const std::vector<std::string>& tgt) {
    std::vector<std::vector<Rat>> m(tgt.size(), std::vector<Rat>(src.size(), Rat(0)));
    for (size_t j = 0; j < src.size(); ++j) {
        auto it = d.cols.find(src[j]);
        if (it == d.cols.end()) continue;
        for (size_t i = 0; i < tgt.size(); ++i) {
            auto v = it->second.find(tgt[i]);
            if (v != it->second.end()) m[i][j] = v->second;
        }
    }
    return m;
}
}  // namespace detail

// Homology of a degree -1 differential at homological degree n.
// d^2 = 0 is verified here (not at construction: curved pre-differentials
// legitimately fail it) and reported with a witness basis element.
inline HomologyResult homology(const GradedMap& d, int n) {
    if (d.degree != -1) fail_argument("homology: differential must have degree -1");
    for (auto& b : d.source.basis) {
        Elem sq = d.apply(d.apply(Elem{{b.name, Rat(1)}}));
        if (!sq.empty())
            fail_precondition("not a differential: d^2(" + b.name + ") = " + elem_pretty(sq));
    }
    const GradedSpace& sp = d.source;
    auto src = sp.names_in_degree(n);
    auto below = sp.names_in_degree(n - 1);
    auto above = sp.names_in_degree(n + 1);

    auto dn = detail::block_matrix(d, src, below);
    auto ker = kernel_basis(dn, src.size());
    auto dup = detail::block_matrix(d, above, src);
    int rank_dup = matrix_rank(dup);

    HomologyResult res;
    res.dimension = static_cast<int>(ker.size()) - rank_dup;

    // Representatives: kernel vectors independent modulo the image of d_{n+1}.
    std::vector<std::vector<Rat>> span;  // image columns first, then grow with cycles
    for (size_t j = 0; j < above.size(); ++j) {
        std::vector<Rat> col(src.size(), Rat(0));
        for (size_t i = 0; i < src.size(); ++i) col[i] = dup[i][j];
        span.push_back(std::move(col));
    }
    int base_rank = matrix_rank(span);
    for (auto& v : ker) {
        if (static_cast<int>(res.representatives.size()) >= res.dimension) break;
        auto trial = span;
        trial.push_back(v);
        if (matrix_rank(trial) > base_rank) {
            span = std::move(trial);
            ++base_rank;
            Elem rep;
            for (size_t i = 0; i < src.size(); ++i) elem_add(rep, src[i], v[i]);
            res.representatives.push_back(std::move(rep));
        }
    }
    return res;
}

}  // namespace corolla
