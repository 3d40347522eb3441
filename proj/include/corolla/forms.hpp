#pragma once

// Polynomial differential forms on the n-simplex with exact rational
// coefficients, Whitney elementary forms, and the Dupont contraction
// (i_n, p_n, h_n) between Omega_n and cellular cochains.
//
// Omega_n = Q[t_0..t_n, dt_0..dt_n] / (t_0+...+t_n - 1, dt_0+...+dt_n),
// homological convention: |t_i| = 0, |dt_i| = -1. Canonical representatives
// eliminate t_0 and dt_0.

#include <map>
#include <vector>

#include "corolla/graded.hpp"

namespace corolla {

struct FormMonomial {
    std::vector<int> pow;  // exponents of t_1..t_n
    std::vector<int> ext;  // sorted subset of {1..n}: dt factors in ascending order

    auto operator<=>(const FormMonomial&) const = default;
};

struct PolyForm {
    int n = 0;
    std::map<FormMonomial, Rat> terms;

    static PolyForm zero(int n) { return PolyForm{n, {}}; }
    static PolyForm constant(int n, const Rat& c) {
        PolyForm f{n, {}};
        if (c != 0) f.terms[{std::vector<int>(static_cast<size_t>(n), 0), {}}] = c;
        return f;
    }
    static PolyForm one(int n) { return constant(n, 1); }

    // barycentric coordinate t_i, 0 <= i <= n
    static PolyForm t(int n, int i) {
        if (i < 0 || i > n) fail_argument("t index out of range");
        PolyForm f = zero(n);
        std::vector<int> base(static_cast<size_t>(n), 0);
        if (i == 0) {
            f.terms[{base, {}}] = 1;  // 1 - sum t_k
            for (int k = 1; k <= n; ++k) {
                auto p = base;
                p[static_cast<size_t>(k - 1)] = 1;
                f.terms[{p, {}}] = -1;
            }
        } else {
            auto p = base;
            p[static_cast<size_t>(i - 1)] = 1;
            f.terms[{p, {}}] = 1;
        }
        return f;
    }

    static PolyForm dt(int n, int i) {
        if (i < 0 || i > n) fail_argument("dt index out of range");
        PolyForm f = zero(n);
        std::vector<int> base(static_cast<size_t>(n), 0);
        if (i == 0) {
            for (int k = 1; k <= n; ++k) f.terms[{base, {k}}] = -1;
        } else {
            f.terms[{base, {i}}] = 1;
        }
        return f;
    }

    bool is_zero() const { return terms.empty(); }

    void add_term(const FormMonomial& m, const Rat& c) {
        if (c == 0) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    int poly_degree() const {
        int d = 0;
        for (auto& [m, c] : terms) {
            int s = 0;
            for (int e : m.pow) s += e;
            d = std::max(d, s);
        }
        return d;
    }
};

inline PolyForm operator+(const PolyForm& a, const PolyForm& b) {
    if (a.n != b.n) fail_argument("form dimension mismatch");
    PolyForm out = a;
    for (auto& [m, c] : b.terms) out.add_term(m, c);
    return out;
}

inline PolyForm operator*(const Rat& c, const PolyForm& a) {
    PolyForm out = PolyForm::zero(a.n);
    if (c == 0) return out;
    for (auto& [m, v] : a.terms) out.terms[m] = c * v;
    return out;
}

inline PolyForm operator-(const PolyForm& a, const PolyForm& b) { return a + Rat(-1) * b; }

namespace detail {
// merge sorted exterior subsets; returns 0 on overlap, else the Koszul sign of
// interleaving (each dt is odd)
inline int merge_ext(const std::vector<int>& s, const std::vector<int>& t, std::vector<int>& out) {
    out.clear();
    size_t i = 0, j = 0;
    int sign = 1;
    while (i < s.size() || j < t.size()) {
        if (j == t.size() || (i < s.size() && s[i] < t[j])) {
            out.push_back(s[i++]);
        } else if (i == s.size() || t[j] < s[i]) {
            // t[j] moves past the remaining s-entries
            if ((s.size() - i) % 2) sign = -sign;
            out.push_back(t[j++]);
        } else {
            return 0;  // repeated dt
        }
    }
    return sign;
}
}  // namespace detail

inline PolyForm wedge(const PolyForm& a, const PolyForm& b) {
    if (a.n != b.n) fail_argument("form dimension mismatch");
    PolyForm out = PolyForm::zero(a.n);
    std::vector<int> ext;
    for (auto& [ma, ca] : a.terms) {
        for (auto& [mb, cb] : b.terms) {
            int sign = detail::merge_ext(ma.ext, mb.ext, ext);
            if (sign == 0) continue;
            FormMonomial m;
            m.ext = ext;
            m.pow.resize(ma.pow.size());
            for (size_t k = 0; k < m.pow.size(); ++k) m.pow[k] = ma.pow[k] + mb.pow[k];
            out.add_term(m, ca * cb * sign);
        }
    }
    return out;
}

inline PolyForm dform(const PolyForm& a) {
    PolyForm out = PolyForm::zero(a.n);
    std::vector<int> ext;
    for (auto& [m, c] : a.terms) {
        for (size_t k = 0; k < m.pow.size(); ++k) {
            if (m.pow[k] == 0) continue;
            std::vector<int> dtk{static_cast<int>(k) + 1};
            int sign = detail::merge_ext(dtk, m.ext, ext);
            if (sign == 0) continue;
            FormMonomial dm;
            dm.pow = m.pow;
            dm.pow[k] -= 1;
            dm.ext = ext;
            out.add_term(dm, c * m.pow[k] * sign);
        }
    }
    return out;
}

// Exact integral over the standard simplex of a top-degree form:
// int t_1^{a_1}..t_n^{a_n} dt_1..dt_n = a_1!..a_n! / (n + sum a_i)!.
// For n = 0 this is evaluation of the constant term.
inline Rat integrate(const PolyForm& u) {
    Rat total = 0;
    for (auto& [m, c] : u.terms) {
        if (static_cast<int>(m.ext.size()) != u.n)
            fail_argument("integrate: form is not of top exterior degree");
        Int num = 1;
        int s = 0;
        for (int e : m.pow) {
            num *= factorial(static_cast<unsigned>(e));
            s += e;
        }
        total += c * Rat(num, factorial(static_cast<unsigned>(u.n + s)));
    }
    return total;
}

// Substitute t_i by timg[i-1] (forms of dimension m); dt_i by d(timg[i-1]).
inline PolyForm pullback(const PolyForm& u, int m, const std::vector<PolyForm>& timg) {
    if (static_cast<int>(timg.size()) != u.n) fail_argument("pullback: wrong image count");
    std::vector<PolyForm> dtimg;
    dtimg.reserve(timg.size());
    for (auto& f : timg) dtimg.push_back(dform(f));
    PolyForm out = PolyForm::zero(m);
    for (auto& [mono, c] : u.terms) {
        PolyForm acc = PolyForm::constant(m, c);
        for (size_t k = 0; k < mono.pow.size() && !acc.is_zero(); ++k)
            for (int e = 0; e < mono.pow[k]; ++e) acc = wedge(acc, timg[k]);
        for (int s : mono.ext) {
            if (acc.is_zero()) break;
            acc = wedge(acc, dtimg[static_cast<size_t>(s - 1)]);
        }
        out = out + acc;
    }
    return out;
}

// Pullback along the j-th coface [n-1] -> [n] (the face missing vertex j).
inline PolyForm face(const PolyForm& u, int j) {
    int n = u.n;
    if (j < 0 || j > n) fail_argument("face index out of range");
    if (n == 0) fail_argument("face: no faces of the point");
    std::vector<PolyForm> timg;
    for (int i = 1; i <= n; ++i) {
        if (i == j) {
            timg.push_back(PolyForm::zero(n - 1));
        } else {
            int l = i < j ? i : i - 1;  // position of vertex i in [n] \ {j}
            timg.push_back(PolyForm::t(n - 1, l));
        }
    }
    return pullback(u, n - 1, timg);
}

// Pullback along the j-th codegeneracy [n+1] -> [n] (collapsing j, j+1).
inline PolyForm degeneracy(const PolyForm& u, int j) {
    int n = u.n;
    if (j < 0 || j > n) fail_argument("degeneracy index out of range");
    std::vector<PolyForm> timg;
    for (int i = 1; i <= n; ++i) {
        if (i < j) timg.push_back(PolyForm::t(n + 1, i));
        else if (i == j) timg.push_back(PolyForm::t(n + 1, j) + PolyForm::t(n + 1, j + 1));
        else timg.push_back(PolyForm::t(n + 1, i + 1));
    }
    return pullback(u, n + 1, timg);
}

inline std::string form_pretty(const PolyForm& u) {
    if (u.terms.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [m, c] : u.terms) {
        Rat v = c;
        if (first) {
            if (v < 0) { s += "-"; v = -v; }
        } else {
            s += v < 0 ? " - " : " + ";
            if (v < 0) v = -v;
        }
        std::string body;
        for (size_t k = 0; k < m.pow.size(); ++k) {
            if (!m.pow[k]) continue;
            if (!body.empty()) body += " ";
            body += "t" + std::to_string(k + 1);
            if (m.pow[k] > 1) body += "^" + std::to_string(m.pow[k]);
        }
        for (size_t k = 0; k < m.ext.size(); ++k) {
            if (!body.empty()) body += k == 0 ? " " : "^";
            body += "dt" + std::to_string(m.ext[k]);
        }
        if (v != 1 || body.empty()) {
            s += rat_pretty(v);
            if (!body.empty()) s += " ";
        }
        s += body;
        first = false;
    }
    return s;
}

// --- Whitney forms and the contraction ---------------------------------------

inline std::string subset_suffix(const std::vector<int>& I) {
    std::string s;
    for (int i : I) s += std::to_string(i);
    return s;
}

inline std::string cochain_name(const std::vector<int>& I) { return "w" + subset_suffix(I); }
inline std::string chain_name(const std::vector<int>& I) { return "a" + subset_suffix(I); }

inline std::vector<std::vector<int>> nonempty_subsets(int n) {
    std::vector<std::vector<int>> out;
    for (int mask = 1; mask < (1 << (n + 1)); ++mask) {
        std::vector<int> I;
        for (int i = 0; i <= n; ++i)
            if (mask & (1 << i)) I.push_back(i);
        out.push_back(std::move(I));
    }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
        return std::make_pair(a.size(), a) < std::make_pair(b.size(), b);
    });
    return out;
}

// Cellular cochains of the n-simplex: basis w_I, |w_I| = -(|I|-1).
inline GradedSpace cochain_space(int n) {
    std::vector<BasisElem> basis;
    for (auto& I : nonempty_subsets(n))
        basis.push_back({cochain_name(I), -(static_cast<int>(I.size()) - 1)});
    return GradedSpace(std::move(basis));
}

// Cellular chains: basis a_I, |a_I| = |I|-1.
inline GradedSpace chain_space(int n) {
    std::vector<BasisElem> basis;
    for (auto& I : nonempty_subsets(n))
        basis.push_back({chain_name(I), static_cast<int>(I.size()) - 1});
    return GradedSpace(std::move(basis));
}

// omega_I = k! sum_l (-1)^l t_{i_l} dt_{i_0} ^ ... ^ (omit dt_{i_l}) ^ ... ^ dt_{i_k}
inline PolyForm whitney(int n, const std::vector<int>& I) {
    if (I.empty()) fail_argument("whitney: empty index set");
    int k = static_cast<int>(I.size()) - 1;
    PolyForm out = PolyForm::zero(n);
    for (int l = 0; l <= k; ++l) {
        PolyForm term = PolyForm::t(n, I[static_cast<size_t>(l)]);
        for (int m = 0; m <= k; ++m) {
            if (m == l) continue;
            term = wedge(term, PolyForm::dt(n, I[static_cast<size_t>(m)]));
        }
        out = out + Rat(l % 2 ? -1 : 1) * term;
    }
    return Rat(factorial(static_cast<unsigned>(k))) * out;
}

// Vertex homotopy h^j: integrate along the straight-line contraction onto
// vertex j. phi_j(u, x) = u x + (1-u) e_j; h^j w = int_0^1 (du-part of phi_j^* w).
inline PolyForm vertex_homotopy(const PolyForm& w, int j) {
    int n = w.n;
    if (j < 0 || j > n) fail_argument("vertex index out of range");
    // terms of phi^*(w) are tracked as A + du ^ B; only B survives.
    using UTerm = std::pair<int, FormMonomial>;  // (u exponent, t/dt monomial)
    using UPoly = std::map<UTerm, Rat>;
    PolyForm out = PolyForm::zero(n);
    for (auto& [mono, coef] : w.terms) {
        UPoly A, B;
        A[{0, FormMonomial{std::vector<int>(static_cast<size_t>(n), 0), {}}}] = coef;
        auto mul_poly = [&](const UPoly& P, int du, int tvar, const Rat& c) {
            // multiply by c * u^du * t_tvar (tvar 0 = none)
            UPoly out2;
            for (auto& [ut, v] : P) {
                UTerm nt = ut;
                nt.first += du;
                if (tvar) nt.second.pow[static_cast<size_t>(tvar - 1)] += 1;
                out2[nt] += v * c;
            }
            return out2;
        };
        auto add_into = [](UPoly& dst, const UPoly& src) {
            for (auto& [k, v] : src) {
                dst[k] += v;
                if (dst[k] == 0) dst.erase(k);
            }
        };
        // polynomial part
        for (size_t k = 0; k < mono.pow.size(); ++k) {
            int var = static_cast<int>(k) + 1;
            for (int e = 0; e < mono.pow[k]; ++e) {
                if (var != j) {
                    // t_var -> u t_var
                    A = mul_poly(A, 1, var, 1);
                    B = mul_poly(B, 1, var, 1);
                } else {
                    // t_j -> 1 - u + u t_j
                    UPoly A2 = mul_poly(A, 0, 0, 1);
                    add_into(A2, mul_poly(A, 1, 0, -1));
                    add_into(A2, mul_poly(A, 1, var, 1));
                    UPoly B2 = mul_poly(B, 0, 0, 1);
                    add_into(B2, mul_poly(B, 1, 0, -1));
                    add_into(B2, mul_poly(B, 1, var, 1));
                    A = std::move(A2);
                    B = std::move(B2);
                }
            }
        }
        // exterior part, factors in ascending order; dt_s -> u dt_s + beta du
        // with beta = t_s (s != j) or t_j - 1 (s = j).
        for (int s : mono.ext) {
            UPoly A2, B2;
            // A * u dt_s  and  du B * u dt_s
            for (auto& [ut, v] : A) {
                UTerm nt = ut;
                nt.first += 1;
                std::vector<int> merged;
                int sign = detail::merge_ext(nt.second.ext, {s}, merged);
                if (sign) {
                    nt.second.ext = merged;
                    A2[nt] += v * sign;
                }
            }
            for (auto& [ut, v] : B) {
                UTerm nt = ut;
                nt.first += 1;
                std::vector<int> merged;
                int sign = detail::merge_ext(nt.second.ext, {s}, merged);
                if (sign) {
                    nt.second.ext = merged;
                    B2[nt] += v * sign;
                }
            }
            // A * beta du = (-1)^{ext degree of A-term} du (A-term * beta)
            auto push_beta = [&](const UTerm& ut, const Rat& v, int tvar, const Rat& c) {
                UTerm nt = ut;
                if (tvar) nt.second.pow[static_cast<size_t>(tvar - 1)] += 1;
                int sg = nt.second.ext.size() % 2 ? -1 : 1;
                B2[nt] += v * c * sg;
            };
            for (auto& [ut, v] : A) {
                if (s != j) {
                    push_beta(ut, v, s, 1);
                } else {
                    push_beta(ut, v, s, 1);
                    push_beta(ut, v, 0, -1);
                }
            }
            A = std::move(A2);
            B = std::move(B2);
        }
        // integrate the du-part over u in [0,1]
        for (auto& [ut, v] : B) out.add_term(ut.second, v / (ut.first + 1));
    }
    return out;
}

struct Dupont {
    int n = 0;
    GradedSpace cochains;
    GradedSpace chains;
    std::map<std::string, PolyForm> whitney_of;  // cochain name -> form
    GradedMap d_cell;                            // cochain differential (= p d i)

    PolyForm i(const Elem& w) const {
        PolyForm out = PolyForm::zero(n);
        for (auto& [name, c] : w) out = out + c * whitney_of.at(name);
        return out;
    }

    Elem p(const PolyForm& u) const {
        Elem out;
        for (auto& I : nonempty_subsets(n)) {
            int k = static_cast<int>(I.size()) - 1;
            // restrict to the face spanned by I, then integrate
            std::vector<PolyForm> timg;
            for (int i = 1; i <= n; ++i) {
                auto pos = std::find(I.begin(), I.end(), i);
                if (pos == I.end()) timg.push_back(PolyForm::zero(k));
                else timg.push_back(PolyForm::t(k, static_cast<int>(pos - I.begin())));
            }
            PolyForm restr = pullback(u, k, timg);
            // keep only the top exterior degree on the face
            PolyForm top = PolyForm::zero(k);
            for (auto& [m, c] : restr.terms)
                if (static_cast<int>(m.ext.size()) == k) top.add_term(m, c);
            Rat val = integrate(top);
            if (val != 0) out[cochain_name(I)] = val;
        }
        return out;
    }

    PolyForm h(const PolyForm& u) const {
        PolyForm out = PolyForm::zero(n);
        for (auto& I : nonempty_subsets(n)) {
            PolyForm acc = u;
            // compose h^{i_0} ... h^{i_k}, innermost h^{i_k}; the sign
            // -(-1)^{k(k-1)/2} for |I| = k+1 makes i p - id = d h + h d hold
            for (size_t k = I.size(); k-- > 0;) acc = vertex_homotopy(acc, I[k]);
            if (acc.is_zero()) continue;
            size_t k = I.size() - 1;
            Rat s = (k * (k - 1) / 2 + 1) % 2 ? -1 : 1;
            out = out + s * wedge(whitney_of.at(cochain_name(I)), acc);
        }
        return out;
    }
};

inline Dupont build_contraction(int n) {
    if (n < 0) fail_argument("build_contraction: negative dimension");
    Dupont D;
    D.n = n;
    D.cochains = cochain_space(n);
    D.chains = chain_space(n);
    for (auto& I : nonempty_subsets(n)) D.whitney_of[cochain_name(I)] = whitney(n, I);
    D.d_cell.source = D.cochains;
    D.d_cell.target = D.cochains;
    D.d_cell.degree = -1;
    for (auto& I : nonempty_subsets(n)) {
        Elem img = D.p(dform(D.whitney_of.at(cochain_name(I))));
        D.d_cell.set(cochain_name(I), std::move(img));
    }
    return D;
}

// Face/degeneracy action on cellular cochains (pullback of cochains along the
// simplicial operators).
inline Elem face_cochain(int n, int j, const Elem& w) {
    Elem out;
    for (auto& [name, c] : w) {
        std::vector<int> I;
        for (size_t k = 1; k < name.size(); ++k) I.push_back(name[k] - '0');
        if (std::find(I.begin(), I.end(), j) != I.end()) continue;
        std::vector<int> J;
        for (int i : I) J.push_back(i < j ? i : i - 1);
        elem_add(out, cochain_name(J), c);
    }
    (void)n;
    return out;
}

inline Elem degeneracy_cochain(int n, int j, const Elem& w) {
    Elem out;
    for (auto& [name, c] : w) {
        std::vector<int> I;
        for (size_t k = 1; k < name.size(); ++k) I.push_back(name[k] - '0');
        // preimages under s^j of each index, one choice per index, cardinality
        // preserved; only the index j has two preimages (j and j+1).
        std::vector<std::vector<int>> choices;
        for (int i : I) {
            if (i < j) choices.push_back({i});
            else if (i == j) choices.push_back({j, j + 1});
            else choices.push_back({i + 1});
        }
        std::vector<size_t> pick(choices.size(), 0);
        while (true) {
            std::vector<int> J;
            for (size_t k = 0; k < choices.size(); ++k) J.push_back(choices[k][pick[k]]);
            elem_add(out, cochain_name(J), c);
            size_t k = 0;
            while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
            if (k == pick.size()) break;
        }
    }
    (void)n;
    return out;
}

}  // namespace corolla
