#pragma once

// Curved L-infinity structures on weight-graded spaces, truncated to the
// nilpotent quotient below a weight cap. All operations l_n (n >= 0, n != 1)
// have degree -1 and raise total weight by at least one; l_1 := d preserves
// weight. Corked rooted trees act by placing l_k at k-ary vertices and the
// curvature theta = l_0(1) at corks.

#include <functional>
#include <map>
#include <vector>

#include "corolla/graded.hpp"
#include "corolla/tree.hpp"

namespace corolla {

struct WeightGradedSpace {
    GradedSpace space;
    std::map<std::string, int> weight;
    int weight_cap = 4;

    WeightGradedSpace() = default;
    WeightGradedSpace(GradedSpace sp, std::map<std::string, int> w, int cap)
        : space(std::move(sp)), weight(std::move(w)), weight_cap(cap) {
        if (weight_cap < 1) fail_argument("weight cap must be >= 1");
        for (auto& b : space.basis) {
            auto it = weight.find(b.name);
            if (it == weight.end()) fail_argument("no weight for basis element " + b.name);
            if (it->second < 0 || it->second >= weight_cap)
                fail_argument("basis element " + b.name + " has weight outside [0, cap)");
        }
    }

    int weight_of(const std::string& name) const {
        auto it = weight.find(name);
        if (it == weight.end()) fail_argument("unknown basis element: " + name);
        return it->second;
    }

    // minimal weight among the components; cap for 0
    int min_weight(const Elem& e) const {
        int w = weight_cap;
        for (auto& [n, c] : e) w = std::min(w, weight_of(n));
        return w;
    }
};

struct CurvedLinftyStructure {
    WeightGradedSpace space;
    GradedMap d;  // degree -1, weight preserving
    int arity_cap = 4;
    // n -> (name-sorted argument tuple -> value); n = 0 key is the empty tuple
    std::map<int, std::map<std::vector<std::string>, Elem>> ops;

    Elem theta() const {
        auto it = ops.find(0);
        if (it == ops.end()) return {};
        auto jt = it->second.find({});
        return jt == it->second.end() ? Elem{} : jt->second;
    }

    // store a value for an arbitrary argument order; sorted internally with
    // the Koszul sign
    void set_op(int n, std::vector<std::string> args, const Elem& value) {
        if (n == 1) fail_argument("l_1 is the differential; set d instead");
        if (n < 0 || static_cast<int>(args.size()) != n) fail_argument("bad operation arity");
        auto [sorted, sign] = sort_args(args);
        if (sign == 0) {
            if (!value.empty()) fail_argument("nonzero value on a vanishing symmetric tuple");
            return;
        }
        Elem v = elem_scale(value, Rat(sign));
        if (v.empty()) ops[n].erase(sorted);
        else ops[n][sorted] = std::move(v);
    }

    // value on a basis tuple in any order
    Elem l_basis(int n, std::vector<std::string> args) const {
        if (n == 1) return d.apply(Elem{{args[0], Rat(1)}});
        if (n > arity_cap) return {};
        auto [sorted, sign] = sort_args(args);
        if (sign == 0) return {};
        auto it = ops.find(n);
        if (it == ops.end()) return {};
        auto jt = it->second.find(sorted);
        if (jt == it->second.end()) return {};
        return elem_scale(jt->second, Rat(sign));
    }

    // full multilinear extension
    Elem l(int n, const std::vector<Elem>& args) const {
        if (static_cast<int>(args.size()) != n) fail_argument("bad operation arity");
        Elem out;
        std::vector<std::string> names(static_cast<size_t>(n));
        std::function<void(size_t, Rat)> rec = [&](size_t i, Rat coef) {
            if (i == args.size()) {
                Elem v = l_basis(n, names);
                for (auto& [m, c] : v) elem_add(out, m, c * coef);
                return;
            }
            for (auto& [nm, c] : args[static_cast<size_t>(i)]) {
                names[i] = nm;
                rec(i + 1, coef * c);
            }
        };
        rec(0, Rat(1));
        return out;
    }

private:
    // sort names ascending; returns (sorted, Koszul sign), sign 0 when a
    // repeated odd-degree name forces the symmetric tuple to vanish
    std::pair<std::vector<std::string>, int> sort_args(const std::vector<std::string>& args) const {
        size_t n = args.size();
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](size_t a, size_t b) { return args[a] < args[b]; });
        std::vector<int> degs(n);
        for (size_t i = 0; i < n; ++i) degs[i] = space.space.degree_of(args[i]);
        int sign = koszul_sign(idx, degs);
        std::vector<std::string> sorted(n);
        for (size_t i = 0; i < n; ++i) sorted[i] = args[idx[i]];
        for (size_t i = 0; i + 1 < n; ++i)
            if (sorted[i] == sorted[i + 1] && (space.space.degree_of(sorted[i]) & 1)) sign = 0;
        return {std::move(sorted), sign};
    }
};

// --- structural validation ---------------------------------------------------

struct StructureIssue {
    std::string what;
};

// degree/weight bookkeeping of the raw data: d has degree -1 and preserves
// weight; l_n has degree -1 and raises total weight by at least 1
inline std::vector<StructureIssue> check_structure_data(const CurvedLinftyStructure& s) {
    std::vector<StructureIssue> issues;
    auto deg = [&](const std::string& n) { return s.space.space.degree_of(n); };
    auto wt = [&](const std::string& n) { return s.space.weight_of(n); };
    if (s.d.degree != -1) issues.push_back({"d does not have degree -1"});
    for (auto& [from, img] : s.d.cols) {
        for (auto& [to, c] : img) {
            if (deg(to) != deg(from) - 1)
                issues.push_back({"d(" + from + ") hits " + to + " of wrong degree"});
            if (wt(to) != wt(from))
                issues.push_back({"d(" + from + ") does not preserve weight at " + to});
        }
    }
    for (auto& [n, table] : s.ops) {
        if (n == 1) {
            issues.push_back({"l_1 stored as an operation"});
            continue;
        }
        for (auto& [args, value] : table) {
            int dsum = -1, wsum = 1;
            for (auto& a : args) {
                dsum += deg(a);
                wsum += wt(a);
            }
            for (auto& [to, c] : value) {
                if (deg(to) != dsum)
                    issues.push_back({"l_" + std::to_string(n) + " value " + to +
                                      " has wrong degree"});
                if (wt(to) < wsum)
                    issues.push_back({"l_" + std::to_string(n) +
                                      " does not raise weight at " + to});
            }
        }
    }
    return issues;
}

namespace detail {
// non-decreasing tuples of basis names, filtered by total weight < cap
inline void weighted_tuples(const WeightGradedSpace& sp, int n,
                            const std::function<void(const std::vector<std::string>&)>& fn) {
    std::vector<std::string> cur(static_cast<size_t>(n));
    std::function<void(size_t, size_t, int)> rec = [&](size_t i, size_t from, int wleft) {
        if (i == cur.size()) {
            fn(cur);
            return;
        }
        for (size_t j = from; j < sp.space.basis.size(); ++j) {
            int w = sp.weight_of(sp.space.basis[j].name);
            if (w > wleft) continue;
            cur[i] = sp.space.basis[j].name;
            rec(i + 1, j, wleft - w);
        }
    };
    rec(0, 0, sp.weight_cap - 1);
}
}  // namespace detail

struct RelationFailure {
    int n = 0;
    std::vector<std::string> args;
    Elem residual;
};

// Homotopy-Jacobi relations with l_1 := d:
//   sum_{p+q=n+1} s(q) sum_{q-subsets S} eps(S) l_p(l_q(x_S), x_rest) = 0,
// where s(0) = -1 and s(q) = +1 otherwise, so the n = 1 instance reads
// d^2(x) - l_2(theta, x) = 0.
inline std::vector<RelationFailure> check_curved_linfty(const CurvedLinftyStructure& s) {
    std::vector<RelationFailure> failures;
    auto deg = [&](const std::string& n) { return s.space.space.degree_of(n); };
    for (int n = 0; n <= s.arity_cap; ++n) {
        detail::weighted_tuples(s.space, n, [&](const std::vector<std::string>& args) {
            Elem residual;
            std::vector<int> degs(args.size());
            for (size_t i = 0; i < args.size(); ++i) degs[i] = deg(args[i]);
            for (int q = 0; q <= n; ++q) {
                int p = n + 1 - q;
                if (p < 1) continue;
                if (p != 1 && p > s.arity_cap) continue;
                if (q != 1 && q > s.arity_cap) continue;
                // q-element position subsets as unshuffles
                std::vector<size_t> sel;
                std::function<void(size_t)> rec = [&](size_t from) {
                    if (static_cast<int>(sel.size()) == q) {
                        std::vector<size_t> order;
                        std::vector<char> chosen(args.size(), 0);
                        for (size_t i : sel) chosen[i] = 1;
                        for (size_t i : sel) order.push_back(i);
                        for (size_t i = 0; i < args.size(); ++i)
                            if (!chosen[i]) order.push_back(i);
                        // order[pos] = original index: invert for koszul_sign
                        std::vector<size_t> inv(args.size());
                        for (size_t pos = 0; pos < order.size(); ++pos) inv[pos] = order[pos];
                        int eps = koszul_sign(inv, degs);
                        std::vector<std::string> inner_names;
                        for (size_t i : sel) inner_names.push_back(args[i]);
                        Elem inner = q == 1 ? s.d.apply(Elem{{inner_names[0], Rat(1)}})
                                            : s.l_basis(q, inner_names);
                        if (!inner.empty()) {
                            std::vector<Elem> outer{inner};
                            for (size_t i = 0; i < args.size(); ++i)
                                if (!chosen[i]) outer.push_back(Elem{{args[i], Rat(1)}});
                            Elem term = p == 1 ? s.d.apply(outer[0]) : s.l(p, outer);
                            int sgn = (q == 0 ? -1 : 1) * eps;
                            for (auto& [m, c] : term) elem_add(residual, m, c * sgn);
                        }
                        return;
                    }
                    for (size_t i = from; i < args.size(); ++i) {
                        sel.push_back(i);
                        rec(i + 1);
                        sel.pop_back();
                    }
                };
                rec(0);
            }
            if (!residual.empty()) failures.push_back({n, args, residual});
        });
    }
    return failures;
}

// --- labeled trees and their canonical form ----------------------------------

struct LabeledTree {
    CRT shape;
    std::vector<std::string> labels;  // leaf labels in canonical planar order
};

inline std::string encode_labeled(const CRT& t, const std::vector<std::string>& labels) {
    size_t pos = 0;
    std::function<std::string(const CRT&)> rec = [&](const CRT& n) -> std::string {
        if (n.is_leaf) return "[" + labels.at(pos++) + "]";
        if (n.children.empty()) return "*";
        std::string s = "(";
        for (auto& c : n.children) s += rec(c);
        return s + ")";
    };
    return rec(t);
}

// Canonical form of a labeled tree: children sorted by labeled encoding, each
// adjacent block swap contributing (-1)^{p q} with block parity p =
// (#vertices + total label degree) mod 2. Returns sign 0 when the element
// vanishes (two identical sibling blocks of odd parity).
inline std::pair<LabeledTree, int> canonical_labeled(
    const CRT& shape, const std::vector<std::string>& labels,
    const std::function<int(const std::string&)>& degree_of) {
    if (labels.size() != static_cast<size_t>(shape.arity()))
        fail_argument("label count does not match arity");
    struct Block {
        std::string enc;
        CRT tree;
        std::vector<std::string> labels;
        int parity = 0;
    };
    int sign = 1;
    size_t pos = 0;
    std::function<Block(const CRT&)> rec = [&](const CRT& n) -> Block {
        if (n.is_leaf) {
            const std::string& l = labels[pos++];
            return {"[" + l + "]", CRT::leaf(), {l}, degree_of(l) & 1};
        }
        if (n.children.empty()) return {"*", CRT::cork(), {}, 1};
        std::vector<Block> kids;
        kids.reserve(n.children.size());
        for (auto& c : n.children) kids.push_back(rec(c));
        // insertion sort, tracking block-swap signs
        for (size_t i = 1; i < kids.size(); ++i) {
            for (size_t j = i; j > 0 && kids[j].enc < kids[j - 1].enc; --j) {
                if (kids[j].parity && kids[j - 1].parity) sign = -sign;
                std::swap(kids[j], kids[j - 1]);
            }
        }
        for (size_t i = 0; i + 1 < kids.size(); ++i)
            if (kids[i].enc == kids[i + 1].enc && kids[i].parity) sign = 0;
        Block out;
        out.enc = "(";
        out.parity = 1;
        CRT v;
        v.is_leaf = false;
        for (auto& k : kids) {
            out.enc += k.enc;
            out.parity ^= k.parity;
            v.children.push_back(k.tree);
            out.labels.insert(out.labels.end(), k.labels.begin(), k.labels.end());
        }
        out.enc += ")";
        // children already canonically sorted; build the CRT directly
        out.tree = std::move(v);
        return out;
    };
    Block b = rec(shape);
    return {LabeledTree{std::move(b.tree), std::move(b.labels)}, sign};
}

// degree of tau(g_1..g_k) = sum |g_i| - #vertices(tau)
inline int labeled_degree(const GradedSpace& sp, const LabeledTree& t) {
    int d = -t.shape.num_vertices();
    for (auto& l : t.labels) d += sp.degree_of(l);
    return d;
}

// total weight = weight(tau) + sum of label weights
inline int labeled_weight(const WeightGradedSpace& sp, const LabeledTree& t,
                          int label_weight_override = -1) {
    int w = t.shape.weight();
    for (auto& l : t.labels)
        w += label_weight_override >= 0 ? label_weight_override : sp.weight_of(l);
    return w;
}

// Finite rational combination of canonical labeled trees.
struct TreeSeries {
    // canonical labeled encoding -> (tree, coefficient)
    std::map<std::string, std::pair<LabeledTree, Rat>> terms;

    // canonicalizes, applies the orientation sign, merges
    void add(const CRT& shape, const std::vector<std::string>& labels, const Rat& coef,
             const std::function<int(const std::string&)>& degree_of) {
        if (coef == 0) return;
        auto [lt, sign] = canonical_labeled(shape, labels, degree_of);
        if (sign == 0) return;
        std::string key = encode_labeled(lt.shape, lt.labels);
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(key, std::make_pair(std::move(lt), coef * sign));
        } else {
            it->second.second += coef * sign;
            if (it->second.second == 0) terms.erase(it);
        }
    }

    void add_series(const TreeSeries& other, const Rat& scale,
                    const std::function<int(const std::string&)>& degree_of) {
        for (auto& [k, tc] : other.terms) add(tc.first.shape, tc.first.labels, tc.second * scale,
                                              degree_of);
    }

    bool empty() const { return terms.empty(); }
};

inline std::string series_pretty(const TreeSeries& s) {
    if (s.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [k, tc] : s.terms) {
        Rat c = tc.second;
        if (first) {
            if (c < 0) { out += "-"; c = -c; }
        } else {
            out += c < 0 ? " - " : " + ";
            if (c < 0) c = -c;
        }
        if (c != 1) out += rat_pretty(c) + " ";
        out += k;
        first = false;
    }
    return out;
}

// --- corked-tree evaluation --------------------------------------------------

// evaluate the shape with explicit leaf values in planar order; pure recursion,
// the canonical prefix word is the reference orientation so no extra signs
inline Elem eval_shape(const CurvedLinftyStructure& s, const CRT& t,
                       const std::vector<Elem>& leaf_vals) {
    size_t pos = 0;
    std::function<Elem(const CRT&)> rec = [&](const CRT& n) -> Elem {
        if (n.is_leaf) return leaf_vals.at(pos++);
        int m = static_cast<int>(n.children.size());
        if (m != 0 && m > s.arity_cap) return {};  // l_m = 0 beyond the arity cap
        std::vector<Elem> args;
        args.reserve(n.children.size());
        for (auto& c : n.children) args.push_back(rec(c));
        return s.l(m, args);
    };
    return rec(t);
}

inline Elem eval_tree(const CurvedLinftyStructure& s, const LabeledTree& t) {
    std::vector<Elem> vals;
    int in_weight = t.shape.weight();
    for (auto& l : t.labels) {
        if (!s.space.space.has(l)) fail_argument("label not in the space: " + l);
        in_weight += s.space.weight_of(l);
        vals.push_back(Elem{{l, Rat(1)}});
    }
    Elem out = eval_shape(s, t.shape, vals);
    if (s.space.min_weight(out) < std::min(in_weight, s.space.weight_cap))
        fail_precondition("evaluation violated weight monotonicity");
    return out;
}

inline Elem eval_series(const CurvedLinftyStructure& s, const TreeSeries& series) {
    Elem out;
    for (auto& [k, tc] : series.terms) {
        Elem v = eval_tree(s, tc.first);
        for (auto& [m, c] : v) elem_add(out, m, c * tc.second);
    }
    return out;
}

// --- Maurer-Cartan, twisting -------------------------------------------------

// d(alpha) + sum_{n != 1} l_n(alpha,..,alpha)/n!
inline Elem mc_residual(const CurvedLinftyStructure& s, const Elem& alpha) {
    auto deg = elem_degree(s.space.space, alpha);
    if (deg && *deg != 0) fail_argument("Maurer-Cartan candidate must have degree 0");
    Elem out = s.d.apply(alpha);
    for (int n = 0; n <= s.arity_cap; ++n) {
        if (n == 1) continue;
        std::vector<Elem> args(static_cast<size_t>(n), alpha);
        Elem v = s.l(n, args);
        Rat inv = Rat(1) / Rat(factorial(static_cast<unsigned>(n)));
        for (auto& [m, c] : v) elem_add(out, m, c * inv);
    }
    return out;
}

inline bool is_mc(const CurvedLinftyStructure& s, const Elem& alpha) {
    return mc_residual(s, alpha).empty();
}

// d^alpha = d + sum_{n >= 2} l_n(alpha^{n-1}, -)/(n-1)!
inline GradedMap twisted_differential(const CurvedLinftyStructure& s, const Elem& alpha) {
    Elem res = mc_residual(s, alpha);
    if (!res.empty())
        fail_precondition("not a Maurer-Cartan element; residual = " + elem_pretty(res));
    GradedMap out;
    out.source = s.space.space;
    out.target = s.space.space;
    out.degree = -1;
    for (auto& b : s.space.space.basis) {
        Elem img = s.d.apply(Elem{{b.name, Rat(1)}});
        for (int n = 2; n <= s.arity_cap; ++n) {
            std::vector<Elem> args(static_cast<size_t>(n - 1), alpha);
            args.push_back(Elem{{b.name, Rat(1)}});
            Elem v = s.l(n, args);
            Rat inv = Rat(1) / Rat(factorial(static_cast<unsigned>(n - 1)));
            for (auto& [m, c] : v) elem_add(img, m, c * inv);
        }
        out.set(b.name, std::move(img));
    }
    return out;
}

inline HomologyResult twisted_homology(const CurvedLinftyStructure& s, const Elem& alpha, int n) {
    return homology(twisted_differential(s, alpha), n);
}

}  // namespace corolla
