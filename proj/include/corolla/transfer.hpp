#pragma once

// Homotopy transfer of the commutative algebra structure of polynomial forms
// onto Whitney cochains along the simplicial contraction, the dual elementary
// decompositions on cellular chains, and the cobar differential table of the
// Maurer-Cartan algebras mc^n.

#include <set>

#include "corolla/forms.hpp"
#include "corolla/linfty.hpp"
#include "corolla/tree.hpp"

namespace corolla {

inline bool has_cork(const CRT& t) {
    if (t.is_leaf) return false;
    if (t.children.empty()) return true;
    for (auto& c : t.children)
        if (has_cork(c)) return true;
    return false;
}

// Transferred operation mu_tau on Whitney cochains: leaves carry i, internal
// edges h, vertices the wedge product, the root p. The bare cork acts as
// p(1); corks anywhere else make the operation vanish.
inline Elem transferred_mu(const Dupont& D, const CRT& tau, const std::vector<Elem>& inputs) {
    if (static_cast<size_t>(tau.arity()) != inputs.size())
        fail_argument("transferred_mu: input count does not match arity");
    if (!tau.is_leaf && tau.children.empty()) return D.p(PolyForm::one(D.n));
    size_t pos = 0;
    bool dead = false;
    std::function<PolyForm(const CRT&, bool)> rec = [&](const CRT& t, bool root) -> PolyForm {
        if (t.is_leaf) return D.i(inputs[pos++]);
        if (t.children.empty()) {  // cork below the root: curvature of forms = 0
            dead = true;
            return PolyForm::zero(D.n);
        }
        PolyForm prod = PolyForm::one(D.n);
        for (auto& c : t.children) {
            PolyForm v = rec(c, false);
            if (!c.is_leaf && !c.children.empty()) v = D.h(v);  // internal edge
            prod = wedge(prod, v);
            if (dead) return PolyForm::zero(D.n);
        }
        (void)root;
        return prod;
    };
    PolyForm form = rec(tau, true);
    if (dead) return {};
    return D.p(form);
}

// Coefficient of a_{I_1} x ... x a_{I_m} in the elementary decomposition of
// a_I: the transpose pairing <a_I, mu_tau(w_{I_1},..,w_{I_m})>.
struct DecompEntry {
    std::vector<std::vector<int>> parts;  // (I_1, .., I_m)
    Rat coef;
};

inline std::vector<DecompEntry> decomp_coeffs(const Dupont& D, const CRT& tau,
                                              const std::vector<int>& I) {
    std::vector<DecompEntry> out;
    auto subsets = nonempty_subsets(D.n);
    int m = tau.arity();
    std::vector<size_t> pick(static_cast<size_t>(m), 0);
    std::string target = cochain_name(I);
    while (true) {
        std::vector<Elem> inputs;
        std::vector<std::vector<int>> parts;
        for (size_t k = 0; k < pick.size(); ++k) {
            parts.push_back(subsets[pick[k]]);
            inputs.push_back(Elem{{cochain_name(subsets[pick[k]]), Rat(1)}});
        }
        Elem mu = transferred_mu(D, tau, inputs);
        auto it = mu.find(target);
        if (it != mu.end()) out.push_back({parts, it->second});
        if (m == 0) break;
        size_t k = 0;
        while (k < pick.size() && ++pick[k] == subsets.size()) pick[k++] = 0;
        if (k == pick.size()) break;
    }
    return out;
}

// --- coalgebras with elementary decompositions --------------------------------

// tensor word over the chain basis -> coefficient; the empty word spans the
// ground field (corks decompose into it)
using TensorElem = std::map<std::vector<std::string>, Rat>;

inline void tensor_add(TensorElem& t, const std::vector<std::string>& w, const Rat& c) {
    if (c == 0) return;
    auto it = t.find(w);
    if (it == t.end()) t.emplace(w, c);
    else {
        it->second += c;
        if (it->second == 0) t.erase(it);
    }
}

struct UccCoalgebra {
    GradedSpace space;
    GradedMap d;  // chain differential, degree -1
    // tree encoding -> (basis name -> decomposition of that element)
    std::map<std::string, std::map<std::string, TensorElem>> delta;
    std::map<std::string, CRT> trees;

    static const TensorElem& zero() {
        static const TensorElem z;
        return z;
    }
    const TensorElem& delta_of(const std::string& tree_enc, const std::string& name) const {
        auto it = delta.find(tree_enc);
        if (it == delta.end()) return zero();
        auto jt = it->second.find(name);
        return jt == it->second.end() ? zero() : jt->second;
    }
};

// Cellular chains of the n-simplex with the decompositions dual to the
// transferred operations; trees of weight > n decompose to zero (the
// transferred operation raises form degree past the top), so the tables stop
// there.
inline UccCoalgebra cellular_coalgebra(int n, int arity_cap = 4) {
    if (n < 0) fail_argument("negative simplex dimension");
    Dupont D = build_contraction(n);
    UccCoalgebra C;
    C.space = chain_space(n);
    C.d.source = C.space;
    C.d.target = C.space;
    C.d.degree = -1;
    auto subsets = nonempty_subsets(n);
    for (auto& I : subsets) {
        if (I.size() < 2) continue;
        Elem img;
        for (size_t l = 0; l < I.size(); ++l) {
            std::vector<int> J;
            for (size_t k = 0; k < I.size(); ++k)
                if (k != l) J.push_back(I[k]);
            elem_add(img, chain_name(J), Rat(l % 2 ? -1 : 1));
        }
        C.d.set(chain_name(I), std::move(img));
    }

    std::vector<CRT> taus{CRT::cork()};
    for (int m = 2; m <= arity_cap; ++m)
        for (int w = 0; w <= n; ++w)
            for (auto& t : enumerate_crt(m, w))
                if (!has_cork(t)) taus.push_back(t);
    for (auto& tau : taus) {
        std::string enc = tau.encode();
        C.trees[enc] = tau;
        auto& table = C.delta[enc];
        for (auto& I : subsets) {
            TensorElem t;
            for (auto& e : decomp_coeffs(D, tau, I)) {
                std::vector<std::string> word;
                for (auto& P : e.parts) word.push_back(chain_name(P));
                tensor_add(t, word, e.coef);
            }
            if (!t.empty()) table[chain_name(I)] = std::move(t);
        }
    }
    return C;
}

// --- coherence of the transferred operations ----------------------------------

// Evaluate the tree composite with the homotopy on one chosen internal edge
// replaced: by i.p (mode true, the "split" composite) or by the identity
// (mode false, the "contracted" composite). Everything else as in
// transferred_mu.
inline Elem transferred_mu_replaced(const Dupont& D, const CRT& tau, const EdgePath& e,
                                    bool ip, const std::vector<Elem>& inputs) {
    if (static_cast<size_t>(tau.arity()) != inputs.size())
        fail_argument("transferred_mu_replaced: input count does not match arity");
    size_t pos = 0;
    EdgePath path;
    std::function<PolyForm(const CRT&)> rec = [&](const CRT& t) -> PolyForm {
        PolyForm prod = PolyForm::one(D.n);
        for (size_t ci = 0; ci < t.children.size(); ++ci) {
            auto& c = t.children[ci];
            PolyForm v;
            if (c.is_leaf) {
                v = D.i(inputs[pos++]);
            } else if (c.children.empty()) {
                return PolyForm::zero(D.n);
            } else {
                path.push_back(static_cast<int>(ci));
                v = rec(c);
                if (path == e) {
                    if (ip) v = D.i(D.p(v));
                } else {
                    v = D.h(v);
                }
                path.pop_back();
            }
            prod = wedge(prod, v);
        }
        return prod;
    };
    if (tau.is_leaf || tau.children.empty()) fail_argument("replaced composite needs a vertex root");
    return D.p(rec(tau));
}

// Signs of pushing the de Rham differential through the planar composite:
// each wedge factor passed contributes its form parity (content degree, plus
// the homotopy edges it contains including its own), and each homotopy
// crossed on the way down flips the sign (h is odd). Records the sign parity
// at every leaf and at every internal edge.
inline void composite_d_signs(const CRT& tau, const std::vector<int>& leaf_degrees,
                              std::vector<int>& leaf_sign,
                              std::map<EdgePath, int>& edge_sign) {
    leaf_sign.assign(leaf_degrees.size(), 0);
    edge_sign.clear();
    size_t pos = 0;
    EdgePath path;
    // returns (content degree + internal edges incl. the connecting one) mod 2
    std::function<int(const CRT&, int)> rec = [&](const CRT& t, int prefix) -> int {
        int total = 0;
        for (size_t ci = 0; ci < t.children.size(); ++ci) {
            auto& c = t.children[ci];
            if (c.is_leaf) {
                leaf_sign[pos] = prefix & 1;
                prefix += leaf_degrees[pos];
                total += leaf_degrees[pos];
                ++pos;
            } else if (c.children.empty()) {
                prefix += 1;  // the curvature slot; never reached (composite is 0)
                total += 1;
            } else {
                path.push_back(static_cast<int>(ci));
                edge_sign[path] = prefix & 1;
                int inner = rec(c, prefix + 1);  // crossing h flips
                path.pop_back();
                prefix += inner + 1;  // the h on this edge is odd
                total += inner + 1;
            }
        }
        return total;
    };
    rec(tau, 0);
}

struct CoherenceFailure {
    std::string tree;
    std::vector<std::string> inputs;
    Elem residual;
};

// The transferred operations satisfy, for every cork-free tree (a consequence
// of i p - id = d h + h d pushed through the composite):
//   d_cell(mu_tau(u)) = sum_j (-1)^{L_j} mu_tau(.., d_cell u_j, ..)
//     + sum_e (-1)^{L_e} (mu with h_e -> i p  -  mu with h_e -> id),
// with the parities L recorded by composite_d_signs. The elementary
// decompositions are the transposes of the mu's, so this identity certifies
// the corresponding relation on every cellular coalgebra table.
inline std::vector<CoherenceFailure> check_transfer_coherence(int n, int arity_cap = 4,
                                                              int max_weight = 3) {
    Dupont D = build_contraction(n);
    std::vector<CoherenceFailure> out;
    auto subsets = nonempty_subsets(n);
    for (int m = 2; m <= arity_cap; ++m)
        for (int w = 0; w <= max_weight; ++w)
            for (auto& tau : enumerate_crt(m, w)) {
                if (has_cork(tau)) continue;
                auto edges = internal_edges(tau);
                std::vector<size_t> pick(static_cast<size_t>(m), 0);
                while (true) {
                    std::vector<Elem> inputs;
                    std::vector<int> degs;
                    std::vector<std::string> names;
                    int degsum = 0;
                    for (size_t k = 0; k < pick.size(); ++k) {
                        auto& I = subsets[pick[k]];
                        names.push_back(cochain_name(I));
                        inputs.push_back(Elem{{names.back(), Rat(1)}});
                        degs.push_back(static_cast<int>(I.size()) - 1);
                        degsum += degs.back();
                    }
                    // every term vanishes outside the cochain degree range
                    if (degsum - w + 1 >= 0 && degsum - w + 1 <= n + 1) {
                        std::vector<int> lsign;
                        std::map<EdgePath, int> esign;
                        composite_d_signs(tau, degs, lsign, esign);
                        Elem res = D.d_cell.apply(transferred_mu(D, tau, inputs));
                        for (size_t j = 0; j < inputs.size(); ++j) {
                            auto dj = inputs;
                            dj[j] = D.d_cell.apply(inputs[j]);
                            Elem v = transferred_mu(D, tau, dj);
                            Rat s(lsign[j] ? 1 : -1);
                            for (auto& [nm, c] : v) elem_add(res, nm, c * s);
                        }
                        for (auto& e : edges) {
                            Rat s(esign.at(e) ? 1 : -1);
                            Elem sp = transferred_mu_replaced(D, tau, e, true, inputs);
                            for (auto& [nm, c] : sp) elem_add(res, nm, c * s);
                            Elem ct = transferred_mu_replaced(D, tau, e, false, inputs);
                            for (auto& [nm, c] : ct) elem_add(res, nm, -c * s);
                        }
                        if (!res.empty()) out.push_back({tau.encode(), names, res});
                    }
                    size_t k = 0;
                    while (k < pick.size() && ++pick[k] == subsets.size()) pick[k++] = 0;
                    if (k == pick.size()) break;
                }
            }
    return out;
}

// the ground field as a coalgebra: one group-like element in degree 0
inline UccCoalgebra grouplike_coalgebra(int arity_cap = 4) {
    UccCoalgebra C;
    C.space = GradedSpace({{"e", 0}});
    C.d = GradedMap{C.space, C.space, -1, {}};
    {
        std::string enc = CRT::cork().encode();
        C.trees[enc] = CRT::cork();
        C.delta[enc]["e"] = TensorElem{{{}, Rat(1)}};
    }
    for (int m = 2; m <= arity_cap; ++m) {
        CRT t = CRT::corolla(m);
        C.trees[t.encode()] = t;
        C.delta[t.encode()]["e"] =
            TensorElem{{std::vector<std::string>(static_cast<size_t>(m), "e"), Rat(1)}};
    }
    return C;
}

// --- the Maurer-Cartan algebra mc^n ------------------------------------------

struct McnAlgebra {
    int n = 0;
    int weight_cap = 4;
    bool display_reading = false;  // coefficient 1/(|Aut| lambda) instead of lambda/|Aut|
    GradedSpace chains;            // generators a_I, degree |I| - 1, weight 1 each
    std::map<std::string, TreeSeries> d_cobar;

    std::function<int(const std::string&)> degree_fn() const {
        const GradedSpace* sp = &chains;
        return [sp](const std::string& s) { return sp->degree_of(s); };
    }
};

// total weight of a generator-labeled tree: edges + one per label
inline int mcn_term_weight(const CRT& shape, size_t nlabels) {
    return shape.weight() + static_cast<int>(nlabels);
}

inline void mcn_series_add(McnAlgebra& M, TreeSeries& s, const CRT& shape,
                           const std::vector<std::string>& labels, const Rat& coef) {
    if (mcn_term_weight(shape, labels.size()) >= M.weight_cap) return;
    s.add(shape, labels, coef, M.degree_fn());
}

// label_filter, when given, restricts which generators may appear as labels of
// the tree terms (the linear face parts are always kept in full); this is a
// sound truncation whenever every generator outside the filter is known to be
// sent to zero by the assignments that will be evaluated against the table
inline McnAlgebra build_mcn(int n, int weight_cap, bool display_reading = false,
                            const std::set<std::string>* label_filter = nullptr) {
    if (n < 0) fail_argument("negative simplex dimension");
    if (n > 2) fail_capability("mc^n supported for n <= 2");
    Dupont D = build_contraction(n);
    McnAlgebra M;
    M.n = n;
    M.weight_cap = weight_cap;
    M.display_reading = display_reading;
    M.chains = chain_space(n);
    auto subsets = nonempty_subsets(n);
    for (auto& I : subsets) M.d_cobar[chain_name(I)] = TreeSeries{};

    // linear part: alternating face sum for |I| >= 2
    for (auto& I : subsets) {
        if (I.size() < 2) continue;
        TreeSeries& s = M.d_cobar[chain_name(I)];
        for (size_t l = 0; l < I.size(); ++l) {
            std::vector<int> J;
            for (size_t k = 0; k < I.size(); ++k)
                if (k != l) J.push_back(I[k]);
            mcn_series_add(M, s, CRT::leaf(), {chain_name(J)}, Rat(l % 2 ? -1 : 1));
        }
    }

    // tree part: -(-1)^{w(tau)} lambda(word)/|Aut tau| * tau(a_{I_1},..,a_{I_m})
    // summed over ordered label words, for every corked rooted tree; corks
    // inside a tree act as zero, so effectively the bare cork plus all
    // cork-free trees of arity >= 2 contribute. |Aut tau| compensates the
    // overcount of the canonical representative by the word sum, and the
    // weight sign accounts for the degree-1 homotopies on the internal edges
    // (both match the convolution structure, which pins this convention)
    std::vector<CRT> taus{CRT::cork()};
    for (int m = 2; m + 0 < weight_cap; ++m)
        for (int w = 0; m + w < weight_cap; ++w)
            for (auto& t : enumerate_crt(m, w))
                if (!has_cork(t)) taus.push_back(t);

    std::vector<size_t> lab;
    for (size_t i = 0; i < subsets.size(); ++i)
        if (!label_filter || label_filter->count(chain_name(subsets[i]))) lab.push_back(i);

    for (auto& tau : taus) {
        int m = tau.arity();
        if (m > 0 && lab.empty()) continue;
        Rat E(aut_order(tau));
        int wsign = tau.weight() & 1 ? -1 : 1;
        std::vector<size_t> pick(static_cast<size_t>(m), 0);
        while (true) {
            std::vector<Elem> inputs;
            std::vector<std::string> labels;
            int degsum = 0;
            for (size_t k = 0; k < pick.size(); ++k) {
                auto& I = subsets[lab[pick[k]]];
                degsum += static_cast<int>(I.size()) - 1;
                labels.push_back(chain_name(I));
                inputs.push_back(Elem{{cochain_name(I), Rat(1)}});
            }
            // the output cochain degree is tau.weight() - degsum; skip tuples
            // that cannot land in the cochain range
            if (degsum - tau.weight() >= 0 && degsum - tau.weight() <= n) {
                Elem mu = transferred_mu(D, tau, inputs);
                for (auto& [wname, lambda] : mu) {
                    std::string aname = "a" + wname.substr(1);
                    Rat coef = display_reading ? Rat(1) / (E * lambda) : lambda / E;
                    mcn_series_add(M, M.d_cobar[aname], tau, labels, -coef * wsign);
                }
            }
            if (m == 0) break;
            size_t k = 0;
            while (k < pick.size() && ++pick[k] == lab.size()) pick[k++] = 0;
            if (k == pick.size()) break;
        }
    }
    return M;
}

// --- the free pre-differential -----------------------------------------------

// d on a generator-labeled tree in the free weight-truncated structure:
// at each leaf substitute the cobar differential of its generator; at each
// vertex insert a cork sibling and split the children into two vertices; each
// action site carries the parity of the prefix word before it, splits carry
// the Koszul sign of moving the chosen blocks to the front.
inline TreeSeries free_differential(const McnAlgebra& M, const LabeledTree& T) {
    TreeSeries out;
    auto degf = M.degree_fn();

    struct Block {
        int parity = 0;  // (#vertices + label degrees) mod 2
    };
    std::function<int(const CRT&, size_t&)> block_parity = [&](const CRT& t, size_t& lp) -> int {
        if (t.is_leaf) return degf(T.labels[lp++]) & 1;
        int p = 1;
        for (auto& c : t.children) p ^= block_parity(c, lp);
        return p;
    };

    // rebuild the full tree with the subtree at a given node replaced
    std::function<void(const CRT&, size_t, int)> visit;  // (node, leaf offset, prefix parity)

    // helper: emit a term where the subtree rooted at `path` is replaced
    auto replace_at = [&](const std::vector<int>& path, const CRT& repl,
                          const std::vector<std::string>& inner_labels, size_t leaf_at,
                          size_t leaf_count, const Rat& coef) {
        // build new shape
        std::function<CRT(const CRT&, size_t)> rebuild = [&](const CRT& t, size_t depth) -> CRT {
            if (depth == path.size()) return repl;
            CRT out2 = t;
            out2.children[static_cast<size_t>(path[depth])] =
                rebuild(t.children[static_cast<size_t>(path[depth])], depth + 1);
            return out2;
        };
        CRT shape = rebuild(T.shape, 0);
        std::vector<std::string> labels(T.labels.begin(),
                                        T.labels.begin() + static_cast<long>(leaf_at));
        labels.insert(labels.end(), inner_labels.begin(), inner_labels.end());
        labels.insert(labels.end(), T.labels.begin() + static_cast<long>(leaf_at + leaf_count),
                      T.labels.end());
        if (mcn_term_weight(shape, labels.size()) < M.weight_cap)
            out.add(shape, labels, coef, degf);
    };

    std::vector<int> path;
    std::function<void(const CRT&, size_t&, int&)> walk = [&](const CRT& t, size_t& leaf_pos,
                                                              int& prefix) {
        if (t.is_leaf) {
            // substitute d(a) for the label here
            const std::string& g = T.labels[leaf_pos];
            auto it = M.d_cobar.find(g);
            if (it != M.d_cobar.end()) {
                for (auto& [key, tc] : it->second.terms)
                    replace_at(path, tc.first.shape, tc.first.labels, leaf_pos, 1,
                               tc.second * (prefix ? 1 : -1));
            }
            prefix ^= degf(g) & 1;
            ++leaf_pos;
            return;
        }
        if (!t.children.empty()) {
            int site_sign = prefix ? -1 : 1;
            size_t k = t.children.size();
            // leaves under this subtree start at leaf_pos
            std::vector<int> parities(k);
            {
                size_t lp = leaf_pos;
                for (size_t c = 0; c < k; ++c) parities[c] = block_parity(t.children[c], lp);
            }
            size_t total_leaves = static_cast<size_t>(t.arity());
            // cork sibling: l_{k+1}(theta, x_1..x_k)
            {
                CRT repl;
                repl.is_leaf = false;
                repl.children.push_back(CRT::cork());
                for (auto& c : t.children) repl.children.push_back(c);
                std::vector<std::string> inner(T.labels.begin() + static_cast<long>(leaf_pos),
                                               T.labels.begin() +
                                                   static_cast<long>(leaf_pos + total_leaves));
                replace_at(path, repl, inner, leaf_pos, total_leaves, Rat(site_sign));
            }
            // splits: choose the children of the new upper vertex, 2 <= |S| < k
            for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
                int chosen = __builtin_popcount(mask);
                if (chosen < 2 || chosen == static_cast<int>(k)) continue;
                // Koszul sign of moving the chosen blocks to the front
                int eps = 1;
                for (size_t a = 0; a < k; ++a) {
                    if (!(mask & (1u << a))) continue;
                    for (size_t b = 0; b < a; ++b)
                        if (!(mask & (1u << b)) && parities[a] && parities[b]) eps = -eps;
                }
                CRT upper;
                upper.is_leaf = false;
                CRT repl;
                repl.is_leaf = false;
                // leaves: chosen blocks first, then the rest
                std::vector<std::string> inner;
                {
                    size_t lp = leaf_pos;
                    std::vector<std::pair<size_t, size_t>> spans(k);  // leaf span per child
                    for (size_t c = 0; c < k; ++c) {
                        size_t na = static_cast<size_t>(t.children[c].arity());
                        spans[c] = {lp, na};
                        lp += na;
                    }
                    for (size_t c = 0; c < k; ++c)
                        if (mask & (1u << c)) {
                            upper.children.push_back(t.children[c]);
                            for (size_t q = 0; q < spans[c].second; ++q)
                                inner.push_back(T.labels[spans[c].first + q]);
                        }
                    repl.children.push_back(upper);
                    for (size_t c = 0; c < k; ++c)
                        if (!(mask & (1u << c))) {
                            repl.children.push_back(t.children[c]);
                            for (size_t q = 0; q < spans[c].second; ++q)
                                inner.push_back(T.labels[spans[c].first + q]);
                        }
                }
                replace_at(path, repl, inner, leaf_pos, total_leaves, Rat(site_sign * eps));
            }
        }
        prefix ^= 1;  // the vertex (or cork) symbol itself
        for (size_t c = 0; c < t.children.size(); ++c) {
            path.push_back(static_cast<int>(c));
            walk(t.children[c], leaf_pos, prefix);
            path.pop_back();
        }
    };
    size_t lp = 0;
    int prefix = 0;
    walk(T.shape, lp, prefix);
    return out;
}

inline TreeSeries free_differential(const McnAlgebra& M, const TreeSeries& s) {
    TreeSeries out;
    auto degf = M.degree_fn();
    for (auto& [k, tc] : s.terms) {
        TreeSeries ds = free_differential(M, tc.first);
        out.add_series(ds, tc.second, degf);
    }
    return out;
}

// d^2(a_I) = l_2(l_0, a_I): the right-hand side is the tree with a cork and
// the generator under one binary vertex.
inline std::vector<std::pair<std::string, TreeSeries>> check_mcn_curvature(const McnAlgebra& M) {
    std::vector<std::pair<std::string, TreeSeries>> failures;
    auto degf = M.degree_fn();
    for (auto& [gen, dseries] : M.d_cobar) {
        TreeSeries lhs = free_differential(M, dseries);
        CRT shape;
        shape.is_leaf = false;
        shape.children.push_back(CRT::cork());
        shape.children.push_back(CRT::leaf());
        TreeSeries rhs;
        if (mcn_term_weight(shape, 1) < M.weight_cap) rhs.add(shape, {gen}, Rat(1), degf);
        lhs.add_series(rhs, Rat(-1), degf);
        if (!lhs.empty()) failures.push_back({gen, lhs});
    }
    return failures;
}

}  // namespace corolla
