#pragma once

// Convolution structure on hom(C, g) for a coalgebra C with elementary
// decompositions and a curved L-infinity structure g: basis pairs c > x,
// differential d_g . f - (-1)^{|f|} f . d_C, curvature the counit times the
// curvature of g, and l_m summing the tree operations of g over the
// elementary decompositions of arity m.

#include "corolla/transfer.hpp"

namespace corolla {

inline std::string hom_basis_name(const std::string& c, const std::string& x) {
    return c + ">" + x;
}

inline std::pair<std::string, std::string> hom_name_parts(const std::string& n) {
    auto p = n.find('>');
    if (p == std::string::npos) fail_argument("not a hom basis name: " + n);
    return {n.substr(0, p), n.substr(p + 1)};
}

inline CurvedLinftyStructure convolution(const UccCoalgebra& C,
                                         const CurvedLinftyStructure& g) {
    std::vector<BasisElem> basis;
    std::map<std::string, int> wt;
    for (auto& cb : C.space.basis)
        for (auto& xb : g.space.space.basis) {
            std::string nm = hom_basis_name(cb.name, xb.name);
            basis.push_back({nm, xb.degree - cb.degree});
            wt[nm] = g.space.weight_of(xb.name);
        }
    CurvedLinftyStructure s;
    s.space = WeightGradedSpace(GradedSpace(std::move(basis)), std::move(wt),
                                g.space.weight_cap);
    s.arity_cap = g.arity_cap;
    s.d = GradedMap{s.space.space, s.space.space, -1, {}};

    auto fdeg = [&](const std::string& nm) { return s.space.space.degree_of(nm); };
    auto cdeg = [&](const std::string& nm) { return C.space.degree_of(nm); };

    // d(f) = d_g . f - (-1)^{|f|} f . d_C
    for (auto& cb : C.space.basis)
        for (auto& xb : g.space.space.basis) {
            std::string nm = hom_basis_name(cb.name, xb.name);
            Elem img;
            for (auto& [y, v] : g.d.apply(Elem{{xb.name, Rat(1)}}))
                elem_add(img, hom_basis_name(cb.name, y), v);
            int fs = (xb.degree - cb.degree) & 1 ? 1 : -1;
            for (auto& cb2 : C.space.basis) {
                auto it = C.d.cols.find(cb2.name);
                if (it == C.d.cols.end()) continue;
                auto jt = it->second.find(cb.name);
                if (jt == it->second.end()) continue;
                elem_add(img, hom_basis_name(cb2.name, xb.name), jt->second * fs);
            }
            s.d.set(nm, std::move(img));
        }

    // curvature: counit (the single-cork decomposition) times theta
    {
        Elem th = g.theta();
        Elem v;
        std::string cork = CRT::cork().encode();
        for (auto& cb : C.space.basis) {
            auto& t = C.delta_of(cork, cb.name);
            auto it = t.find({});
            if (it == t.end()) continue;
            for (auto& [y, c] : th) elem_add(v, hom_basis_name(cb.name, y), c * it->second);
        }
        s.set_op(0, {}, v);
    }

    // l_m(f_1..f_m)(c) = sum_tau s(tau)/|Aut tau| sum_sigma eps(sigma)
    //                    kappa(word) * mix sign * tau-evaluation in g,
    // where the word is forced (slot i carries the source chain of
    // f_{sigma(i)}), |Aut tau| compensates the overcount of the canonical
    // planar representative by the permutation sum, and the tree sign
    // s(tau) = (-1)^{w(tau)(1 + sum|f_j|)} accounts for the degree-1
    // homotopies on the internal edges crossing the maps
    std::vector<std::string> names;
    for (auto& b : s.space.space.basis) names.push_back(b.name);
    std::sort(names.begin(), names.end());
    for (int m = 2; m <= s.arity_cap; ++m) {
        std::vector<size_t> pick(static_cast<size_t>(m), 0);
        std::function<void(size_t, size_t, int)> tuples = [&](size_t slot, size_t from,
                                                              int wsum) {
            if (slot == pick.size()) {
                std::vector<std::string> fs(static_cast<size_t>(m));
                std::vector<std::string> fc(static_cast<size_t>(m)), fx(static_cast<size_t>(m));
                std::vector<int> fd(static_cast<size_t>(m));
                int fdsum = 0;
                for (int i = 0; i < m; ++i) {
                    fs[static_cast<size_t>(i)] = names[pick[static_cast<size_t>(i)]];
                    auto [c, x] = hom_name_parts(fs[static_cast<size_t>(i)]);
                    fc[static_cast<size_t>(i)] = c;
                    fx[static_cast<size_t>(i)] = x;
                    fd[static_cast<size_t>(i)] = fdeg(fs[static_cast<size_t>(i)]);
                    fdsum += fd[static_cast<size_t>(i)];
                }
                Elem value;
                std::vector<size_t> perm(static_cast<size_t>(m));
                for (int i = 0; i < m; ++i) perm[static_cast<size_t>(i)] = static_cast<size_t>(i);
                do {
                    int eps = koszul_sign(perm, fd);
                    if (eps == 0) continue;
                    std::vector<std::string> word(static_cast<size_t>(m));
                    std::vector<Elem> leaves(static_cast<size_t>(m));
                    int mix = 0;
                    int pre = 0;  // chain degrees passed so far
                    for (int i = 0; i < m; ++i) {
                        auto& f = perm[static_cast<size_t>(i)];
                        word[static_cast<size_t>(i)] = fc[f];
                        leaves[static_cast<size_t>(i)] = Elem{{fx[f], Rat(1)}};
                        if ((fd[f] & 1) && (pre & 1)) mix ^= 1;
                        pre += cdeg(fc[f]);
                    }
                    for (auto& [enc, tau] : C.trees) {
                        if (tau.arity() != m) continue;
                        int tsign = (tau.weight() & 1) && ((1 + fdsum) & 1) ? -1 : 1;
                        for (auto& cb : C.space.basis) {
                            auto& t = C.delta_of(enc, cb.name);
                            auto it = t.find(word);
                            if (it == t.end()) continue;
                            Rat coef = it->second * (eps * tsign) / Rat(aut_order(tau));
                            if (mix) coef = -coef;
                            Elem v = eval_shape(g, tau, leaves);
                            for (auto& [y, c] : v)
                                elem_add(value, hom_basis_name(cb.name, y), c * coef);
                        }
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
                s.set_op(m, fs, value);
                return;
            }
            for (size_t j = from; j < names.size(); ++j) {
                int w = s.space.weight_of(names[j]);
                if (wsum + w >= s.space.weight_cap) continue;
                pick[slot] = j;
                tuples(slot + 1, j, wsum + w);
            }
        };
        tuples(0, 0, 1);
    }
    return s;
}

}  // namespace corolla
