#pragma once

// Independent reference computations used only by tests: free nilpotent Lie
// algebras realized inside a truncated tensor algebra, and the BCH product
// log(exp(x) exp(y)) computed by direct series expansion there.

#include <map>
#include <string>
#include <vector>

#include "corolla/linfty.hpp"

namespace oracles {

using corolla::Elem;
using corolla::Rat;

// noncommutative polynomial: word over generator letters -> coefficient;
// "" is the unit word
using NCPoly = std::map<std::string, Rat>;

inline void nc_add(NCPoly& a, const std::string& w, const Rat& c) {
    if (c == 0) return;
    auto it = a.find(w);
    if (it == a.end()) a.emplace(w, c);
    else {
        it->second += c;
        if (it->second == 0) a.erase(it);
    }
}

inline NCPoly nc_sum(const NCPoly& a, const NCPoly& b, const Rat& scale = Rat(1)) {
    NCPoly out = a;
    for (auto& [w, c] : b) nc_add(out, w, c * scale);
    return out;
}

// product truncated above word length maxlen
inline NCPoly nc_mul(const NCPoly& a, const NCPoly& b, int maxlen) {
    NCPoly out;
    for (auto& [wa, ca] : a)
        for (auto& [wb, cb] : b) {
            if (static_cast<int>(wa.size() + wb.size()) > maxlen) continue;
            nc_add(out, wa + wb, ca * cb);
        }
    return out;
}

inline NCPoly nc_bracket(const NCPoly& a, const NCPoly& b, int maxlen) {
    return nc_sum(nc_mul(a, b, maxlen), nc_mul(b, a, maxlen), Rat(-1));
}

// exp of a polynomial with no constant term, truncated
inline NCPoly nc_exp(const NCPoly& v, int maxlen) {
    NCPoly out{{"", Rat(1)}};
    NCPoly pow{{"", Rat(1)}};
    Rat fact(1);
    for (int k = 1; k <= maxlen; ++k) {
        pow = nc_mul(pow, v, maxlen);
        fact *= k;
        out = nc_sum(out, pow, Rat(1) / fact);
    }
    return out;
}

// log(1 + u) for u with no constant term, truncated
inline NCPoly nc_log1p(const NCPoly& u, int maxlen) {
    NCPoly out;
    NCPoly pow{{"", Rat(1)}};
    for (int k = 1; k <= maxlen; ++k) {
        pow = nc_mul(pow, u, maxlen);
        out = nc_sum(out, pow, Rat(k % 2 ? 1 : -1) / Rat(k));
    }
    return out;
}

// reduced row set with coordinate tracking: each row carries its expression
// in the accepted basis names
struct Echelon {
    // pivot word -> (normalized row, coordinates over basis names)
    std::map<std::string, std::pair<NCPoly, Elem>> rows;

    // reduce v against the rows, accumulating coordinates of the part removed
    std::pair<NCPoly, Elem> reduce(NCPoly v) const {
        Elem coords;
        for (bool changed = true; changed;) {
            changed = false;
            for (auto& [w, c] : v) {
                auto it = rows.find(w);
                if (it == rows.end()) continue;
                Rat f = c;
                v = nc_sum(v, it->second.first, -f);
                for (auto& [n, x] : it->second.second) corolla::elem_add(coords, n, x * f);
                changed = true;
                break;
            }
        }
        return {std::move(v), std::move(coords)};
    }

    // insert v under the given name; returns false when dependent
    bool insert(NCPoly v, const std::string& name) {
        auto [rem, coords] = reduce(std::move(v));
        if (rem.empty()) return false;
        Rat lead = rem.begin()->second;
        std::string pivot = rem.begin()->first;
        NCPoly norm;
        for (auto& [w, c] : rem) norm.emplace(w, c / lead);
        // rem = v - (removed parts), so the row expresses (name - coords)/lead
        Elem expr{{name, Rat(1)}};
        for (auto& [n, x] : coords) corolla::elem_add(expr, n, -x);
        rows.emplace(pivot, std::make_pair(std::move(norm),
                                           corolla::elem_scale(expr, Rat(1) / lead)));
        // keep fully reduced: eliminate the new pivot from older rows
        for (auto& [p, rc] : rows) {
            if (p == pivot) continue;
            auto it = rc.first.find(pivot);
            if (it == rc.first.end()) continue;
            Rat f = it->second;
            rc.first = nc_sum(rc.first, rows.at(pivot).first, -f);
            for (auto& [n, x] : rows.at(pivot).second)
                corolla::elem_add(rc.second, n, -x * f);
        }
        return true;
    }
};

struct FreeNilpotentLie {
    int ngens = 2;
    int cls = 2;  // nilpotency class = maximal bracket length
    std::vector<std::string> names;
    std::vector<int> length;          // bracket length per basis element
    std::vector<NCPoly> expansion;    // tensor expansion per basis element
    Echelon echelon;
    corolla::CurvedLinftyStructure structure;

    NCPoly tensor(const Elem& e) const {
        NCPoly out;
        for (auto& [n, c] : e) {
            size_t i = 0;
            while (i < names.size() && names[i] != n) ++i;
            if (i == names.size()) corolla::fail_argument("unknown basis element " + n);
            out = nc_sum(out, expansion[i], c);
        }
        return out;
    }

    // express a Lie tensor polynomial in the bracket basis
    Elem project(const NCPoly& v) const {
        auto [rem, coords] = echelon.reduce(v);
        if (!rem.empty())
            corolla::fail_precondition("tensor element does not lie in the Lie subspace");
        return coords;
    }
};

// greedy bracket basis of the free nilpotent Lie algebra: generators, then all
// brackets of lower basis elements, keeping each candidate that is linearly
// independent in the tensor algebra
inline FreeNilpotentLie free_nilpotent_lie(int ngens, int cls) {
    if (ngens < 1 || ngens > 3 || cls < 1) corolla::fail_argument("unsupported free Lie shape");
    FreeNilpotentLie L;
    L.ngens = ngens;
    L.cls = cls;
    const char* letters = "xyz";
    for (int i = 0; i < ngens; ++i) {
        std::string nm(1, letters[i]);
        NCPoly v{{nm, Rat(1)}};
        L.echelon.insert(v, nm);
        L.names.push_back(nm);
        L.length.push_back(1);
        L.expansion.push_back(std::move(v));
    }
    int counter = 0;
    for (int len = 2; len <= cls; ++len) {
        size_t upto = L.names.size();
        for (size_t i = 0; i < upto; ++i)
            for (size_t j = 0; j < upto; ++j) {
                if (L.length[i] + L.length[j] != len) continue;
                NCPoly v = nc_bracket(L.expansion[i], L.expansion[j], cls);
                if (v.empty()) continue;
                std::string nm = "b" + std::to_string(++counter);
                if (!L.echelon.insert(v, nm)) {
                    --counter;
                    continue;
                }
                L.names.push_back(nm);
                L.length.push_back(len);
                L.expansion.push_back(std::move(v));
            }
    }

    std::vector<corolla::BasisElem> bs;
    std::map<std::string, int> weights;
    for (size_t i = 0; i < L.names.size(); ++i) {
        bs.push_back({L.names[i], 1});
        weights[L.names[i]] = 2 * L.length[i] - 1;  // bracket length k sits in weight 2k-1
    }
    corolla::GradedSpace sp(bs);
    corolla::WeightGradedSpace wsp(sp, weights, 2 * cls);
    L.structure.space = wsp;
    L.structure.d = corolla::GradedMap{sp, sp, -1, {}};
    L.structure.arity_cap = 4;
    L.structure.set_op(0, {}, {});
    for (size_t i = 0; i < L.names.size(); ++i)
        for (size_t j = i + 1; j < L.names.size(); ++j) {
            NCPoly br = nc_bracket(L.expansion[i], L.expansion[j], cls);
            Elem val = L.project(br);
            if (!val.empty()) L.structure.set_op(2, {L.names[i], L.names[j]}, val);
        }
    return L;
}

// log(exp(x) exp(y)) in the bracket basis, truncated at the nilpotency class
inline Elem bch_oracle(const FreeNilpotentLie& L, const Elem& x, const Elem& y) {
    NCPoly prod = nc_mul(nc_exp(L.tensor(x), L.cls), nc_exp(L.tensor(y), L.cls), L.cls);
    nc_add(prod, "", Rat(-1));
    return L.project(nc_log1p(prod, L.cls));
}

}  // namespace oracles
