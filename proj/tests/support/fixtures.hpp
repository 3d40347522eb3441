#pragma once

// Small curved L-infinity structures used across the test suite.

#include "corolla/linfty.hpp"

namespace fixtures {

using namespace corolla;

// Heisenberg Lie algebra placed in degree 1: basis x, y, z with l2(x,y) = z.
// A length-k bracket carries weight 2k-1 (each operation raises weight by the
// argument total plus one), so z sits in weight 3.
inline CurvedLinftyStructure heisenberg(int cap = 4) {
    WeightGradedSpace sp(GradedSpace({{"x", 1}, {"y", 1}, {"z", 1}}),
                         {{"x", 1}, {"y", 1}, {"z", 3}}, cap);
    CurvedLinftyStructure s;
    s.space = sp;
    s.d = GradedMap{sp.space, sp.space, -1, {}};
    s.set_op(2, {"x", "y"}, {{"z", Rat(1)}});
    return s;
}

// A bracket that genuinely fails Jacobi: z = [x,y], t = [p,q], m = [z,t], with
// [x,t] = [y,t] = 0, so the Jacobiator of (x, y, t) is a nonzero multiple of m.
inline CurvedLinftyStructure broken_jacobi(int cap = 8) {
    WeightGradedSpace sp(
        GradedSpace({{"x", 1}, {"y", 1}, {"p", 1}, {"q", 1}, {"z", 1}, {"t", 1}, {"m", 1}}),
        {{"x", 1}, {"y", 1}, {"p", 1}, {"q", 1}, {"z", 3}, {"t", 3}, {"m", 7}}, cap);
    CurvedLinftyStructure s;
    s.space = sp;
    s.d = GradedMap{sp.space, sp.space, -1, {}};
    s.set_op(2, {"x", "y"}, {{"z", Rat(1)}});
    s.set_op(2, {"p", "q"}, {{"t", Rat(1)}});
    s.set_op(2, {"z", "t"}, {{"m", Rat(1)}});
    return s;
}

// Abelian structure carrying only a chain differential d(e_i) = f_i.
inline CurvedLinftyStructure abelian_chain(int cap = 4) {
    WeightGradedSpace sp(GradedSpace({{"e1", 1}, {"e2", 1}, {"f1", 0}, {"f2", 0}, {"g", 0}}),
                         {{"e1", 1}, {"e2", 1}, {"f1", 1}, {"f2", 1}, {"g", 1}}, cap);
    CurvedLinftyStructure s;
    s.space = sp;
    s.d = GradedMap{sp.space, sp.space, -1, {}};
    s.d.set("e1", {{"f1", Rat(1)}});
    s.d.set("e2", {{"f2", Rat(1)}});
    return s;
}

// Curvature only: theta = l_0(1) nonzero in degree -1, everything else zero.
inline CurvedLinftyStructure curvature_only(int cap = 4) {
    WeightGradedSpace sp(GradedSpace({{"th", -1}}), {{"th", 1}}, cap);
    CurvedLinftyStructure s;
    s.space = sp;
    s.d = GradedMap{sp.space, sp.space, -1, {}};
    s.set_op(0, {}, {{"th", Rat(1)}});
    return s;
}

// Mixed-degree fixture with a nontrivial twisted differential:
// a in degree 0, x in degree 1, z in degree 0; l2(a, x) = z.
inline CurvedLinftyStructure twist_fixture(int cap = 4) {
    WeightGradedSpace sp(GradedSpace({{"a", 0}, {"x", 1}, {"z", 0}}),
                         {{"a", 1}, {"x", 1}, {"z", 3}}, cap);
    CurvedLinftyStructure s;
    s.space = sp;
    s.d = GradedMap{sp.space, sp.space, -1, {}};
    s.set_op(2, {"a", "x"}, {{"z", Rat(1)}});
    return s;
}

// Strictly upper triangular n x n matrices as a nilpotent Lie algebra in
// degree 1; E_{ij} on superdiagonal level l = j - i carries weight 2l - 1.
inline CurvedLinftyStructure upper_triangular(int n, int cap = -1) {
    if (cap < 0) cap = 2 * n - 2;
    std::vector<BasisElem> basis;
    std::map<std::string, int> wt;
    auto nm = [](int i, int j) { return "E" + std::to_string(i) + std::to_string(j); };
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            if (2 * (j - i) - 1 >= cap) continue;
            basis.push_back({nm(i, j), 1});
            wt[nm(i, j)] = 2 * (j - i) - 1;
        }
    WeightGradedSpace sp(GradedSpace(std::move(basis)), std::move(wt), cap);
    CurvedLinftyStructure s;
    s.space = sp;
    s.d = GradedMap{sp.space, sp.space, -1, {}};
    // [E_ij, E_kl] = delta_jk E_il - delta_li E_kj
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                for (int l = k + 1; l <= n; ++l) {
                    if (std::make_pair(i, j) >= std::make_pair(k, l)) continue;
                    if (!sp.space.has(nm(i, j)) || !sp.space.has(nm(k, l))) continue;
                    Elem v;
                    if (j == k && sp.space.has(nm(i, l))) elem_add(v, nm(i, l), Rat(1));
                    if (l == i && sp.space.has(nm(k, j))) elem_add(v, nm(k, j), Rat(-1));
                    if (!v.empty()) s.set_op(2, {nm(i, j), nm(k, l)}, v);
                }
    return s;
}

// Tensor a degree-1 Lie structure with the dual numbers on an odd generator
// of degree -1: a second copy of each basis element in degree 0 (suffix ~)
// with l2(x, y~) = [x,y]~, l2(x~, y) = -[x,y]~, l2(x~, y~) = 0. Every
// degree-0 element is Maurer-Cartan, which makes gauge orbits nontrivial.
inline CurvedLinftyStructure dual_numbers(const CurvedLinftyStructure& lie) {
    std::vector<BasisElem> basis;
    std::map<std::string, int> wt;
    for (auto& b : lie.space.space.basis) {
        if (b.degree != 1) fail_argument("dual_numbers needs a degree-1 structure");
        basis.push_back({b.name, 1});
        basis.push_back({b.name + "~", 0});
        wt[b.name] = lie.space.weight_of(b.name);
        wt[b.name + "~"] = lie.space.weight_of(b.name);
    }
    CurvedLinftyStructure s;
    s.space = WeightGradedSpace(GradedSpace(std::move(basis)), std::move(wt),
                                lie.space.weight_cap);
    s.arity_cap = lie.arity_cap;
    s.d = GradedMap{s.space.space, s.space.space, -1, {}};
    auto it = lie.ops.find(2);
    if (it != lie.ops.end())
        for (auto& [args, v] : it->second) {
            Elem ve;
            for (auto& [n, c] : v) ve.emplace(n + "~", c);
            s.set_op(2, {args[0], args[1]}, v);
            s.set_op(2, {args[0], args[1] + "~"}, ve);
            s.set_op(2, {args[0] + "~", args[1]}, elem_scale(ve, Rat(-1)));
        }
    return s;
}

}  // namespace fixtures
