#pragma once

// Simplices of the integration functor: twisting morphisms out of the
// Maurer-Cartan algebras mc^n, gauge flows solved by weight-wise Picard
// iteration, canonical horn fillers, Baker-Campbell-Hausdorff products, the
// nerve of a nilpotent Lie algebra and homotopy groups via twisted homology.

#include <set>

#include "corolla/transfer.hpp"

namespace corolla {

// "a012" -> {0,1,2}
inline std::vector<int> chain_indices(const std::string& name) {
    if (name.empty() || name[0] != 'a') fail_argument("not a generator name: " + name);
    std::vector<int> out;
    for (size_t i = 1; i < name.size(); ++i) {
        if (name[i] < '0' || name[i] > '9') fail_argument("not a generator name: " + name);
        out.push_back(name[i] - '0');
    }
    if (out.empty()) fail_argument("not a generator name: " + name);
    return out;
}

// image of an index set under the face inclusion skipping vertex j
inline std::vector<int> face_image(const std::vector<int>& I, int j) {
    std::vector<int> out;
    for (int i : I) out.push_back(i >= j ? i + 1 : i);
    return out;
}

struct TwistingMorphism {
    int n = 0;
    std::map<std::string, Elem> assignment;  // generator a_I -> element of the target
};

// restriction along the j-th face inclusion Delta^{n-1} -> Delta^n
inline TwistingMorphism face_restrict(const TwistingMorphism& phi, int j) {
    if (j < 0 || j > phi.n || phi.n < 1) fail_argument("face index out of range");
    TwistingMorphism out;
    out.n = phi.n - 1;
    for (auto& J : nonempty_subsets(out.n)) {
        std::string src = chain_name(face_image(J, j));
        auto it = phi.assignment.find(src);
        out.assignment[chain_name(J)] = it == phi.assignment.end() ? Elem{} : it->second;
    }
    return out;
}

// linear extension of a generator assignment over a tree series: every term
// evaluates its shape with the assigned elements at the leaves; the canonical
// planar order carries the orientation, so no extra signs appear
inline Elem eval_assignment(const CurvedLinftyStructure& g,
                            const std::map<std::string, Elem>& phi, const TreeSeries& s) {
    Elem out;
    for (auto& [key, tc] : s.terms) {
        std::vector<Elem> vals;
        vals.reserve(tc.first.labels.size());
        bool dead = false;
        for (auto& l : tc.first.labels) {
            auto it = phi.find(l);
            if (it == phi.end()) fail_argument("assignment missing generator " + l);
            if (it->second.empty()) { dead = true; break; }
            vals.push_back(it->second);
        }
        if (dead) continue;
        Elem v = eval_shape(g, tc.first.shape, vals);
        for (auto& [m, c] : v) elem_add(out, m, c * tc.second);
    }
    return out;
}

struct TwistingFailure {
    std::string gen;
    Elem residual;
};

// A degree-respecting assignment is a twisting morphism when the evaluation of
// the cobar differential commutes with the target differential on every
// generator: eval(phi(d(a_I))) = d_g(phi(a_I)).
inline std::vector<TwistingFailure> twisting_residuals(const McnAlgebra& M,
                                                       const CurvedLinftyStructure& g,
                                                       const TwistingMorphism& phi) {
    if (phi.n != M.n) fail_argument("simplex dimension mismatch");
    if (M.weight_cap < g.space.weight_cap)
        fail_argument("mc table truncated below the target weight cap");
    for (auto& b : M.chains.basis) {
        auto it = phi.assignment.find(b.name);
        if (it == phi.assignment.end()) fail_argument("assignment missing generator " + b.name);
        auto deg = elem_degree(g.space.space, it->second);
        if (deg && *deg != b.degree)
            fail_argument("assignment of " + b.name + " has wrong degree");
        if (!it->second.empty() && g.space.min_weight(it->second) < 1)
            fail_argument("assignment of " + b.name + " has weight 0 components");
    }
    std::vector<TwistingFailure> out;
    for (auto& b : M.chains.basis) {
        Elem lhs = eval_assignment(g, phi.assignment, M.d_cobar.at(b.name));
        Elem r = elem_sum(lhs, elem_scale(g.d.apply(phi.assignment.at(b.name)), Rat(-1)));
        if (!r.empty()) out.push_back({b.name, r});
    }
    return out;
}

inline bool is_twisting(const McnAlgebra& M, const CurvedLinftyStructure& g,
                        const TwistingMorphism& phi) {
    return twisting_residuals(M, g, phi).empty();
}

// --- gauge flows -------------------------------------------------------------

// polynomial solution gamma(t) = sum_w coeffs[w] t^w of the gauge flow ODE
// dgamma/dt = d^{gamma(t)}(lambda), gamma(0) = alpha
struct GaugePath {
    Elem alpha;
    Elem lambda;
    std::vector<Elem> coeffs;  // coeffs[0] = alpha
};

namespace detail {
// coefficient of t^w in d(lambda) + sum_{m>=2} l_m(gamma(t),..,gamma(t),lambda)/(m-1)!
inline Elem gauge_rhs_coeff(const CurvedLinftyStructure& g, const std::vector<Elem>& gam,
                            const Elem& lambda, int w) {
    Elem out = w == 0 ? g.d.apply(lambda) : Elem{};
    for (int m = 2; m <= g.arity_cap; ++m) {
        Rat inv = Rat(1) / Rat(factorial(static_cast<unsigned>(m - 1)));
        std::vector<Elem> args(static_cast<size_t>(m));
        args.back() = lambda;
        std::function<void(int, int)> rec = [&](int slot, int left) {
            if (slot == m - 1) {
                if (left != 0) return;
                Elem v = g.l(m, args);
                for (auto& [nm, c] : v) elem_add(out, nm, c * inv);
                return;
            }
            for (int u = 0; u <= left && u < static_cast<int>(gam.size()); ++u) {
                if (gam[static_cast<size_t>(u)].empty()) continue;
                args[static_cast<size_t>(slot)] = gam[static_cast<size_t>(u)];
                rec(slot + 1, left - u);
            }
        };
        rec(0, w);
    }
    return out;
}
}  // namespace detail

inline GaugePath gauge_flow(const CurvedLinftyStructure& g, const Elem& alpha,
                            const Elem& lambda) {
    Elem res = mc_residual(g, alpha);
    if (!res.empty())
        fail_precondition("gauge source is not Maurer-Cartan; residual = " + elem_pretty(res));
    auto ldeg = elem_degree(g.space.space, lambda);
    if (ldeg && *ldeg != 1) fail_argument("gauge generator must have degree 1");
    GaugePath p;
    p.alpha = alpha;
    p.lambda = lambda;
    p.coeffs.push_back(alpha);
    // the t^{w+1} coefficient lies in weight >= w+1, so the polynomial stops
    // strictly below the weight cap
    for (int w = 0; w + 1 < g.space.weight_cap; ++w) {
        Elem rhs = detail::gauge_rhs_coeff(g, p.coeffs, lambda, w);
        p.coeffs.push_back(elem_scale(rhs, Rat(1) / Rat(w + 1)));
    }
    while (p.coeffs.size() > 1 && p.coeffs.back().empty()) p.coeffs.pop_back();
    return p;
}

// coefficients of dgamma/dt - d^{gamma(t)}(lambda), reported up to twice the
// weight cap; identically zero for a correct solution
inline std::vector<Elem> gauge_ode_residual(const CurvedLinftyStructure& g, const GaugePath& p) {
    std::vector<Elem> out;
    for (int w = 0; w <= 2 * g.space.weight_cap; ++w) {
        Elem deriv = w + 1 < static_cast<int>(p.coeffs.size())
                         ? elem_scale(p.coeffs[static_cast<size_t>(w + 1)], Rat(w + 1))
                         : Elem{};
        Elem rhs = detail::gauge_rhs_coeff(g, p.coeffs, p.lambda, w);
        out.push_back(elem_sum(deriv, elem_scale(rhs, Rat(-1))));
    }
    return out;
}

// lambda . alpha := gamma(1)
inline Elem gauge_act(const CurvedLinftyStructure& g, const Elem& alpha, const Elem& lambda) {
    GaugePath p = gauge_flow(g, alpha, lambda);
    Elem out;
    for (auto& c : p.coeffs)
        for (auto& [nm, v] : c) elem_add(out, nm, v);
    Elem res = mc_residual(g, out);
    if (!res.empty())
        fail_precondition("gauge flow endpoint is not Maurer-Cartan; residual = " +
                          elem_pretty(res));
    return out;
}

// --- horn fillers and BCH ----------------------------------------------------

struct Horn {
    int n = 2;
    int k = 1;
    // assignments for every a_I except I = [n] and I = [n] minus {k}
    std::map<std::string, Elem> faces;
};

// Fill the (n,k)-horn: the top cell a_{[n]} is set to y, and the missing face
// a_{[n] minus k} is solved from the twisting equation of the top generator by
// weight induction (its linear part carries the missing face with coefficient
// (-1)^k). The tower holds mc^m for 0 <= m <= n at a common weight cap.
inline TwistingMorphism horn_fill(const std::vector<McnAlgebra>& tower,
                                  const CurvedLinftyStructure& g, const Horn& x,
                                  const Elem& y) {
    int n = x.n, k = x.k;
    if (n < 2 || k < 0 || k > n) fail_argument("horn indices out of range");
    if (static_cast<int>(tower.size()) <= n) fail_argument("mc tower too short for the horn");
    const McnAlgebra& M = tower[static_cast<size_t>(n)];
    std::vector<int> top, miss;
    for (int i = 0; i <= n; ++i) {
        top.push_back(i);
        if (i != k) miss.push_back(i);
    }
    std::string gen_top = chain_name(top), gen_miss = chain_name(miss);

    TwistingMorphism phi;
    phi.n = n;
    for (auto& I : nonempty_subsets(n)) {
        std::string nm = chain_name(I);
        if (nm == gen_top || nm == gen_miss) continue;
        auto it = x.faces.find(nm);
        if (it == x.faces.end()) fail_argument("horn missing a face value for " + nm);
        phi.assignment[nm] = it->second;
    }
    phi.assignment[gen_top] = y;
    phi.assignment[gen_miss] = {};

    // precondition: every face of the horn is itself a twisting morphism
    for (int j = 0; j <= n; ++j) {
        if (j == k) continue;
        TwistingMorphism face;
        face.n = n - 1;
        bool complete = true;
        for (auto& J : nonempty_subsets(n - 1)) {
            std::string src = chain_name(face_image(J, j));
            if (src == gen_miss || src == gen_top) { complete = false; break; }
            face.assignment[chain_name(J)] = phi.assignment.at(src);
        }
        if (!complete) continue;  // faces through the missing cell are not part of the horn
        auto fails = twisting_residuals(tower[static_cast<size_t>(n - 1)], g, face);
        if (!fails.empty())
            fail_precondition("horn face " + std::to_string(j) +
                              " is not a twisting morphism; residual at " + fails.front().gen +
                              " = " + elem_pretty(fails.front().residual));
    }

    // fixed point by weight: the equation of the top generator reads
    // (-1)^k u + (higher-weight terms in u) = d(y) - (other faces),
    // so the update u -> u - (-1)^k residual contracts in weight
    Rat sk(k % 2 ? -1 : 1);
    const TreeSeries& dtop = M.d_cobar.at(gen_top);
    for (int it = 0; it <= g.space.weight_cap; ++it) {
        Elem r = elem_sum(eval_assignment(g, phi.assignment, dtop),
                          elem_scale(g.d.apply(y), Rat(-1)));
        if (r.empty()) break;
        phi.assignment[gen_miss] =
            elem_sum(phi.assignment[gen_miss], elem_scale(r, -sk));
    }
    Elem final_r = elem_sum(eval_assignment(g, phi.assignment, dtop),
                            elem_scale(g.d.apply(y), Rat(-1)));
    if (!final_r.empty())
        fail_precondition("horn filling did not converge; residual = " + elem_pretty(final_r));
    auto fails = twisting_residuals(M, g, phi);
    if (!fails.empty())
        fail_precondition("horn filler fails the twisting equation at " + fails.front().gen +
                          "; residual = " + elem_pretty(fails.front().residual));
    return phi;
}

inline bool degree_one_concentrated(const CurvedLinftyStructure& g) {
    for (auto& b : g.space.space.basis)
        if (b.degree != 1) return false;
    return true;
}

// mc tower for fillers in a degree-1 Lie algebra: only edges and the top cell
// can carry nonzero values, so the tree tables may be restricted to those
// labels (the full linear parts are always kept)
inline std::vector<McnAlgebra> bch_tower(int cap) {
    std::set<std::string> allowed{"a01", "a02", "a12", "a012"};
    std::vector<McnAlgebra> tower;
    tower.push_back(build_mcn(0, cap));
    tower.push_back(build_mcn(1, cap));
    tower.push_back(build_mcn(2, cap, false, &allowed));
    return tower;
}

// Baker-Campbell-Hausdorff product: the missing edge of the (2,1)-horn with
// vertices and top cell zero. Under the orientation pinned by the curvature
// identity, the canonical filler composes the 01-edge after the 12-edge, so
// x is placed on the edge 12 and y on the edge 01 to obtain the classical
// order exp(bch(x, y)) = exp(x) exp(y).
inline Elem bch(const CurvedLinftyStructure& g, const std::vector<McnAlgebra>& tower,
                const Elem& x, const Elem& y) {
    if (!degree_one_concentrated(g))
        fail_capability("BCH requires a structure concentrated in degree 1");
    Horn h;
    h.n = 2;
    h.k = 1;
    h.faces = {{"a0", {}}, {"a1", {}}, {"a2", {}}, {"a01", y}, {"a12", x}};
    TwistingMorphism filled = horn_fill(tower, g, h, {});
    return filled.assignment.at("a02");
}

inline Elem bch(const CurvedLinftyStructure& g, const Elem& x, const Elem& y) {
    return bch(g, bch_tower(g.space.weight_cap), x, y);
}

// --- nerve and homotopy groups -----------------------------------------------

// n-simplex of the nerve of a degree-1 Lie algebra: vertices zero, the edge
// (i,j) carries the iterated BCH product of lambda_j, .., lambda_{i+1} (the
// filler composes right to left), every higher cell zero
inline TwistingMorphism nerve_simplex(const CurvedLinftyStructure& g,
                                      const std::vector<McnAlgebra>& tower,
                                      const std::vector<Elem>& lambdas) {
    if (!degree_one_concentrated(g))
        fail_capability("the nerve requires a structure concentrated in degree 1");
    int n = static_cast<int>(lambdas.size());
    TwistingMorphism phi;
    phi.n = n;
    for (auto& I : nonempty_subsets(n)) {
        Elem v;
        if (I.size() == 2) {
            v = lambdas[static_cast<size_t>(I[1]) - 1];
            for (int m = I[1] - 1; m > I[0]; --m)
                v = bch(g, tower, v, lambdas[static_cast<size_t>(m) - 1]);
        }
        phi.assignment[chain_name(I)] = v;
    }
    return phi;
}

inline TwistingMorphism nerve_simplex(const CurvedLinftyStructure& g,
                                      const std::vector<Elem>& lambdas) {
    return nerve_simplex(g, bch_tower(g.space.weight_cap), lambdas);
}

// pi_n at the basepoint alpha is the twisted homology in degree n
inline HomologyResult homotopy_group(const CurvedLinftyStructure& g, const Elem& alpha, int n) {
    if (n < 1) fail_argument("homotopy groups are indexed by n >= 1");
    return twisted_homology(g, alpha, n);
}

}  // namespace corolla
