#pragma once

// Canonical non-planar corked rooted trees: a node is a Leaf (input slot), a
// Cork (vertex with zero children), or a Vertex with >= 2 children. Children
// are kept sorted by canonical encoding, so equal trees compare equal.
//
// arity  = number of leaves
// weight = number of internal edges (vertex-vertex edges; cork edges count)

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "corolla/error.hpp"
#include "corolla/rational.hpp"

namespace corolla {

struct CRT {
    bool is_leaf = true;
    std::vector<CRT> children;  // meaningful only when !is_leaf; empty = cork

    static CRT leaf() { return CRT{}; }
    static CRT cork() {
        CRT t;
        t.is_leaf = false;
        return t;
    }
    static CRT vertex(std::vector<CRT> ch) {
        if (ch.size() == 1) fail_argument("CRT vertex must have 0 or >= 2 children");
        CRT t;
        t.is_leaf = false;
        t.children = std::move(ch);
        std::sort(t.children.begin(), t.children.end(),
                  [](const CRT& a, const CRT& b) { return a.encode() < b.encode(); });
        return t;
    }
    static CRT corolla(int n) { return vertex(std::vector<CRT>(static_cast<size_t>(n), leaf())); }

    bool is_cork() const { return !is_leaf && children.empty(); }
    bool is_vertex() const { return !is_leaf; }

    // Unambiguous canonical string; doubles as the total order on trees.
    std::string encode() const {
        if (is_leaf) return "|";
        if (children.empty()) return "*";
        std::string s = "(";
        for (auto& c : children) s += c.encode();
        s += ")";
        return s;
    }

    int arity() const {
        if (is_leaf) return 1;
        int a = 0;
        for (auto& c : children) a += c.arity();
        return a;
    }
    int num_vertices() const {
        if (is_leaf) return 0;
        int v = 1;
        for (auto& c : children) v += c.num_vertices();
        return v;
    }
    int weight() const {
        if (is_leaf) return 0;
        int w = 0;
        for (auto& c : children)
            if (c.is_vertex()) w += 1 + c.weight();
        return w;
    }

    bool operator==(const CRT& o) const { return encode() == o.encode(); }
    bool operator<(const CRT& o) const { return encode() < o.encode(); }
};

// Human-facing rendering: "(| *)" style with spaces between siblings.
inline std::string tree_text(const CRT& t) {
    if (t.is_leaf) return "|";
    if (t.children.empty()) return "*";
    std::string s = "(";
    for (size_t i = 0; i < t.children.size(); ++i) {
        if (i) s += " ";
        s += tree_text(t.children[i]);
    }
    return s + ")";
}

namespace detail {
inline CRT parse_tree_at(const std::string& s, size_t& pos) {
    while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) fail_argument("tree parse: unexpected end of input");
    char c = s[pos];
    if (c == '|') {
        ++pos;
        return CRT::leaf();
    }
    if (c == '*') {
        ++pos;
        return CRT::cork();
    }
    if (c == '(') {
        ++pos;
        std::vector<CRT> ch;
        while (true) {
            while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos >= s.size()) fail_argument("tree parse: missing ')'");
            if (s[pos] == ')') {
                ++pos;
                break;
            }
            ch.push_back(parse_tree_at(s, pos));
        }
        if (ch.empty()) return CRT::cork();
        return CRT::vertex(std::move(ch));
    }
    fail_argument(std::string("tree parse: unexpected character '") + c + "'");
}
}  // namespace detail

inline CRT parse_tree(const std::string& s) {
    size_t pos = 0;
    CRT t = detail::parse_tree_at(s, pos);
    while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) fail_argument("tree parse: trailing input");
    return t;
}

// |Aut| = prod over child isomorphism classes of m_i! * |Aut(child)|^{m_i}.
inline Int aut_order(const CRT& t) {
    if (t.is_leaf || t.children.empty()) return 1;
    Int a = 1;
    size_t i = 0;
    while (i < t.children.size()) {
        size_t j = i;
        std::string enc = t.children[i].encode();
        while (j < t.children.size() && t.children[j].encode() == enc) ++j;
        unsigned m = static_cast<unsigned>(j - i);
        a *= factorial(m);
        Int ca = aut_order(t.children[i]);
        for (unsigned k = 0; k < m; ++k) a *= ca;
        i = j;
    }
    return a;
}

// Renormalization coefficient: E(|) = 1, E(vertex with m children) = m! * prod E(child).
inline Int renorm_coeff(const CRT& t) {
    if (t.is_leaf) return 1;
    Int e = factorial(static_cast<unsigned>(t.children.size()));
    for (auto& c : t.children) e *= renorm_coeff(c);
    return e;
}

namespace detail {
inline CRT graft_walk(const CRT& t, const std::vector<CRT>& subs, size_t& next) {
    if (t.is_leaf) return subs[next++];
    std::vector<CRT> ch;
    ch.reserve(t.children.size());
    for (auto& c : t.children) ch.push_back(graft_walk(c, subs, next));
    if (ch.empty()) return CRT::cork();
    return CRT::vertex(std::move(ch));
}
}  // namespace detail

// Replace the leaves of t (in canonical planar order) by the given subtrees.
inline CRT graft(const CRT& t, const std::vector<CRT>& subs) {
    if (static_cast<int>(subs.size()) != t.arity())
        fail_argument("graft: arity mismatch");
    size_t next = 0;
    return detail::graft_walk(t, subs, next);
}

// --- internal edges ----------------------------------------------------------
// An internal edge is identified by the path (child indices from the root, in
// canonical order) of the vertex at its lower^Wupper end; valid paths are the
// nonempty paths leading to a non-leaf node.

using EdgePath = std::vector<int>;

namespace detail {
inline void collect_edges(const CRT& t, EdgePath& prefix, std::vector<EdgePath>& out) {
    if (t.is_leaf) return;
    for (size_t i = 0; i < t.children.size(); ++i) {
        if (t.children[i].is_leaf) continue;
        prefix.push_back(static_cast<int>(i));
        out.push_back(prefix);
        collect_edges(t.children[i], prefix, out);
        prefix.pop_back();
    }
}
}  // namespace detail

inline std::vector<EdgePath> internal_edges(const CRT& t) {
    std::vector<EdgePath> out;
    EdgePath prefix;
    detail::collect_edges(t, prefix, out);
    return out;
}

inline const CRT& subtree_at(const CRT& t, const EdgePath& path) {
    const CRT* cur = &t;
    for (int i : path) {
        if (cur->is_leaf || i < 0 || static_cast<size_t>(i) >= cur->children.size())
            fail_argument("invalid tree path");
        cur = &cur->children[static_cast<size_t>(i)];
    }
    return *cur;
}

struct EdgeSplit {
    EdgePath edge;
    CRT lower;      // tree with the cut subtree replaced by a fresh leaf
    CRT upper;      // the cut subtree
    int leaf_index; // position of the fresh leaf among lower's leaves
};

namespace detail {
// Rebuild with the node at `path` replaced by a marked leaf; afterwards locate
// the mark. The mark sorts exactly like a leaf, so the surrounding canonical
// form is unchanged (ties between the mark and plain leaves are harmless:
// the choices differ by an automorphism).
struct Marked {
    CRT tree;
    int mark = -1;  // leaf index of the mark within `tree`, -1 if absent
    int leaves = 0;
};

inline Marked replace_by_leaf(const CRT& t, const EdgePath& path, size_t depth) {
    if (depth == path.size()) {
        Marked m;
        m.tree = CRT::leaf();
        m.mark = 0;
        m.leaves = 1;
        return m;
    }
    if (t.is_leaf) fail_argument("invalid tree path");
    std::vector<Marked> parts;
    parts.reserve(t.children.size());
    for (size_t i = 0; i < t.children.size(); ++i) {
        if (static_cast<int>(i) == path[depth]) {
            parts.push_back(replace_by_leaf(t.children[i], path, depth + 1));
        } else {
            Marked m;
            m.tree = t.children[i];
            m.leaves = t.children[i].arity();
            parts.push_back(std::move(m));
        }
    }
    std::stable_sort(parts.begin(), parts.end(), [](const Marked& a, const Marked& b) {
        return a.tree.encode() < b.tree.encode();
    });
    Marked out;
    out.tree.is_leaf = false;
    int offset = 0;
    for (auto& p : parts) {
        if (p.mark >= 0) out.mark = offset + p.mark;
        offset += p.leaves;
        out.tree.children.push_back(p.tree);
    }
    out.leaves = offset;
    if (out.tree.children.size() == 1) fail_argument("invalid split");
    return out;
}
}  // namespace detail

inline EdgeSplit split_edge(const CRT& t, const EdgePath& e) {
    EdgeSplit s;
    s.edge = e;
    s.upper = subtree_at(t, e);
    if (s.upper.is_leaf || e.empty()) fail_argument("split_edge: not an internal edge");
    auto m = detail::replace_by_leaf(t, e, 0);
    s.lower = m.tree;
    s.leaf_index = m.mark;
    return s;
}

inline std::vector<EdgeSplit> split_edges(const CRT& t) {
    std::vector<EdgeSplit> out;
    for (auto& e : internal_edges(t)) out.push_back(split_edge(t, e));
    return out;
}

namespace detail {
inline CRT contract_walk(const CRT& t, const EdgePath& path, size_t depth) {
    if (t.is_leaf) fail_argument("invalid tree path");
    std::vector<CRT> ch;
    for (size_t i = 0; i < t.children.size(); ++i) {
        const CRT& c = t.children[i];
        if (depth < path.size() && static_cast<int>(i) == path[depth]) {
            if (depth + 1 == path.size()) {
                if (c.is_leaf) fail_argument("contract_edge: not an internal edge");
                // merge c's children into this vertex
                for (auto& g : c.children) ch.push_back(g);
            } else {
                ch.push_back(contract_walk(c, path, depth + 1));
            }
        } else {
            ch.push_back(c);
        }
    }
    // A vertex left with a single child is elided (identified with the child);
    // with no children it degenerates to a cork.
    if (ch.size() == 1) return ch[0];
    if (ch.empty()) return CRT::cork();
    return CRT::vertex(std::move(ch));
}
}  // namespace detail

inline CRT contract_edge(const CRT& t, const EdgePath& e) {
    if (e.empty()) fail_argument("contract_edge: not an internal edge");
    return detail::contract_walk(t, e, 0);
}

// --- enumeration -------------------------------------------------------------

namespace detail {
// All trees of given arity/weight whose root is a vertex (cork included).
inline const std::vector<CRT>& vertex_trees(int arity, int weight);

// Children are chosen in non-decreasing encoding order, so each multiset is
// produced exactly once. A vertex-rooted child of weight w costs w+1 (its own
// internal edges plus the edge attaching it); a leaf child costs nothing.
inline void extend_multiset(int arity_left, int cost_left, const std::string& min_enc,
                            std::vector<CRT>& acc, std::vector<CRT>& out) {
    if (arity_left == 0 && cost_left == 0) {
        if (acc.size() >= 2) out.push_back(CRT::vertex(acc));
        return;
    }
    if (arity_left >= 1 && std::string("|") >= min_enc) {
        acc.push_back(CRT::leaf());
        extend_multiset(arity_left - 1, cost_left, "|", acc, out);
        acc.pop_back();
    }
    for (int a = 0; a <= arity_left; ++a) {
        for (int w = 0; w + 1 <= cost_left; ++w) {
            for (auto& t : vertex_trees(a, w)) {
                std::string enc = t.encode();
                if (enc < min_enc) continue;
                acc.push_back(t);
                extend_multiset(arity_left - a, cost_left - w - 1, enc, acc, out);
                acc.pop_back();
            }
        }
    }
}

inline const std::vector<CRT>& vertex_trees(int arity, int weight) {
    static std::map<std::pair<int, int>, std::vector<CRT>> cache;
    auto key = std::make_pair(arity, weight);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<CRT> out;
    if (arity == 0 && weight == 0) out.push_back(CRT::cork());
    std::vector<CRT> acc;
    extend_multiset(arity, weight, "", acc, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return cache.emplace(key, std::move(out)).first->second;
}
}  // namespace detail

inline std::vector<CRT> enumerate_crt(int arity, int weight) {
    if (arity < 0 || weight < 0) fail_argument("enumerate_crt: negative arguments");
    std::vector<CRT> out;
    if (arity == 1 && weight == 0) out.push_back(CRT::leaf());
    for (auto& t : detail::vertex_trees(arity, weight)) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace corolla
