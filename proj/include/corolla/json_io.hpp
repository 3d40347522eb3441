#pragma once

// JSON (de)serialization for the core types. Rationals travel as "p/q"
// strings so fixtures are exact and unambiguous.

#include <json.hpp>

#include "corolla/integration.hpp"
#include "corolla/linfty.hpp"

namespace corolla {

using nlohmann::json;

inline json rat_to_json(const Rat& r) { return rat_pretty(r); }

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (!j.is_string()) fail_argument("rational must be a \"p/q\" string");
    return parse_rat(j.get<std::string>());
}

inline json elem_to_json(const Elem& e) {
    json out = json::array();
    for (auto& [name, coef] : e) out.push_back({{"name", name}, {"coef", rat_to_json(coef)}});
    return out;
}

inline Elem elem_from_json(const json& j) {
    if (!j.is_array()) fail_argument("element must be an array of {name, coef}");
    Elem e;
    for (auto& t : j) elem_add(e, t.at("name").get<std::string>(), rat_from_json(t.at("coef")));
    return e;
}

inline json space_to_json(const GradedSpace& sp) {
    json basis = json::array();
    for (auto& b : sp.basis) basis.push_back({{"name", b.name}, {"degree", b.degree}});
    return {{"basis", basis}};
}

inline GradedSpace space_from_json(const json& j) {
    std::vector<BasisElem> basis;
    for (auto& b : j.at("basis"))
        basis.push_back({b.at("name").get<std::string>(), b.at("degree").get<int>()});
    return GradedSpace(std::move(basis));
}

inline json map_to_json(const GradedMap& m) {
    json entries = json::array();
    for (auto& [from, col] : m.cols)
        for (auto& [to, coef] : col)
            entries.push_back({{"from", from}, {"to", to}, {"coef", rat_to_json(coef)}});
    return {{"degree", m.degree}, {"entries", entries}};
}

inline GradedMap map_from_json(const json& j, const GradedSpace& source,
                               const GradedSpace& target) {
    GradedMap m{source, target, j.at("degree").get<int>(), {}};
    std::map<std::string, Elem> cols;
    for (auto& e : j.value("entries", json::array()))
        elem_add(cols[e.at("from").get<std::string>()], e.at("to").get<std::string>(),
                 rat_from_json(e.at("coef")));
    for (auto& [from, img] : cols) m.set(from, std::move(img));
    return m;
}

inline json structure_to_json(const CurvedLinftyStructure& s) {
    json weights = json::object();
    for (auto& [name, w] : s.space.weight) weights[name] = w;
    json ops = json::object();
    for (auto& [n, table] : s.ops) {
        json entries = json::array();
        for (auto& [args, value] : table)
            entries.push_back({{"args", args}, {"value", elem_to_json(value)}});
        ops[std::to_string(n)] = entries;
    }
    return {{"space", space_to_json(s.space.space)},
            {"weights", weights},
            {"weight_cap", s.space.weight_cap},
            {"arity_cap", s.arity_cap},
            {"d", map_to_json(s.d)},
            {"ops", ops}};
}

inline CurvedLinftyStructure structure_from_json(const json& j) {
    GradedSpace sp = space_from_json(j.at("space"));
    std::map<std::string, int> weights;
    for (auto& [name, w] : j.at("weights").items()) weights[name] = w.get<int>();
    CurvedLinftyStructure s;
    s.space = WeightGradedSpace(sp, std::move(weights), j.value("weight_cap", 4));
    s.arity_cap = j.value("arity_cap", 4);
    s.d = map_from_json(j.value("d", json{{"degree", -1}, {"entries", json::array()}}), sp, sp);
    if (s.d.degree != -1) fail_argument("structure differential must have degree -1");
    json ops = j.value("ops", json::object());
    for (auto& [key, entries] : ops.items()) {
        int n = 0;
        try {
            n = std::stoi(key);
        } catch (const std::exception&) {
            fail_argument("operation arity key must be an integer: " + key);
        }
        for (auto& e : entries)
            s.set_op(n, e.at("args").get<std::vector<std::string>>(),
                     elem_from_json(e.at("value")));
    }
    return s;
}

inline json twisting_to_json(const TwistingMorphism& t) {
    json asg = json::object();
    for (auto& [gen, val] : t.assignment) asg[gen] = elem_to_json(val);
    return {{"n", t.n}, {"assignment", asg}};
}

inline TwistingMorphism twisting_from_json(const json& j) {
    TwistingMorphism t;
    t.n = j.at("n").get<int>();
    for (auto& [gen, val] : j.at("assignment").items()) t.assignment[gen] = elem_from_json(val);
    return t;
}

}  // namespace corolla
