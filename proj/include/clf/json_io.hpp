#pragma once

#include <clf/groups.hpp>

#include <json.hpp>

namespace clf {

using Json = nlohmann::ordered_json;

/// Normal forms serialize structurally: depth 1 is an integer vector,
/// depth >= 2 nests {"base": ..., "lamps": [{"at":..., "val":[...]}]}
/// with lamp keys in canonical order.
inline Json nf_to_json(const SolvableNF& nf) {
    if (nf.depth == 1) return Json(nf.abelian);
    Json lamps = Json::array();
    for (const auto& [key, val] : nf.lamp) {
        Json entry;
        entry["at"] = nf_to_json(*key);
        entry["val"] = Json(val);
        lamps.push_back(std::move(entry));
    }
    Json out;
    out["base"] = nf_to_json(*nf.cursor);
    out["lamps"] = std::move(lamps);
    return out;
}

/// Elements embed into JSON as their text literals; parsing also accepts
/// bare numbers (cyclic residues, rank-1 vectors) and integer arrays for
/// the free abelian groups.
inline Json element_to_json(const GroupOracle& G, const GroupElement& a) {
    return Json(G.print(a));
}

inline GroupElement element_from_json(const GroupOracle& G, const Json& j) {
    if (j.is_string()) return G.parse(j.get<std::string>());
    if (j.is_number_integer()) return G.parse(std::to_string(j.get<Int>()));
    if (j.is_array() && G.descriptor().kind == GroupKind::FreeAbelian) {
        std::vector<Int> v = j.get<std::vector<Int>>();
        if (static_cast<int>(v.size()) != G.descriptor().rank)
            throw input_error("element JSON: wrong coordinate count for " +
                              G.descriptor().str());
        return GroupElement(G.descriptor(), std::move(v));
    }
    throw input_error("element JSON: expected a literal for " + G.descriptor().str());
}

} // namespace clf
