#pragma once

// Modular-robot body trees.
//
// A morphology is a rooted tree of modules: exactly one core (the root),
// structural bricks, and actuated hinges. Each hinge carries one oscillator,
// so hinges define the joint set. Joints are indexed by the order hinges
// appear in a preorder walk of the tree; that order is the canonical joint
// numbering used by genotype layouts and rollout logs.

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace evolab::cpg {

enum class ModuleKind { core, brick, hinge };

inline const char* to_string(ModuleKind k) {
    switch (k) {
        case ModuleKind::core: return "core";
        case ModuleKind::brick: return "brick";
        case ModuleKind::hinge: return "hinge";
    }
    return "?";
}

inline ModuleKind module_kind_from_string(const std::string& s) {
    if (s == "core") return ModuleKind::core;
    if (s == "brick") return ModuleKind::brick;
    if (s == "hinge") return ModuleKind::hinge;
    throw std::invalid_argument("unknown module kind: " + s);
}

// Tree stored in preorder: module 0 is the root, parent[i] < i for i > 0.
struct Morphology {
    std::vector<ModuleKind> kinds;
    std::vector<int> parent;  // parent[0] == -1

    int module_count() const { return static_cast<int>(kinds.size()); }

    int joint_count() const {
        int k = 0;
        for (ModuleKind m : kinds)
            if (m == ModuleKind::hinge) ++k;
        return k;
    }

    // joint index -> module id, in preorder
    std::vector<int> hinge_modules() const {
        std::vector<int> out;
        for (int i = 0; i < module_count(); ++i)
            if (kinds[i] == ModuleKind::hinge) out.push_back(i);
        return out;
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(kinds.size());
        for (int i = 1; i < module_count(); ++i) {
            adj[parent[i]].push_back(i);
            adj[i].push_back(parent[i]);
        }
        return adj;
    }

    // Throws std::invalid_argument unless the tree has exactly one core, at
    // the root, with consistent preorder parent links.
    void validate() const {
        if (kinds.empty()) throw std::invalid_argument("morphology: empty tree");
        if (kinds.size() != parent.size())
            throw std::invalid_argument("morphology: kinds/parent size mismatch");
        if (kinds[0] != ModuleKind::core)
            throw std::invalid_argument("morphology: root must be the core");
        if (parent[0] != -1)
            throw std::invalid_argument("morphology: root must have no parent");
        for (int i = 1; i < module_count(); ++i) {
            if (parent[i] < 0 || parent[i] >= i)
                throw std::invalid_argument("morphology: parents must precede children");
            if (kinds[i] == ModuleKind::core)
                throw std::invalid_argument("morphology: more than one core");
        }
    }
};

// Hinge pairs whose tree distance (edges, counted over all modules) is at
// most two. Pairs are canonical: (a, b) with a < b in joint indices, sorted
// lexicographically. Directly attached hinges (distance 1) qualify.
inline std::vector<std::pair<int, int>> neighbor_pairs(const Morphology& m) {
    m.validate();
    const auto adj = m.adjacency();
    const auto hinges = m.hinge_modules();
    std::vector<int> joint_of(m.module_count(), -1);
    for (int j = 0; j < static_cast<int>(hinges.size()); ++j) joint_of[hinges[j]] = j;

    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < static_cast<int>(hinges.size()); ++j) {
        // breadth-first to depth 2 from each hinge
        std::vector<int> dist(m.module_count(), -1);
        std::queue<int> q;
        dist[hinges[j]] = 0;
        q.push(hinges[j]);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            if (dist[u] == 2) continue;
            for (int v : adj[u]) {
                if (dist[v] != -1) continue;
                dist[v] = dist[u] + 1;
                q.push(v);
                if (joint_of[v] > j)  // canonical orientation, no duplicates
                    pairs.emplace_back(j, joint_of[v]);
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

// --- serialization: nested {kind, children} records ------------------------

inline nlohmann::json morphology_to_json(const Morphology& m) {
    m.validate();
    std::vector<std::vector<int>> children(m.kinds.size());
    for (int i = 1; i < m.module_count(); ++i) children[m.parent[i]].push_back(i);
    // preorder ids make a recursive emit safe
    auto emit = [&](auto&& self, int id) -> nlohmann::json {
        nlohmann::json node;
        node["kind"] = to_string(m.kinds[id]);
        node["children"] = nlohmann::json::array();
        for (int c : children[id]) node["children"].push_back(self(self, c));
        return node;
    };
    return emit(emit, 0);
}

inline Morphology morphology_from_json(const nlohmann::json& j) {
    Morphology m;
    auto parse = [&](auto&& self, const nlohmann::json& node, int parent_id) -> void {
        if (!node.is_object() || !node.contains("kind"))
            throw std::invalid_argument("morphology json: node needs a kind");
        for (const auto& [key, _] : node.items())
            if (key != "kind" && key != "children")
                throw std::invalid_argument("morphology json: unknown key " + key);
        const int id = m.module_count();
        m.kinds.push_back(module_kind_from_string(node.at("kind").get<std::string>()));
        m.parent.push_back(parent_id);
        if (node.contains("children"))
            for (const auto& child : node.at("children")) self(self, child, id);
    };
    parse(parse, j, -1);
    m.validate();
    return m;
}

// --- presets ----------------------------------------------------------------

// Four limbs off the core, each limb hinge-brick-hinge-brick: 8 joints, and
// 10 neighbor pairs (one per limb plus all first-hinge pairs through the core).
inline Morphology spider_morphology() {
    Morphology m;
    m.kinds.push_back(ModuleKind::core);
    m.parent.push_back(-1);
    for (int limb = 0; limb < 4; ++limb) {
        const ModuleKind chain[4] = {ModuleKind::hinge, ModuleKind::brick,
                                     ModuleKind::hinge, ModuleKind::brick};
        int attach = 0;
        for (ModuleKind k : chain) {
            m.kinds.push_back(k);
            m.parent.push_back(attach);
            attach = m.module_count() - 1;
        }
    }
    m.validate();
    return m;
}

}  // namespace evolab::cpg
