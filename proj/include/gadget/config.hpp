#pragma once

// JSON model configuration and canonical TermSet serialization.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gadget/model.hpp"
#include "gadget/qd.hpp"
#include "gadget/tri.hpp"

namespace gadget {

using json = nlohmann::json;

struct ModelConfig {
    std::string variant = "toric"; // toric | qd | triangular
    std::string lattice_kind = "square";
    int Lx = 2, Ly = 2;
    std::string group = "Z2"; // qd only
    double U = 1.0, t = 0.375, J = 0.09, R = 1.0;
    int logical_i0 = 0, logical_j0 = 0;
};

inline ModelConfig parse_config(const json& j) {
    ModelConfig c;
    if (j.contains("variant")) c.variant = j.at("variant").get<std::string>();
    if (c.variant != "toric" && c.variant != "qd" && c.variant != "triangular")
        throw std::invalid_argument("config: unknown variant " + c.variant);
    if (j.contains("lattice")) {
        const auto& l = j.at("lattice");
        if (l.contains("kind")) c.lattice_kind = l.at("kind").get<std::string>();
        if (l.contains("Lx")) c.Lx = l.at("Lx").get<int>();
        if (l.contains("Ly")) c.Ly = l.at("Ly").get<int>();
    }
    if (c.variant == "triangular") c.lattice_kind = "triangular";
    if (j.contains("group")) {
        const auto& g = j.at("group");
        c.group = g.is_string() ? g.get<std::string>()
                                : g.at("preset").get<std::string>();
    }
    if (j.contains("couplings")) {
        const auto& k = j.at("couplings");
        if (k.contains("U")) c.U = k.at("U").get<double>();
        if (k.contains("t")) c.t = k.at("t").get<double>();
        if (k.contains("J")) c.J = k.at("J").get<double>();
        if (k.contains("R")) c.R = k.at("R").get<double>();
    }
    if (j.contains("logical")) {
        c.logical_i0 = j.at("logical").value("i0", 0);
        c.logical_j0 = j.at("logical").value("j0", 0);
    }
    return c;
}

inline ModelConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") +
                                    e.what());
    }
    return parse_config(j);
}

inline TermSet build_toric_from(const ModelConfig& c) {
    ModelSpec s;
    s.lattice = TorusLattice::build(c.lattice_kind, c.Lx, c.Ly);
    s.U = c.U;
    s.t = c.t;
    s.J = c.J;
    s.logical_i0 = c.logical_i0;
    s.logical_j0 = c.logical_j0;
    return build_modified_toric(s);
}

inline QdTerms build_qd_from(const ModelConfig& c) {
    QdSpec s;
    s.lattice = TorusLattice::build(c.lattice_kind, c.Lx, c.Ly);
    s.G = GroupTable::preset(c.group);
    s.U = c.U;
    s.t = c.t;
    s.J = c.J;
    return build_quantum_double(s);
}

inline TriTerms build_tri_from(const ModelConfig& c) {
    TriSpec s;
    s.lattice = TorusLattice::build("triangular", c.Lx, c.Ly);
    s.U = c.U;
    s.t = c.t;
    s.J = c.J;
    s.R = c.R;
    return build_triangular(s);
}

// canonical serialized TermSet (versioned) for golden tests and fingerprints
inline json serialize_termset(const TermSet& T) {
    json j;
    j["format"] = "gadget-termset";
    j["version"] = 1;
    j["lattice"] = {{"kind", "square"},
                    {"Lx", T.lattice.Lx},
                    {"Ly", T.lattice.Ly}};
    j["couplings"] = {{"U", T.spec.U}, {"t", T.spec.t}, {"J", T.spec.J}};
    auto masks = [&](const PauliOp& p) {
        json o;
        std::vector<int> xs, zs;
        for (int q = 0; q < T.n_qubits(); ++q) {
            if (p.xmask().get(q)) xs.push_back(q);
            if (p.zmask().get(q)) zs.push_back(q);
        }
        o["x"] = xs;
        o["z"] = zs;
        return o;
    };
    for (const auto& a : T.stars) j["stars"].push_back(masks(a));
    for (const auto& b : T.plaquettes) j["plaquettes"].push_back(masks(b));
    for (const auto& c : T.edges) j["edges"].push_back(masks(c));
    for (const auto& sched : T.hop_schedule) {
        json row = json::array();
        for (const auto& h : sched) row.push_back(masks(h));
        j["hop_schedule"].push_back(row);
    }
    for (int l = 0; l < 2; ++l)
        for (int p = 0; p < 2; ++p)
            j["logicals"].push_back(masks(T.logicals[l][p]));
    for (const auto& sp : T.shield_pairs)
        j["shield_pairs"].push_back(
            {{"s", sp.s}, {"s2", sp.s2}, {"horizontal", sp.horizontal}});
    return j;
}

inline std::string model_fingerprint(const json& serialized) {
    std::string s = serialized.dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace gadget
