#include "cocycle/family_io.hpp"

#include <fstream>
#include <sstream>

#include "cocycle/presets.hpp"

namespace cocycle {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Mat2d mat_from(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
        j[1].size() != 2)
        throw DomainError(std::string("family file: ") + what + " must be a 2x2 array");
    return {j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(), j[1][1].get<double>()};
}

ordered_json mat_to(const Mat2d& m) { return {{m.a11, m.a12}, {m.a21, m.a22}}; }

}  // namespace

AffineFamily family_from_json(const json& j) {
    try {
        uint64_t seed = j.value("seed", uint64_t{1});
        if (j.contains("preset") && !j.contains("base")) return make_preset(j.at("preset").get<std::string>(), seed);

        const json& b = j.at("base");
        std::string type = b.value("type", std::string("bernoulli"));
        if (type == "torus") {
            TorusBase tb(b.at("alpha").get<double>(), b.value("x0", 0.0));
            if (!j.contains("schrodinger"))
                throw DomainError("family file: torus bases support only the schrodinger form");
            const json& s = j.at("schrodinger");
            TorusPotential v;
            v.kind = s.value("kind", std::string("cosine"));
            if (v.kind != "cosine" && v.kind != "identity")
                throw DomainError("family file: torus potential kind must be 'cosine' or 'identity'");
            v.lambda = s.value("lambda", 1.0);
            v.phase = s.value("phase", 0.0);
            AffineFamily f = schrodinger_family(tb, v);
            if (j.contains("preset")) f.preset = j.at("preset").get<std::string>();
            return f;
        }
        if (type != "bernoulli") throw DomainError("family file: base type must be 'bernoulli' or 'torus'");
        BernoulliBase bb(b.at("probs").get<std::vector<double>>(), b.value("seed", seed));
        AffineFamily f;
        if (j.contains("schrodinger")) {
            auto pot = j.at("schrodinger").at("potential").get<std::vector<double>>();
            if (static_cast<int>(pot.size()) != bb.kappa())
                throw DomainError("family file: potential length differs from the number of probabilities");
            f = schrodinger_family(bb, pot);
        } else {
            const json& syms = j.at("symbols");
            if (!syms.is_array() || static_cast<int>(syms.size()) != bb.kappa())
                throw DomainError("family file: 'symbols' must list one entry per probability");
            std::vector<Mat2d> A, E;
            for (const auto& s : syms) {
                A.push_back(mat_from(s.at("A"), "A"));
                E.push_back(mat_from(s.at("E"), "E"));
            }
            f = make_family(bb, A, E);
        }
        if (j.contains("preset")) f.preset = j.at("preset").get<std::string>();
        return f;
    } catch (const json::exception& e) {
        throw DomainError(std::string("family file: ") + e.what());
    }
}

ordered_json family_to_json(const AffineFamily& f) {
    ordered_json j;
    if (!f.preset.empty()) j["preset"] = f.preset;
    if (f.bernoulli_base()) {
        j["base"] = {{"type", "bernoulli"}, {"probs", f.bernoulli.probs}, {"seed", f.bernoulli.seed}};
        ordered_json syms = ordered_json::array();
        for (int i = 0; i < f.kappa(); ++i) syms.push_back({{"A", mat_to(f.A[i])}, {"E", mat_to(f.E[i])}});
        j["symbols"] = syms;
        return j;
    }
    if (!f.torus_serializable) throw DomainError("family_to_json: torus family built from code cannot be saved");
    j["base"] = {{"type", "torus"}, {"alpha", f.torus.alpha}, {"x0", f.torus.x0}};
    j["schrodinger"] = {{"kind", f.potential.kind}, {"lambda", f.potential.lambda}, {"phase", f.potential.phase}};
    return j;
}

AffineFamily load_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open family file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::exception& e) {
        throw DomainError("family file '" + path + "' is not valid JSON: " + e.what());
    }
    return family_from_json(j);
}

void save_family(const AffineFamily& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write '" + path + "'");
    out << family_to_json(f).dump(2) << "\n";
}

}  // namespace cocycle
