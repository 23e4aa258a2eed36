#include "cocycle/presets.hpp"

#include <cmath>

namespace cocycle {

std::vector<std::string> preset_names() {
    return {"schrodinger-const", "schrodinger-anderson", "cd-n1", "rotation-diagonal-tangency"};
}

AffineFamily make_preset(const std::string& name, uint64_t seed) {
    AffineFamily f;
    if (name == "schrodinger-const") {
        // free Laplacian, v = 0
        f = schrodinger_family(BernoulliBase({1.0}, seed), {0.0});
    } else if (name == "schrodinger-anderson") {
        f = schrodinger_family(BernoulliBase({0.5, 0.5}, seed), {-1.0, 1.0});
    } else if (name == "cd-n1") {
        const Mat2d C{0, -1, 1, 0};
        const Mat2d D = Mat2d::diag(M_E, 1 / M_E);
        // both E in the r < 0 cone: positive winding
        Mat2d E1 = cone_embed({-1.0, M_PI / 2});
        Mat2d E2 = cone_embed({-1.0, M_PI / 4});
        f = make_family(BernoulliBase({0.5, 0.5}, seed), {C, D}, {E1, E2});
    } else if (name == "rotation-diagonal-tangency") {
        // H and E share the eigendirection e1; second generator is the identity
        const Mat2d H = Mat2d::diag(2.0, 0.5);
        Mat2d E = cone_embed({-1.0, 0.0});
        f = make_family(BernoulliBase({0.5, 0.5}, seed), {H, Mat2d::identity()}, {E, E});
    } else {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw DomainError("unknown preset '" + name + "' (known: " + known + ")");
    }
    f.preset = name;
    return f;
}

}  // namespace cocycle
