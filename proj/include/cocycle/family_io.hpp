#pragma once

#include <string>

#include "cocycle/family.hpp"
#include "json.hpp"

namespace cocycle {

// Family file (JSON):
//   {"preset": "cd-n1", "seed": 7}
//   {"base": {"type": "bernoulli", "probs": [...], "seed": 7},
//    "symbols": [{"A": [[a11, a12], [a21, a22]], "E": [[...], [...]]}, ...]}
//   {"base": {...}, "schrodinger": {"potential": [v_1, ..., v_kappa]}}
//   {"base": {"type": "torus", "alpha": a, "x0": x}, "schrodinger": {"kind": "cosine", "lambda": l, "phase": p}}
AffineFamily family_from_json(const nlohmann::json& j);
nlohmann::ordered_json family_to_json(const AffineFamily& f);

AffineFamily load_family(const std::string& path);
void save_family(const AffineFamily& f, const std::string& path);

}  // namespace cocycle
