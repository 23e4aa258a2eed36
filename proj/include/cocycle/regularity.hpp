#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cocycle/asym.hpp"
#include "cocycle/family.hpp"

namespace cocycle {

// (B, A) = (A^m(w), A^{k-m}(T^m w)) at t_star is a gamma-matching with AB e1 = e2
struct MatchingEvent {
    std::vector<uint32_t> word;
    int m = 1;
    double gamma = 0;
    double t_star = 0;
    Vec2d e1, e2;
};
// replays conditions (1)-(3) from the stored fields only
bool recertify(const AffineFamily& f, const MatchingEvent& e);

struct MatchingOptions {
    bool exhaustive = true;  // all kappa^k words, weighted by the Bernoulli measure
    size_t samples = 0;      // Monte Carlo words when !exhaustive
    double c_star = 0;       // 0: from check_assumptions on J
    double max_step = 0;     // > 0: cap on the t-grid step (finer grids only add hits)
    int workers = 0;
    uint64_t stream_offset = 0;
};

struct MatchingResult {
    std::vector<MatchingEvent> events;  // at most one per word (first hit)
    double mu_sigma = 0;                // measure of the matching cylinder set
    double se = 0;                      // 0 for exhaustive
    uint64_t words = 0;
    double t_step = 0;
    double c_star = 0;
};
MatchingResult detect_matchings(const AffineFamily& f, double gamma, int k, double J_lo, double J_hi,
                                const MatchingOptions& opt = {});

struct DrhoBound {
    double lhs = 0, lhs_se = 0;  // d rho(J_delta)
    double rhs = 0, rhs_se = 0;  // mu(Sigma) / k
    double delta = 0;
    double c_star = 0;
    size_t events = 0;
    bool pass = false;
};
// pass: lhs >= rhs - 3 (combined se) - budget
DrhoBound drho_lower_bound_check(const AffineFamily& f, double gamma, int k, double J_lo, double J_hi, size_t n,
                                 size_t samples, const MatchingOptions& opt = {}, double budget = 1e-3);

struct HolderRatio {
    double h = 0;
    double drho = 0;   // max of the one-sided increments at distance h
    double ratio = 0;  // drho / h^alpha
};
struct HolderProbeReport {
    double alpha = 0;
    double threshold = 0;  // H(mu) / L1(A_t0)
    double entropy = 0, l1 = 0;
    std::vector<HolderRatio> ratios;  // coarse to fine
    double max_ratio_growth = 0;      // finest / coarsest
    double max_over_first = 0;        // max ratio / coarsest
    double drho_se = 0;               // largest standard error of the increments
};
struct HolderOptions {
    size_t n = 100000;
    size_t samples = 64;
    size_t l1_n = 20000, l1_samples = 64;
    int workers = 0;
    uint64_t stream_offset = 0;
};
HolderProbeReport holder_probe(const AffineFamily& f, double t0, double alpha, const std::vector<int>& scales,
                               const HolderOptions& opt = {});

struct LogHolderReport {
    double C_estimate = 0;
    long violations = 0;
    long pairs = 0;
};
// C_supplied < 0: count violations against the estimate itself (always 0)
LogHolderReport log_holder_check(const AffineFamily& f, const std::vector<double>& t_grid, size_t n, size_t samples,
                                 double C_supplied = -1, const RotationOptions& opt = {});

struct Tangency {
    std::vector<uint32_t> B, C, A;  // words, application order
    double distance = 0;            // d(C u(B), s(A))
    bool found = false;             // distance < 1e-8
    bool shared_direction = false;  // all generators fix a common line
    Vec2d shared_dir;
    size_t hyperbolic_words = 0;
};
std::optional<Tangency> tangency_finder(const AffineFamily& f, double t0, int max_word_len);

// one JSON object per line
std::string event_to_json_line(const MatchingEvent& e);
MatchingEvent event_from_json_line(const std::string& line);

}  // namespace cocycle
