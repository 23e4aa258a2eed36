#include "cocycle/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "cocycle/parallel.hpp"
#include "json.hpp"

namespace cocycle {

namespace {

Mat2d word_product(const AffineFamily& f, const std::vector<uint32_t>& w, size_t from, size_t to, double t) {
    Mat2d p = Mat2d::identity();
    for (size_t j = from; j < to; ++j) p = evaluate(f, w[j], t) * p;
    return p;
}

// first (t, m) on the grid where the split is a gamma-matching
std::optional<MatchingEvent> scan_word(const std::vector<Mat2d>& A, const std::vector<Mat2d>& B,
                                       const std::vector<uint32_t>& w, double gamma, const std::vector<double>& grid) {
    const size_t k = w.size();
    const double lo = std::exp(gamma), hi = 2 * std::exp(gamma) * M_SQRT2;
    std::vector<Mat2d> M(k), pre(k + 1), suf(k + 1);
    for (double t : grid) {
        for (size_t j = 0; j < k; ++j) M[j] = A[w[j]] + B[w[j]] * t;
        pre[0] = Mat2d::identity();
        for (size_t j = 0; j < k; ++j) pre[j + 1] = M[j] * pre[j];
        suf[k] = Mat2d::identity();
        for (size_t j = k; j-- > 0;) suf[j] = suf[j + 1] * M[j];
        for (size_t m = 1; m < k; ++m) {
            // ||X|| <= frob(X) <= sqrt2 ||X||
            double fb = frob(pre[m]), fa = frob(suf[m]);
            if (fb < lo || fb > hi || fa < lo || fa > hi) continue;
            auto gm = gamma_matching(pre[m], suf[m], gamma);
            if (!gm) continue;
            MatchingEvent e;
            e.word = w;
            e.m = static_cast<int>(m);
            e.gamma = gamma;
            e.t_star = t;
            e.e1 = gm->e1;
            e.e2 = gm->e2;
            return e;
        }
    }
    return std::nullopt;
}

double strict_winding_constant(const AffineFamily& f, double J_lo, double J_hi) {
    AssumptionOptions ao;
    ao.J_lo = J_lo;
    ao.J_hi = J_hi;
    return check_assumptions(f, ao).strict_winding.c_star;
}

}  // namespace

bool recertify(const AffineFamily& f, const MatchingEvent& e) {
    if (e.m < 1 || static_cast<size_t>(e.m) >= e.word.size()) return false;
    Mat2d b = word_product(f, e.word, 0, e.m, e.t_star);
    Mat2d a = word_product(f, e.word, e.m, e.word.size(), e.t_star);
    return gamma_conditions_hold(b, a, e.gamma, e.e1, e.e2);
}

MatchingResult detect_matchings(const AffineFamily& f, double gamma, int k, double J_lo, double J_hi,
                                const MatchingOptions& opt) {
    if (!f.bernoulli_base()) throw DomainError("detect_matchings: Bernoulli base required");
    if (k < 2) throw DomainError("detect_matchings: k must be >= 2");
    if (!(gamma > 0)) throw DomainError("detect_matchings: gamma must be > 0");
    if (!(J_hi > J_lo)) throw DomainError("detect_matchings: empty interval J");
    MatchingResult r;
    r.c_star = opt.c_star > 0 ? opt.c_star : strict_winding_constant(f, J_lo, J_hi);
    if (!(r.c_star > 0)) throw DomainError("detect_matchings: family is not strictly winding on J (c* = 0)");
    r.t_step = std::min(std::exp(-gamma) / (4 * r.c_star), 0.5 * (J_hi - J_lo));
    if (opt.max_step > 0) r.t_step = std::min(r.t_step, opt.max_step);
    size_t G = static_cast<size_t>(std::ceil((J_hi - J_lo) / r.t_step)) + 1;
    std::vector<double> grid(G);
    for (size_t i = 0; i < G; ++i) grid[i] = J_lo + (J_hi - J_lo) * static_cast<double>(i) / static_cast<double>(G - 1);

    const auto& probs = f.bernoulli.probs;
    if (opt.exhaustive) {
        const int kap = f.kappa();
        double count = std::pow(static_cast<double>(kap), k);
        if (count > WordEnumerator::max_words) throw DomainError("detect_matchings: too many words to enumerate");
        size_t W = static_cast<size_t>(count);
        std::vector<std::optional<MatchingEvent>> hits(W);
        std::vector<double> weight(W);
        parallel_for(W, opt.workers, [&](size_t i) {
            std::vector<uint32_t> w(k);
            size_t x = i;
            double p = 1;
            for (int j = k - 1; j >= 0; --j) {
                w[j] = static_cast<uint32_t>(x % kap);
                x /= kap;
                p *= probs[w[j]];
            }
            weight[i] = p;
            if (p > 0) hits[i] = scan_word(f.A, f.B, w, gamma, grid);
        });
        for (size_t i = 0; i < W; ++i)
            if (hits[i]) {
                r.mu_sigma += weight[i];
                r.events.push_back(std::move(*hits[i]));
            }
        r.words = W;
    } else {
        if (opt.samples == 0) throw DomainError("detect_matchings: samples must be > 0");
        std::vector<std::optional<MatchingEvent>> hits(opt.samples);
        parallel_for(opt.samples, opt.workers, [&](size_t s) {
            auto w = sample_orbit(f.bernoulli, opt.stream_offset + s, static_cast<size_t>(k));
            hits[s] = scan_word(f.A, f.B, w, gamma, grid);
        });
        size_t h = 0;
        for (auto& e : hits)
            if (e) {
                ++h;
                r.events.push_back(std::move(*e));
            }
        double p = static_cast<double>(h) / static_cast<double>(opt.samples);
        r.mu_sigma = p;
        r.se = std::sqrt(p * (1 - p) / static_cast<double>(opt.samples));
        r.words = opt.samples;
    }
    std::sort(r.events.begin(), r.events.end(), [](const MatchingEvent& a, const MatchingEvent& b) {
        if (a.word != b.word) return a.word < b.word;
        if (a.m != b.m) return a.m < b.m;
        return a.t_star < b.t_star;
    });
    return r;
}

DrhoBound drho_lower_bound_check(const AffineFamily& f, double gamma, int k, double J_lo, double J_hi, size_t n,
                                 size_t samples, const MatchingOptions& opt, double budget) {
    DrhoBound d;
    MatchingOptions mo = opt;
    if (!(mo.c_star > 0)) mo.c_star = strict_winding_constant(f, J_lo, J_hi);
    MatchingResult mr = detect_matchings(f, gamma, k, J_lo, J_hi, mo);
    d.c_star = mr.c_star;
    d.events = mr.events.size();
    d.rhs = mr.mu_sigma / k;
    d.rhs_se = mr.se / k;
    d.delta = 4 * std::exp(-gamma) / d.c_star;
    RotationOptions ro;
    ro.workers = opt.workers;
    ro.stream_offset = opt.stream_offset;
    RhoGrid g = rotation_grid(f, {J_lo - d.delta, J_hi + d.delta}, n, samples, ro);
    d.lhs = g.rel(1);
    d.lhs_se = g.rel_se[1];
    d.pass = d.lhs >= d.rhs - 3 * std::hypot(d.lhs_se, d.rhs_se) - budget;
    return d;
}

HolderProbeReport holder_probe(const AffineFamily& f, double t0, double alpha, const std::vector<int>& scales,
                               const HolderOptions& opt) {
    if (scales.empty()) throw DomainError("holder_probe: no scales");
    HolderProbeReport r;
    r.alpha = alpha;
    r.entropy = f.bernoulli_base() ? entropy(f.bernoulli) : 0.0;
    McOptions mc;
    mc.workers = opt.workers;
    mc.stream_offset = opt.stream_offset;
    r.l1 = lyapunov(f, t0, opt.l1_n, opt.l1_samples, mc).value;
    r.threshold = r.l1 > 0 ? r.entropy / r.l1 : std::numeric_limits<double>::infinity();

    std::vector<int> js = scales;
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    // grid: t0 - h (coarse..fine), t0, t0 + h (fine..coarse)
    std::vector<double> grid;
    for (int j : js) grid.push_back(t0 - std::ldexp(1.0, -j));
    grid.push_back(t0);
    for (auto it = js.rbegin(); it != js.rend(); ++it) grid.push_back(t0 + std::ldexp(1.0, -*it));
    RotationOptions ro;
    ro.workers = opt.workers;
    ro.stream_offset = opt.stream_offset;
    RhoGrid g = rotation_grid(f, grid, opt.n, opt.samples, ro);
    const size_t c = js.size();
    for (size_t i = 0; i < js.size(); ++i) {
        size_t il = i, ir = 2 * c - i;
        double h = std::ldexp(1.0, -js[i]);
        std::vector<double> dl, dr;
        for (const auto& row : g.per_sample) {
            dl.push_back(row[c] - row[il]);
            dr.push_back(row[ir] - row[c]);
        }
        ScalarEstimate el = summarize(dl, opt.n), er = summarize(dr, opt.n);
        HolderRatio hr;
        hr.h = h;
        hr.drho = std::max(std::abs(el.value), std::abs(er.value));
        hr.ratio = hr.drho / std::pow(h, alpha);
        r.drho_se = std::max({r.drho_se, el.std_error, er.std_error});
        r.ratios.push_back(hr);
    }
    double first = r.ratios.front().ratio, mx = 0;
    for (const auto& x : r.ratios) mx = std::max(mx, x.ratio);
    r.max_ratio_growth = first > 0 ? r.ratios.back().ratio / first : std::numeric_limits<double>::infinity();
    r.max_over_first = first > 0 ? mx / first : std::numeric_limits<double>::infinity();
    return r;
}

LogHolderReport log_holder_check(const AffineFamily& f, const std::vector<double>& t_grid, size_t n, size_t samples,
                                 double C_supplied, const RotationOptions& opt) {
    RhoGrid g = rotation_grid(f, t_grid, n, samples, opt);
    LogHolderReport r;
    const double slack = 2.0 / (M_PI * static_cast<double>(n));
    for (size_t i = 0; i < t_grid.size(); ++i)
        for (size_t j = i + 1; j < t_grid.size(); ++j) {
            double dt = std::abs(t_grid[j] - t_grid[i]);
            if (!(dt < 1) || dt == 0) continue;
            double dr = std::abs(g.rho[j] - g.rho[i]);
            double L = std::log(1 / dt);
            ++r.pairs;
            r.C_estimate = std::max(r.C_estimate, dr * L);
            if (C_supplied >= 0 && dr > C_supplied / L + slack) ++r.violations;
        }
    return r;
}

namespace {

struct Eig {
    Vec2d u, s;
};

Vec2d eigvec(const Mat2d& m, double lam) {
    Vec2d a{m.a12, lam - m.a11}, b{lam - m.a22, m.a21};
    return norm(a) >= norm(b) ? unit(a) : unit(b);
}

bool hyperbolic(const Mat2d& m, Eig& e) {
    double tr = m.trace(), dt = m.det();
    double disc = tr * tr - 4 * dt;
    if (!(disc > 1e-12 * std::max(1.0, tr * tr))) return false;
    double sq = std::sqrt(disc);
    double l1 = 0.5 * (tr + (tr >= 0 ? sq : -sq));  // larger modulus
    double l2 = dt / l1;
    e.u = eigvec(m, l1);
    e.s = eigvec(m, l2);
    return true;
}

}  // namespace

std::optional<Tangency> tangency_finder(const AffineFamily& f, double t0, int max_word_len) {
    if (!f.bernoulli_base()) throw DomainError("tangency_finder: Bernoulli base required");
    if (max_word_len < 1) throw DomainError("tangency_finder: max_word_len must be >= 1");
    const int kap = f.kappa();
    double total = 0;
    for (int l = 1; l <= max_word_len; ++l) total += std::pow(kap, l);
    if (total > 2e5) throw DomainError("tangency_finder: too many words (kappa^L > 2e5)");

    std::vector<Mat2d> gen(kap);
    for (int i = 0; i < kap; ++i) gen[i] = evaluate(f, i, t0);
    std::vector<std::vector<uint32_t>> words;
    std::vector<Mat2d> mats;
    size_t prev_begin = 0;
    for (int i = 0; i < kap; ++i) {
        words.push_back({static_cast<uint32_t>(i)});
        mats.push_back(gen[i]);
    }
    for (int l = 2; l <= max_word_len; ++l) {
        size_t end = words.size();
        for (size_t w = prev_begin; w < end; ++w)
            for (int i = 0; i < kap; ++i) {
                auto nw = words[w];
                nw.push_back(i);
                words.push_back(std::move(nw));
                mats.push_back(gen[i] * mats[w]);
            }
        prev_begin = end;
    }

    Tangency best;
    best.distance = std::numeric_limits<double>::infinity();

    // common invariant line of all generators
    {
        std::vector<Vec2d> cand;
        for (const auto& g : gen) {
            bool scalar = std::abs(g.a12) + std::abs(g.a21) + std::abs(g.a11 - g.a22) <= 1e-14 * max_abs(g);
            if (scalar) continue;
            double tr = g.trace(), disc = tr * tr - 4 * g.det();
            if (disc < 0) break;
            double sq = std::sqrt(std::max(disc, 0.0));
            cand = {eigvec(g, 0.5 * (tr + sq)), eigvec(g, 0.5 * (tr - sq))};
            break;
        }
        bool all_scalar = true;
        for (const auto& g : gen)
            if (std::abs(g.a12) + std::abs(g.a21) + std::abs(g.a11 - g.a22) > 1e-14 * max_abs(g)) all_scalar = false;
        if (all_scalar) cand = {{1, 0}};
        for (const auto& d : cand) {
            bool ok = true;
            for (const auto& g : gen)
                if (std::abs(wedge(d, g * d)) > 1e-12 * std::max(1.0, max_abs(g))) ok = false;
            if (ok) {
                best.shared_direction = true;
                best.shared_dir = d;
                break;
            }
        }
    }

    std::vector<std::pair<double, size_t>> s_ang;  // stable directions of hyperbolic words
    std::vector<std::pair<size_t, Vec2d>> unst;
    for (size_t w = 0; w < mats.size(); ++w) {
        Eig e;
        if (!hyperbolic(mats[w], e)) continue;
        s_ang.emplace_back(proj_angle(e.s), w);
        unst.emplace_back(w, e.u);
    }
    best.hyperbolic_words = unst.size();
    if (unst.empty()) return best.shared_direction ? std::optional<Tangency>(best) : std::nullopt;
    if (static_cast<double>(unst.size()) * static_cast<double>(mats.size()) > 5e7)
        throw DomainError("tangency_finder: search too large, lower max_word_len");
    std::sort(s_ang.begin(), s_ang.end());

    size_t bB = 0, bC = 0, bA = 0;
    for (const auto& [wb, u] : unst) {
        for (size_t wc = 0; wc < mats.size(); ++wc) {
            double th = proj_angle(mats[wc] * u);
            auto it = std::lower_bound(s_ang.begin(), s_ang.end(), std::make_pair(th, size_t(0)));
            // neighbours, circular mod pi
            const std::pair<double, size_t>* nb[2] = {
                it == s_ang.end() ? &s_ang.front() : &*it,
                it == s_ang.begin() ? &s_ang.back() : &*(it - 1)};
            for (auto* p : nb) {
                double d = std::abs(th - p->first);
                d = std::min(d, M_PI - d);
                double dist = std::sin(d);
                if (dist < best.distance) {
                    best.distance = dist;
                    bB = wb;
                    bC = wc;
                    bA = p->second;
                }
            }
        }
    }
    best.B = words[bB];
    best.C = words[bC];
    best.A = words[bA];
    best.found = best.distance < 1e-8;
    return best;
}

std::string event_to_json_line(const MatchingEvent& e) {
    nlohmann::ordered_json j;
    j["word"] = e.word;
    j["m"] = e.m;
    j["gamma"] = e.gamma;
    j["t_star"] = e.t_star;
    j["e1"] = {e.e1.x, e.e1.y};
    j["e2"] = {e.e2.x, e.e2.y};
    return j.dump();
}

MatchingEvent event_from_json_line(const std::string& line) {
    try {
        auto j = nlohmann::json::parse(line);
        MatchingEvent e;
        e.word = j.at("word").get<std::vector<uint32_t>>();
        e.m = j.at("m").get<int>();
        e.gamma = j.at("gamma").get<double>();
        e.t_star = j.at("t_star").get<double>();
        auto a = j.at("e1"), b = j.at("e2");
        e.e1 = {a.at(0).get<double>(), a.at(1).get<double>()};
        e.e2 = {b.at(0).get<double>(), b.at(1).get<double>()};
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw DomainError(std::string("malformed event record: ") + ex.what());
    }
}

}  // namespace cocycle
