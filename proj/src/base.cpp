#include "cocycle/base.hpp"

#include <cmath>
#include <stdexcept>

#include "cocycle/mat2.hpp"

namespace cocycle {

BernoulliBase::BernoulliBase(std::vector<double> p, uint64_t s) : probs(std::move(p)), seed(s) {
    if (probs.empty()) throw DomainError("BernoulliBase: no symbols");
    double sum = 0;
    for (double q : probs) {
        if (!(q >= 0)) throw DomainError("BernoulliBase: negative probability");
        sum += q;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("BernoulliBase: probabilities must sum to 1");
    cdf_.resize(probs.size());
    double c = 0;
    for (size_t i = 0; i < probs.size(); ++i) {
        c += probs[i];
        cdf_[i] = c;
    }
    cdf_.back() = 1.0;
}

uint32_t BernoulliBase::symbol(double u) const {
    uint32_t k = 0;
    while (k + 1 < cdf_.size() && u >= cdf_[k]) ++k;
    // skip zero-probability tail symbols hit by rounding
    while (k > 0 && probs[k] == 0) --k;
    return k;
}

TorusBase::TorusBase(double a, double x) : alpha(a), x0(x) {
    if (!(a >= 0 && a < 1)) throw DomainError("TorusBase: alpha must lie in [0, 1)");
    if (!(x >= 0 && x < 1)) throw DomainError("TorusBase: x0 must lie in [0, 1)");
}

namespace {
double frac_sum(double x, double hi, double lo) {
    double fh = hi - std::floor(hi);
    double s = x + fh;
    double r = (s - std::floor(s)) + lo;
    r -= std::floor(r);
    return r >= 1.0 ? 0.0 : r;
}
}  // namespace

double TorusBase::phase(uint64_t n) const {
    double nd = static_cast<double>(n);
    double hi = nd * alpha;
    double lo = std::fma(nd, alpha, -hi);
    return frac_sum(x0, hi, lo);
}

double TorusBase::sample_start(uint64_t s) const {
    const double g = 0.6180339887498949;
    double nd = static_cast<double>(s);
    double hi = nd * g;
    double lo = std::fma(nd, g, -hi);
    return frac_sum(x0, hi, lo);
}

double entropy(const std::vector<double>& probs) {
    double h = 0;
    for (double p : probs)
        if (p > 0) h -= p * std::log(p);
    return h;
}

double entropy(const BernoulliBase& base) { return entropy(base.probs); }

void sample_orbit(const BernoulliBase& base, uint64_t stream, size_t n, std::vector<uint32_t>& out) {
    out.resize(n);
    CounterRng rng(base.seed, stream);
    if (base.kappa() == 1) {
        std::fill(out.begin(), out.end(), 0u);
        return;
    }
    for (size_t i = 0; i < n; ++i) out[i] = base.symbol(rng.uniform());
}

std::vector<uint32_t> sample_orbit(const BernoulliBase& base, uint64_t stream, size_t n) {
    std::vector<uint32_t> out;
    sample_orbit(base, stream, n, out);
    return out;
}

std::vector<double> torus_orbit(const TorusBase& base, double x, size_t n) {
    TorusBase b = base;
    b.x0 = x;
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = b.phase(i);
    return out;
}

uint64_t WordEnumerator::count() const {
    double c = std::pow(static_cast<double>(kappa), length);
    if (c > max_words) throw DomainError("WordEnumerator: kappa^n exceeds 1e8");
    return static_cast<uint64_t>(c + 0.5);
}

void WordEnumerator::for_each(const std::function<void(const std::vector<uint32_t>&, double)>& f) const {
    if (kappa < 1 || length < 1 || length > 20) throw DomainError("WordEnumerator: need kappa >= 1, 1 <= n <= 20");
    uint64_t total = count();
    std::vector<double> p = probs;
    if (p.empty()) p.assign(kappa, 1.0 / kappa);
    if (static_cast<int>(p.size()) != kappa) throw DomainError("WordEnumerator: probs size != kappa");
    std::vector<uint32_t> w(length, 0);
    for (uint64_t i = 0; i < total; ++i) {
        double wt = 1;
        for (uint32_t s : w) wt *= p[s];
        f(w, wt);
        // odometer, last position fastest
        for (int j = length - 1; j >= 0; --j) {
            if (++w[j] < static_cast<uint32_t>(kappa)) break;
            w[j] = 0;
        }
    }
}

std::vector<std::pair<std::vector<uint32_t>, double>> enumerate_words(const WordEnumerator& e) {
    std::vector<std::pair<std::vector<uint32_t>, double>> out;
    out.reserve(e.count());
    e.for_each([&](const std::vector<uint32_t>& w, double wt) { out.emplace_back(w, wt); });
    return out;
}

std::vector<uint64_t> convergent_denominators(double alpha, uint64_t qmax) {
    std::vector<uint64_t> qs;
    double x = alpha;
    uint64_t q0 = 0, q1 = 1;
    qs.push_back(1);
    for (int it = 0; it < 64; ++it) {
        x = x - std::floor(x);
        if (x < 1e-15) break;
        x = 1.0 / x;
        uint64_t a = static_cast<uint64_t>(std::floor(x));
        uint64_t q2 = a * q1 + q0;
        if (q2 > qmax) break;
        qs.push_back(q2);
        q0 = q1;
        q1 = q2;
    }
    return qs;
}

}  // namespace cocycle
