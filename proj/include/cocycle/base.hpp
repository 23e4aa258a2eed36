#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cocycle {

// splitmix64 finalizer
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based generator: value = f(seed, stream, counter), no shared state.
struct CounterRng {
    uint64_t key;
    uint64_t counter = 0;

    CounterRng(uint64_t seed, uint64_t stream) : key(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

    static uint64_t at(uint64_t key, uint64_t i) { return mix64(key + i * 0x9E3779B97F4A7C15ULL); }
    uint64_t next_u64() { return at(key, counter++); }
    // uniform on [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    void seek(uint64_t c) { counter = c; }
};

struct BernoulliBase {
    std::vector<double> probs;
    uint64_t seed = 1;

    BernoulliBase() = default;
    BernoulliBase(std::vector<double> p, uint64_t seed = 1);
    int kappa() const { return static_cast<int>(probs.size()); }
    // inverse cdf
    uint32_t symbol(double u) const;

  private:
    std::vector<double> cdf_;
};

struct TorusBase {
    double alpha = 0;
    double x0 = 0;

    TorusBase() = default;
    TorusBase(double alpha, double x0);
    // frac(x0 + n alpha), n alpha split exactly with fma
    double phase(uint64_t n) const;
    // start phase of Monte Carlo sample s (golden-ratio sequence around x0)
    double sample_start(uint64_t s) const;
};

double entropy(const BernoulliBase& base);
double entropy(const std::vector<double>& probs);

// i.i.d. symbols; identical output for identical (seed, stream, n)
std::vector<uint32_t> sample_orbit(const BernoulliBase& base, uint64_t stream, size_t n);
void sample_orbit(const BernoulliBase& base, uint64_t stream, size_t n, std::vector<uint32_t>& out);

// phases x_0 .. x_{n-1} of a torus orbit started at x
std::vector<double> torus_orbit(const TorusBase& base, double x, size_t n);

struct WordEnumerator {
    int kappa = 2;
    int length = 1;
    std::vector<double> probs;  // empty = uniform

    static constexpr double max_words = 1e8;

    // calls f(word, weight) for every word of the given length, lexicographic order
    void for_each(const std::function<void(const std::vector<uint32_t>&, double)>& f) const;
    uint64_t count() const;
};

std::vector<std::pair<std::vector<uint32_t>, double>> enumerate_words(const WordEnumerator& e);

// continued fraction convergent denominators of alpha up to qmax
std::vector<uint64_t> convergent_denominators(double alpha, uint64_t qmax);

}  // namespace cocycle
