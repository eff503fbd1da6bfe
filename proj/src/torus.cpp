#include "sparsespec/torus.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace sparsespec {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Twiddles w^k = e^{-2 pi i k/n}, k < n/2, computed once per grid size.
// Direct cos/sin per entry: recurrences lose precision at the accuracy the
// round-trip contract needs.  The cache is immutable after insertion.
std::shared_ptr<const std::vector<cplx>> twiddles_for(std::size_t n) {
    static std::mutex mu;
    static std::unordered_map<std::size_t, std::shared_ptr<const std::vector<cplx>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        auto t = std::make_shared<std::vector<cplx>>(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k)
            (*t)[k] = std::polar(1.0, -two_pi * static_cast<double>(k) / static_cast<double>(n));
        slot = std::move(t);
    }
    return slot;
}

// Iterative radix-2 Cooley-Tukey, forward sign convention e^{-2 pi i jk/G}.
// Grids are powers of two by construction, so no general-length machinery.
void fft_forward(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    if (n == 1)
        return;
    const auto tw = twiddles_for(n);
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx w = (*tw)[k * stride];
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

void fft_backward(std::vector<cplx>& a) { // unnormalized inverse
    for (auto& z : a)
        z = std::conj(z);
    fft_forward(a);
    for (auto& z : a)
        z = std::conj(z);
}

} // namespace

namespace detail {
void fft_forward_inplace(std::vector<cplx>& a) { fft_forward(a); }
void fft_backward_inplace(std::vector<cplx>& a) { fft_backward(a); }
} // namespace detail

namespace {

void require_grid(std::int64_t g) {
    if (g < 2 || !is_pow2(g))
        throw Error(errc::bad_input, "grid size must be a power of two >= 2, got " + std::to_string(g));
}

} // namespace

bool is_pow2(std::int64_t g) { return g > 0 && (g & (g - 1)) == 0; }

std::int64_t next_pow2(std::int64_t n) {
    std::int64_t g = 1;
    while (g < n)
        g <<= 1;
    return g;
}

SampledFunction::SampledFunction(std::vector<cplx> samples) : samples_(std::move(samples)) {
    require_grid(grid_size());
}

SampledFunction SampledFunction::zeros(std::int64_t grid_size) {
    require_grid(grid_size);
    SampledFunction f;
    f.samples_.assign(static_cast<std::size_t>(grid_size), cplx{0.0, 0.0});
    return f;
}

std::int64_t SpectralVector::max_abs_frequency() const {
    std::int64_t m = 0;
    if (!entries_.empty()) {
        m = std::max(std::abs(entries_.begin()->first), std::abs(entries_.rbegin()->first));
    }
    return m;
}

double SpectralVector::energy() const {
    double e = 0.0;
    for (const auto& [n, c] : entries_)
        e += std::norm(c);
    return e;
}

double SpectralVector::l1() const {
    double s = 0.0;
    for (const auto& [n, c] : entries_)
        s += std::abs(c);
    return s;
}

double AtomicMeasure::total_variation() const {
    double tv = 0.0;
    for (const auto& a : atoms)
        tv += std::abs(a.weight);
    return tv;
}

SpectralVector analyze(const SampledFunction& f) {
    const std::int64_t g = f.grid_size();
    std::vector<cplx> a = f.samples();
    fft_forward(a);
    // x_j = j/G - 1/2 shifts the standard DFT by (-1)^n; 1/G lives on the
    // analysis side (probability measure on the torus).
    SpectralVector v;
    const double inv_g = 1.0 / static_cast<double>(g);
    for (std::int64_t n = -g / 2 + 1; n <= g / 2; ++n) {
        const std::int64_t m = n >= 0 ? n : n + g;
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        v.set(n, a[static_cast<std::size_t>(m)] * (sign * inv_g));
    }
    return v;
}

SampledFunction synthesize(const SpectralVector& v, std::int64_t grid_size) {
    require_grid(grid_size);
    const std::int64_t g = grid_size;
    std::vector<cplx> bins(static_cast<std::size_t>(g), cplx{0.0, 0.0});
    for (const auto& [n, c] : v) {
        if (n <= -g / 2 || n > g / 2)
            throw Error(errc::frequency_overflow,
                        "frequency " + std::to_string(n) + " outside (-G/2, G/2] for G = " + std::to_string(g));
        const std::int64_t m = n >= 0 ? n : n + g;
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        bins[static_cast<std::size_t>(m)] = c * sign;
    }
    fft_backward(bins);
    return SampledFunction(std::move(bins));
}

double sup_norm(const SampledFunction& f) {
    double m = 0.0;
    for (const auto& z : f.samples())
        m = std::max(m, std::abs(z));
    return m;
}

double lp_norm(const SampledFunction& f, double p) {
    if (p < 1.0)
        throw Error(errc::bad_exponent, "lp_norm requires p >= 1, got " + std::to_string(p));
    double acc = 0.0;
    for (const auto& z : f.samples())
        acc += std::pow(std::abs(z), p);
    acc /= static_cast<double>(f.grid_size());
    return std::pow(acc, 1.0 / p);
}

double weak_l1(const SampledFunction& f) {
    std::vector<double> mags(f.samples().size());
    std::transform(f.samples().begin(), f.samples().end(), mags.begin(),
                   [](const cplx& z) { return std::abs(z); });
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    // Threshold just below the k-th largest value captures k+1 points; the
    // supremum over thresholds is attained at one of these.
    double best = 0.0;
    const double inv_g = 1.0 / static_cast<double>(f.grid_size());
    for (std::size_t k = 0; k < mags.size(); ++k)
        best = std::max(best, mags[k] * static_cast<double>(k + 1) * inv_g);
    return best;
}

cplx pairing(const SampledFunction& f, const SampledFunction& g) {
    if (f.grid_size() != g.grid_size())
        throw Error(errc::grid_mismatch, "pairing needs a shared grid, got " +
                                             std::to_string(f.grid_size()) + " vs " + std::to_string(g.grid_size()));
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < f.samples().size(); ++j)
        acc += f.samples()[j] * std::conj(g.samples()[j]);
    return acc / static_cast<double>(f.grid_size());
}

SpectralVector measure_coeffs(const AtomicMeasure& nu, std::int64_t n_lo, std::int64_t n_hi) {
    std::vector<std::int64_t> freqs;
    freqs.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, n_hi - n_lo + 1)));
    for (std::int64_t n = n_lo; n <= n_hi; ++n)
        freqs.push_back(n);
    return measure_coeffs(nu, freqs);
}

SpectralVector measure_coeffs(const AtomicMeasure& nu, const std::vector<std::int64_t>& freqs) {
    SpectralVector v;
    for (const std::int64_t n : freqs) {
        cplx acc{0.0, 0.0};
        for (const auto& a : nu.atoms)
            acc += a.weight * std::polar(1.0, -two_pi * static_cast<double>(n) * a.position);
        v.set(n, acc);
    }
    return v;
}

double sup_norm_oversampled(const SpectralVector& v, std::int64_t min_grid, int oversample) {
    const std::int64_t need = std::max<std::int64_t>(
        {min_grid, 2, static_cast<std::int64_t>(oversample) * (v.max_abs_frequency() + 1)});
    return sup_norm(synthesize(v, next_pow2(need)));
}

} // namespace sparsespec
