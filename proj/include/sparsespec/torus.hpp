#ifndef SPARSESPEC_TORUS_HPP
#define SPARSESPEC_TORUS_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "sparsespec/errors.hpp"

namespace sparsespec {

using cplx = std::complex<double>;

// Function sampled on the uniform grid x_j = j/G - 1/2 of the torus
// T = [-1/2, 1/2).  G must be a power of two, G >= 2.
class SampledFunction {
public:
    SampledFunction() = default;
    explicit SampledFunction(std::vector<cplx> samples);
    static SampledFunction zeros(std::int64_t grid_size);

    std::int64_t grid_size() const { return static_cast<std::int64_t>(samples_.size()); }
    double x(std::int64_t j) const { return static_cast<double>(j) / static_cast<double>(grid_size()) - 0.5; }

    const std::vector<cplx>& samples() const { return samples_; }
    std::vector<cplx>& samples() { return samples_; }
    cplx operator[](std::int64_t j) const { return samples_[static_cast<std::size_t>(j)]; }
    cplx& operator[](std::int64_t j) { return samples_[static_cast<std::size_t>(j)]; }

private:
    std::vector<cplx> samples_;
};

// Finite map frequency -> complex coefficient.  Entries that are exactly
// zero are dropped on insertion; frequencies are exact integers.
class SpectralVector {
public:
    using map_type = std::map<std::int64_t, cplx>;

    SpectralVector() = default;

    void set(std::int64_t n, cplx c) {
        if (c == cplx{0.0, 0.0})
            entries_.erase(n);
        else
            entries_[n] = c;
    }
    void add(std::int64_t n, cplx c) { set(n, at(n) + c); }

    cplx at(std::int64_t n) const {
        auto it = entries_.find(n);
        return it == entries_.end() ? cplx{0.0, 0.0} : it->second;
    }
    bool contains(std::int64_t n) const { return entries_.count(n) != 0; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    map_type::const_iterator begin() const { return entries_.begin(); }
    map_type::const_iterator end() const { return entries_.end(); }

    std::int64_t max_abs_frequency() const;
    double energy() const; // sum |c_n|^2
    double l1() const;     // sum |c_n|

private:
    map_type entries_;
};

// Finite complex Borel measure given by point masses.
struct AtomicMeasure {
    struct Atom {
        double position; // in [-1/2, 1/2)
        cplx weight;
    };
    std::vector<Atom> atoms;

    double total_variation() const;
};

// Discrete Fourier coefficients on the grid: c_n = (1/G) sum_j f(x_j) e^{-2 pi i n x_j},
// for all n in (-G/2, G/2].  Exact for trigonometric polynomials of degree < G/2.
SpectralVector analyze(const SampledFunction& f);

// f(x_j) = sum_n c_n e^{2 pi i n x_j}.  Requires every frequency in (-G/2, G/2].
SampledFunction synthesize(const SpectralVector& v, std::int64_t grid_size);

double sup_norm(const SampledFunction& f);

// ((1/G) sum |f_j|^p)^{1/p}, p >= 1.
double lp_norm(const SampledFunction& f, double p);

// sup_t t * |{ |f| > t }| computed exactly on the grid by a sorted threshold scan.
double weak_l1(const SampledFunction& f);

// (1/G) sum_j f_j conj(g_j); equals sum_n fhat(n) conj(ghat(n)) for band-limited inputs.
cplx pairing(const SampledFunction& f, const SampledFunction& g);

// nu_hat(n) = sum_j w_j e^{-2 pi i n pos_j} for n in [n_lo, n_hi].
SpectralVector measure_coeffs(const AtomicMeasure& nu, std::int64_t n_lo, std::int64_t n_hi);
// Same, for an explicit frequency list.
SpectralVector measure_coeffs(const AtomicMeasure& nu, const std::vector<std::int64_t>& freqs);

// Sup-norm of the polynomial with the given coefficients, measured on a grid
// oversampling the top frequency by at least `oversample` (grid size still a
// power of two).
double sup_norm_oversampled(const SpectralVector& v, std::int64_t min_grid, int oversample = 4);

bool is_pow2(std::int64_t g);
std::int64_t next_pow2(std::int64_t n);

namespace detail {
// Raw power-of-two transforms on DFT bin layout (no 1/G, no grid shift);
// the solver's inner loop uses these to skip the map-based plumbing.
void fft_forward_inplace(std::vector<cplx>& a);
void fft_backward_inplace(std::vector<cplx>& a);
} // namespace detail

} // namespace sparsespec

#endif
