// generators.hpp: parametric state families: the three-qutrit parity
// counter-example, its F-fragment generalization, random SBS states and
// seeded perturbations.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sbs/rng.hpp"
#include "sbs/state.hpp"

namespace sbs {

namespace detail {

inline void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(Errc::param_out_of_range, std::string(name) + " out of range [0, 1]", p);
    }
}

inline Labels system_and_fragments(std::size_t fragments) { return default_labels(fragments + 1); }

}  // namespace detail

// Normalized G G^dagger with G a complex Gaussian matrix; full rank almost
// surely.
inline DensityMatrix random_density_matrix(std::size_t dim, Rng& rng) {
    const auto d = detail::idx(dim);
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix::unchecked(0.5 * (rho + rho.adjoint()));
}

// Unitary from the QR decomposition of a complex Gaussian matrix, with the
// phases of R's diagonal absorbed.
inline Matrix random_unitary(std::size_t dim, Rng& rng) {
    const auto d = detail::idx(dim);
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Eigen::Index k = 0; k < d; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) q.col(k) *= r(k, k) / mag;
    }
    return q;
}

// Full-rank random state with the given subsystem structure.
inline MultipartiteState random_state(const Dims& dims, Rng& rng) {
    return MultipartiteState(random_density_matrix(detail::product(dims), rng), dims);
}

// Uniform mixture of the strings in {1, 2}^F with an odd number of 1s, on F
// qutrits. For F = 3 these are 111, 122, 212, 221.
inline DensityMatrix odd_parity_state(std::size_t fragments) {
    const Dims dims(fragments, 3);
    const auto d = detail::idx(detail::product(dims));
    Matrix m = Matrix::Zero(d, d);
    const std::size_t count = std::size_t{1} << (fragments - 1);
    for (std::size_t bits = 0; bits < (std::size_t{1} << fragments); ++bits) {
        // bit k set -> symbol 1, clear -> symbol 2
        if (std::popcount(bits) % 2 == 0) continue;
        std::size_t position = 0;
        for (std::size_t k = 0; k < fragments; ++k) {
            const std::size_t symbol = (bits >> (fragments - 1 - k)) & 1U ? 1 : 2;
            position = position * 3 + symbol;
        }
        m(detail::idx(position), detail::idx(position)) = 1.0 / static_cast<double>(count);
    }
    return DensityMatrix::unchecked(std::move(m));
}

// (1-p) |0><0| (x) |0...0><0...0| + p |1><1| (x) odd_parity_state(F), on a
// qubit system and F qutrit fragments.
inline MultipartiteState parity_family(std::size_t fragments, double p) {
    if (fragments < 3) throw Error(Errc::param_out_of_range, "parity family needs F >= 3", double(fragments));
    detail::require_probability(p, "p");
    Dims dims{2};
    dims.insert(dims.end(), fragments, 3);

    const Dims env(fragments, 3);
    const Matrix zero_env = basis_projector(env, std::vector<std::size_t>(fragments, 0)).matrix();
    const Matrix one_env = odd_parity_state(fragments).matrix();
    Matrix sys0 = Matrix::Zero(2, 2), sys1 = Matrix::Zero(2, 2);
    sys0(0, 0) = 1.0;
    sys1(1, 1) = 1.0;
    Matrix rho = (1.0 - p) * kron(sys0, zero_env) + p * kron(sys1, one_env);
    return MultipartiteState(DensityMatrix::unchecked(std::move(rho)), std::move(dims),
                             detail::system_and_fragments(fragments));
}

// Qubit system and three qutrit fragments: pairwise conditionally independent
// yet not SBS for 0 < p <= 1.
inline MultipartiteState counterexample(double p) {
    detail::require_probability(p, "p");
    return parity_family(3, p);
}

// sum_s p_s |s><s| (x) rho_E1^(s) (x) ... (x) rho_EF^(s): flat-simplex
// probabilities, and each rho_Ei^(s) a random mixed state inside the index
// window [s*w, (s+1)*w) with w = floor(d_i / n_pointer).
inline MultipartiteState random_sbs(const Dims& dims, std::size_t n_pointer, std::uint64_t seed) {
    if (dims.size() < 3) throw Error(Errc::param_out_of_range, "random SBS needs a system and >= 2 fragments");
    if (n_pointer == 0) throw Error(Errc::param_out_of_range, "n_pointer must be positive");
    for (auto d : dims) {
        if (d < n_pointer) {
            throw Error(Errc::param_out_of_range,
                        "every dimension must be >= n_pointer (" + std::to_string(n_pointer) + "), got " +
                            std::to_string(d),
                        double(d));
        }
    }
    Rng rng(seed);

    std::vector<double> probs(n_pointer);
    double total = 0.0;
    for (auto& p : probs) total += (p = -std::log(rng.uniform_open()));
    for (auto& p : probs) p /= total;

    const auto ds = detail::idx(dims.front());
    const auto d = detail::idx(detail::product(dims));
    Matrix rho = Matrix::Zero(d, d);
    for (std::size_t s = 0; s < n_pointer; ++s) {
        Matrix term = Matrix::Zero(ds, ds);
        term(detail::idx(s), detail::idx(s)) = 1.0;
        for (std::size_t i = 1; i < dims.size(); ++i) {
            const std::size_t width = dims[i] / n_pointer;
            const auto local = random_density_matrix(width, rng);
            Matrix embedded = Matrix::Zero(detail::idx(dims[i]), detail::idx(dims[i]));
            embedded.block(detail::idx(s * width), detail::idx(s * width), detail::idx(width), detail::idx(width)) =
                local.matrix();
            term = kron(term, embedded);
        }
        rho += probs[s] * term;
    }
    return MultipartiteState(DensityMatrix::unchecked(std::move(rho)), dims,
                             detail::system_and_fragments(dims.size() - 1));
}

// (1 - epsilon) rho + epsilon sigma with sigma a seeded random full-rank state.
inline MultipartiteState perturb(const MultipartiteState& s, double epsilon, std::uint64_t seed) {
    detail::require_probability(epsilon, "epsilon");
    Rng rng(seed);
    const auto sigma = random_density_matrix(s.dim(), rng);
    Matrix mixed = (1.0 - epsilon) * s.matrix() + epsilon * sigma.matrix();
    return MultipartiteState(DensityMatrix::validated(mixed), s.dims(), s.labels());
}

enum class Family { counterexample, parity_family, random_sbs, perturbed };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::counterexample: return "counterexample";
        case Family::parity_family: return "parity-family";
        case Family::random_sbs: return "random-sbs";
        case Family::perturbed: return "perturbed";
    }
    return "unknown";
}

// Accepts both dash and underscore spellings.
inline Family parse_family(std::string_view name) {
    std::string n(name);
    for (auto& c : n) {
        if (c == '_') c = '-';
    }
    if (n == "counterexample") return Family::counterexample;
    if (n == "parity-family" || n == "parity") return Family::parity_family;
    if (n == "random-sbs") return Family::random_sbs;
    if (n == "perturbed") return Family::perturbed;
    throw Error(Errc::invalid_argument, "unknown state family '" + std::string(name) + "'");
}

// Named generator with its parameters. `perturbed` perturbs
// random_sbs(dims, n_pointer, seed) with noise drawn from seed + 1.
struct FamilySpec {
    Family family = Family::counterexample;
    double p = 0.5;
    std::size_t fragments = 3;
    Dims dims{2, 2, 2};
    std::size_t n_pointer = 2;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

inline MultipartiteState generate(const FamilySpec& spec) {
    switch (spec.family) {
        case Family::counterexample: return counterexample(spec.p);
        case Family::parity_family: return parity_family(spec.fragments, spec.p);
        case Family::random_sbs: return random_sbs(spec.dims, spec.n_pointer, spec.seed);
        case Family::perturbed:
            return perturb(random_sbs(spec.dims, spec.n_pointer, spec.seed), spec.epsilon, spec.seed + 1);
    }
    throw Error(Errc::invalid_argument, "unknown state family");
}

}  // namespace sbs
