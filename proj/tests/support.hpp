// Test-only oracles and state builders. The oracles deliberately avoid the
// library's code paths: partial traces by digit-tuple enumeration, entropies
// from the general (non-Hermitian) eigensolver or from classical
// distributions.

#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <vector>

#include "sbs/sbs.hpp"

namespace sbs::testing {

inline double binary_entropy(double p) {
    double h = 0.0;
    for (double q : {p, 1.0 - p}) {
        if (q > 0.0) h -= q * std::log2(q);
    }
    return h;
}

// All digit tuples of `dims` in lexicographic order (first digit slowest).
inline std::vector<std::vector<std::size_t>> enumerate_basis(const Dims& dims) {
    std::vector<std::vector<std::size_t>> out{{}};
    for (auto d : dims) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& prefix : out) {
            for (std::size_t k = 0; k < d; ++k) {
                auto t = prefix;
                t.push_back(k);
                next.push_back(std::move(t));
            }
        }
        out = std::move(next);
    }
    return out;
}

// Partial trace by explicit enumeration of basis tuples.
inline Matrix oracle_partial_trace(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& keep) {
    const auto basis = enumerate_basis(dims);
    auto project = [&](const std::vector<std::size_t>& t) {
        std::vector<std::size_t> out;
        for (auto k : keep) out.push_back(t[k]);
        return out;
    };
    auto rest = [&](const std::vector<std::size_t>& t) {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (std::find(keep.begin(), keep.end(), k) == keep.end()) out.push_back(t[k]);
        }
        return out;
    };
    std::map<std::vector<std::size_t>, Eigen::Index> kept_pos;
    for (const auto& t : basis) kept_pos.emplace(project(t), 0);
    Eigen::Index n = 0;
    for (auto& [_, pos] : kept_pos) pos = n++;

    Matrix out = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (rest(basis[i]) != rest(basis[j])) continue;
            out(kept_pos[project(basis[i])], kept_pos[project(basis[j])]) +=
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

// von Neumann entropy through the general complex eigensolver.
inline double oracle_entropy(const Matrix& m) {
    Eigen::ComplexEigenSolver<Matrix> solver(m, false);
    double h = 0.0;
    for (const auto& z : solver.eigenvalues()) {
        const double lambda = z.real();
        if (lambda > 1e-15) h -= lambda * std::log2(lambda);
    }
    return h;
}

inline double oracle_entropy(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& keep) {
    if (keep.empty()) return 0.0;
    return oracle_entropy(oracle_partial_trace(m, dims, keep));
}

// Shannon entropy of the marginal on `keep` of a diagonal state, read off
// the diagonal entries one basis tuple at a time.
inline double classical_entropy(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& keep) {
    const auto basis = enumerate_basis(dims);
    std::map<std::vector<std::size_t>, double> marginal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        std::vector<std::size_t> key;
        for (auto k : keep) key.push_back(basis[i][k]);
        marginal[key] += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    double h = 0.0;
    for (const auto& [_, p] : marginal) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

// Classical conditional multipartite MI of a diagonal state:
// sum_i H(P_i C) - H(all, C) - (F - 1) H(C).
inline double classical_cond_multipartite(const Matrix& m, const Dims& dims,
                                          const std::vector<std::vector<std::size_t>>& parts,
                                          const std::vector<std::size_t>& cond) {
    std::vector<std::size_t> all = cond;
    double value = -static_cast<double>(parts.size() - 1) * classical_entropy(m, dims, cond);
    for (const auto& part : parts) {
        auto with = part;
        with.insert(with.end(), cond.begin(), cond.end());
        std::sort(with.begin(), with.end());
        value += classical_entropy(m, dims, with);
        all.insert(all.end(), part.begin(), part.end());
    }
    std::sort(all.begin(), all.end());
    return value - classical_entropy(m, dims, all);
}

inline Matrix diag_state(std::initializer_list<double> values) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index k = 0;
    for (double x : values) v(k++) = x;
    return v.asDiagonal();
}

inline Matrix pure(const Eigen::VectorXcd& psi) { return psi * psi.adjoint(); }

// Random classical-quantum state on (ds, de):
//   sum_s p_s U|s><s|U^dagger (x) rho_(group of s)
// Basis vectors sharing a group share their relative state (and merge into a
// rank>1 block); `groups[s]` names the group of basis vector s.
struct CqInstance {
    MultipartiteState state;
    Matrix unitary;                       // columns are the pointer basis
    std::vector<double> probs;            // per basis vector
    std::vector<std::size_t> groups;      // per basis vector
    std::vector<DensityMatrix> relatives; // per group
};

inline CqInstance random_cq(std::size_t ds, std::size_t de, const std::vector<std::size_t>& groups, Rng& rng,
                            bool rotate = true) {
    const std::size_t n_groups = *std::max_element(groups.begin(), groups.end()) + 1;
    std::vector<DensityMatrix> relatives;
    for (std::size_t g = 0; g < n_groups; ++g) relatives.push_back(random_density_matrix(de, rng));
    std::vector<double> probs(ds);
    double total = 0.0;
    for (auto& p : probs) total += (p = 0.05 + rng.uniform());
    for (auto& p : probs) p /= total;

    const Matrix u = rotate ? random_unitary(ds, rng) : Matrix::Identity(detail::idx(ds), detail::idx(ds));
    Matrix rho = Matrix::Zero(detail::idx(ds * de), detail::idx(ds * de));
    for (std::size_t s = 0; s < ds; ++s) {
        const Matrix proj = u.col(detail::idx(s)) * u.col(detail::idx(s)).adjoint();
        rho += probs[s] * kron(proj, relatives[groups[s]].matrix());
    }
    rho = 0.5 * (rho + rho.adjoint());
    return CqInstance{MultipartiteState(DensityMatrix::validated(rho), {ds, de}, {"S", "E"}), u, probs, groups,
                      relatives};
}

// Applies U (x) V (x) ... with one unitary per subsystem.
inline MultipartiteState conjugate_locally(const MultipartiteState& s, const std::vector<Matrix>& unitaries) {
    Matrix u = Matrix::Ones(1, 1);
    for (const auto& local : unitaries) u = kron(u, local);
    Matrix rho = u * s.matrix() * u.adjoint();
    return MultipartiteState(DensityMatrix::unchecked(0.5 * (rho + rho.adjoint())), s.dims(), s.labels());
}

inline MultipartiteState random_product_state(const Dims& dims, Rng& rng) {
    Matrix rho = Matrix::Ones(1, 1);
    for (auto d : dims) rho = kron(rho, random_density_matrix(d, rng).matrix());
    return MultipartiteState(DensityMatrix::unchecked(std::move(rho)), dims);
}

}  // namespace sbs::testing
