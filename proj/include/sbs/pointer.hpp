// pointer.hpp: classical-quantum (zero-discord) structure of a
// system-environment state.
//
// A state is classical-quantum with respect to S when it can be written as
//
//     rho_SE = sum_s p_s sigma_S^(s) (x) rho_E^(s)
//
// with the sigma_S^(s) supported on mutually orthogonal projectors Pi_s.
// The search below works with the conditional operators
// A_F = Tr_E[(1 (x) F) rho_SE] for Hermitian F on E: rho_SE has the form
// above iff all A_F commute, and the pointer projectors are then the joint
// eigenspaces of the family.

#pragma once

#include <Eigen/SVD>

#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sbs/info.hpp"
#include "sbs/rng.hpp"
#include "sbs/state.hpp"

namespace sbs {

inline constexpr double kDefaultMergeTol = 1e-7;
inline constexpr std::uint64_t kDefaultPointerSeed = 0x5b5d'0c0f'fee1'2345ULL;

struct PointerOptions {
    double tol = kDefaultTol;              // commutators, reconstruction, zero-probability blocks
    double merge_tol = kDefaultMergeTol;   // max-abs distance at which relative states count as equal
    std::uint64_t seed = kDefaultPointerSeed;
};

// One pointer outcome: orthogonal projector on S, its probability, the
// system state inside the block and the relative state of the environment.
// For rank-1 projectors system_state == projector.
struct PointerBlock {
    Projector projector;
    double probability;
    DensityMatrix system_state;
    MultipartiteState relative_state;
};

// Blocks are ordered by descending probability, ties broken by the smallest
// basis index in the projector support. Zero-probability subspaces of S are
// not represented, so the projectors sum to the support projector of rho_S.
struct PointerDecomposition {
    std::string system_label;
    std::size_t system_dim = 0;
    std::vector<PointerBlock> blocks;

    Ensemble ensemble() const {
        std::vector<double> probs;
        std::vector<DensityMatrix> states;
        for (const auto& block : blocks) {
            probs.push_back(block.probability);
            states.push_back(block.relative_state.density());
        }
        return Ensemble(std::move(probs), std::move(states));
    }

    // sum_s p_s sigma_S^(s) (x) rho_E^(s), with S as the first subsystem.
    MultipartiteState reconstruct() const {
        const auto& env = blocks.front().relative_state;
        Matrix out = Matrix::Zero(detail::idx(system_dim * env.dim()), detail::idx(system_dim * env.dim()));
        for (const auto& block : blocks) {
            out += block.probability * kron(block.system_state.matrix(), block.relative_state.matrix());
        }
        Dims dims{system_dim};
        dims.insert(dims.end(), env.dims().begin(), env.dims().end());
        Labels labels{system_label};
        labels.insert(labels.end(), env.labels().begin(), env.labels().end());
        return MultipartiteState(DensityMatrix::unchecked(std::move(out)), std::move(dims), std::move(labels));
    }
};

// Outcome of a pointer search together with the diagnostics that decided it.
struct PointerSearch {
    std::optional<PointerDecomposition> decomposition;
    double commutator_norm = 0.0;
    double reconstruction_error = std::numeric_limits<double>::quiet_NaN();
    std::string failure;
};

namespace detail {

// Coordinates of a Hermitian matrix in R^(d*d) whose Euclidean norm is the
// Frobenius norm: diagonal entries, then sqrt2*Re, sqrt2*Im of the upper part.
inline void hermitian_coordinates(const Matrix& h, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> out) {
    const auto d = h.rows();
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < d; ++i) out(c++) = h(i, i).real();
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            out(c++) = std::numbers::sqrt2 * h(i, j).real();
            out(c++) = std::numbers::sqrt2 * h(i, j).imag();
        }
    }
}

inline Matrix hermitian_from_coordinates(const Eigen::VectorXd& v, Eigen::Index d) {
    Matrix h = Matrix::Zero(d, d);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < d; ++i) h(i, i) = v(c++);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            const Complex z(v(c) / std::numbers::sqrt2, v(c + 1) / std::numbers::sqrt2);
            c += 2;
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

// Principal operators G_j = sigma_j * H_j of the conditional-operator family,
// from the SVD of its coordinate matrix. They span the same real space as
// the family and sum_jk ||[G_j, G_k]||_F^2 equals the same sum over the
// family, so commutation can be checked on at most dS^2 operators.
inline std::vector<Matrix> conditional_operator_basis(const Matrix& rho, Eigen::Index ds, Eigen::Index de) {
    // B_ab(i, j) = rho(i*de + a, j*de + b)
    auto block_op = [&](Eigen::Index a, Eigen::Index b) {
        Matrix m(ds, ds);
        for (Eigen::Index i = 0; i < ds; ++i)
            for (Eigen::Index j = 0; j < ds; ++j) m(i, j) = rho(i * de + a, j * de + b);
        return m;
    };

    Eigen::MatrixXd coords(de * de, ds * ds);
    Eigen::Index row = 0;
    const Complex i_unit(0.0, 1.0);
    for (Eigen::Index a = 0; a < de; ++a) {
        hermitian_coordinates(block_op(a, a), coords.row(row++));
        for (Eigen::Index b = a + 1; b < de; ++b) {
            const Matrix ab = block_op(a, b);
            const Matrix ba = block_op(b, a);
            hermitian_coordinates(ab + ba, coords.row(row++));
            hermitian_coordinates(i_unit * (ab - ba), coords.row(row++));
        }
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(coords, Eigen::ComputeThinV);
    std::vector<Matrix> basis;
    for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) {
        const double sigma = svd.singularValues()(j);
        if (sigma > 0.0) basis.push_back(sigma * hermitian_from_coordinates(svd.matrixV().col(j), ds));
    }
    return basis;
}

// Splits span(V) into eigenspaces of V^dagger H V, merging eigenvalues that
// are closer than `gap`.
inline std::vector<Matrix> split_subspace(const Matrix& v, const Matrix& h, double gap) {
    const Matrix compressed = v.adjoint() * h * v;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(compressed);
    if (solver.info() != Eigen::Success) throw Error(Errc::internal, "Hermitian eigendecomposition failed");
    const auto& values = solver.eigenvalues();
    std::vector<Matrix> parts;
    Eigen::Index start = 0;
    for (Eigen::Index k = 1; k <= values.size(); ++k) {
        if (k == values.size() || values(k) - values(k - 1) > gap) {
            parts.push_back(v * solver.eigenvectors().middleCols(start, k - start));
            start = k;
        }
    }
    return parts;
}

// (<v| (x) 1) rho (|v> (x) 1) for rho on S (x) E with S first.
inline Matrix compress_environment(const Matrix& rho, const Eigen::VectorXcd& v, Eigen::Index de) {
    const Eigen::Index ds = v.size();
    Matrix out = Matrix::Zero(de, de);
    for (Eigen::Index i = 0; i < ds; ++i) {
        if (v(i) == 0.0) continue;
        for (Eigen::Index j = 0; j < ds; ++j) {
            if (v(j) == 0.0) continue;
            out += std::conj(v(i)) * v(j) * rho.block(i * de, j * de, de, de);
        }
    }
    return out;
}

inline std::size_t first_support_index(const Projector& p) {
    constexpr double kSupportWeight = 1e-6;
    for (Eigen::Index i = 0; i < p.matrix().rows(); ++i) {
        if (p.matrix()(i, i).real() > kSupportWeight) return static_cast<std::size_t>(i);
    }
    return static_cast<std::size_t>(p.matrix().rows());
}

inline void canonical_order(std::vector<PointerBlock>& blocks, double tol) {
    auto before = [tol](const PointerBlock& a, const PointerBlock& b) {
        if (std::abs(a.probability - b.probability) > tol) return a.probability > b.probability;
        return first_support_index(a.projector) < first_support_index(b.projector);
    };
    // Insertion sort: `before` is only tolerance-transitive, which std::sort
    // does not allow.
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        for (std::size_t j = i; j > 0 && before(blocks[j], blocks[j - 1]); --j) std::swap(blocks[j], blocks[j - 1]);
    }
}

inline std::vector<PointerBlock> merge_equal_relative_states(std::vector<PointerBlock> fine, double merge_tol) {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < fine.size(); ++k) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& group) {
            return max_abs(fine[group.front()].relative_state.matrix() - fine[k].relative_state.matrix()) <=
                   merge_tol;
        });
        if (it == groups.end()) {
            groups.push_back({k});
        } else {
            it->push_back(k);
        }
    }

    std::vector<PointerBlock> merged;
    for (const auto& group : groups) {
        if (group.size() == 1) {
            merged.push_back(std::move(fine[group.front()]));
            continue;
        }
        const auto& first = fine[group.front()];
        Matrix proj = Matrix::Zero(first.projector.matrix().rows(), first.projector.matrix().cols());
        Matrix sys = Matrix::Zero(proj.rows(), proj.cols());
        Matrix rel = Matrix::Zero(first.relative_state.matrix().rows(), first.relative_state.matrix().cols());
        double p = 0.0;
        for (auto k : group) {
            proj += fine[k].projector.matrix();
            sys += fine[k].probability * fine[k].system_state.matrix();
            rel += fine[k].probability * fine[k].relative_state.matrix();
            p += fine[k].probability;
        }
        merged.push_back(PointerBlock{
            Projector::unchecked(std::move(proj)), p, DensityMatrix::unchecked(sys / p),
            MultipartiteState(DensityMatrix::unchecked(rel / p), first.relative_state.dims(),
                              first.relative_state.labels())});
    }
    return merged;
}

}  // namespace detail

// Non-throwing pointer search; see find_pointer_decomposition.
inline PointerSearch search_pointer_decomposition(const MultipartiteState& s, std::size_t system_index,
                                                  const PointerOptions& opts = {}) {
    if (system_index >= s.size()) {
        throw Error(Errc::index_out_of_range, "system index " + std::to_string(system_index));
    }
    Subsystems order{system_index};
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k != system_index) order.push_back(k);
    }
    const auto ordered = permute_subsystems(s, order);
    const auto ds = detail::idx(s.dims()[system_index]);
    const auto de = detail::idx(s.dim()) / ds;
    const Matrix& rho = ordered.matrix();

    Dims env_dims(ordered.dims().begin() + 1, ordered.dims().end());
    Labels env_labels(ordered.labels().begin() + 1, ordered.labels().end());
    if (env_dims.empty()) {
        env_dims = {1};
        env_labels = {s.labels()[system_index] == "E" ? "E0" : "E"};
    }

    PointerSearch result;

    // Commutation of the conditional operators.
    const auto ops = detail::conditional_operator_basis(rho, ds, de);
    for (std::size_t j = 0; j < ops.size(); ++j) {
        for (std::size_t k = j + 1; k < ops.size(); ++k) {
            result.commutator_norm =
                std::max(result.commutator_norm, max_abs(ops[j] * ops[k] - ops[k] * ops[j]));
        }
    }
    if (result.commutator_norm > opts.tol) {
        result.failure = "conditional operators do not commute (max |[A, B]| = " +
                         std::to_string(result.commutator_norm) + ")";
        return result;
    }

    // Joint eigenspaces: a generic combination first, then refinement by
    // every operator so that accidental degeneracies are split.
    Rng rng(opts.seed);
    Matrix mix = Matrix::Zero(ds, ds);
    for (const auto& op : ops) mix += (2.0 * rng.uniform() - 1.0) * op;
    auto gap_for = [&](const Matrix& h) { return opts.tol * std::max(1.0, max_abs(h)); };

    std::vector<Matrix> spaces = detail::split_subspace(Matrix::Identity(ds, ds), mix, gap_for(mix));
    for (const auto& op : ops) {
        std::vector<Matrix> refined;
        for (const auto& v : spaces) {
            auto parts = detail::split_subspace(v, op, gap_for(op));
            refined.insert(refined.end(), parts.begin(), parts.end());
        }
        spaces = std::move(refined);
    }

    // Block form check: rho must equal sum_s Pi_s (x) X_s where X_s is the
    // environment operator seen by any unit vector in the block.
    Matrix reconstruction = Matrix::Zero(rho.rows(), rho.cols());
    std::vector<PointerBlock> fine;
    for (const auto& v : spaces) {
        Matrix weighted = Matrix::Zero(de, de);
        for (Eigen::Index c = 0; c < v.cols(); ++c) weighted += detail::compress_environment(rho, v.col(c), de);
        const Matrix proj = v * v.adjoint();
        const auto rank = static_cast<double>(v.cols());
        reconstruction += kron(proj, weighted / rank);

        const double p = weighted.trace().real();
        if (p <= opts.tol) continue;
        Matrix relative = 0.5 * (weighted + weighted.adjoint()) / p;
        fine.push_back(PointerBlock{Projector::unchecked(proj), p, DensityMatrix::unchecked(proj / rank),
                                    MultipartiteState(DensityMatrix::unchecked(std::move(relative)), env_dims,
                                                      env_labels)});
    }
    result.reconstruction_error = max_abs(rho - reconstruction);
    if (result.reconstruction_error > opts.tol) {
        result.failure = "state is not block diagonal over the joint eigenspaces (max deviation " +
                         std::to_string(result.reconstruction_error) + ")";
        return result;
    }

    // Dropped zero-probability blocks can leave the total a few tol short.
    double total = 0.0;
    for (const auto& block : fine) total += block.probability;
    for (auto& block : fine) block.probability /= total;

    detail::canonical_order(fine, opts.tol);
    auto blocks = detail::merge_equal_relative_states(std::move(fine), opts.merge_tol);
    detail::canonical_order(blocks, opts.tol);

    result.decomposition = PointerDecomposition{s.labels()[system_index], static_cast<std::size_t>(ds),
                                                std::move(blocks)};
    return result;
}

// Finest pointer decomposition of a classical-quantum state, with blocks of
// equal relative state merged. Throws Errc::not_classical_quantum (value =
// offending commutator norm or block deviation) otherwise.
inline PointerDecomposition find_pointer_decomposition(const MultipartiteState& s, std::size_t system_index,
                                                       const PointerOptions& opts = {}) {
    auto search = search_pointer_decomposition(s, system_index, opts);
    if (!search.decomposition) {
        const double diag = search.commutator_norm > opts.tol ? search.commutator_norm : search.reconstruction_error;
        throw Error(Errc::not_classical_quantum, search.failure, diag);
    }
    return std::move(*search.decomposition);
}

// I(S:E) against the Holevo quantity of the pointer ensemble.
struct DiscordCheck {
    Bits mutual_information;
    Bits chi;
    bool holds = false;
};

namespace detail {

// Ensemble obtained by measuring S in the eigenbasis of rho_S.
inline Ensemble dephased_ensemble(const MultipartiteState& s, std::size_t system_index, double tol) {
    Subsystems order{system_index};
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k != system_index) order.push_back(k);
    }
    const auto ordered = permute_subsystems(s, order);
    const auto de = idx(s.dim() / s.dims()[system_index]);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(partial_trace(s, {system_index}).matrix());

    std::vector<double> probs;
    std::vector<DensityMatrix> states;
    for (Eigen::Index k = 0; k < solver.eigenvectors().cols(); ++k) {
        Matrix block = compress_environment(ordered.matrix(), solver.eigenvectors().col(k), de);
        const double p = block.trace().real();
        if (p <= tol) continue;
        probs.push_back(p);
        states.push_back(DensityMatrix::unchecked(0.5 * (block + block.adjoint()) / p));
    }
    double total = 0.0;
    for (double p : probs) total += p;
    for (double& p : probs) p /= total;
    return Ensemble(std::move(probs), std::move(states));
}

inline DiscordCheck discord_from_search(const MultipartiteState& s, std::size_t system_index,
                                        const PointerSearch& search, double tol) {
    Subsystems env;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k != system_index) env.push_back(k);
    }
    DiscordCheck out;
    out.mutual_information = mutual_information(s, {system_index}, env, tol);
    if (search.decomposition) {
        out.chi = holevo_chi(search.decomposition->ensemble(), tol);
        out.holds = std::abs(out.mutual_information.value - out.chi.value) <= tol;
    } else {
        out.chi = holevo_chi(dephased_ensemble(s, system_index, tol), tol);
        out.holds = false;
    }
    return out;
}

}  // namespace detail

// Zero-discord condition I(S:E) = chi. When no pointer decomposition exists
// chi is taken from the state dephased in the eigenbasis of rho_S and the
// condition is reported as failing.
inline DiscordCheck discord_condition_a1(const MultipartiteState& s, std::size_t system_index,
                                         double tol = kDefaultTol) {
    PointerOptions opts;
    opts.tol = tol;
    return detail::discord_from_search(s, system_index, search_pointer_decomposition(s, system_index, opts), tol);
}

}  // namespace sbs
