// state.hpp: density matrices on tensor-product spaces: validation, tensor
// products, partial traces, subsystem reordering and projectors.
//
// Basis ordering is row-major over the subsystem dimensions with the FIRST
// subsystem slowest: for dims (d0, d1, ..., dn) the basis vector
// |i0 i1 ... in> sits at index ((i0*d1 + i1)*d2 + i2)... . Every function in
// the library and the on-disk state format share this ordering.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sbs/error.hpp"

namespace sbs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;
using Labels = std::vector<std::string>;
using Subsystems = std::vector<std::size_t>;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultSupportCutoff = 1e-9;

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Ascending eigenvalues of a Hermitian matrix (lower triangle is read).
inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(Errc::internal, "Hermitian eigendecomposition failed");
    }
    return solver.eigenvalues();
}

namespace detail {

inline std::size_t product(const Dims& dims) {
    std::size_t p = 1;
    for (auto d : dims) p *= d;
    return p;
}

// strides[k] = product of dims[k+1..]
inline Dims strides(const Dims& dims) {
    Dims s(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
    return s;
}

// Sorted, de-duplicated subsystem set; throws on out-of-range indices.
inline Subsystems normalize_subsystems(Subsystems set, std::size_t count) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (!set.empty() && set.back() >= count) {
        throw Error(Errc::index_out_of_range,
                    "subsystem index " + std::to_string(set.back()) + " >= " + std::to_string(count));
    }
    return set;
}

inline Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace detail

// Complex Hermitian positive-semidefinite unit-trace matrix. Immutable.
class DensityMatrix {
public:
    // Checks (in order) squareness, finiteness, hermiticity, trace and
    // positivity, each at absolute tolerance `tol`. Eigenvalues in [-tol, 0)
    // are accepted; entropy code clamps them.
    static DensityMatrix validated(const Matrix& entries, double tol = kDefaultTol) {
        if (entries.rows() != entries.cols() || entries.rows() == 0) {
            throw Error(Errc::dimension_mismatch, "density matrix must be square and non-empty, got " +
                                                      std::to_string(entries.rows()) + "x" +
                                                      std::to_string(entries.cols()));
        }
        if (!entries.allFinite()) {
            throw Error(Errc::invalid_argument, "density matrix has non-finite entries");
        }
        const double asym = max_abs(entries - entries.adjoint());
        if (asym > tol) {
            throw Error(Errc::not_hermitian, "max |M - M^dagger| = " + std::to_string(asym), asym);
        }
        const double trace = entries.trace().real();
        if (std::abs(trace - 1.0) > tol) {
            throw Error(Errc::trace_not_one, "trace = " + std::to_string(trace), trace);
        }
        const double min_eig = hermitian_eigenvalues(entries).minCoeff();
        if (min_eig < -tol) {
            throw Error(Errc::not_positive, "most negative eigenvalue = " + std::to_string(min_eig), min_eig);
        }
        return DensityMatrix(entries);
    }

    // For results that are valid by construction (partial traces, tensor
    // products of valid states). The caller owns the invariants.
    static DensityMatrix unchecked(Matrix entries) { return DensityMatrix(std::move(entries)); }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Matrix& matrix() const noexcept { return m_; }
    Eigen::VectorXd eigenvalues() const { return hermitian_eigenvalues(m_); }

private:
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// Orthogonal projector P = P^2 = P^dagger.
class Projector {
public:
    static Projector validated(const Matrix& entries, double tol = kDefaultTol) {
        if (entries.rows() != entries.cols()) {
            throw Error(Errc::dimension_mismatch, "projector must be square");
        }
        const double asym = max_abs(entries - entries.adjoint());
        if (asym > tol) throw Error(Errc::not_hermitian, "projector is not Hermitian", asym);
        const double idem = max_abs(entries * entries - entries);
        if (idem > tol) throw Error(Errc::invalid_argument, "projector is not idempotent", idem);
        return Projector(entries);
    }

    static Projector unchecked(Matrix entries) { return Projector(std::move(entries)); }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    std::size_t rank() const noexcept { return rank_; }
    const Matrix& matrix() const noexcept { return m_; }

private:
    explicit Projector(Matrix m)
        : m_(std::move(m)), rank_(static_cast<std::size_t>(std::lround(std::max(0.0, m_.trace().real())))) {}
    Matrix m_;
    std::size_t rank_;
};

// "S", "E1", "E2", ... for n subsystems.
inline Labels default_labels(std::size_t n) {
    Labels labels;
    labels.reserve(n);
    for (std::size_t k = 0; k < n; ++k) labels.push_back(k == 0 ? "S" : "E" + std::to_string(k));
    return labels;
}

// A density matrix together with its tensor-product structure.
class MultipartiteState {
public:
    MultipartiteState(DensityMatrix state, Dims dims, Labels labels)
        : state_(std::move(state)), dims_(std::move(dims)), labels_(std::move(labels)) {
        if (dims_.empty()) throw Error(Errc::dimension_mismatch, "at least one subsystem is required");
        if (std::find(dims_.begin(), dims_.end(), std::size_t{0}) != dims_.end()) {
            throw Error(Errc::dimension_mismatch, "subsystem dimensions must be positive");
        }
        if (detail::product(dims_) != state_.dim()) {
            throw Error(Errc::dimension_mismatch, "product of dims (" + std::to_string(detail::product(dims_)) +
                                                      ") != matrix dimension (" + std::to_string(state_.dim()) + ")");
        }
        if (labels_.size() != dims_.size()) {
            throw Error(Errc::dimension_mismatch, "need one label per subsystem");
        }
        if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
            throw Error(Errc::invalid_argument, "subsystem labels must be unique");
        }
    }

    MultipartiteState(DensityMatrix state, Dims dims)
        : MultipartiteState(std::move(state), dims, default_labels(dims.size())) {}

    const DensityMatrix& density() const noexcept { return state_; }
    const Matrix& matrix() const noexcept { return state_.matrix(); }
    std::size_t dim() const noexcept { return state_.dim(); }
    std::size_t size() const noexcept { return dims_.size(); }
    const Dims& dims() const noexcept { return dims_; }
    const Labels& labels() const noexcept { return labels_; }

    std::size_t index_of(std::string_view label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) {
            throw Error(Errc::index_out_of_range, "no subsystem labelled '" + std::string(label) + "'");
        }
        return static_cast<std::size_t>(it - labels_.begin());
    }

private:
    DensityMatrix state_;
    Dims dims_;
    Labels labels_;
};

inline MultipartiteState make_state(const Matrix& entries, Dims dims, Labels labels, double tol = kDefaultTol) {
    return MultipartiteState(DensityMatrix::validated(entries, tol), std::move(dims), std::move(labels));
}

inline MultipartiteState make_state(const Matrix& entries, Dims dims, double tol = kDefaultTol) {
    const auto n = dims.size();
    return make_state(entries, std::move(dims), default_labels(n), tol);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out = Eigen::kroneckerProduct(a, b);
    return out;
}

// Left factor is the slow index.
inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix::unchecked(kron(a.matrix(), b.matrix()));
}

inline MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b) {
    Dims dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    Labels labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    return MultipartiteState(tensor(a.density(), b.density()), std::move(dims), std::move(labels));
}

// Reduced state on `keep`; dims and labels keep their original order.
inline MultipartiteState partial_trace(const MultipartiteState& s, Subsystems keep) {
    keep = detail::normalize_subsystems(std::move(keep), s.size());
    if (keep.empty()) throw Error(Errc::empty_keep_set, "partial trace needs at least one kept subsystem");
    if (keep.size() == s.size()) return s;

    const Dims& dims = s.dims();
    const Dims stride = detail::strides(dims);
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) kept[k] = true;

    Dims kdims;
    Labels klabels;
    std::size_t traced_dim = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (kept[k]) {
            kdims.push_back(dims[k]);
            klabels.push_back(s.labels()[k]);
        } else {
            traced_dim *= dims[k];
        }
    }
    const std::size_t kept_dim = detail::product(kdims);

    // Split every full index into (kept index, traced index) and bucket the
    // full indices by their traced part; only same-bucket pairs contribute.
    std::vector<std::size_t> kidx(s.dim());
    std::vector<std::vector<std::size_t>> buckets(traced_dim);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        std::size_t k = 0, t = 0;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            const std::size_t digit = (i / stride[j]) % dims[j];
            if (kept[j]) {
                k = k * dims[j] + digit;
            } else {
                t = t * dims[j] + digit;
            }
        }
        kidx[i] = k;
        buckets[t].push_back(i);
    }

    const Matrix& m = s.matrix();
    Matrix out = Matrix::Zero(detail::idx(kept_dim), detail::idx(kept_dim));
    for (const auto& bucket : buckets) {
        for (auto a : bucket) {
            for (auto b : bucket) {
                out(detail::idx(kidx[a]), detail::idx(kidx[b])) += m(detail::idx(a), detail::idx(b));
            }
        }
    }
    return MultipartiteState(DensityMatrix::unchecked(std::move(out)), std::move(kdims), std::move(klabels));
}

// Reorders subsystems: new subsystem k is old subsystem order[k].
inline MultipartiteState permute_subsystems(const MultipartiteState& s, const Subsystems& order) {
    const std::size_t n = s.size();
    if (order.size() != n || detail::normalize_subsystems(order, n).size() != n) {
        throw Error(Errc::invalid_argument, "subsystem order must be a permutation");
    }
    Dims new_dims(n);
    Labels new_labels(n);
    for (std::size_t k = 0; k < n; ++k) {
        new_dims[k] = s.dims()[order[k]];
        new_labels[k] = s.labels()[order[k]];
    }
    const Dims old_stride = detail::strides(s.dims());
    const Dims new_stride = detail::strides(new_dims);

    std::vector<std::size_t> to_new(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) {
        std::size_t j = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t digit = (i / old_stride[order[k]]) % new_dims[k];
            j += digit * new_stride[k];
        }
        to_new[i] = j;
    }
    const Matrix& m = s.matrix();
    Matrix out(m.rows(), m.cols());
    for (std::size_t a = 0; a < s.dim(); ++a) {
        for (std::size_t b = 0; b < s.dim(); ++b) {
            out(detail::idx(to_new[a]), detail::idx(to_new[b])) = m(detail::idx(a), detail::idx(b));
        }
    }
    return MultipartiteState(DensityMatrix::unchecked(std::move(out)), std::move(new_dims), std::move(new_labels));
}

// Merges subsystems into coarser ones. `groups` must partition the
// subsystems; group g becomes subsystem g, labelled by its members joined
// with '+'.
inline MultipartiteState regroup(const MultipartiteState& s, const std::vector<Subsystems>& groups) {
    Subsystems order;
    std::vector<bool> seen(s.size(), false);
    Dims dims;
    Labels labels;
    for (const auto& group : groups) {
        if (group.empty()) throw Error(Errc::invalid_argument, "empty subsystem group");
        std::size_t d = 1;
        std::string label;
        for (auto k : group) {
            if (k >= s.size()) throw Error(Errc::index_out_of_range, "subsystem index " + std::to_string(k));
            if (seen[k]) throw Error(Errc::overlapping_parts, "subsystem " + s.labels()[k] + " used twice");
            seen[k] = true;
            order.push_back(k);
            d *= s.dims()[k];
            label += (label.empty() ? "" : "+") + s.labels()[k];
        }
        dims.push_back(d);
        labels.push_back(std::move(label));
    }
    if (order.size() != s.size()) {
        throw Error(Errc::incomplete_partition, "subsystem groups must cover every subsystem");
    }
    const auto permuted = permute_subsystems(s, order);
    return MultipartiteState(permuted.density(), std::move(dims), std::move(labels));
}

// Rank-1 projector onto the computational product vector |indices>.
inline Projector basis_projector(const Dims& dims, const std::vector<std::size_t>& indices) {
    if (dims.size() != indices.size()) {
        throw Error(Errc::dimension_mismatch, "need one basis index per subsystem");
    }
    const Dims stride = detail::strides(dims);
    std::size_t position = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (indices[k] >= dims[k]) {
            throw Error(Errc::index_out_of_range, "basis index " + std::to_string(indices[k]) +
                                                      " >= dimension " + std::to_string(dims[k]));
        }
        position += indices[k] * stride[k];
    }
    const auto d = detail::idx(detail::product(dims));
    Matrix m = Matrix::Zero(d, d);
    m(detail::idx(position), detail::idx(position)) = 1.0;
    return Projector::unchecked(std::move(m));
}

// Projector onto eigenvectors with eigenvalue > cutoff * (largest eigenvalue).
inline Projector support_projector(const DensityMatrix& m, double cutoff = kDefaultSupportCutoff) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
    if (solver.info() != Eigen::Success) throw Error(Errc::internal, "Hermitian eigendecomposition failed");
    const auto& values = solver.eigenvalues();
    const double threshold = cutoff * values.maxCoeff();
    const auto d = m.matrix().rows();
    Matrix p = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        if (values(k) > threshold) {
            const auto v = solver.eigenvectors().col(k);
            p += v * v.adjoint();
        }
    }
    return Projector::unchecked(std::move(p));
}

// Tensor product of the single-subsystem marginals, in subsystem order.
inline DensityMatrix product_of_marginals(const MultipartiteState& s) {
    Matrix out = Matrix::Ones(1, 1);
    for (std::size_t k = 0; k < s.size(); ++k) {
        out = kron(out, partial_trace(s, {k}).matrix());
    }
    return DensityMatrix::unchecked(std::move(out));
}

}  // namespace sbs
