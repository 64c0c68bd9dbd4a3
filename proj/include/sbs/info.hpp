// info.hpp: von Neumann entropy and the mutual-information family, in bits.

#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "sbs/state.hpp"

namespace sbs {

// An amount of information in bits (base-2 logarithms throughout).
struct Bits {
    double value = 0.0;

    friend constexpr auto operator<=>(const Bits&, const Bits&) = default;
};

namespace detail {

// Round-off slack in [-tol, 0) becomes 0; anything more negative means a bug
// upstream and is reported.
inline Bits clamp_information(double value, double tol, const char* what) {
    if (value < -tol) {
        throw Error(Errc::internal, std::string(what) + " is negative beyond tolerance: " + std::to_string(value),
                    value);
    }
    return Bits{value < 0.0 ? 0.0 : value};
}

inline Subsystems union_of(const std::vector<Subsystems>& parts, std::size_t count) {
    Subsystems all;
    std::vector<bool> seen(count, false);
    for (const auto& part : parts) {
        for (auto k : detail::normalize_subsystems(part, count)) {
            if (seen[k]) {
                throw Error(Errc::overlapping_parts, "subsystem " + std::to_string(k) + " appears in two parts");
            }
            seen[k] = true;
            all.push_back(k);
        }
    }
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace detail

// -sum lambda log2 lambda, eigenvalues clamped to [0, 1].
inline Bits entropy(const DensityMatrix& m, double tol = kDefaultTol) {
    double h = 0.0;
    for (double lambda : m.eigenvalues()) {
        if (lambda > 1.0 + tol) {
            throw Error(Errc::internal, "eigenvalue above one: " + std::to_string(lambda), lambda);
        }
        lambda = std::clamp(lambda, 0.0, 1.0);
        if (lambda > 0.0) h -= lambda * std::log2(lambda);
    }
    return Bits{h < 0.0 ? 0.0 : h};
}

// Joint entropy of a set of subsystems; the empty set has zero entropy.
inline Bits entropy(const MultipartiteState& s, const Subsystems& part, double tol = kDefaultTol) {
    const auto set = detail::normalize_subsystems(part, s.size());
    if (set.empty()) return Bits{0.0};
    if (set.size() == s.size()) return entropy(s.density(), tol);
    return entropy(partial_trace(s, set).density(), tol);
}

// H(A) + H(B) - H(AB). Subsystems outside A and B are traced out.
inline Bits mutual_information(const MultipartiteState& s, const Subsystems& a, const Subsystems& b,
                               double tol = kDefaultTol) {
    const auto ab = detail::union_of({a, b}, s.size());
    const double value = entropy(s, a, tol).value + entropy(s, b, tol).value - entropy(s, ab, tol).value;
    return detail::clamp_information(value, tol, "mutual information");
}

// I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C).
inline Bits conditional_mutual_information(const MultipartiteState& s, const Subsystems& a, const Subsystems& b,
                                           const Subsystems& c, double tol = kDefaultTol) {
    const auto abc = detail::union_of({a, b, c}, s.size());
    const auto ac = detail::union_of({a, c}, s.size());
    const auto bc = detail::union_of({b, c}, s.size());
    const double value = entropy(s, ac, tol).value + entropy(s, bc, tol).value - entropy(s, abc, tol).value -
                         entropy(s, c, tol).value;
    return detail::clamp_information(value, tol, "conditional mutual information");
}

// sum_i H(part_i) - H(all parts). Zero iff the parts are in a product state.
inline Bits multipartite_mutual_information(const MultipartiteState& s, const std::vector<Subsystems>& parts,
                                            double tol = kDefaultTol) {
    if (parts.size() < 2) throw Error(Errc::invalid_argument, "multipartite mutual information needs >= 2 parts");
    const auto all = detail::union_of(parts, s.size());
    double value = -entropy(s, all, tol).value;
    for (const auto& part : parts) value += entropy(s, part, tol).value;
    return detail::clamp_information(value, tol, "multipartite mutual information");
}

// I(P1, ..., PF | C) = sum_i H(P_i C) - H(P_1 ... P_F C) - (F - 1) H(C).
// On a classical-quantum state sum_s p_s |s><s| (x) rho^(s) this is the
// p_s-average of the multipartite mutual information of the rho^(s).
inline Bits conditional_multipartite_mi(const MultipartiteState& s, const std::vector<Subsystems>& parts,
                                        const Subsystems& cond, double tol = kDefaultTol) {
    if (parts.size() < 2) throw Error(Errc::invalid_argument, "multipartite mutual information needs >= 2 parts");
    std::vector<Subsystems> everything = parts;
    everything.push_back(cond);
    const auto all = detail::union_of(everything, s.size());
    const double h_cond = entropy(s, cond, tol).value;

    double value = -entropy(s, all, tol).value - static_cast<double>(parts.size() - 1) * h_cond;
    for (const auto& part : parts) value += entropy(s, detail::union_of({part, cond}, s.size()), tol).value;
    return detail::clamp_information(value, tol, "conditional multipartite mutual information");
}

// Probability-weighted family of states of equal dimension.
class Ensemble {
public:
    Ensemble(std::vector<double> probs, std::vector<DensityMatrix> states, double tol = kDefaultTol)
        : probs_(std::move(probs)), states_(std::move(states)) {
        if (probs_.empty() || probs_.size() != states_.size()) {
            throw Error(Errc::dimension_mismatch, "ensemble needs one probability per state");
        }
        double total = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0)) throw Error(Errc::param_out_of_range, "negative ensemble probability", p);
            total += p;
        }
        if (std::abs(total - 1.0) > tol) {
            throw Error(Errc::param_out_of_range, "ensemble probabilities sum to " + std::to_string(total), total);
        }
        for (const auto& state : states_) {
            if (state.dim() != states_.front().dim()) {
                throw Error(Errc::dimension_mismatch, "ensemble states differ in dimension");
            }
        }
    }

    std::size_t size() const noexcept { return probs_.size(); }
    const std::vector<double>& probs() const noexcept { return probs_; }
    const std::vector<DensityMatrix>& states() const noexcept { return states_; }

    DensityMatrix average() const {
        Matrix avg = Matrix::Zero(states_.front().matrix().rows(), states_.front().matrix().cols());
        for (std::size_t k = 0; k < size(); ++k) avg += probs_[k] * states_[k].matrix();
        return DensityMatrix::unchecked(std::move(avg));
    }

private:
    std::vector<double> probs_;
    std::vector<DensityMatrix> states_;
};

// chi = H(sum p_s rho_s) - sum p_s H(rho_s).
inline Bits holevo_chi(const Ensemble& e, double tol = kDefaultTol) {
    double value = entropy(e.average(), tol).value;
    for (std::size_t k = 0; k < e.size(); ++k) value -= e.probs()[k] * entropy(e.states()[k], tol).value;
    return detail::clamp_information(value, tol, "Holevo quantity");
}

}  // namespace sbs
