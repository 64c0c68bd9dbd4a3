// detector.hpp: Spectrum Broadcast Structure, decided two ways.
//
// Structural: the state is classical-quantum, every relative state of the
// environment is a product over the fragments, and for every fragment the
// relative fragment states of different pointer outcomes have orthogonal
// supports.
//
// Entropic: (a1) I(S:E) = chi, (a2) every fragment perfectly distinguishes
// the pointer outcomes, (b') I(E1,...,EF|S) = 0. Pairwise conditional
// independence I(Ei:Ej|S) = 0 is reported alongside; it is necessary but does
// not imply the structure.

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbs/info.hpp"
#include "sbs/pointer.hpp"
#include "sbs/state.hpp"

namespace sbs {

struct BPrimeCheck {
    Bits value;
    bool holds = false;
};

struct StructuralCheck {
    bool sbs = false;
    std::optional<PointerDecomposition> witness;  // set iff sbs
    double commutator_norm = 0.0;
    double reconstruction_error = std::numeric_limits<double>::quiet_NaN();
    double factorization_error = std::numeric_limits<double>::quiet_NaN();
    double support_overlap = std::numeric_limits<double>::quiet_NaN();
    std::string failure;
};

struct Verdicts {
    bool a1 = false;
    bool a2 = false;
    bool b_pairwise = false;
    bool b_prime = false;
    bool sbs_structural = false;
    bool sbs_theorem = false;
};

struct PairwiseCmi {
    std::size_t first;   // fragment positions, 0-based
    std::size_t second;
    Bits value;
};

struct AnalysisReport {
    std::string system_label;
    Labels fragment_labels;
    double tol = kDefaultTol;

    Bits entropy_system;                    // H(S)
    Bits mi_system_environment;             // I(S:E)
    Bits chi;                               // chi of the pointer (or dephased) ensemble
    std::vector<Bits> mi_system_fragment;   // I(S:Ei)
    std::vector<PairwiseCmi> pairwise_cmi;  // I(Ei:Ej|S), i < j
    Bits cond_multipartite;                 // I(E1,...,EF|S)

    Verdicts verdicts;
    std::optional<PointerDecomposition> witness;
    std::vector<std::pair<std::string, double>> diagnostics;
    std::vector<std::string> notes;

    Bits pairwise_max() const {
        Bits out;
        for (const auto& p : pairwise_cmi) out = std::max(out, p.value);
        return out;
    }

    // Every scalar quantity under a readable name, in a fixed order.
    std::vector<std::pair<std::string, Bits>> quantities() const {
        const std::string& s = system_label;
        std::vector<std::pair<std::string, Bits>> out;
        out.emplace_back("H(" + s + ")", entropy_system);
        out.emplace_back("I(" + s + ":E)", mi_system_environment);
        out.emplace_back("chi", chi);
        for (std::size_t i = 0; i < fragment_labels.size(); ++i) {
            out.emplace_back("I(" + s + ":" + fragment_labels[i] + ")", mi_system_fragment[i]);
        }
        for (const auto& p : pairwise_cmi) {
            out.emplace_back("I(" + fragment_labels[p.first] + ":" + fragment_labels[p.second] + "|" + s + ")",
                             p.value);
        }
        std::string all;
        for (const auto& label : fragment_labels) all += (all.empty() ? "" : ",") + label;
        out.emplace_back("I(" + all + "|" + s + ")", cond_multipartite);
        return out;
    }
};

namespace detail {

// S becomes subsystem 0 and fragment i subsystem i+1.
inline MultipartiteState group_system_and_fragments(const MultipartiteState& s, std::size_t system_index,
                                                    const std::vector<Subsystems>& fragments) {
    if (system_index >= s.size()) {
        throw Error(Errc::index_out_of_range, "system index " + std::to_string(system_index));
    }
    if (fragments.empty()) throw Error(Errc::invalid_argument, "need at least one environment fragment");
    std::vector<Subsystems> groups{{system_index}};
    groups.insert(groups.end(), fragments.begin(), fragments.end());
    return regroup(s, groups);
}

inline MultipartiteState with_dims(const MultipartiteState& s, const Dims& dims) {
    if (detail::product(dims) != s.dim()) {
        throw Error(Errc::dimension_mismatch, "fragment dimensions do not multiply to the relative-state dimension");
    }
    if (dims.size() == s.size()) return MultipartiteState(s.density(), dims, s.labels());
    Labels labels;
    for (std::size_t k = 0; k < dims.size(); ++k) labels.push_back("E" + std::to_string(k + 1));
    return MultipartiteState(s.density(), dims, std::move(labels));
}

// Structural verdict for a state already grouped as (S, E1, ..., EF).
inline StructuralCheck structural_from_search(const MultipartiteState& grouped, const PointerSearch& search,
                                              double tol);

}  // namespace detail

// Largest Tr[P_s P_t] over fragments and pointer pairs s != t, where P are
// support projectors of the relative fragment states.
inline double max_support_overlap(const PointerDecomposition& d, const Dims& fragment_dims) {
    double overlap = 0.0;
    const std::size_t n = d.blocks.size();
    for (std::size_t frag = 0; frag < fragment_dims.size(); ++frag) {
        std::vector<Projector> supports;
        for (const auto& block : d.blocks) {
            const auto rel = detail::with_dims(block.relative_state, fragment_dims);
            supports.push_back(support_projector(partial_trace(rel, {frag}).density()));
        }
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t t = s + 1; t < n; ++t) {
                overlap = std::max(overlap, (supports[s].matrix() * supports[t].matrix()).trace().real());
            }
        }
    }
    return overlap;
}

// Condition (a2): every fragment perfectly distinguishes the pointer outcomes.
inline bool check_a2_distinguishability(const PointerDecomposition& d, const Dims& fragment_dims,
                                        double tol = kDefaultTol) {
    return max_support_overlap(d, fragment_dims) <= tol;
}

// Condition (b'): I(E1,...,EF|S) vanishes.
inline BPrimeCheck check_b_prime(const MultipartiteState& s, std::size_t system_index,
                                 const std::vector<Subsystems>& fragments, double tol = kDefaultTol) {
    if (fragments.size() < 2) throw Error(Errc::invalid_argument, "condition (b') needs at least two fragments");
    BPrimeCheck out;
    out.value = conditional_multipartite_mi(s, fragments, {system_index}, tol);
    out.holds = out.value.value <= tol;
    return out;
}

inline StructuralCheck detail::structural_from_search(const MultipartiteState& grouped, const PointerSearch& search,
                                                      double tol) {
    StructuralCheck out;
    out.commutator_norm = search.commutator_norm;
    out.reconstruction_error = search.reconstruction_error;
    if (!search.decomposition) {
        out.failure = "no pointer basis: " + search.failure;
        return out;
    }
    const auto& d = *search.decomposition;

    out.factorization_error = 0.0;
    for (const auto& block : d.blocks) {
        const auto& rel = block.relative_state;
        out.factorization_error =
            std::max(out.factorization_error, max_abs(rel.matrix() - product_of_marginals(rel).matrix()));
    }
    const Dims fragment_dims(grouped.dims().begin() + 1, grouped.dims().end());
    out.support_overlap = max_support_overlap(d, fragment_dims);

    if (out.factorization_error > tol) {
        out.failure = "relative state does not factorize over the fragments (max deviation " +
                      std::to_string(out.factorization_error) + ")";
    } else if (out.support_overlap > tol) {
        out.failure = "relative fragment states overlap (max Tr[P_s P_t] = " + std::to_string(out.support_overlap) +
                      ")";
    } else {
        out.sbs = true;
        out.witness = d;
    }
    return out;
}

// Decomposes and checks factorization and fragment distinguishability. The
// witness lives on the grouped space (S, fragment 1, ..., fragment F).
inline StructuralCheck structural_sbs_check(const MultipartiteState& s, std::size_t system_index,
                                            const std::vector<Subsystems>& fragments, double tol = kDefaultTol) {
    const auto grouped = detail::group_system_and_fragments(s, system_index, fragments);
    PointerOptions opts;
    opts.tol = tol;
    return detail::structural_from_search(grouped, search_pointer_decomposition(grouped, 0, opts), tol);
}

// Every non-system subsystem as its own fragment, in order.
inline std::vector<Subsystems> environment_fragments(const MultipartiteState& s, std::size_t system_index) {
    std::vector<Subsystems> fragments;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k != system_index) fragments.push_back({k});
    }
    return fragments;
}

inline AnalysisReport analyze(const MultipartiteState& s, std::size_t system_index,
                              const std::vector<Subsystems>& fragments, double tol = kDefaultTol) {
    if (fragments.size() < 2) throw Error(Errc::invalid_argument, "analysis needs at least two fragments");
    const auto grouped = detail::group_system_and_fragments(s, system_index, fragments);
    const std::size_t nf = fragments.size();

    AnalysisReport r;
    r.system_label = grouped.labels().front();
    r.fragment_labels.assign(grouped.labels().begin() + 1, grouped.labels().end());
    r.tol = tol;

    PointerOptions opts;
    opts.tol = tol;
    const auto search = search_pointer_decomposition(grouped, 0, opts);

    const auto discord = detail::discord_from_search(grouped, 0, search, tol);
    r.mi_system_environment = discord.mutual_information;
    r.chi = discord.chi;
    r.verdicts.a1 = discord.holds;

    r.entropy_system = entropy(grouped, {0}, tol);
    for (std::size_t i = 1; i <= nf; ++i) r.mi_system_fragment.push_back(mutual_information(grouped, {0}, {i}, tol));

    r.verdicts.b_pairwise = true;
    for (std::size_t i = 1; i <= nf; ++i) {
        for (std::size_t j = i + 1; j <= nf; ++j) {
            const auto v = conditional_mutual_information(grouped, {i}, {j}, {0}, tol);
            r.pairwise_cmi.push_back({i - 1, j - 1, v});
            r.verdicts.b_pairwise = r.verdicts.b_pairwise && v.value <= tol;
        }
    }

    std::vector<Subsystems> singles;
    for (std::size_t i = 1; i <= nf; ++i) singles.push_back({i});
    const auto bp = check_b_prime(grouped, 0, singles, tol);
    r.cond_multipartite = bp.value;
    r.verdicts.b_prime = bp.holds;

    const auto structural = detail::structural_from_search(grouped, search, tol);
    r.verdicts.sbs_structural = structural.sbs;
    if (search.decomposition) {
        r.verdicts.a2 = structural.support_overlap <= tol;
        r.witness = search.decomposition;
    } else {
        r.verdicts.a2 = false;
        r.notes.push_back("no pointer basis: " + search.failure);
    }
    if (!structural.sbs && search.decomposition) r.notes.push_back(structural.failure);
    r.verdicts.sbs_theorem = r.verdicts.a1 && r.verdicts.a2 && r.verdicts.b_prime;

    r.diagnostics = {
        {"discord_gap", r.mi_system_environment.value - r.chi.value},
        {"commutator_norm", structural.commutator_norm},
        {"reconstruction_error", structural.reconstruction_error},
        {"factorization_error", structural.factorization_error},
        {"support_overlap", structural.support_overlap},
    };
    return r;
}

inline AnalysisReport analyze(const MultipartiteState& s, std::size_t system_index = 0, double tol = kDefaultTol) {
    return analyze(s, system_index, environment_fragments(s, system_index), tol);
}

}  // namespace sbs
