// io.hpp: state files, analysis reports (text / JSON) and sweep CSV rows.
//
// State file: one JSON object
//     {"dims": [2, 3], "labels": ["S", "E1"], "matrix": [[[re, im], ...], ...]}
// with rows and columns in the library's basis ordering (first subsystem
// slowest). Reals are written in shortest round-trip form, so reading a file
// back reproduces every entry bit for bit.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sbs/detector.hpp"
#include "sbs/state.hpp"

namespace sbs {

// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline nlohmann::ordered_json state_to_json(const MultipartiteState& s) {
    nlohmann::ordered_json j;
    j["dims"] = s.dims();
    j["labels"] = s.labels();
    auto rows = nlohmann::ordered_json::array();
    const Matrix& m = s.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    return j;
}

// Structural problems raise Errc::invalid_argument; the matrix then goes
// through make_state validation.
inline MultipartiteState state_from_json(const nlohmann::json& j, double tol = kDefaultTol) {
    auto fail = [](const std::string& what) { throw Error(Errc::invalid_argument, "state file: " + what); };
    if (!j.is_object()) fail("top level must be an object");
    for (const char* key : {"dims", "matrix"}) {
        if (!j.contains(key) || !j[key].is_array()) fail(std::string("missing array '") + key + "'");
    }
    Dims dims;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) fail("dims must be positive integers");
        dims.push_back(d.get<std::size_t>());
    }
    Labels labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) fail("labels must be an array");
        for (const auto& l : j["labels"]) {
            if (!l.is_string()) fail("labels must be strings");
            labels.push_back(l.get<std::string>());
        }
    } else {
        labels = default_labels(dims.size());
    }

    const auto& rows = j["matrix"];
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) fail("matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto& z = row[static_cast<std::size_t>(c)];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                fail("entries must be [re, im] pairs");
            }
            m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    return make_state(m, std::move(dims), std::move(labels), tol);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out.flush()) throw IoError("failed writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return buf.str();
}

inline void write_state_file(const std::string& path, const MultipartiteState& s) {
    write_text_file(path, state_to_json(s).dump() + "\n");
}

inline MultipartiteState read_state_file(const std::string& path, double tol = kDefaultTol) {
    const std::string text = read_text_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::invalid_argument, std::string("state file is not valid JSON: ") + e.what());
    }
    return state_from_json(j, tol);
}

inline nlohmann::ordered_json report_to_json(const AnalysisReport& r) {
    nlohmann::ordered_json j;
    j["system"] = r.system_label;
    j["fragments"] = r.fragment_labels;
    j["tol"] = r.tol;
    j["H_S"] = r.entropy_system.value;
    j["I_S_E"] = r.mi_system_environment.value;
    j["chi"] = r.chi.value;
    auto per_fragment = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.fragment_labels.size(); ++i) {
        per_fragment[r.fragment_labels[i]] = r.mi_system_fragment[i].value;
    }
    j["I_S_Ei"] = std::move(per_fragment);
    auto pairwise = nlohmann::ordered_json::object();
    for (const auto& p : r.pairwise_cmi) {
        pairwise[r.fragment_labels[p.first] + ":" + r.fragment_labels[p.second]] = p.value.value;
    }
    j["I_pairwise"] = std::move(pairwise);
    j["I_pairwise_max"] = r.pairwise_max().value;
    j["I_cond_multipartite"] = r.cond_multipartite.value;
    j["a1"] = r.verdicts.a1;
    j["a2"] = r.verdicts.a2;
    j["b_pairwise"] = r.verdicts.b_pairwise;
    j["b_prime"] = r.verdicts.b_prime;
    j["sbs_structural"] = r.verdicts.sbs_structural;
    j["sbs_theorem"] = r.verdicts.sbs_theorem;
    j["sbs"] = r.verdicts.sbs_structural;
    if (r.witness) {
        auto blocks = nlohmann::ordered_json::array();
        for (const auto& b : r.witness->blocks) {
            blocks.push_back({{"probability", b.probability}, {"rank", b.projector.rank()}});
        }
        j["pointer_blocks"] = std::move(blocks);
    } else {
        j["pointer_blocks"] = nullptr;
    }
    auto diag = nlohmann::ordered_json::object();
    for (const auto& [name, value] : r.diagnostics) {
        diag[name] = std::isfinite(value) ? nlohmann::ordered_json(value) : nlohmann::ordered_json(nullptr);
    }
    j["diagnostics"] = std::move(diag);
    j["notes"] = r.notes;
    return j;
}

namespace detail {

inline std::string format_real(double v, int digits = 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace detail

inline std::string report_to_text(const AnalysisReport& r) {
    std::ostringstream out;
    out << "system " << r.system_label << ", fragments";
    for (const auto& f : r.fragment_labels) out << ' ' << f;
    out << ", tol " << detail::format_real(r.tol, 3) << "\n\n";

    std::size_t width = 0;
    const auto quantities = r.quantities();
    for (const auto& [name, _] : quantities) width = std::max(width, name.size());
    for (const auto& [name, value] : quantities) {
        out << "  " << name << std::string(width - name.size(), ' ') << " = " << detail::format_real(value.value)
            << " bits\n";
    }

    out << "\nconditions\n";
    out << "  (a1) I(S:E) = chi                " << detail::yes_no(r.verdicts.a1) << '\n';
    out << "  (a2) I_acc(S:Ei) = H(S), all i   " << detail::yes_no(r.verdicts.a2) << '\n';
    out << "  (b)  I(Ei:Ej|S) = 0, all pairs   " << detail::yes_no(r.verdicts.b_pairwise) << '\n';
    out << "  (b') I(E1,...,EF|S) = 0          " << detail::yes_no(r.verdicts.b_prime) << '\n';
    out << "\nSBS (structural)       " << detail::yes_no(r.verdicts.sbs_structural) << '\n';
    out << "SBS (a1 and a2 and b') " << detail::yes_no(r.verdicts.sbs_theorem) << '\n';

    if (r.witness) {
        out << "\npointer blocks\n";
        for (const auto& b : r.witness->blocks) {
            out << "  p = " << detail::format_real(b.probability) << ", rank " << b.projector.rank() << '\n';
        }
    }
    for (const auto& note : r.notes) out << "\nnote: " << note << '\n';
    return out.str();
}

inline constexpr const char* kSweepHeader =
    "p,H_S,I_S_E,chi,I_pairwise_max,I_cond_multipartite,a1,a2,b_pairwise,b_prime,sbs";

inline std::string sweep_row(double p, const AnalysisReport& r) {
    using detail::format_real;
    using detail::yes_no;
    std::string row = format_real(p);
    for (double v : {r.entropy_system.value, r.mi_system_environment.value, r.chi.value, r.pairwise_max().value,
                     r.cond_multipartite.value}) {
        row += "," + format_real(v);
    }
    for (bool b : {r.verdicts.a1, r.verdicts.a2, r.verdicts.b_pairwise, r.verdicts.b_prime,
                   r.verdicts.sbs_structural}) {
        row += std::string(",") + yes_no(b);
    }
    return row;
}

}  // namespace sbs
