#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sbs {

enum class Errc {
    not_hermitian,
    not_positive,
    trace_not_one,
    dimension_mismatch,
    empty_keep_set,
    index_out_of_range,
    overlapping_parts,
    incomplete_partition,
    not_classical_quantum,
    param_out_of_range,
    invalid_argument,
    internal,
};

inline std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::not_hermitian: return "NotHermitian";
        case Errc::not_positive: return "NotPositive";
        case Errc::trace_not_one: return "TraceNotOne";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::empty_keep_set: return "EmptyKeepSet";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::overlapping_parts: return "OverlappingParts";
        case Errc::incomplete_partition: return "IncompletePartition";
        case Errc::not_classical_quantum: return "NotClassicalQuantum";
        case Errc::param_out_of_range: return "ParamOutOfRange";
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::internal: return "Internal";
    }
    return "Unknown";
}

// Every failure in the library surfaces as sbs::Error. `value()` carries the
// offending magnitude when there is one (most negative eigenvalue, trace,
// largest commutator norm, ...), NaN otherwise.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, double value = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), value_(value) {}

    Errc code() const noexcept { return code_; }
    double value() const noexcept { return value_; }

private:
    Errc code_;
    double value_;
};

}  // namespace sbs
