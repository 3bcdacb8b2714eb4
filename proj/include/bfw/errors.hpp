#pragma once

#include <stdexcept>
#include <string>

namespace bfw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FamilyMismatch : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct NotGenerated : Error {
    int cap;
    NotGenerated(const std::string& what, int cap_) : Error(what), cap(cap_) {}
};

struct CapExceeded : Error {
    std::size_t cap;
    CapExceeded(const std::string& what, std::size_t cap_) : Error(what), cap(cap_) {}
};

struct UnsupportedBranching : Error {
    using Error::Error;
};

struct Unsupported : Error {
    using Error::Error;
};

struct IntertwinerSynthesis : Error {
    using Error::Error;
};

struct WeightSpecError : Error {
    using Error::Error;
};

/// Quadrature disagreed with its refinement; both estimates are kept.
struct QuadratureError : Error {
    double coarse_delta;
    QuadratureError(const std::string& what, double delta) : Error(what), coarse_delta(delta) {}
};

struct InsufficientCutoff : Error {
    double defect;
    int cutoff;
    InsufficientCutoff(const std::string& what, double defect_, int cutoff_)
        : Error(what), defect(defect_), cutoff(cutoff_) {}
};

}  // namespace bfw
