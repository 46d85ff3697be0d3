#pragma once

#include <stdexcept>
#include <string>

namespace bragg {

struct NoResonanceInWindow : std::runtime_error {
    explicit NoResonanceInWindow(const std::string& msg) : std::runtime_error(msg) {}
};

struct BandwidthBelowLengthLimit : std::runtime_error {
    explicit BandwidthBelowLengthLimit(const std::string& msg) : std::runtime_error(msg) {}
};

struct SegmentationMismatch : std::runtime_error {
    explicit SegmentationMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct CompositionMismatch : std::runtime_error {
    explicit CompositionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct CalibrationFailed : std::runtime_error {
    explicit CalibrationFailed(const std::string& msg) : std::runtime_error(msg) {}
};

struct InfeasibleTarget : std::runtime_error {
    explicit InfeasibleTarget(const std::string& msg) : std::runtime_error(msg) {}
};

struct WindowOutOfRange : std::runtime_error {
    explicit WindowOutOfRange(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotchTooShallow : std::runtime_error {
    explicit NotchTooShallow(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoNotchFound : std::runtime_error {
    explicit NoNotchFound(const std::string& msg) : std::runtime_error(msg) {}
};

// NoGuidedMode is reported as an empty optional by the mode solvers; this
// exception form is thrown where an index is required unconditionally
// (e.g. a geometry-derived dispersion model evaluated below cutoff).
struct NoGuidedMode : std::runtime_error {
    explicit NoGuidedMode(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bragg
