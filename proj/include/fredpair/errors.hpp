#pragma once

#include <stdexcept>
#include <string>

namespace fredpair {

// Bad value passed by the caller (dimension mismatch, empty generator set, ...).
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mode index or cut outside the window it must live in.
struct window_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Symbol failed the invertibility certificate required by the requested operation.
struct certificate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Independent index routes stabilized to different values; carries the printed report.
struct route_disagreement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transition symbol between two subspaces does not exist (projector gap too large).
struct no_transition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Planar circle configuration violates disjointness / containment requirements.
struct geometry_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Convention calibration found no or multiple integer offsets matching the anchors.
struct calibration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Chain pieces do not glue (boundary windows or cuts disagree).
struct chain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace fredpair
