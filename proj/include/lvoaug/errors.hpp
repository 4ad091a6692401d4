#pragma once

#include <stdexcept>
#include <string>

namespace lvoaug {

// Base for everything the library throws on purpose. The CLI maps the
// subclasses onto its exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Wrong frame tag, shape or channel count for a geometric operation.
class FrameError : public Error {
public:
    using Error::Error;
};

// A label combination the recombination scheme excludes (pos-pos hemispheres,
// bilateral ICA/MCA quadruples).
class ExclusionError : public Error {
public:
    using Error::Error;
};

class PlanningError : public Error {
public:
    using Error::Error;
};

// Missing files, malformed headers, bad manifests.
class DataError : public Error {
public:
    using Error::Error;
};

// NaN loss, diverging training.
class NumericalError : public Error {
public:
    using Error::Error;
};

// AUC without both classes, side accuracy without positives.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

}  // namespace lvoaug
