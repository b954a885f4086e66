#pragma once

#include <stdexcept>
#include <string>

namespace ergokit {

// Base class for all toolkit errors. Input problems and contract
// violations throw one of the subclasses below; absence of a value
// (a missing keypoint, an uncomputable angle) is represented with
// std::optional instead.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// geometry / skeleton
struct DegenerateTriple : Error {
    explicit DegenerateTriple(const std::string& what) : Error(what) {}
};
struct InvalidAngle : Error {
    explicit InvalidAngle(const std::string& what) : Error(what) {}
};
struct InconsistentConfig : Error {
    explicit InconsistentConfig(const std::string& what) : Error(what) {}
};
struct BehindCamera : Error {
    explicit BehindCamera(const std::string& what) : Error(what) {}
};

// features
struct NoAnchor : Error {
    explicit NoAnchor(const std::string& what) : Error(what) {}
};
struct TooFewKeypoints : Error {
    explicit TooFewKeypoints(const std::string& what) : Error(what) {}
};

// regressor
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& what) : Error(what) {}
};
struct DivergedLoss : Error {
    explicit DivergedLoss(const std::string& what) : Error(what) {}
};
struct MissingModel : Error {
    explicit MissingModel(const std::string& what) : Error(what) {}
};

// rula
struct MissingAngle : Error {
    explicit MissingAngle(const std::string& what) : Error(what) {}
};
struct InvalidBins : Error {
    explicit InvalidBins(const std::string& what) : Error(what) {}
};

// io
struct MalformedJson : Error {
    explicit MalformedJson(const std::string& what) : Error(what) {}
};
struct WrongArrayLength : Error {
    WrongArrayLength(std::size_t expected, std::size_t actual)
        : Error("pose_keypoints_2d: expected " + std::to_string(expected) +
                " values, got " + std::to_string(actual)),
          expected(expected), actual(actual) {}
    std::size_t expected;
    std::size_t actual;
};
struct EmptyPeople : Error {
    explicit EmptyPeople(const std::string& what) : Error(what) {}
};
struct MalformedLine : Error {
    MalformedLine(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};
struct SchemaMismatch : Error {
    explicit SchemaMismatch(const std::string& what) : Error(what) {}
};

}  // namespace ergokit
