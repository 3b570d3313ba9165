#pragma once

#include <stdexcept>
#include <string>

namespace segmerge {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File was readable but is not a supported or well-formed image.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input for which a stage has no meaningful result (uniform image, no markers, ...).
/// `stage()` names the pipeline stage that rejected it.
class DegenerateInputError : public std::runtime_error {
public:
    DegenerateInputError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace segmerge
