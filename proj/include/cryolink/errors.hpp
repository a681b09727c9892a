#pragma once

#include <stdexcept>
#include <string>

namespace cryolink {

// Config-file or parameter-invariant violation. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// CDR failed to lock within its symbol budget. CLI exit code 3.
class AcquisitionError : public std::runtime_error {
public:
    explicit AcquisitionError(const std::string& what) : std::runtime_error(what) {}
};

// Not enough samples for a statistically meaningful result. CLI exit code 4.
class StatsError : public std::runtime_error {
public:
    explicit StatsError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cryolink
