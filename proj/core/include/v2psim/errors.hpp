#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace v2psim {

// Base for every error the simulator raises. name() is the stable identifier
// printed by the CLI on exit code 2.
class SimError : public std::runtime_error {
public:
    SimError(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

#define V2PSIM_DEFINE_ERROR(Name)                                        \
    class Name : public SimError {                                      \
    public:                                                             \
        explicit Name(const std::string& what) : SimError(#Name, what) {} \
    }

// scenario
V2PSIM_DEFINE_ERROR(MissingField);

// config validation collects every violated invariant before throwing.
class RangeViolation {
public:
    std::string field;
    std::string bound;
};

class ConfigError : public SimError {
public:
    explicit ConfigError(std::vector<RangeViolation> violations)
        : SimError("ConfigError", format(violations)), violations_(std::move(violations)) {}

    const std::vector<RangeViolation>& violations() const { return violations_; }

private:
    static std::string format(const std::vector<RangeViolation>& vs) {
        std::string msg = "invalid configuration:";
        for (const auto& v : vs) {
            msg += "\n  RangeViolation: " + v.field + " (" + v.bound + ")";
        }
        return msg;
    }

    std::vector<RangeViolation> violations_;
};

// mobility
V2PSIM_DEFINE_ERROR(InfeasibleDensity);
V2PSIM_DEFINE_ERROR(SyntaxError);
V2PSIM_DEFINE_ERROR(NonMonotoneTime);
V2PSIM_DEFINE_ERROR(UnknownNodeReference);
V2PSIM_DEFINE_ERROR(UnknownNode);
V2PSIM_DEFINE_ERROR(TimeOutOfRange);

// channel
V2PSIM_DEFINE_ERROR(NonpositiveDistance);

// linkphy
V2PSIM_DEFINE_ERROR(AllocationOutOfRange);
V2PSIM_DEFINE_ERROR(EmptyPacket);
V2PSIM_DEFINE_ERROR(EmptyList);

// latency
V2PSIM_DEFINE_ERROR(UndeliveredPacket);

// engine
V2PSIM_DEFINE_ERROR(TraceTooShort);
V2PSIM_DEFINE_ERROR(FadingTooShort);
V2PSIM_DEFINE_ERROR(EmptyQueue);

// metrics
V2PSIM_DEFINE_ERROR(NoDeliveredPackets);

#undef V2PSIM_DEFINE_ERROR

}  // namespace v2psim
