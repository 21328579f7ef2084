// errors.hpp - exception taxonomy for saftkit
//
// Every failure mode carries a stable name (matching the library docs) plus a
// human-readable message. Pipeline stages tag errors with the stage that
// raised them before re-throwing, so batch runners can report per-stage
// failures without string parsing.

#pragma once

#include <exception>
#include <string>
#include <utility>

namespace saftkit {

class Error : public std::exception {
public:
    Error(std::string name, std::string message)
        : name_(std::move(name)), message_(std::move(message)) {
        rebuild();
    }

    const char* what() const noexcept override { return full_.c_str(); }
    const std::string& name() const noexcept { return name_; }
    const std::string& stage() const noexcept { return stage_; }

    // Tag the pipeline stage that surfaced this error (idempotent).
    void set_stage(const std::string& stage) {
        if (stage_.empty()) {
            stage_ = stage;
            rebuild();
        }
    }

private:
    void rebuild() {
        full_ = stage_.empty() ? name_ + ": " + message_
                               : name_ + " [stage " + stage_ + "]: " + message_;
    }

    std::string name_;
    std::string message_;
    std::string stage_;
    std::string full_;
};

#define SAFTKIT_ERROR_TYPE(Name)                                   \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(std::string message)                         \
            : Error(#Name, std::move(message)) {}                  \
    };

SAFTKIT_ERROR_TYPE(UnimodularityViolation)
SAFTKIT_ERROR_TYPE(DegenerateB)
SAFTKIT_ERROR_TYPE(DegeneratePair)
SAFTKIT_ERROR_TYPE(EmptyGrid)
SAFTKIT_ERROR_TYPE(OutOfGrid)
SAFTKIT_ERROR_TYPE(GridMismatch)
SAFTKIT_ERROR_TYPE(VanishingSpectrum)
SAFTKIT_ERROR_TYPE(RateViolation)
SAFTKIT_ERROR_TYPE(WindowPairingViolation)
SAFTKIT_ERROR_TYPE(UnderdeterminedSystem)
SAFTKIT_ERROR_TYPE(RankDeficient)
SAFTKIT_ERROR_TYPE(SparsityViolation)
SAFTKIT_ERROR_TYPE(IllConditioned)
SAFTKIT_ERROR_TYPE(RootOffCircle)
SAFTKIT_ERROR_TYPE(SingularGain)
SAFTKIT_ERROR_TYPE(SingleSpike)
SAFTKIT_ERROR_TYPE(ConfigInvalid)
SAFTKIT_ERROR_TYPE(IOFailure)

#undef SAFTKIT_ERROR_TYPE

}  // namespace saftkit
