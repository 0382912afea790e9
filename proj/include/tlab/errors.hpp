#pragma once

/**
 * @file errors.hpp
 * @brief Error taxonomy shared by all modules.
 */

#include <stdexcept>
#include <string>

namespace tlab {

// A named stage inequality or gcd requirement failed.  `label` is the
// condition letter ("A", "B", "C", ...) or a short inequality tag.
class ConditionViolation : public std::runtime_error {
public:
    ConditionViolation(std::string label, const std::string& detail)
        : std::runtime_error("condition (" + label + ") violated: " + detail),
          label_(std::move(label)) {}
    const std::string& label() const { return label_; }

private:
    std::string label_;
};

// Query point/box lies outside every good-domain piece of a conjugation map.
class OutsideGoodDomain : public std::runtime_error {
public:
    explicit OutsideGoodDomain(const std::string& what)
        : std::runtime_error("outside good domain: " + what) {}
};

// A Monte Carlo sample pulls back exactly onto a good-piece boundary, so its
// membership cannot be attributed; samplers charge it as a mismatch.
class IndicatorUndefined : public std::runtime_error {
public:
    explicit IndicatorUndefined(const std::string& what)
        : std::runtime_error("indicator undefined: " + what) {}
};

// A box straddles a strip's mod-1 cut; the caller must pre-split it.
class SeamStraddle : public std::runtime_error {
public:
    explicit SeamStraddle(const std::string& what)
        : std::runtime_error("mod-1 seam straddle: " + what) {}
};

// Stage search exhausted its configured k ceiling.
class NoAdmissibleStage : public std::runtime_error {
public:
    explicit NoAdmissibleStage(const std::string& what)
        : std::runtime_error("no admissible stage: " + what) {}
};

// Bad user input (config file, CLI arguments, malformed names).
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& what)
        : std::runtime_error("invalid input: " + what) {}
};

}  // namespace tlab
