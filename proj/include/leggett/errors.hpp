#pragma once

#include <stdexcept>
#include <string>

namespace leggett {

// Malformed input: non-unit vectors, bad angle ranges, mismatched lengths.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Request exceeds the dense-matrix memory guard.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// An injected callable returned a value outside its documented range.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A checked precondition (e.g. vanishing alpha terms) does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A Leggett-model ensemble violated an inequality it should satisfy.
class ModelSoundnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace leggett
