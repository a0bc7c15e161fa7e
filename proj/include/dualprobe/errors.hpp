#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dualprobe {

// Bad or out-of-contract input: files that do not parse, flag values that
// violate an operation's preconditions. The CLI maps these to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : InputError {
    ParseError(std::string source, std::size_t line, std::size_t column, const std::string& what)
        : InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          source(std::move(source)),
          line(line),
          column(column) {}
    std::string source;
    std::size_t line;
    std::size_t column;
};

struct PreconditionError : InputError {
    using InputError::InputError;
};

struct DuplicateInputError : InputError {
    explicit DuplicateInputError(std::size_t index)
        : InputError("duplicate character at stream index " + std::to_string(index)), index(index) {}
    std::size_t index;
};

struct WindowError : InputError {
    WindowError(std::size_t char_index, const std::string& character, std::size_t width)
        : InputError("character #" + std::to_string(char_index) + " {" + character +
                     "} has support outside window of width " + std::to_string(width)),
          char_index(char_index) {}
    std::size_t char_index;
};

struct PrecisionError : InputError {
    explicit PrecisionError(unsigned long required_bits)
        : InputError("declared precision insufficient; need at least " +
                     std::to_string(required_bits) + " bits"),
          required_bits(required_bits) {}
    unsigned long required_bits;
};

}  // namespace dualprobe
