#include "hwbdd/errors.hpp"

namespace hwbdd {

SyntaxError::SyntaxError(std::string message, std::size_t line,
                         std::size_t column)
    : Error("line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": " + message),
      detail_(std::move(message)),
      line_(line),
      column_(column) {}

}  // namespace hwbdd
