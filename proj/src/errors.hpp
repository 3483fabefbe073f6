#ifndef RAUZY_ERRORS_HPP
#define RAUZY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rauzy {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed config, invalid arguments, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The mathematics refuses: non-convergence, non-Pisot or reducible input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A configured size cap would be exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace rauzy

#endif
