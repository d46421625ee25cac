#pragma once

#include <stdexcept>
#include <string>

namespace offload {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration value is out of range or a config file is malformed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Offloading with a transmit power that yields a zero rate (infinite latency).
class ZeroRate : public Error {
 public:
  using Error::Error;
};

class IllegalAction : public Error {
 public:
  using Error::Error;
};

class NoLegalAction : public Error {
 public:
  using Error::Error;
};

// The exact oracle refuses instances whose state-action space is too big.
class TooLarge : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace offload
