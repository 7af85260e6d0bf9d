#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dkg {

// Base of every error raised by the library. The CLI maps these to a
// nonzero exit status with the message on stderr.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class RankOutOfRange : public Error {
 public:
  using Error::Error;
};

class DegenerateData : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

class MissingPos : public Error {
 public:
  using Error::Error;
};

class EmptyGraph : public Error {
 public:
  using Error::Error;
};

class UnknownEntity : public Error {
 public:
  using Error::Error;
};

class DisconnectedSubgraph : public Error {
 public:
  using Error::Error;
};

class NodeSetMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  using Error::Error;
};

class ZeroEdges : public Error {
 public:
  using Error::Error;
};

class TooFewDocuments : public Error {
 public:
  using Error::Error;
};

class MissingEdge : public Error {
 public:
  using Error::Error;
};

class WrongLabel : public Error {
 public:
  using Error::Error;
};

}  // namespace dkg
