#pragma once

#include <stdexcept>
#include <string>

namespace byzfed {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class RankDeficientError : public Error {
public:
  explicit RankDeficientError(const std::string& what) : Error(what) {}
};

class DimensionMismatchError : public Error {
public:
  explicit DimensionMismatchError(const std::string& what) : Error(what) {}
};

class EmptyInputError : public Error {
public:
  explicit EmptyInputError(const std::string& what) : Error(what) {}
};

class AllFilteredError : public Error {
public:
  explicit AllFilteredError(const std::string& what) : Error(what) {}
};

class OutOfRangeError : public Error {
public:
  explicit OutOfRangeError(const std::string& what) : Error(what) {}
};

class InvalidSpectrumError : public Error {
public:
  explicit InvalidSpectrumError(const std::string& what) : Error(what) {}
};

class IndivisibleSplitError : public Error {
public:
  explicit IndivisibleSplitError(const std::string& what) : Error(what) {}
};

class IllConditionedError : public Error {
public:
  explicit IllConditionedError(const std::string& what) : Error(what) {}
};

class DegenerateGapError : public Error {
public:
  explicit DegenerateGapError(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

class UnknownSuiteError : public Error {
public:
  explicit UnknownSuiteError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what) {}
};

/// Node-tagged wrapper used when a per-node callback fails inside a round.
class NodeComputeError : public Error {
public:
  NodeComputeError(int node_id, const std::string& what)
      : Error("node " + std::to_string(node_id) + ": " + what), node_id_(node_id) {}
  int node_id() const { return node_id_; }

private:
  int node_id_;
};

}  // namespace byzfed
