#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace biwave {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: mesh parameters, scheme parameters, config files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Two fields (or a field and a mesh) disagree on the node count.
class MeshMismatch : public Error {
 public:
  using Error::Error;
};

/// A function handed to nodal interpolation could not be evaluated at a node.
class InterpolationError : public Error {
 public:
  InterpolationError(std::size_t node, const std::string& what)
      : Error("interpolation failed at node " + std::to_string(node) + ": " + what),
        node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

/// Initial data violates |U0(z)| = 1 or <U0(z), V0(z)> = 0.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(const std::string& what, std::vector<std::size_t> nodes)
      : Error(what), nodes_(std::move(nodes)) {}
  const std::vector<std::size_t>& nodes() const { return nodes_; }

 private:
  std::vector<std::size_t> nodes_;
};

/// Base for failures inside a time step.
class SolverError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public SolverError {
 public:
  NonConvergence(const std::string& what, std::vector<double> increment_tail)
      : SolverError(what), tail_(std::move(increment_tail)) {}
  /// Last few fixed-point increments before giving up.
  const std::vector<double>& increment_tail() const { return tail_; }

 private:
  std::vector<double> tail_;
};

class LinearSolveFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

class DegenerateNode : public SolverError {
 public:
  DegenerateNode(const std::string& what, std::vector<std::size_t> nodes)
      : SolverError(what), nodes_(std::move(nodes)) {}
  const std::vector<std::size_t>& nodes() const { return nodes_; }

 private:
  std::vector<std::size_t> nodes_;
};

namespace detail {
inline std::string node_list(const std::vector<std::size_t>& nodes, std::size_t max_listed = 8) {
  std::string s;
  for (std::size_t i = 0; i < nodes.size() && i < max_listed; ++i) {
    if (i) s += ", ";
    s += std::to_string(nodes[i]);
  }
  if (nodes.size() > max_listed) s += ", ... (" + std::to_string(nodes.size()) + " total)";
  return s;
}
}  // namespace detail

}  // namespace biwave
