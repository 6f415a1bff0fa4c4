#pragma once

#include <stdexcept>
#include <string>

namespace selfdecomp {

// A series evaluator hit its term budget before the stopping rule fired.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature exhausted its refinement budget without meeting tolerance.
class quadrature_error : public std::runtime_error {
 public:
  explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

// A Mellin transform was requested outside its strip of analyticity.
class strip_error : public std::domain_error {
 public:
  explicit strip_error(const std::string& what) : std::domain_error(what) {}
};

// Sampling requires an inverse-CDF table that has not been built or registered.
class table_error : public std::runtime_error {
 public:
  explicit table_error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation at a pole of the gamma function.
class pole_error : public std::domain_error {
 public:
  explicit pole_error(const std::string& what) : std::domain_error(what) {}
};

}  // namespace selfdecomp
