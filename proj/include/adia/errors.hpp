#ifndef ADIA_ERRORS_HPP
#define ADIA_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adia {

// Base for all runtime numerical failures (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public NumericalError {
 public:
  NotHermitian(double max_asymmetry, double tol);
  double max_asymmetry() const { return max_asymmetry_; }

 private:
  double max_asymmetry_;
};

class DegenerateCrossing : public NumericalError {
 public:
  DegenerateCrossing(double tau, double gap, double gap_floor);
  double tau() const { return tau_; }

 private:
  double tau_;
};

class GaugeAmbiguity : public NumericalError {
 public:
  GaugeAmbiguity(double tau, double max_overlap);
  double tau() const { return tau_; }

 private:
  double tau_;
};

class StepTooCoarse : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Spans of tau where |gamma_nm| sits below zero_floor and a phase-dependent
// quantity was requested anyway.
class MaskedInterval : public NumericalError {
 public:
  explicit MaskedInterval(std::vector<std::pair<double, double>> spans);
  const std::vector<std::pair<double, double>>& spans() const { return spans_; }

 private:
  std::vector<std::pair<double, double>> spans_;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MissingPropagator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GridMismatch : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LevelMatchingFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Config/schema violations (CLI exit code 2). Message names the field.
class ConfigInvalid : public std::runtime_error {
 public:
  ConfigInvalid(const std::string& field, const std::string& what);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace adia

#endif
