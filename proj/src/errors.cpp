#include "adia/errors.hpp"

#include <sstream>

namespace adia {

namespace {

std::string span_list(const std::vector<std::pair<double, double>>& spans) {
  std::ostringstream os;
  os << "coupling below zero_floor on";
  for (const auto& [a, b] : spans) os << " [" << a << ", " << b << "]";
  return os.str();
}

}  // namespace

NotHermitian::NotHermitian(double max_asymmetry, double tol)
    : NumericalError([&] {
        std::ostringstream os;
        os << "matrix is not Hermitian: max |H - H^dagger| = " << max_asymmetry
           << " exceeds tolerance " << tol;
        return os.str();
      }()),
      max_asymmetry_(max_asymmetry) {}

DegenerateCrossing::DegenerateCrossing(double tau, double gap, double gap_floor)
    : NumericalError([&] {
        std::ostringstream os;
        os << "degenerate crossing at tau = " << tau << ": gap " << gap << " < gap_floor "
           << gap_floor;
        return os.str();
      }()),
      tau_(tau) {}

GaugeAmbiguity::GaugeAmbiguity(double tau, double max_overlap)
    : NumericalError([&] {
        std::ostringstream os;
        os << "gauge ambiguity at tau = " << tau << ": best level overlap " << max_overlap
           << " < 0.5 (grid too coarse)";
        return os.str();
      }()),
      tau_(tau) {}

MaskedInterval::MaskedInterval(std::vector<std::pair<double, double>> spans)
    : NumericalError(span_list(spans)), spans_(std::move(spans)) {}

ConfigInvalid::ConfigInvalid(const std::string& field, const std::string& what)
    : std::runtime_error("config field '" + field + "': " + what), field_(field) {}

}  // namespace adia
