#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splatdyn {

// Root of every error thrown by the library. Callers that only care about
// "something went wrong in splatdyn" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- splat model / PLY ------------------------------------------------------
class PlyParseError : public Error {
 public:
  PlyParseError(std::size_t line, const std::string& what)
      : Error("ply header line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class PlySchemaError : public Error {
 public:
  explicit PlySchemaError(const std::string& property, const std::string& what = "missing required property")
      : Error(what + " '" + property + "'"), property_(property) {}
  const std::string& property() const noexcept { return property_; }

 private:
  std::string property_;
};

class PlyTruncationError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// --- constitutive -----------------------------------------------------------
class ParameterError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class InvertedElementError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateDeformationError : public NumericError {
 public:
  using NumericError::NumericError;
};

// --- engine -----------------------------------------------------------------
class DomainError : public Error {
 public:
  DomainError(std::size_t splat, const std::string& what)
      : Error("splat " + std::to_string(splat) + ": " + what), splat_(splat) {}
  std::size_t splat_index() const noexcept { return splat_; }

 private:
  std::size_t splat_;
};

class StencilError : public Error {
 public:
  using Error::Error;
};

// A fault raised while advancing the simulation. `substep` counts substeps
// since the engine was constructed; `particle` is set when one particle is
// to blame.
class SimulationFault : public Error {
 public:
  SimulationFault(const std::string& what, long long substep, long long particle = -1)
      : Error(what), substep_(substep), particle_(particle) {}
  long long substep() const noexcept { return substep_; }
  long long particle() const noexcept { return particle_; }

 private:
  long long substep_;
  long long particle_;
};

class CflError : public SimulationFault {
 public:
  using SimulationFault::SimulationFault;
};

// A simulation fault re-raised by the driver with the frame it happened in
// and the substep within that frame.
class FrameFault : public SimulationFault {
 public:
  FrameFault(const std::string& what, int frame, int substep_in_frame, long long particle = -1)
      : SimulationFault("frame " + std::to_string(frame) + ", substep " + std::to_string(substep_in_frame) + ": " +
                            what,
                        substep_in_frame, particle),
        frame_(frame) {}
  int frame() const noexcept { return frame_; }

 private:
  int frame_;
};

// --- kernel deform ----------------------------------------------------------
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// --- scene / cli ------------------------------------------------------------
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace splatdyn
