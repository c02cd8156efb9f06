#pragma once

#include <stdexcept>
#include <string>

namespace smflow {

// Every failure the library can signal, one code per contract violation.
enum class Errc {
  LengthMismatch,
  BadChannelCount,
  NonPositiveDt,
  EpochTooLong,
  TooFewSamples,
  EmptySeries,
  SeriesTooShort,
  UnknownGait,
  UnknownGround,
  UnknownChannel,
  NumericalBlowup,
  InsufficientHistory,
  InvalidConfig,
  ParseError,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::BadChannelCount: return "BadChannelCount";
    case Errc::NonPositiveDt: return "NonPositiveDt";
    case Errc::EpochTooLong: return "EpochTooLong";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::SeriesTooShort: return "SeriesTooShort";
    case Errc::UnknownGait: return "UnknownGait";
    case Errc::UnknownGround: return "UnknownGround";
    case Errc::UnknownChannel: return "UnknownChannel";
    case Errc::NumericalBlowup: return "NumericalBlowup";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace smflow
