#pragma once

#include <stdexcept>
#include <string>

namespace proptest {

// Base class for all artifact errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadVertexIndex : public Error {
 public:
  using Error::Error;
};

class DegreeBoundViolated : public Error {
 public:
  DegreeBoundViolated(long long vertex, long long degree, long long bound)
      : Error("degree bound violated at vertex " + std::to_string(vertex) +
              ": degree " + std::to_string(degree) + " > d=" + std::to_string(bound)),
        vertex_(vertex) {}
  long long vertex() const { return vertex_; }

 private:
  long long vertex_;
};

class ModelViolation : public Error {
 public:
  using Error::Error;
};

class PatternTooLarge : public Error {
 public:
  using Error::Error;
};

class NotWeaklyConnected : public Error {
 public:
  using Error::Error;
};

class TooFewSources : public Error {
 public:
  using Error::Error;
};

class EmptySequence : public Error {
 public:
  using Error::Error;
};

class OccurrenceCapExceeded : public Error {
 public:
  using Error::Error;
};

class ValueOutOfRange : public Error {
 public:
  using Error::Error;
};

class ZeroMoment : public Error {
 public:
  using Error::Error;
};

class Unrealizable : public Error {
 public:
  Unrealizable(long long requested, long long lower, long long upper)
      : Error("no exact realization of the distribution at length " +
              std::to_string(requested) + "; nearest realizable lengths: " +
              std::to_string(lower) + ", " + std::to_string(upper)),
        requested_(requested),
        lower_(lower),
        upper_(upper) {}
  long long requested() const { return requested_; }
  long long nearest_below() const { return lower_; }
  long long nearest_above() const { return upper_; }

 private:
  long long requested_;
  long long lower_;
  long long upper_;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace proptest
