#ifndef DAGEX_ERRORS_HPP
#define DAGEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dagex {

enum class Errc {
  CycleDetected,
  DuplicateVertex,
  UnknownVertex,
  MalformedIso,
  TooManyIsos,
  NotClosed,
  NotSubset,
  NotGeneric,
  WedgeDomainNotClosed,
  ValueOutOfBox,
  ImageOutsideBox,
  NotKCommuting,
  SameClass,
  EmptyIndexSet,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw Error(c, what); }

}  // namespace dagex

#endif
