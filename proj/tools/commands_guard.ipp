#pragma once

#include <ios>
#include <ostream>

#include "bosonrng/error.hpp"

namespace bosonrng::cli {

template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const GateRefused& e) {
    err << "error: noise gate refused: " << e.what() << '\n';
    return kGateRefused;
  } catch (const std::ios_base::failure& e) {
    err << "error: I/O: " << e.what() << '\n';
    return kIoError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace bosonrng::cli
