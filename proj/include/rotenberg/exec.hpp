#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rotenberg {

/// Execution policy for the grid kernels. `serial` is the reference path;
/// `parallel` distributes independent grid points over OpenMP threads and
/// must produce bit-identical results.
enum class Exec { serial, parallel };

/// Number of worker threads the parallel path will use. Honours the
/// ROTENBERG_THREADS environment variable as an upper cap.
int max_threads();

/// Applies the ROTENBERG_THREADS cap to the OpenMP runtime. Safe to call
/// more than once.
void configure_threads_from_env();

/// Input rejected by a precondition or a validation rule (CLI exit code 1).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value or ran out of grid coverage
/// (CLI exit code 2).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rotenberg
