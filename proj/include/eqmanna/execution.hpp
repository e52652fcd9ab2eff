#pragma once

namespace eqmanna {

/// Kernels with a data-parallel inner loop keep a serial reference path;
/// both must produce identical results.
enum class Execution { serial, parallel };

/// Number of worker threads the parallel path will use.
int worker_threads();

}  // namespace eqmanna
