#pragma once

namespace pssim {

/// Threads used by the OpenMP kernels. 1 when built without OpenMP.
int worker_count();
/// Values < 1 restore the runtime default.
void set_worker_count(int workers);
/// PSSIM_WORKERS if set to a positive integer, else the hardware concurrency.
int default_worker_count();

}  // namespace pssim
