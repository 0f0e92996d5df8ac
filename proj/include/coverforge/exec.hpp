#pragma once

namespace coverforge {

// Execution policy for the enumeration kernels.  The parallel path uses
// OpenMP; outputs are identical to the serial reference by contract.
enum class Exec { serial, parallel };

} // namespace coverforge
