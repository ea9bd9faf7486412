#pragma once

namespace jrare {

/// log Γ(x) for x > 0 (Lanczos, g = 607/128). Reentrant, unlike std::lgamma.
/// Throws ParameterError for x <= 0 or non-finite x.
double log_gamma(double x);

}  // namespace jrare
