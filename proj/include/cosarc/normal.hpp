#pragma once

namespace cosarc {

double normal_pdf(double z);
double normal_cdf(double z);
// Upper tail 1 - Phi(z), accurate far into the right tail.
double normal_sf(double z);
double log_normal_sf(double z);
// Inverse of normal_cdf on (0, 1); returns -inf / +inf at 0 / 1.
double normal_quantile(double p);
// z with 1 - Phi(z) = s, accurate for small s.
double normal_upper_quantile(double s);
// phi(z) / (1 - Phi(z)), stable for large z.
double inverse_mills(double z);

}  // namespace cosarc
