#ifndef CAVMIX_H
#define CAVMIX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CavmixStatus {
  CAVMIX_STATUS_OK = 0,
  CAVMIX_STATUS_NULL_POINTER = 1,
  CAVMIX_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The acceleration profile reaches `|h| >= 2`.
   */
  CAVMIX_STATUS_RIGIDITY = 3,
  /**
   * Quadrature or eigen-solve failure.
   */
  CAVMIX_STATUS_NUMERICAL = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  CAVMIX_STATUS_PANIC = 5,
} CavmixStatus;

/**
 * Static coefficients of a (1+1)-dimensional cavity.
 */
typedef struct CavmixCoefficients CavmixCoefficients;

/**
 * First-order Bogoliubov map over an acceleration interval.
 */
typedef struct CavmixMap CavmixMap;

typedef struct CavmixComplex {
  double re;
  double im;
} CavmixComplex;

/**
 * Planner output in SI units. `rpm` and `centripetal_acceleration` are NaN
 * for linear motion.
 */
typedef struct CavmixPlanReport {
  double omega_c_per_second;
  double omega_c_per_meter;
  double oscillation_frequency_hz;
  double growth_rate_per_second;
  double time_to_unity_seconds;
  double peak_h;
  bool rigid;
  double paraxial_ratio;
  double beta_factor;
  double beta_scale;
  double beta_product;
  double rpm;
  double centripetal_acceleration;
} CavmixPlanReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *cavmix_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cavmix_version(void);

/**
 * Frequency of mode `n` of a cavity of `length` and `mass`.
 *
 * # Safety
 * `out` must be null or valid for a write.
 */
enum CavmixStatus cavmix_omega(double length, double mass, uint32_t n, double *out);

/**
 * # Safety
 * `out` must be null or valid for a write. The handle written there is owned
 * by the caller.
 */
enum CavmixStatus cavmix_coefficients_new(double length,
                                          double mass,
                                          uint32_t n_max,
                                          struct CavmixCoefficients **out);

/**
 * # Safety
 * `handle` must be null or come from [`cavmix_coefficients_new`] and not be
 * freed twice.
 */
void cavmix_coefficients_free(struct CavmixCoefficients *handle);

/**
 * Static mixing coefficient `alpha_hat_mn` (1-based modes).
 *
 * # Safety
 * `coeffs` must be null or a live handle; `out` null or valid for a write.
 */
enum CavmixStatus cavmix_alpha_hat(const struct CavmixCoefficients *coeffs,
                                   uint32_t m,
                                   uint32_t n,
                                   double *out);

/**
 * Static creation coefficient `beta_hat_mn` (1-based modes).
 *
 * # Safety
 * As [`cavmix_alpha_hat`].
 */
enum CavmixStatus cavmix_beta_hat(const struct CavmixCoefficients *coeffs,
                                  uint32_t m,
                                  uint32_t n,
                                  double *out);

/**
 * First-order map for `h(tau) = h0 cos(omega_c (tau - tau0) + phase)` on
 * `[tau0, tauf]`.
 *
 * # Safety
 * `coeffs` must be null or a live handle; `out` null or valid for a write.
 * The map written there is owned by the caller.
 */
enum CavmixStatus cavmix_map_sinusoidal(const struct CavmixCoefficients *coeffs,
                                        double h0,
                                        double omega_c,
                                        double phase,
                                        double tau0,
                                        double tauf,
                                        struct CavmixMap **out);

/**
 * Map of `first` followed by `second`; the intervals must be contiguous.
 *
 * # Safety
 * Both maps must be null or live handles; `out` null or valid for a write.
 */
enum CavmixStatus cavmix_map_compose(const struct CavmixMap *first,
                                     const struct CavmixMap *second,
                                     struct CavmixMap **out);

/**
 * # Safety
 * `map` must be null or come from this library and not be freed twice.
 */
void cavmix_map_free(struct CavmixMap *map);

/**
 * `A_hat_mn` of the map (1-based modes).
 *
 * # Safety
 * `map` must be null or a live handle; `out` null or valid for a write.
 */
enum CavmixStatus cavmix_map_a_hat(const struct CavmixMap *map,
                                   uint32_t m,
                                   uint32_t n,
                                   struct CavmixComplex *out);

/**
 * `B_hat_mn` of the map (1-based modes).
 *
 * # Safety
 * As [`cavmix_map_a_hat`].
 */
enum CavmixStatus cavmix_map_b_hat(const struct CavmixMap *map,
                                   uint32_t m,
                                   uint32_t n,
                                   struct CavmixComplex *out);

/**
 * Negativity between modes `m` and `n`, both squeezed by `s` before the map.
 * `full` is the symplectic pipeline, `first_order` the formula
 * `|Im A_mn| sinh s`. Either out-pointer may be null.
 *
 * # Safety
 * `map` must be null or a live handle; non-null out-pointers valid for a write.
 */
enum CavmixStatus cavmix_negativity(const struct CavmixMap *map,
                                    uint32_t m,
                                    uint32_t n,
                                    double s,
                                    double *full,
                                    double *first_order);

/**
 * Plan for a box `lx` x `ly` x `lz` (metres) holding light of `wavelength`,
 * shaken with amplitude `d` along `axis` (0 = x, 1 = y), driving modes
 * `m`, `m_prime` of that axis.
 *
 * # Safety
 * `out` must be null or valid for a write.
 */
enum CavmixStatus cavmix_plan_linear(double wavelength,
                                     double lx,
                                     double ly,
                                     double lz,
                                     uint32_t axis,
                                     double d,
                                     uint32_t m,
                                     uint32_t m_prime,
                                     struct CavmixPlanReport *out);

/**
 * As [`cavmix_plan_linear`] for circular motion of radii `dx`, `dy`.
 *
 * # Safety
 * `out` must be null or valid for a write.
 */
enum CavmixStatus cavmix_plan_circular(double wavelength,
                                       double lx,
                                       double ly,
                                       double lz,
                                       double dx,
                                       double dy,
                                       uint32_t m,
                                       uint32_t m_prime,
                                       struct CavmixPlanReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAVMIX_H */
