/* C interface to the tunnelkit quantum-tunnelling toolkit. */

#ifndef TUNNELKIT_H
#define TUNNELKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Scattering orientation for the exact solver.
 */
typedef enum TkDirection {
  TkDirection_LeftToRight = 0,
  TkDirection_RightToLeft = 1,
} TkDirection;

/**
 * Result code of every ABI call.
 */
typedef enum TkStatus {
  TkStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  TkStatus_NullArgument = 1,
  /**
   * The inputs were rejected before any numerics ran.
   */
  TkStatus_InvalidInput = 2,
  /**
   * The solver or quadrature gave up without reaching its tolerance.
   */
  TkStatus_NoConvergence = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  TkStatus_InvalidUtf8 = 4,
  /**
   * Internal fault; the library state is still sound.
   */
  TkStatus_Panic = 5,
} TkStatus;

/**
 * Opaque barrier handle.
 */
typedef struct TkBarrier TkBarrier;

/**
 * Barrier extent and peak, mirroring the core geometry report.
 */
typedef struct TkGeometry {
  double z1_nm;
  double z2_nm;
  double z_peak_nm;
  double m_peak_ev;
  bool vanished;
} TkGeometry;

/**
 * Semiclassical decay exponent and how it was obtained.
 */
typedef struct TkGamow {
  double exponent;
  bool vanished;
  /**
   * Quadrature panel count; 0 on the closed-form path.
   */
  size_t n_intervals;
} TkGamow;

/**
 * Exact transmission/reflection pair for one energy and orientation.
 */
typedef struct TkScattering {
  double d;
  double r;
  double ln_d;
  size_t n_slices;
} TkScattering;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *tk_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *tk_version(void);

/**
 * Rectangular barrier of the given height (eV) and width (nm).
 */
enum TkStatus tk_barrier_rectangular(double height_ev, double width_nm, struct TkBarrier **out);

/**
 * Linear ramp of the given height (eV) and width (nm).
 */
enum TkStatus tk_barrier_straight_line(double height_ev, double width_nm, struct TkBarrier **out);

/**
 * Exactly triangular emission barrier: work function phi (eV) under a
 * surface field (V/nm), no image rounding.
 */
enum TkStatus tk_barrier_triangular(double phi_ev, double field_v_per_nm, struct TkBarrier **out);

/**
 * Image-rounded emission barrier with the standard image coefficient.
 */
enum TkStatus tk_barrier_schottky_nordheim(double phi_ev,
                                           double field_v_per_nm,
                                           struct TkBarrier **out);

/**
 * Axial barrier seen by an electron leaving a hydrogen-like atom of the
 * given ionization energy (eV) and effective charge number in a field.
 */
enum TkStatus tk_barrier_hydrogenic_axial(double ionization_ev,
                                          double z_charge,
                                          double field_v_per_nm,
                                          struct TkBarrier **out);

/**
 * Releases a barrier handle. Null is accepted and ignored.
 */
void tk_barrier_free(struct TkBarrier *barrier);

/**
 * Zeros, peak position, and peak height of the barrier.
 */
enum TkStatus tk_barrier_geometry(const struct TkBarrier *barrier, struct TkGeometry *out);

/**
 * Decay exponent G at an energy offset (eV) above the reference level.
 */
enum TkStatus tk_gamow_exponent(const struct TkBarrier *barrier,
                                double energy_offset_ev,
                                struct TkGamow *out);

/**
 * Semiclassical transmission probability exp(-G).
 */
enum TkStatus tk_transmission_jwkb(const struct TkBarrier *barrier,
                                   double energy_offset_ev,
                                   double *out);

/**
 * Exact transfer-matrix scattering at a positive energy (eV).
 */
enum TkStatus tk_solve_exact(const struct TkBarrier *barrier,
                             double energy_ev,
                             enum TkDirection direction,
                             struct TkScattering *out);

/**
 * Bound-state energy (eV) of level n in a hard-walled well of the given
 * length (nm).
 */
enum TkStatus tk_well_energy(double length_nm, uint32_t n, double *out);

/**
 * Field-ionization decay exponent for a named imaging gas ("H", "He",
 * "Ne", "Ar") at the given surface field (V/nm).
 */
enum TkStatus tk_esfi_exponent(const char *species, double field_v_per_nm, double *out);

/**
 * Field window (V/nm) inside which the named gas ionizes at a usable
 * rate for the given attempt frequency (Hz).
 */
enum TkStatus tk_esfi_usable_band(const char *species,
                                  double attempt_frequency_hz,
                                  double *out_low,
                                  double *out_high);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TUNNELKIT_H */
