#ifndef ZXROUTE_H
#define ZXROUTE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZxrStatus {
  ZXR_STATUS_OK = 0,
  ZXR_STATUS_NULL_POINTER = 1,
  ZXR_STATUS_INVALID_UTF8 = 2,
  ZXR_STATUS_PARSE = 3,
  ZXR_STATUS_INVALID_ARGUMENT = 4,
  ZXR_STATUS_COMPILE = 5,
  ZXR_STATUS_PANIC = 6,
} ZxrStatus;

/**
 * A logical circuit.
 */
typedef struct ZxrCircuit ZxrCircuit;

/**
 * A coupling graph with noise parameters.
 */
typedef struct ZxrHardware ZxrHardware;

/**
 * Baseline and alternating compilation of one circuit.
 */
typedef struct ZxrResult ZxrResult;

/**
 * Alternating-extraction parameters. A `window` of 0 means unbounded.
 */
typedef struct ZxrOptions {
  double beta;
  size_t window;
  size_t depth;
  size_t max_branch;
  uint64_t seed;
} ZxrOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *zxr_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void zxr_string_free(char *s);

/**
 * Parses OpenQASM 2.0 text.
 *
 * # Safety
 * `qasm` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ZxrStatus zxr_circuit_from_qasm(const char *qasm, struct ZxrCircuit **out);

/**
 * Number of qubits, or 0 for null.
 *
 * # Safety
 * `c` must be null or a live circuit handle.
 */
size_t zxr_circuit_num_qubits(const struct ZxrCircuit *c);

/**
 * # Safety
 * `c` must be null or a live circuit handle.
 */
void zxr_circuit_free(struct ZxrCircuit *c);

/**
 * A `rows`×`cols` grid with default noise parameters.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ZxrStatus zxr_hardware_grid(size_t rows, size_t cols, struct ZxrHardware **out);

/**
 * Parses a `key = value` hardware description.
 *
 * # Safety
 * `config` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ZxrStatus zxr_hardware_from_config(const char *config, struct ZxrHardware **out);

/**
 * Number of physical qubits, or 0 for null.
 *
 * # Safety
 * `hw` must be null or a live hardware handle.
 */
size_t zxr_hardware_num_qubits(const struct ZxrHardware *hw);

/**
 * # Safety
 * `hw` must be null or a live hardware handle.
 */
void zxr_hardware_free(struct ZxrHardware *hw);

/**
 * Default options: β=0, unbounded window, depth 1, 8 branches, seed 0.
 */
struct ZxrOptions zxr_options_default(void);

/**
 * Simplifies `c` and compiles it for `hw` with both the baseline and the
 * alternating pipeline.
 *
 * # Safety
 * `c` and `hw` must be live handles, `opts` null (defaults) or valid, and
 * `out` a valid pointer.
 */
enum ZxrStatus zxr_compile(const struct ZxrCircuit *c,
                           const struct ZxrHardware *hw,
                           const struct ZxrOptions *opts,
                           struct ZxrResult **out);

/**
 * Success probability of the alternating result, or NaN for null.
 *
 * # Safety
 * `r` must be null or a live result handle.
 */
double zxr_result_asp(const struct ZxrResult *r);

/**
 * Success probability of the baseline, or NaN for null.
 *
 * # Safety
 * `r` must be null or a live result handle.
 */
double zxr_result_asp_baseline(const struct ZxrResult *r);

/**
 * Relative fidelity gain over the baseline, or NaN for null.
 *
 * # Safety
 * `r` must be null or a live result handle.
 */
double zxr_result_delta_fidelity(const struct ZxrResult *r);

/**
 * SWAPs inserted in the alternating result.
 *
 * # Safety
 * `r` must be null or a live result handle.
 */
size_t zxr_result_swap_count(const struct ZxrResult *r);

/**
 * CX and CZ gates in the alternating result, SWAPs excluded.
 *
 * # Safety
 * `r` must be null or a live result handle.
 */
size_t zxr_result_two_qubit_count(const struct ZxrResult *r);

/**
 * The routed alternating circuit as OpenQASM 2.0 over the physical
 * qubits. Release with [`zxr_string_free`].
 *
 * # Safety
 * `r` must be a live result handle and `out` a valid pointer.
 */
enum ZxrStatus zxr_result_qasm(const struct ZxrResult *r, char **out);

/**
 * # Safety
 * `r` must be null or a live result handle.
 */
void zxr_result_free(struct ZxrResult *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZXROUTE_H */
