#ifndef QNN_FFI_H
#define QNN_FFI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum QnnStatus {
  QNN_STATUS_OK = 0,
  QNN_STATUS_NULL_POINTER = 1,
  QNN_STATUS_INVALID_ARGUMENT = 2,
  QNN_STATUS_CAPACITY = 3,
  QNN_STATUS_ARCHITECTURE = 4,
  QNN_STATUS_CONTRACT = 5,
  QNN_STATUS_DEGENERATE = 6,
  QNN_STATUS_UNSUPPORTED = 7,
  QNN_STATUS_INTERNAL = 8,
} QnnStatus;

/**
 * Opaque compiled circuit.
 */
typedef struct QnnCircuit QnnCircuit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a circuit. `family` is one of hamming, binary, exponential,
 * ternary, turnpike, golomb; `ansatz` one of univariate, sequential,
 * parallel. On success `*out` owns a handle to release with
 * [`qnn_circuit_free`].
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum QnnStatus qnn_circuit_create(const char *family,
                                  size_t qubits,
                                  size_t layers,
                                  size_t features,
                                  const char *ansatz,
                                  struct QnnCircuit **out);

/**
 * Releases a handle from [`qnn_circuit_create`]. Null is a no-op.
 *
 * # Safety
 * `circuit` must be null or a live handle not freed before.
 */
void qnn_circuit_free(struct QnnCircuit *circuit);

/**
 * # Safety
 * `circuit` must be a live handle; `out` must be writable.
 */
enum QnnStatus qnn_circuit_param_count(const struct QnnCircuit *circuit, size_t *out);

/**
 * # Safety
 * `circuit` must be a live handle; `out` must be writable.
 */
enum QnnStatus qnn_circuit_feature_count(const struct QnnCircuit *circuit, size_t *out);

/**
 * # Safety
 * `circuit` must be a live handle; `out` must be writable.
 */
enum QnnStatus qnn_circuit_qubit_count(const struct QnnCircuit *circuit, size_t *out);

/**
 * ⟨Z⟩ on qubit 0 for the given parameters and features.
 *
 * # Safety
 * Array pointers must hold at least the stated number of doubles.
 */
enum QnnStatus qnn_circuit_evaluate(const struct QnnCircuit *circuit,
                                    const double *params,
                                    size_t n_params,
                                    const double *features,
                                    size_t n_features,
                                    double *out);

/**
 * Value and gradient with respect to the parameters; `grad_out` must hold
 * `n_params` doubles.
 *
 * # Safety
 * Array pointers must hold at least the stated number of doubles.
 */
enum QnnStatus qnn_circuit_gradient(const struct QnnCircuit *circuit,
                                    const double *params,
                                    size_t n_params,
                                    const double *features,
                                    size_t n_features,
                                    double *value_out,
                                    double *grad_out);

/**
 * Number of positive frequencies of a univariate (R, L) model.
 *
 * # Safety
 * `family` must be NUL-terminated; `out` must be writable.
 */
enum QnnStatus qnn_spectrum_positive_size(const char *family,
                                          size_t qubits,
                                          size_t layers,
                                          size_t *out);

/**
 * Tie-corrected rank ROC-AUC. Labels are 0 or 1, scores in [0, 1].
 *
 * # Safety
 * `labels` and `scores` must hold `n` elements; `out` must be writable.
 */
enum QnnStatus qnn_roc_auc(const uint8_t *labels, const double *scores, size_t n, double *out);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *qnn_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qnn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QNN_FFI_H */
