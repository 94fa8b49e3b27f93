#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qnn_ffi.h"

int main(void) {
    QnnCircuit *c = NULL;
    if (qnn_circuit_create("binary", 2, 2, 1, "univariate", &c) != QNN_STATUS_OK) {
        fprintf(stderr, "create: %s\n", qnn_last_error_message());
        return 1;
    }
    size_t n = 0;
    qnn_circuit_param_count(c, &n);
    double params[256];
    double grad[256];
    for (size_t i = 0; i < n; i++) params[i] = 0.05 * (double)i;
    double x = 1.3, value = 0.0;
    if (qnn_circuit_gradient(c, params, n, &x, 1, &value, grad) != QNN_STATUS_OK) return 2;
    if (!(fabs(value) <= 1.0)) return 3;
    qnn_circuit_free(c);

    if (qnn_circuit_create("golomb", 1, 1, 1, "univariate", &c) != QNN_STATUS_ARCHITECTURE) return 4;
    if (strstr(qnn_last_error_message(), "golomb") == NULL) return 5;

    size_t size = 0;
    if (qnn_spectrum_positive_size("hamming", 3, 2, &size) != QNN_STATUS_OK || size != 6) return 6;
    printf("ok %zu %.17g\n", n, value);
    return 0;
}
