#include <math.h>
#include <stdio.h>
#include <string.h>

#include "zxroute.h"

int main(void) {
    const char *src = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\nh q[0];\ncx q[0],q[2];\nt q[2];\ncx q[2],q[1];\n";
    ZxrCircuit *c = NULL;
    ZxrHardware *hw = NULL;
    ZxrResult *r = NULL;
    char *qasm = NULL;
    if (zxr_circuit_from_qasm(src, &c) != ZXR_STATUS_OK) return 1;
    if (zxr_hardware_grid(1, 3, &hw) != ZXR_STATUS_OK) return 2;
    ZxrOptions opts = zxr_options_default();
    opts.beta = 0.003;
    if (zxr_compile(c, hw, &opts, &r) != ZXR_STATUS_OK) return 3;
    double asp = zxr_result_asp(r);
    if (!(asp > 0.0 && asp <= 1.0)) return 4;
    if (zxr_result_qasm(r, &qasm) != ZXR_STATUS_OK || strstr(qasm, "OPENQASM") == NULL) return 5;
    if (zxr_circuit_from_qasm("qreg", &c) != ZXR_STATUS_PARSE || strlen(zxr_last_error()) == 0) return 6;
    printf("asp=%.6f swaps=%zu\n", asp, zxr_result_swap_count(r));
    zxr_string_free(qasm);
    zxr_result_free(r);
    zxr_hardware_free(hw);
    zxr_circuit_free(c);
    return 0;
}
