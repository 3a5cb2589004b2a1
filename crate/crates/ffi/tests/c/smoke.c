#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "schmidt_lens.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    sl_channel *ch = NULL;
    CHECK(sl_channel_depolarizing(3, 0.7, &ch) == SL_STATUS_OK);

    size_t d_in = 0, d_out = 0;
    CHECK(sl_channel_dims(ch, &d_in, &d_out) == SL_STATUS_OK);
    CHECK(d_in == 3 && d_out == 3);

    double w = 0.0;
    CHECK(sl_choi_witness_value(ch, 2, &w) == SL_STATUS_OK);
    CHECK(fabs(w - (5.0 / 6.0 - 4.0 / 3.0 * 0.7)) < 1e-12);

    size_t need = 0;
    CHECK(sl_channel_choi(ch, NULL, 0, &need) == SL_STATUS_OK);
    CHECK(need == 2 * 81);
    double *buf = malloc(need * sizeof(double));
    CHECK(sl_channel_choi(ch, buf, need, &need) == SL_STATUS_OK);
    double trace = 0.0;
    for (size_t i = 0; i < 9; i++) trace += buf[2 * (i * 9 + i)];
    CHECK(fabs(trace - 1.0) < 1e-12);
    free(buf);

    double p = 0.0;
    CHECK(sl_witness_threshold(SL_FAMILY_DEPOLARIZING, 3, 2, 1e-10, &p) == SL_STATUS_OK);
    CHECK(fabs(p - 0.625) < 1e-8);

    CHECK(sl_channel_depolarizing(3, 1.5, &ch) == SL_STATUS_INVALID_ARGUMENT);
    CHECK(sl_last_error_message() != NULL);

    sl_channel_free(ch);
    printf("ok %s\n", sl_version());
    return 0;
}
