#include <math.h>
#include <stdio.h>
#include <string.h>

#include "orbinv.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "check failed at %d: %s\n", __LINE__, #cond); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    OrbinvGroup *group = NULL;
    CHECK(orbinv_group_shift(2, 3, &group) == ORBINV_STATUS_OK);
    CHECK(orbinv_group_dim(group) == 6);

    OrbinvTransform *phi = NULL;
    CHECK(orbinv_transform_new(group, ORBINV_TRANSFORM_KIND_PHI, ORBINV_PHI_MODE_REPAIRED, 7, &phi) ==
          ORBINV_STATUS_OK);
    size_t dim = orbinv_transform_output_dim(phi);
    CHECK(dim == 19);

    OrbinvComplex x[6], gx[6], a[19], b[19];
    for (int k = 0; k < 6; k++) {
        x[k].re = 0.25 * (k + 1);
        x[k].im = 0.5 - 0.125 * k;
    }
    uint64_t powers[2] = {1, 1};
    CHECK(orbinv_group_act(group, powers, 2, x, 6, gx, 6) == ORBINV_STATUS_OK);
    CHECK(orbinv_transform_eval(phi, x, 6, a, dim) == ORBINV_STATUS_OK);
    CHECK(orbinv_transform_eval(phi, gx, 6, b, dim) == ORBINV_STATUS_OK);
    for (size_t i = 0; i < dim; i++) {
        CHECK(fabs(a[i].re - b[i].re) < 1e-10 && fabs(a[i].im - b[i].im) < 1e-10);
    }

    CHECK(orbinv_transform_eval(phi, x, 5, a, dim) == ORBINV_STATUS_DIMENSION_MISMATCH);
    CHECK(orbinv_last_error() != NULL);

    OrbinvTable *table = NULL;
    CHECK(orbinv_table_new(group, 3, &table) == ORBINV_STATUS_OK);
    char *json = orbinv_table_to_json(table);
    CHECK(json != NULL && strstr(json, "\"singles\"") != NULL);
    orbinv_string_free(json);

    orbinv_table_free(table);
    orbinv_transform_free(phi);
    orbinv_group_free(group);
    printf("ok %s\n", orbinv_version());
    return 0;
}
