/* Compiled and run by the c_smoke integration test. */
#include "del.h"
#include <assert.h>
#include <stdio.h>
#include <string.h>

int main(void) {
    assert(strlen(del_version()) > 0);

    DelDataset *ds = NULL;
    assert(del_dataset_parse_edge_list("0 1\n1 2\n2 0\n", "tri", &ds) == DEL_STATUS_OK);
    assert(del_dataset_graph_count(ds) == 1);

    DelSampleParams params;
    assert(del_sample_params_default(&params) == DEL_STATUS_OK);
    params.layouts_per_graph = 2;
    params.iterations = 10;

    DelFeatureSet *fs = NULL;
    assert(del_compute_features(ds, &params, &fs) == DEL_STATUS_OK);
    assert(del_features_count(fs) == 1);

    size_t m = 0, k = 0;
    assert(del_features_shape(fs, 0, &m, &k) == DEL_STATUS_OK);
    assert(m == 3 && k == 2);

    const double *data = NULL;
    size_t len = 0;
    assert(del_features_lengths(fs, 0, &data, &len) == DEL_STATUS_OK);
    assert(len == m * k);
    for (size_t i = 0; i < len; i++) {
        assert(data[i] > 0.0);
    }

    unsigned u = 99, v = 99;
    assert(del_features_edge_endpoints(fs, 0, 0, &u, &v) == DEL_STATUS_OK);
    assert(u == 0 && v == 1);

    /* Error path: invalid dimension maps to the config status and leaves a
       readable message. */
    params.dim = 1;
    DelFeatureSet *bad = NULL;
    assert(del_compute_features(ds, &params, &bad) == DEL_STATUS_CONFIG_ERROR);
    assert(strlen(del_last_error_message()) > 0);

    del_features_free(fs);
    del_dataset_free(ds);
    puts("ok");
    return 0;
}
