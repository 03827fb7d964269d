#include <stdio.h>
#include "sadic.h"

int main(void) {
    const char *cfg = "fib = \"1->12, 2->1\"\nsequence = periodic [fib]\n";
    SadicSystem *sys = NULL;
    if (sadic_system_from_config(cfg, &sys) != SADIC_STATUS_OK) {
        fprintf(stderr, "%s\n", sadic_last_error());
        return 1;
    }
    char *json = NULL;
    SadicStatus st = sadic_coincidence_json(sys, 5, &json);
    if (st != SADIC_STATUS_OK) {
        fprintf(stderr, "%s\n", sadic_last_error());
        sadic_system_free(sys);
        return 1;
    }
    printf("%s\n", json);
    sadic_string_free(json);
    sadic_system_free(sys);
    return 0;
}
