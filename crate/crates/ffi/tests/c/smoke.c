#include <stdio.h>
#include <string.h>
#include "icefold.h"

int main(int argc, char **argv) {
    if (argc < 2) return 10;
    FILE *fp = fopen(argv[1], "rb");
    if (!fp) return 11;
    static char text[65536];
    size_t n = fread(text, 1, sizeof text - 1, fp);
    fclose(fp);
    text[n] = '\0';

    IcefoldFile *file = NULL;
    if (icefold_file_parse(text, &file) != ICEFOLD_STATUS_OK) return 12;
    char *json = NULL;
    if (icefold_fold_matrix(file, ICEFOLD_CONVENTION_ROW, &json) != ICEFOLD_STATUS_OK) return 13;
    printf("%s\n", json);
    icefold_string_free(json);

    IcefoldSession *s = NULL;
    if (icefold_session_new(file, &s) != ICEFOLD_STATUS_OK) return 14;
    if (icefold_session_mutate(s, ICEFOLD_MOVE_ORBIT, 4) != ICEFOLD_STATUS_DOMAIN) return 15;
    char *err = icefold_last_error();
    if (!err || !strstr(err, "frozen")) return 16;
    icefold_string_free(err);
    bool undone = true;
    if (icefold_session_undo(s, &undone) != ICEFOLD_STATUS_OK || undone) return 17;
    icefold_session_free(s);
    icefold_file_free(file);
    return 0;
}
