#include <doctest.h>

TEST_SUITE_BEGIN("ns");
TEST_SUITE_END();
